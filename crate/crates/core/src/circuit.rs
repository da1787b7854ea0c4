use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::cost::{CostModel, LocalPolicy, QualityFactor};
use crate::error::CoreError;
use crate::instruction::InstructionKind;
use crate::library::BlockLibrary;

/// One instruction placed on the qubit line at a time slot.
///
/// `qubits` is role-ordered (e.g. controls before targets for `CmNot`); the
/// *set* of qubits must be a contiguous window of the line.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedInstruction {
    pub kind: InstructionKind,
    pub qubits: Vec<u32>,
    pub slot: u32,
}

impl PlacedInstruction {
    pub fn new(kind: InstructionKind, qubits: Vec<u32>, slot: u32) -> Self {
        PlacedInstruction { kind, qubits, slot }
    }

    /// Window as (min, max) qubit indices.
    pub fn window(&self) -> (u32, u32) {
        let lo = *self.qubits.iter().min().expect("non-empty qubit list");
        let hi = *self.qubits.iter().max().expect("non-empty qubit list");
        (lo, hi)
    }

    fn validate(&self, n: u32) -> Result<(), CoreError> {
        self.kind.validate()?;
        let w = self.kind.width() as usize;
        if self.qubits.len() != w {
            return Err(CoreError::invariant(format!(
                "kind `{}` expects {} qubits, got {}",
                self.kind,
                w,
                self.qubits.len()
            )));
        }
        let mut sorted = self.qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.qubits.len() {
            return Err(CoreError::invariant("duplicate qubit in instruction"));
        }
        if sorted[sorted.len() - 1] >= n {
            return Err(CoreError::invariant(format!(
                "qubit {} outside line of {} qubits",
                sorted[sorted.len() - 1],
                n
            )));
        }
        // contiguity on the linear nearest-neighbour topology
        if (sorted[sorted.len() - 1] - sorted[0]) as usize != sorted.len() - 1 {
            return Err(CoreError::invariant(format!(
                "kind `{}` must act on a contiguous window, got {:?}",
                self.kind, self.qubits
            )));
        }
        Ok(())
    }
}

/// A scheduled circuit on an `n`-qubit line.
///
/// Invariants enforced at construction: all windows in range and contiguous,
/// slots form a dense range `0..slot_count`, and instructions sharing a slot
/// act on disjoint qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n: u32,
    instructions: Vec<PlacedInstruction>,
    pub metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(n: u32, instructions: Vec<PlacedInstruction>) -> Result<Self, CoreError> {
        let c = Circuit {
            n,
            instructions,
            metadata: BTreeMap::new(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(n: u32) -> Self {
        Circuit {
            n,
            instructions: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn instructions(&self) -> &[PlacedInstruction] {
        &self.instructions
    }

    pub fn slot_count(&self) -> u32 {
        self.instructions
            .iter()
            .map(|i| i.slot + 1)
            .max()
            .unwrap_or(0)
    }

    /// Append an instruction in a fresh trailing slot.
    pub fn push_sequential(&mut self, kind: InstructionKind, qubits: Vec<u32>) -> Result<(), CoreError> {
        let slot = self.slot_count();
        let p = PlacedInstruction::new(kind, qubits, slot);
        p.validate(self.n)?;
        self.instructions.push(p);
        Ok(())
    }

    /// Append an instruction into an existing slot (caller manages packing).
    pub fn push_at(&mut self, kind: InstructionKind, qubits: Vec<u32>, slot: u32) -> Result<(), CoreError> {
        let p = PlacedInstruction::new(kind, qubits, slot);
        p.validate(self.n)?;
        for other in self.instructions.iter().filter(|o| o.slot == slot) {
            for q in &p.qubits {
                if other.qubits.contains(q) {
                    return Err(CoreError::OverlapViolation { slot, qubit: *q });
                }
            }
        }
        self.instructions.push(p);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let mut used: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for inst in &self.instructions {
            inst.validate(self.n)?;
            let slot_qubits = used.entry(inst.slot).or_default();
            for q in &inst.qubits {
                if slot_qubits.contains(q) {
                    return Err(CoreError::OverlapViolation {
                        slot: inst.slot,
                        qubit: *q,
                    });
                }
                slot_qubits.push(*q);
            }
        }
        // dense slot range 0..S
        if let Some(&max_slot) = used.keys().max() {
            for s in 0..=max_slot {
                if !used.contains_key(&s) {
                    return Err(CoreError::invariant(format!("slot {s} is empty")));
                }
            }
        }
        Ok(())
    }

    /// Concatenate `other` after `self`, shifting its slots.
    pub fn then(&self, other: &Circuit) -> Result<Circuit, CoreError> {
        if self.n != other.n {
            return Err(CoreError::invariant("circuit widths differ"));
        }
        let shift = self.slot_count();
        let mut instructions = self.instructions.clone();
        instructions.extend(other.instructions.iter().map(|i| PlacedInstruction {
            kind: i.kind.clone(),
            qubits: i.qubits.clone(),
            slot: i.slot + shift,
        }));
        let mut c = Circuit::new(self.n, instructions)?;
        c.metadata = self.metadata.clone();
        Ok(c)
    }

    /// Histogram of instruction kinds by canonical key.
    pub fn block_histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for inst in &self.instructions {
            *h.entry(inst.kind.key()).or_insert(0) += 1;
        }
        h
    }

    pub fn to_json(&self) -> Value {
        let instructions: Vec<Value> = self
            .instructions
            .iter()
            .map(|i| {
                let (name, params) = i.kind.to_json();
                json!({
                    "kind": name,
                    "params": params,
                    "qubits": i.qubits,
                    "slot": i.slot,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "instructions": instructions,
            "metadata": self.metadata,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, CoreError> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| CoreError::parse("circuit", "missing field `n`"))? as u32;
        let raw = v
            .get("instructions")
            .and_then(Value::as_array)
            .ok_or_else(|| CoreError::parse("circuit", "missing `instructions` array"))?;
        let mut instructions = Vec::with_capacity(raw.len());
        for (idx, item) in raw.iter().enumerate() {
            let name = item
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| CoreError::parse("circuit", format!("instruction {idx}: missing `kind`")))?;
            let default_params = json!({});
            let params = item.get("params").unwrap_or(&default_params);
            let kind = InstructionKind::from_json(name, params)?;
            let qubits = item
                .get("qubits")
                .and_then(Value::as_array)
                .ok_or_else(|| CoreError::parse("circuit", format!("instruction {idx}: missing `qubits`")))?
                .iter()
                .map(|q| q.as_u64().map(|x| x as u32))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| CoreError::parse("circuit", format!("instruction {idx}: bad qubit index")))?;
            let slot = item
                .get("slot")
                .and_then(Value::as_u64)
                .ok_or_else(|| CoreError::parse("circuit", format!("instruction {idx}: missing `slot`")))?
                as u32;
            instructions.push(PlacedInstruction::new(kind, qubits, slot));
        }
        let mut c = Circuit::new(n, instructions)?;
        if let Some(meta) = v.get("metadata").and_then(Value::as_object) {
            for (k, val) in meta {
                if let Some(s) = val.as_str() {
                    c.metadata.insert(k.clone(), s.to_string());
                }
            }
        }
        Ok(c)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), CoreError> {
        let text = serde_json::to_string_pretty(&self.to_json())
            .map_err(|e| CoreError::parse("circuit", e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| CoreError::parse(path.display().to_string(), e.to_string()))?;
        Circuit::from_json(&v)
    }
}

/// Duration of one instruction under the cost model and library.
pub fn instruction_duration(
    kind: &InstructionKind,
    lib: &BlockLibrary,
    cm: &CostModel,
) -> Result<f64, CoreError> {
    if let InstructionKind::LocalU(_) = kind {
        return Ok(match cm.local_policy {
            LocalPolicy::FastLocal => 0.0,
            LocalPolicy::TimedLocal { duration } => duration,
        });
    }
    lib.entry(kind).map(|e| e.duration)
}

/// Fidelity of one instruction. Local unitaries are ideal under both
/// policies; everything else reads the library.
pub fn instruction_fidelity(
    kind: &InstructionKind,
    lib: &BlockLibrary,
) -> Result<f64, CoreError> {
    if let InstructionKind::LocalU(_) = kind {
        return Ok(1.0);
    }
    lib.entry(kind).map(|e| e.fidelity)
}

/// Total duration: sum over slots of the longest instruction in each slot.
pub fn circuit_duration(c: &Circuit, lib: &BlockLibrary, cm: &CostModel) -> Result<f64, CoreError> {
    c.validate()?;
    let slots = c.slot_count();
    let mut slot_max = vec![0.0f64; slots as usize];
    for inst in c.instructions() {
        let d = instruction_duration(&inst.kind, lib, cm)?;
        let cell = &mut slot_max[inst.slot as usize];
        if d > *cell {
            *cell = d;
        }
    }
    Ok(slot_max.iter().sum())
}

/// Total quality triple: product fidelity over all instructions, the slot-sum
/// duration, and the relaxation-discounted quality `F * exp(-tau/T_R)`.
pub fn circuit_quality(
    c: &Circuit,
    lib: &BlockLibrary,
    cm: &CostModel,
) -> Result<QualityFactor, CoreError> {
    let duration = circuit_duration(c, lib, cm)?;
    let mut fidelity = 1.0f64;
    for inst in c.instructions() {
        fidelity *= instruction_fidelity(&inst.kind, lib)?;
    }
    Ok(QualityFactor::new(fidelity, duration, cm.t_r))
}
