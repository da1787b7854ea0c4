//! Indirect SWAP_n assembly: a mirror-symmetric network of SWAP_{m_j}
//! blocks carrying the end qubits inward to a central block and back out.
//! Side stages run left/right in the same slot; distinct stages are
//! sequential, so the total duration is
//! `tau(SWAP_{m_k}) + 2 sum_{j<k} tau(SWAP_{m_j})`.

use qcisc_core::{circuit::circuit_duration, BlockLibrary, Circuit, CostModel, InstructionKind};

use crate::error::AssemblerError;

/// Block sizes `(m_1, ..., m_k)`: `m_1..m_{k-1}` are the paired side types,
/// `m_k` the single central block, with
/// `m_k + 2 sum_{j<k} (m_j - 1) = n` and every `m_j >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapPlan {
    pub n: u32,
    pub block_sizes: Vec<u32>,
}

impl SwapPlan {
    pub fn new(n: u32, block_sizes: Vec<u32>) -> Result<Self, AssemblerError> {
        let plan = SwapPlan { n, block_sizes };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), AssemblerError> {
        if self.block_sizes.is_empty() {
            return Err(AssemblerError::PlanConstraintViolated(
                "plan needs at least the central block".into(),
            ));
        }
        if let Some(&bad) = self.block_sizes.iter().find(|&&m| m < 2) {
            return Err(AssemblerError::PlanConstraintViolated(format!(
                "block size {bad} < 2 (size-1 blocks are the identity)"
            )));
        }
        let k = self.block_sizes.len();
        let central = self.block_sizes[k - 1];
        let sides: u32 = self.block_sizes[..k - 1].iter().map(|&m| m - 1).sum();
        if central + 2 * sides != self.n {
            return Err(AssemblerError::PlanConstraintViolated(format!(
                "m_k + 2 sum(m_j - 1) = {} != n = {}",
                central + 2 * sides,
                self.n
            )));
        }
        Ok(())
    }

    pub fn side_types(&self) -> &[u32] {
        &self.block_sizes[..self.block_sizes.len() - 1]
    }

    pub fn central(&self) -> u32 {
        *self.block_sizes.last().unwrap()
    }

    /// Closed-form duration under a library.
    pub fn duration(&self, lib: &BlockLibrary) -> Result<f64, AssemblerError> {
        let tau = |m: u32| -> Result<f64, AssemblerError> {
            Ok(lib.entry(&InstructionKind::SwapBlock { m })?.duration)
        };
        let mut total = tau(self.central())?;
        for &m in self.side_types() {
            total += 2.0 * tau(m)?;
        }
        Ok(total)
    }

    /// Closed-form fidelity product: central once, each side type four times.
    pub fn fidelity(&self, lib: &BlockLibrary) -> Result<f64, AssemblerError> {
        let f = |m: u32| -> Result<f64, AssemblerError> {
            Ok(lib.entry(&InstructionKind::SwapBlock { m })?.fidelity)
        };
        let mut total = f(self.central())?;
        for &m in self.side_types() {
            total *= f(m)?.powi(4);
        }
        Ok(total)
    }
}

/// Emit the mirror-symmetric circuit of a SWAP plan.
pub fn assemble_swap(plan: &SwapPlan) -> Result<Circuit, AssemblerError> {
    plan.validate()?;
    let n = plan.n;
    let k = plan.block_sizes.len();
    let mut c = Circuit::empty(n);

    // stage offsets: side stage j starts at sum_{i<j} (m_i - 1)
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0u32;
    for &m in plan.side_types() {
        offsets.push(acc);
        acc += m - 1;
    }
    let central_offset = acc;

    let window = |start: u32, m: u32| -> Vec<u32> { (start..start + m).collect() };

    // inward stages
    for (j, &m) in plan.side_types().iter().enumerate() {
        let slot = j as u32;
        c.push_at(InstructionKind::SwapBlock { m }, window(offsets[j], m), slot)?;
        c.push_at(
            InstructionKind::SwapBlock { m },
            window(n - offsets[j] - m, m),
            slot,
        )?;
    }
    // central block
    let central_slot = (k - 1) as u32;
    c.push_at(
        InstructionKind::SwapBlock { m: plan.central() },
        window(central_offset, plan.central()),
        central_slot,
    )?;
    // outward mirror
    for (j, &m) in plan.side_types().iter().enumerate().rev() {
        let slot = (2 * (k - 1) - j) as u32;
        c.push_at(InstructionKind::SwapBlock { m }, window(offsets[j], m), slot)?;
        c.push_at(
            InstructionKind::SwapBlock { m },
            window(n - offsets[j] - m, m),
            slot,
        )?;
    }
    let c = c
        .with_metadata("scheme", "swap")
        .with_metadata("plan", format!("{:?}", plan.block_sizes));
    Ok(c)
}

/// Derive the odd-order SWAP_{n-1} from an even SWAP_n circuit by omitting
/// the last qubit and every gate connected to it.
pub fn assemble_swap_odd_from_even(even: &Circuit) -> Result<Circuit, AssemblerError> {
    let n = even.n;
    if n < 3 {
        return Err(AssemblerError::PlanConstraintViolated(
            "need at least 3 qubits to drop one".into(),
        ));
    }
    let last = n - 1;
    let kept: Vec<_> = even
        .instructions()
        .iter()
        .filter(|i| !i.qubits.contains(&last))
        .cloned()
        .collect();
    // re-densify slots
    let mut slots: Vec<u32> = kept.iter().map(|i| i.slot).collect();
    slots.sort_unstable();
    slots.dedup();
    let remap = |s: u32| slots.binary_search(&s).unwrap() as u32;
    let instructions = kept
        .into_iter()
        .map(|mut i| {
            i.slot = remap(i.slot);
            i
        })
        .collect();
    let c = Circuit::new(n - 1, instructions)?;
    Ok(c.with_metadata("scheme", "swap-odd"))
}

/// All plans for SWAP_n with blocks up to `max_m`, ascending in duration
/// under `lib`. Plans whose blocks are missing from the library are skipped.
pub fn enumerate_swap_plans(n: u32, max_m: u32, lib: &BlockLibrary) -> Vec<SwapPlan> {
    let mut plans = Vec::new();
    if n < 2 {
        return plans;
    }
    for central in 2..=max_m.min(n) {
        if (n - central) % 2 != 0 {
            continue;
        }
        let budget = (n - central) / 2; // sum of (m_j - 1) over side types
        let mut sides = Vec::new();
        enumerate_side_compositions(budget, max_m, &mut sides, &mut |side_types| {
            let mut block_sizes = side_types.to_vec();
            block_sizes.push(central);
            if let Ok(plan) = SwapPlan::new(n, block_sizes) {
                plans.push(plan);
            }
        });
    }
    let mut with_tau: Vec<(f64, SwapPlan)> = plans
        .into_iter()
        .filter_map(|p| p.duration(lib).ok().map(|d| (d, p)))
        .collect();
    with_tau.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.block_sizes.cmp(&b.1.block_sizes)));
    with_tau.into_iter().map(|(_, p)| p).collect()
}

fn enumerate_side_compositions(
    budget: u32,
    max_m: u32,
    current: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if budget == 0 {
        emit(current);
        return;
    }
    for m in 2..=max_m.min(budget + 1) {
        current.push(m);
        enumerate_side_compositions(budget - (m - 1), max_m, current, emit);
        current.pop();
    }
}

/// Duration consistency: the emitted circuit's slot-sum equals the plan's
/// closed form for any library (helper used by tests and reports).
pub fn swap_duration_consistent(
    plan: &SwapPlan,
    lib: &BlockLibrary,
    cm: &CostModel,
) -> Result<bool, AssemblerError> {
    let c = assemble_swap(plan)?;
    let emitted = circuit_duration(&c, lib, cm)?;
    let closed = plan.duration(lib)?;
    Ok((emitted - closed).abs() < 1e-12)
}
