//! Recursive QFT assembly on a nearest-neighbour line.
//!
//! Variant I builds a (k*m)-qubit QFT from k m-qubit QFT blocks and
//! C(k,2) combined controlled-phase + block-swap modules on 2m qubits
//! (`cP-SWAP^j`, j = 1..k-1). The gates cascade in waves: the QFT block
//! always fires at the top position while the cP-SWAP diagonals carry
//! logical blocks downward, absorbing the final bit reversal.
//!
//! Variant II (even m) expands every 2m-qubit cP-SWAP into four m-qubit
//! cP-SWAP modules over half-blocks in three sub-slots.

use ndarray_linalg::c64;
use std::f64::consts::PI;

use qcisc_core::{BlockLibrary, Circuit, InstructionKind};
use qcisc_sim::gates::cpswap_angle;
use qcisc_sim::linalg::CMat;
use qcisc_sim::unitary::DenseUnitary;

use crate::error::AssemblerError;

/// Rotations below `pi / 2^10` are dropped inside cP-SWAP modules unless
/// configured otherwise.
pub const DEFAULT_TRUNCATION_THRESHOLD: f64 = PI / 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftVariant {
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftPlan {
    pub m: u32,
    pub k: u32,
    pub variant: QftVariant,
    pub truncation_threshold: f64,
}

impl QftPlan {
    pub fn variant_i(m: u32, k: u32) -> Self {
        QftPlan {
            m,
            k,
            variant: QftVariant::I,
            truncation_threshold: 0.0,
        }
    }

    pub fn variant_ii(m: u32, k: u32) -> Self {
        QftPlan {
            m,
            k,
            variant: QftVariant::II,
            truncation_threshold: 0.0,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.truncation_threshold = threshold;
        self
    }

    pub fn n(&self) -> u32 {
        self.m * self.k
    }

    pub fn validate(&self) -> Result<(), AssemblerError> {
        if self.k < 1 || self.m < 1 {
            return Err(AssemblerError::PlanConstraintViolated(
                "QFT plan needs m >= 1 and k >= 1".into(),
            ));
        }
        if self.variant == QftVariant::II && self.m % 2 != 0 {
            return Err(AssemblerError::OddMForVariantII(self.m));
        }
        Ok(())
    }

    /// Smallest phase-family index whose module is unchanged by further
    /// truncation: every `cP-SWAP^j` with `j >= collapse_index` carries the
    /// same surviving rotations (possibly none, leaving a plain block swap).
    pub fn truncation_collapse_index(&self) -> u32 {
        if self.truncation_threshold <= 0.0 {
            return u32::MAX;
        }
        let half = match self.variant {
            QftVariant::I => self.m,
            QftVariant::II => self.m / 2,
        };
        // angles of family j span pi/2^{(j-1)half+1} .. pi/2^{(j+1)half-1};
        // once the largest angle is below threshold the family is all-swap
        let mut j = 1u32;
        loop {
            let largest = cpswap_angle(j, half, half, 1);
            if largest < self.truncation_threshold {
                return j;
            }
            j += 1;
            if j > 64 {
                return u32::MAX;
            }
        }
    }

    /// Closed-form duration of variant I:
    /// `2 tau(QFT_m) + (k-1) tau(cPS^1_{2m}) + (k-2) tau(cPS^2_{2m})`
    /// (the k = 1 plan is the bare block).
    pub fn duration_variant_i(&self, lib: &BlockLibrary) -> Result<f64, AssemblerError> {
        let qft = lib.entry(&InstructionKind::QftBlock { m: self.m })?.duration;
        if self.k == 1 {
            return Ok(qft);
        }
        let cps1 = lib
            .entry(&InstructionKind::CpSwapBlock { j: 1, m: 2 * self.m })?
            .duration;
        let tau = 2.0 * qft + (self.k - 1) as f64 * cps1;
        if self.k == 2 {
            return Ok(tau);
        }
        let cps2 = lib
            .entry(&InstructionKind::CpSwapBlock { j: 2, m: 2 * self.m })?
            .duration;
        Ok(tau + (self.k - 2) as f64 * cps2)
    }

    /// Closed-form fidelity of variant I:
    /// `F_QFT^k * prod_j F_{cPS^j}^{k-j}`.
    pub fn fidelity_variant_i(&self, lib: &BlockLibrary) -> Result<f64, AssemblerError> {
        let mut f = lib
            .entry(&InstructionKind::QftBlock { m: self.m })?
            .fidelity
            .powi(self.k as i32);
        for j in 1..self.k {
            let fj = lib
                .entry(&InstructionKind::CpSwapBlock { j, m: 2 * self.m })?
                .fidelity;
            f *= fj.powi((self.k - j) as i32);
        }
        Ok(f)
    }
}

/// Collapse a phase-family index under the plan's truncation threshold:
/// families at or above the collapse index share one module.
fn family_index(plan: &QftPlan, j: u32) -> u32 {
    j.min(plan.truncation_collapse_index())
}

/// Emit the variant-I / variant-II circuit of a (k*m)-qubit QFT.
pub fn assemble_qft(plan: &QftPlan) -> Result<Circuit, AssemblerError> {
    plan.validate()?;
    match plan.variant {
        QftVariant::I => assemble_variant_i(plan),
        QftVariant::II => assemble_variant_ii(plan),
    }
}

fn assemble_variant_i(plan: &QftPlan) -> Result<Circuit, AssemblerError> {
    let (m, k) = (plan.m, plan.k);
    let n = m * k;
    let mut c = Circuit::empty(n);
    // QFT_m at the top block in every odd slot (1-based), i.e. slots 0, 2, ...
    for w in 1..=k {
        c.push_at(
            InstructionKind::QftBlock { m },
            (0..m).collect(),
            2 * (w - 1),
        )?;
    }
    // wave w sends cP-SWAP^j down block pairs (j, j+1) at slot 2w + j - 2
    for w in 1..k {
        for j in 1..=(k - w) {
            let start = (j - 1) * m;
            c.push_at(
                InstructionKind::CpSwapBlock {
                    j: family_index(plan, j),
                    m: 2 * m,
                },
                (start..start + 2 * m).collect(),
                2 * w + j - 2,
            )?;
        }
    }
    Ok(c
        .with_metadata("scheme", "qft-variant-i")
        .with_metadata("m", m)
        .with_metadata("k", k))
}

fn assemble_variant_ii(plan: &QftPlan) -> Result<Circuit, AssemblerError> {
    let (m, k) = (plan.m, plan.k);
    let half = m / 2;
    let n = m * k;
    let mut c = Circuit::empty(n);
    // variant-I slot s maps to sub-slots 3s, 3s+1, 3s+2
    for w in 1..=k {
        c.push_at(
            InstructionKind::QftBlock { m },
            (0..m).collect(),
            3 * (2 * (w - 1)),
        )?;
    }
    for w in 1..k {
        for j in 1..=(k - w) {
            let slot = 3 * (2 * w + j - 2);
            let start = (j - 1) * m;
            // half-blocks A B C D of the 2m window
            let a = start;
            let b = start + half;
            let cq = start + m;
            let d = start + m + half;
            let cps = |jj: u32| InstructionKind::CpSwapBlock {
                j: family_index(plan, jj),
                m,
            };
            // (B,C) at 2j-1, then (A,C) || (B,D) at 2j, then (A,D) at 2j+1
            c.push_at(cps(2 * j - 1), (b..b + m).collect(), slot)?;
            c.push_at(cps(2 * j), (a..a + m).collect(), slot + 1)?;
            c.push_at(cps(2 * j), (cq..cq + m).collect(), slot + 1)?;
            c.push_at(cps(2 * j + 1), (b..b + m).collect(), slot + 2)?;
        }
    }
    compact_slots(&mut c)?;
    Ok(c
        .with_metadata("scheme", "qft-variant-ii")
        .with_metadata("m", m)
        .with_metadata("k", k))
}

/// Remove empty slots, keeping relative order.
fn compact_slots(c: &mut Circuit) -> Result<(), AssemblerError> {
    let mut used: Vec<u32> = c.instructions().iter().map(|i| i.slot).collect();
    used.sort_unstable();
    used.dedup();
    let instructions = c
        .instructions()
        .iter()
        .cloned()
        .map(|mut i| {
            i.slot = used.binary_search(&i.slot).unwrap() as u32;
            i
        })
        .collect();
    let mut rebuilt = Circuit::new(c.n, instructions)?;
    std::mem::swap(&mut rebuilt.metadata, &mut c.metadata);
    std::mem::swap(c, &mut rebuilt);
    Ok(())
}

/// Exact 2^{m'}-dimensional unitary of `cP-SWAP^j_{m'}` with rotations below
/// `threshold` dropped, plus its trace fidelity against the untruncated
/// module. The fidelity is the average over basis states of the dropped
/// phase: `F = (1/N) sum_x cos(sum of dropped angles active on x)`.
pub fn truncated_cpswap_unitary(
    j: u32,
    m_prime: u32,
    threshold: f64,
) -> Result<(DenseUnitary, f64), AssemblerError> {
    if m_prime % 2 != 0 || m_prime == 0 {
        return Err(AssemblerError::PlanConstraintViolated(
            "cP-SWAP width must be an even block pair".into(),
        ));
    }
    let half = m_prime / 2;
    let kind = InstructionKind::CpSwapBlock { j, m: m_prime };
    let gs = qcisc_sim::GateSet::with_threshold(threshold);
    let mat = qcisc_sim::simulate::kind_unitary(&kind, &gs)
        .map_err(|e| AssemblerError::PlanConstraintViolated(e.to_string()))?;
    let truncated = DenseUnitary::new(mat)
        .map_err(AssemblerError::PlanConstraintViolated)?;

    let dim = 1usize << m_prime;
    let mut acc = 0.0f64;
    for x in 0..dim {
        let mut dropped = 0.0f64;
        for u in 1..=half {
            for w in 1..=half {
                let angle = cpswap_angle(j, half, u, w);
                if angle < threshold {
                    let bu = (x >> (m_prime - u)) & 1;
                    let bw = (x >> (half - w)) & 1;
                    if bu == 1 && bw == 1 {
                        dropped += angle;
                    }
                }
            }
        }
        acc += dropped.cos();
    }
    Ok((truncated, acc / dim as f64))
}

/// Cooley-Tukey factors for `DFT_N` with `N = m * q`:
/// `DFT_N = (1_q (x) DFT_m) . (L . D) . (DFT_q (x) 1_m)`
/// where `D = diag(omega^{(k mod m) floor(k/m)})` and `L` is the stride
/// permutation `a*m + b -> b*q + a`. Returns `(L, D)` as dense matrices.
pub fn cooley_tukey_factors(n_dim: usize, m: usize, q: usize) -> Result<(CMat, CMat), AssemblerError> {
    if m * q != n_dim || n_dim == 0 {
        return Err(AssemblerError::PlanConstraintViolated(format!(
            "need N = m*q, got {n_dim} != {m}*{q}"
        )));
    }
    let mut l = CMat::zeros((n_dim, n_dim));
    for k in 0..n_dim {
        let a = k / m;
        let b = k % m;
        l[[b * q + a, k]] = c64::new(1.0, 0.0);
    }
    let mut d = CMat::zeros((n_dim, n_dim));
    let omega = 2.0 * PI / n_dim as f64;
    for k in 0..n_dim {
        let t = ((k % m) * (k / m)) as f64;
        d[[k, k]] = c64::new(0.0, omega * t).exp();
    }
    Ok((l, d))
}

/// Duration-ordering checks on an ingested library, reported as warnings:
/// a `cPS^j_{2m}` should take at least as long as a `QFT_m`, and module
/// durations should not increase with the phase index `j`.
pub fn validate_qft_orderings(lib: &BlockLibrary, m: u32, j_max: u32) -> Vec<String> {
    let mut warnings = Vec::new();
    let qft = match lib.entry(&InstructionKind::QftBlock { m }) {
        Ok(e) => e.duration,
        Err(_) => return warnings,
    };
    let mut prev: Option<f64> = None;
    for j in 1..=j_max {
        if let Ok(e) = lib.entry(&InstructionKind::CpSwapBlock { j, m: 2 * m }) {
            if e.duration < qft {
                warnings.push(format!(
                    "cPS^{j}_{} at {} is shorter than QFT_{m} at {qft}",
                    2 * m,
                    e.duration
                ));
            }
            if let Some(p) = prev {
                if e.duration > p {
                    warnings.push(format!(
                        "cPS^{j}_{} at {} is longer than the previous family at {p}",
                        2 * m,
                        e.duration
                    ));
                }
            }
            prev = Some(e.duration);
        }
    }
    warnings
}
