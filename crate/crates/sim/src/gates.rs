//! Exact window-local unitaries for each instruction kind.
//!
//! Window-local basis: the instruction's qubits sorted ascending, first
//! qubit most significant, matching the global MSB-first convention.

use std::collections::HashMap;
use std::f64::consts::PI;

use ndarray_linalg::c64;

use qcisc_core::{InstructionKind, LocalUParams, PlacedInstruction};

use crate::linalg::CMat;

/// One primitive action on a window: a permutation of window basis states,
/// a diagonal phase, or a dense sub-unitary.
pub enum WindowOp {
    Perm(Vec<usize>),
    Diag(Vec<c64>),
    Dense(CMat),
}

/// Gate definitions used by the simulator: the cP-SWAP truncation threshold
/// (0 keeps every rotation) and unitaries for opaque blocks by label.
#[derive(Default)]
pub struct GateSet {
    pub cpswap_threshold: f64,
    pub opaque: HashMap<String, CMat>,
}

impl GateSet {
    pub fn exact() -> Self {
        GateSet::default()
    }

    pub fn with_threshold(threshold: f64) -> Self {
        GateSet {
            cpswap_threshold: threshold,
            opaque: HashMap::new(),
        }
    }
}

fn local_u_matrix(p: &LocalUParams) -> CMat {
    let rz = |a: f64| {
        let mut m = CMat::zeros((2, 2));
        m[[0, 0]] = c64::new(0.0, -a / 2.0).exp();
        m[[1, 1]] = c64::new(0.0, a / 2.0).exp();
        m
    };
    let ry = |a: f64| {
        let (s, c) = (a / 2.0).sin_cos();
        let mut m = CMat::zeros((2, 2));
        m[[0, 0]] = c64::new(c, 0.0);
        m[[0, 1]] = c64::new(-s, 0.0);
        m[[1, 0]] = c64::new(s, 0.0);
        m[[1, 1]] = c64::new(c, 0.0);
        m
    };
    let u = rz(p.zeta).dot(&ry(p.theta)).dot(&rz(p.xi));
    u.mapv(|z| z * c64::new(0.0, p.phase).exp())
}

/// The phase-family angles of `cP-SWAP^j` between two m-qubit blocks:
/// bit u of the upper block and bit w of the lower block (both 1-based,
/// most significant first) pick up `pi / 2^{j m + w - u}` on |1>|1>.
pub fn cpswap_angle(j: u32, m: u32, u: u32, w: u32) -> f64 {
    let exponent = j as i64 * m as i64 + w as i64 - u as i64;
    PI / 2f64.powi(exponent as i32)
}

/// Window ops for one placed instruction, in application order.
pub fn window_ops(
    inst: &PlacedInstruction,
    gs: &GateSet,
) -> Result<Vec<WindowOp>, String> {
    let (lo, hi) = inst.window();
    let w = (hi - lo + 1) as usize;
    let dim = 1usize << w;
    let local = |abs: u32| (abs - lo) as usize;
    let bit_of = |x: usize, l: usize| (x >> (w - 1 - l)) & 1;
    let flip = |x: usize, l: usize| x ^ (1usize << (w - 1 - l));

    let ops = match &inst.kind {
        InstructionKind::LocalU(p) => vec![WindowOp::Dense(local_u_matrix(p))],
        InstructionKind::Cnot => {
            let c = local(inst.qubits[0]);
            let t = local(inst.qubits[1]);
            let perm = (0..dim)
                .map(|x| if bit_of(x, c) == 1 { flip(x, t) } else { x })
                .collect();
            vec![WindowOp::Perm(perm)]
        }
        InstructionKind::ControlledPhase { angle } => {
            let a = local(inst.qubits[0]);
            let b = local(inst.qubits[1]);
            let diag = (0..dim)
                .map(|x| {
                    if bit_of(x, a) == 1 && bit_of(x, b) == 1 {
                        c64::new(0.0, *angle).exp()
                    } else {
                        c64::new(1.0, 0.0)
                    }
                })
                .collect();
            vec![WindowOp::Diag(diag)]
        }
        InstructionKind::Swap2 | InstructionKind::SwapBlock { .. } => {
            let a = local(inst.qubits[0]);
            let b = local(*inst.qubits.last().unwrap());
            let perm = (0..dim)
                .map(|x| {
                    if bit_of(x, a) == bit_of(x, b) {
                        x
                    } else {
                        flip(flip(x, a), b)
                    }
                })
                .collect();
            vec![WindowOp::Perm(perm)]
        }
        InstructionKind::QftBlock { .. } => {
            vec![WindowOp::Dense(crate::targets::qft(w as u32).into_mat())]
        }
        InstructionKind::CpSwapBlock { j, m } => {
            let half = (m / 2) as usize;
            // diagonal phases first, then the block exchange
            let mut diag = vec![c64::new(1.0, 0.0); dim];
            for x in 0..dim {
                let mut phase = 0.0f64;
                for u in 1..=half {
                    for v in 1..=half {
                        let angle = cpswap_angle(*j, half as u32, u as u32, v as u32);
                        if angle < gs.cpswap_threshold {
                            continue;
                        }
                        if bit_of(x, u - 1) == 1 && bit_of(x, half + v - 1) == 1 {
                            phase += angle;
                        }
                    }
                }
                diag[x] = c64::new(0.0, phase).exp();
            }
            let mask = (1usize << half) - 1;
            let perm = (0..dim)
                .map(|x| {
                    let hi_part = x >> half;
                    let lo_part = x & mask;
                    (lo_part << half) | hi_part
                })
                .collect();
            vec![WindowOp::Diag(diag), WindowOp::Perm(perm)]
        }
        InstructionKind::CmNot { controls } => {
            let ctrls: Vec<usize> = inst.qubits[..*controls as usize]
                .iter()
                .map(|&q| local(q))
                .collect();
            let target = local(*inst.qubits.last().unwrap());
            let perm = (0..dim)
                .map(|x| {
                    if ctrls.iter().all(|&c| bit_of(x, c) == 1) {
                        flip(x, target)
                    } else {
                        x
                    }
                })
                .collect();
            vec![WindowOp::Perm(perm)]
        }
        InstructionKind::CmNotK { controls, .. } => {
            let nc = *controls as usize;
            let ctrls: Vec<usize> = inst.qubits[..nc].iter().map(|&q| local(q)).collect();
            let targets: Vec<usize> = inst.qubits[nc..].iter().map(|&q| local(q)).collect();
            let perm = (0..dim)
                .map(|x| {
                    if ctrls.iter().all(|&c| bit_of(x, c) == 1) {
                        targets.iter().fold(x, |acc, &t| flip(acc, t))
                    } else {
                        x
                    }
                })
                .collect();
            vec![WindowOp::Perm(perm)]
        }
        InstructionKind::OpaqueBlock { label, .. } => {
            let mat = gs
                .opaque
                .get(label)
                .ok_or_else(|| format!("no unitary registered for opaque block `{label}`"))?;
            if mat.nrows() != dim {
                return Err(format!(
                    "opaque block `{label}` has dimension {}, window needs {dim}",
                    mat.nrows()
                ));
            }
            vec![WindowOp::Dense(mat.clone())]
        }
    };
    Ok(ops)
}
