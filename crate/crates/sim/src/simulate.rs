//! Slot-ordered circuit-to-unitary simulation by in-place application of
//! window-local operations to the accumulating matrix.

use thiserror::Error;

use qcisc_core::{Circuit, CoreError, PlacedInstruction};

use crate::gates::{window_ops, GateSet, WindowOp};
use crate::linalg::{identity, CMat};
use crate::unitary::{trace_fidelity, DenseUnitary};

pub const MAX_SIM_QUBITS: u32 = 12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0} qubits exceed the dense simulation cap of {MAX_SIM_QUBITS}")]
    DimensionTooLarge(u32),

    #[error("undefined gate: {0}")]
    UndefinedGate(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Left-multiply the window operation (acting on qubits [lo..hi]) onto `u`.
fn apply_window_op(u: &mut CMat, n: u32, lo: u32, hi: u32, op: &WindowOp) {
    let dim = u.nrows();
    let w = (hi - lo + 1) as usize;
    let wdim = 1usize << w;
    let low_bits = (n - 1 - hi) as usize;
    let field_shift = low_bits;
    let hi_shift = low_bits + w;
    let row_index = |a: usize, b: usize, c: usize| (a << hi_shift) | (b << field_shift) | c;
    let n_hi = dim >> hi_shift;
    let n_lo = 1usize << low_bits;

    match op {
        WindowOp::Perm(p) => {
            let mut out = CMat::zeros(u.raw_dim());
            for a in 0..n_hi {
                for b in 0..wdim {
                    let nb = p[b];
                    for c in 0..n_lo {
                        let src = row_index(a, b, c);
                        let dst = row_index(a, nb, c);
                        out.row_mut(dst).assign(&u.row(src));
                    }
                }
            }
            *u = out;
        }
        WindowOp::Diag(d) => {
            for a in 0..n_hi {
                for b in 0..wdim {
                    let f = d[b];
                    for c in 0..n_lo {
                        let r = row_index(a, b, c);
                        u.row_mut(r).mapv_inplace(|z| z * f);
                    }
                }
            }
        }
        WindowOp::Dense(g) => {
            let cols = u.ncols();
            let mut gathered = CMat::zeros((wdim, cols));
            for a in 0..n_hi {
                for c in 0..n_lo {
                    for b in 0..wdim {
                        gathered.row_mut(b).assign(&u.row(row_index(a, b, c)));
                    }
                    let mixed = g.dot(&gathered);
                    for b in 0..wdim {
                        u.row_mut(row_index(a, b, c)).assign(&mixed.row(b));
                    }
                }
            }
        }
    }
}

fn apply_instruction(u: &mut CMat, n: u32, inst: &PlacedInstruction, gs: &GateSet) -> Result<(), SimError> {
    let (lo, hi) = inst.window();
    let ops = window_ops(inst, gs).map_err(SimError::UndefinedGate)?;
    for op in &ops {
        apply_window_op(u, n, lo, hi, op);
    }
    Ok(())
}

/// Slot-ordered product of kronecker-embedded instruction unitaries.
pub fn simulate_circuit(c: &Circuit, gs: &GateSet) -> Result<DenseUnitary, SimError> {
    if c.n > MAX_SIM_QUBITS {
        return Err(SimError::DimensionTooLarge(c.n));
    }
    c.validate()?;
    let dim = 1usize << c.n;
    let mut u = identity(dim);
    let mut order: Vec<&PlacedInstruction> = c.instructions().iter().collect();
    order.sort_by_key(|i| i.slot);
    for inst in order {
        apply_instruction(&mut u, c.n, inst, gs)?;
    }
    Ok(DenseUnitary::new_unchecked(u))
}

/// Simulate and compare against an exact target; passes at
/// `F_tr >= 1 - 1e-10`.
pub fn verify_assembly(
    c: &Circuit,
    gs: &GateSet,
    target: &DenseUnitary,
) -> Result<(f64, bool), SimError> {
    let sim = simulate_circuit(c, gs)?;
    let f = trace_fidelity(sim.mat(), target.mat());
    Ok((f, f >= 1.0 - 1e-10))
}

/// Apply a single kind as a standalone unitary on `width` qubits
/// (window = the whole line), mostly for tests and block definitions.
pub fn kind_unitary(kind: &qcisc_core::InstructionKind, gs: &GateSet) -> Result<CMat, SimError> {
    let w = kind.width();
    let qubits: Vec<u32> = (0..w).collect();
    let inst = PlacedInstruction::new(kind.clone(), qubits, 0);
    let dim = 1usize << w;
    let mut u = identity(dim);
    let ops = window_ops(&inst, gs).map_err(SimError::UndefinedGate)?;
    for op in &ops {
        apply_window_op(&mut u, w, 0, w - 1, op);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::targets;
    use qcisc_core::InstructionKind;

    #[test]
    fn empty_circuit_simulates_to_identity() {
        let c = Circuit::empty(3);
        let u = simulate_circuit(&c, &GateSet::exact()).unwrap();
        assert!(max_abs_diff(u.mat(), &identity(8)) < 1e-15);
    }

    #[test]
    fn swap4_network_equals_indirect_swap_target() {
        let mut c = Circuit::empty(4);
        c.push_at(InstructionKind::Swap2, vec![0, 1], 0).unwrap();
        c.push_at(InstructionKind::Swap2, vec![2, 3], 0).unwrap();
        c.push_at(InstructionKind::Swap2, vec![1, 2], 1).unwrap();
        c.push_at(InstructionKind::Swap2, vec![0, 1], 2).unwrap();
        c.push_at(InstructionKind::Swap2, vec![2, 3], 2).unwrap();
        let (f, pass) = verify_assembly(&c, &GateSet::exact(), &targets::swap_1n(4)).unwrap();
        assert!(pass, "F_tr = {f}");
    }

    #[test]
    fn four_toffoli_network_realizes_c3not() {
        // controls 0,1,3; ancilla 2; target 4
        let mut c = Circuit::empty(5);
        c.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![0, 1, 2]).unwrap();
        c.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![2, 3, 4]).unwrap();
        c.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![0, 1, 2]).unwrap();
        c.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![2, 3, 4]).unwrap();
        let target = targets::cnnot_with_roles(5, &[0, 1, 3], 4);
        let (f, pass) = verify_assembly(&c, &GateSet::exact(), &target).unwrap();
        assert!(pass, "F_tr = {f}");

        // negative control: dropping one gate must fail clearly
        let mut broken = Circuit::empty(5);
        broken.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![0, 1, 2]).unwrap();
        broken.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![2, 3, 4]).unwrap();
        broken.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![0, 1, 2]).unwrap();
        let (f_broken, pass_broken) =
            verify_assembly(&broken, &GateSet::exact(), &target).unwrap();
        assert!(!pass_broken);
        assert!(f_broken < 1.0 - 1e-3, "F_tr = {f_broken}");
    }

    #[test]
    fn basis_state_trace_of_fig7_network_matches_boolean_oracle() {
        // independent oracle: x5 ^= x1 x2 x4 on all 32 basis states
        let mut c = Circuit::empty(5);
        for (a, b) in [(0u32, 2u32), (2, 4), (0, 2), (2, 4)] {
            c.push_sequential(InstructionKind::CmNot { controls: 2 }, vec![a, a + 1, b]).unwrap();
        }
        let u = simulate_circuit(&c, &GateSet::exact()).unwrap();
        for x in 0..32usize {
            let x1 = (x >> 4) & 1;
            let x2 = (x >> 3) & 1;
            let x4 = (x >> 1) & 1;
            let expected = x ^ (x1 & x2 & x4);
            assert_eq!(u.mat()[[expected, x]].re, 1.0, "x = {x:05b}");
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let c = Circuit::empty(13);
        assert!(matches!(
            simulate_circuit(&c, &GateSet::exact()),
            Err(SimError::DimensionTooLarge(13))
        ));
    }
}
