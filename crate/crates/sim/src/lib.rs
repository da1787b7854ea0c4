//! Dense unitary verification oracle for the qcisc toolkit.
//!
//! Provides exact target constructors (indirect SWAP, QFT, multiply
//! controlled NOTs), a slot-ordered circuit-to-unitary simulator on up to 12
//! qubits, Haar-random sampling, fidelity-targeted coherent perturbations and
//! the Monte-Carlo error-propagation study comparing repeated-gate with
//! mixed-sequence error accumulation.

extern crate blas_src;
extern crate openblas_src;

pub mod gates;
pub mod haar;
pub mod linalg;
pub mod mc;
pub mod perturb;
pub mod simulate;
pub mod targets;
pub mod unitary;

pub use gates::GateSet;
pub use haar::haar_random_unitary;
pub use mc::{run_error_propagation, McConfig, McResult};
pub use perturb::{perturb_to_fidelity, Perturber};
pub use simulate::{simulate_circuit, verify_assembly, SimError};
pub use unitary::{trace_fidelity, trace_fidelity_frobenius, DenseUnitary};

/// Serialize access to OpenBLAS from rayon workers: the heavy paths manage
/// their own parallelism at the trial level.
pub fn set_single_threaded_blas() {
    extern "C" {
        fn openblas_set_num_threads(n: i32);
    }
    unsafe {
        openblas_set_num_threads(1);
    }
}
