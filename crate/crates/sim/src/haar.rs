//! Haar-distributed random unitaries by QR decomposition of complex
//! Ginibre matrices with the R-diagonal phase correction.

use ndarray::Array2;
use ndarray_linalg::{c64, QR};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::linalg::CMat;
use crate::unitary::DenseUnitary;

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex Ginibre sample: independent standard complex Gaussian entries.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> CMat {
    Array2::from_shape_fn((dim, dim), |_| {
        c64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-random unitary on `dim` dimensions from an explicit RNG.
pub fn haar_unitary_with(dim: usize, rng: &mut impl Rng) -> DenseUnitary {
    let g = ginibre(dim, rng);
    let (q, r) = g.qr().expect("QR of a Ginibre sample");
    // normalize column phases by the R diagonal so the distribution is Haar
    let mut u = q;
    for j in 0..dim {
        let d = r[[j, j]];
        let phase = d / c64::new(d.norm(), 0.0);
        for i in 0..dim {
            u[[i, j]] *= phase;
        }
    }
    DenseUnitary::new_unchecked(u)
}

/// Haar-random unitary on `n` qubits, deterministic in `seed`.
pub fn haar_random_unitary(n: u32, seed: u64) -> DenseUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(1usize << n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_error};

    #[test]
    fn samples_are_unitary_and_deterministic() {
        let u1 = haar_random_unitary(3, 42);
        let u2 = haar_random_unitary(3, 42);
        assert!(unitarity_error(u1.mat()) < 1e-10);
        assert_eq!(max_abs_diff(u1.mat(), u2.mat()), 0.0);
        let u3 = haar_random_unitary(3, 43);
        assert!(max_abs_diff(u1.mat(), u3.mat()) > 1e-3);
    }
}
