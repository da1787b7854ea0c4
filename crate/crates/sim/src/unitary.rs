use ndarray_linalg::c64;

use crate::linalg::{unitarity_error, CMat};

/// A dense unitary on `n` qubits (dimension `2^n`), checked to
/// `|| U^dagger U - 1 ||_max <= 1e-10` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    mat: CMat,
}

impl DenseUnitary {
    pub fn new(mat: CMat) -> Result<Self, String> {
        if mat.nrows() != mat.ncols() {
            return Err("matrix not square".into());
        }
        if !mat.nrows().is_power_of_two() {
            return Err(format!("dimension {} is not a power of two", mat.nrows()));
        }
        let err = unitarity_error(&mat);
        if err > 1e-10 {
            return Err(format!("unitarity violated: residual {err:.3e}"));
        }
        Ok(DenseUnitary { mat })
    }

    /// For internal construction where unitarity holds by construction.
    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        DenseUnitary { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> u32 {
        self.dim().trailing_zeros()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }
}

/// Trace fidelity `F_tr = Re tr(V^dagger U) / N`.
pub fn trace_fidelity(u: &CMat, v: &CMat) -> f64 {
    let n = u.nrows();
    let mut acc = c64::new(0.0, 0.0);
    for (x, y) in u.iter().zip(v.iter()) {
        acc += y.conj() * x;
    }
    acc.re / n as f64
}

/// The equivalent Euclidean form `1 - ||V - U||_F^2 / (2N)`.
pub fn trace_fidelity_frobenius(u: &CMat, v: &CMat) -> f64 {
    let n = u.nrows();
    let mut acc = 0.0f64;
    for (x, y) in u.iter().zip(v.iter()) {
        acc += (x - y).norm_sqr();
    }
    1.0 - acc / (2.0 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    #[test]
    fn identical_unitaries_have_unit_fidelity() {
        let u = identity(4);
        assert!((trace_fidelity(&u, &u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn global_sign_flips_fidelity() {
        let u = identity(2);
        let v = u.mapv(|z| -z);
        assert!((trace_fidelity(&u, &v) + 1.0).abs() < 1e-15);
    }
}
