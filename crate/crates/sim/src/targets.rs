//! Exact target unitaries. Basis convention: qubit 0 is the most
//! significant bit of the computational index, so `|x_0 x_1 ... x_{n-1}>`
//! has index `sum_q x_q << (n-1-q)`.

use ndarray_linalg::c64;
use std::f64::consts::PI;

use crate::linalg::CMat;
use crate::unitary::DenseUnitary;

fn permutation(dim: usize, map: impl Fn(usize) -> usize) -> DenseUnitary {
    let mut m = CMat::zeros((dim, dim));
    for x in 0..dim {
        m[[map(x), x]] = c64::new(1.0, 0.0);
    }
    DenseUnitary::new_unchecked(m)
}

fn bit(x: usize, q: u32, n: u32) -> usize {
    (x >> (n - 1 - q)) & 1
}

fn flip(x: usize, q: u32, n: u32) -> usize {
    x ^ (1 << (n - 1 - q))
}

/// Indirect SWAP of qubits 0 and n-1; middles untouched.
pub fn swap_1n(n: u32) -> DenseUnitary {
    let dim = 1usize << n;
    permutation(dim, |x| {
        let b0 = bit(x, 0, n);
        let bl = bit(x, n - 1, n);
        if b0 == bl {
            x
        } else {
            flip(flip(x, 0, n), n - 1, n)
        }
    })
}

/// The N-dimensional discrete Fourier transform `omega^{jk} / sqrt(N)`.
pub fn qft(n: u32) -> DenseUnitary {
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let m = CMat::from_shape_fn((dim, dim), |(j, k)| {
        let phase = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
        c64::new(0.0, phase).exp() * norm
    });
    DenseUnitary::new_unchecked(m)
}

/// Multiply-controlled NOT with explicit roles.
pub fn cnnot_with_roles(n: u32, controls: &[u32], target: u32) -> DenseUnitary {
    let dim = 1usize << n;
    permutation(dim, |x| {
        if controls.iter().all(|&c| bit(x, c, n) == 1) {
            flip(x, target, n)
        } else {
            x
        }
    })
}

/// `C^{n-1}NOT` with qubits 0..n-2 controlling qubit n-1.
pub fn cnnot(n: u32) -> DenseUnitary {
    let controls: Vec<u32> = (0..n - 1).collect();
    cnnot_with_roles(n, &controls, n - 1)
}

/// Toffoli gate on 3 qubits.
pub fn toffoli() -> DenseUnitary {
    cnnot(3)
}

/// Indirect CNOT: qubit 0 controls qubit n-1 across untouched middles.
pub fn indirect_cnot(n: u32) -> DenseUnitary {
    cnnot_with_roles(n, &[0], n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use ndarray::array;

    #[test]
    fn two_qubit_swap_is_the_standard_permutation() {
        let u = swap_1n(2);
        let expected = array![
            [c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0)],
            [c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0)],
            [c64::new(0.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0)],
            [c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(1.0, 0.0)],
        ];
        assert!(max_abs_diff(u.mat(), &expected) < 1e-15);
    }

    #[test]
    fn single_qubit_qft_is_the_hadamard() {
        let u = qft(1);
        let s = 1.0 / 2f64.sqrt();
        let expected = array![
            [c64::new(s, 0.0), c64::new(s, 0.0)],
            [c64::new(s, 0.0), c64::new(-s, 0.0)],
        ];
        assert!(max_abs_diff(u.mat(), &expected) < 1e-15);
    }

    #[test]
    fn toffoli_swaps_the_last_two_basis_states() {
        // truth-table oracle: enumerate all 8 inputs
        let u = toffoli();
        for x in 0..8usize {
            let expected = if x >> 1 == 0b11 { x ^ 1 } else { x };
            for r in 0..8 {
                let want = if r == expected { 1.0 } else { 0.0 };
                assert_eq!(u.mat()[[r, x]].re, want, "x={x} r={r}");
                assert_eq!(u.mat()[[r, x]].im, 0.0);
            }
        }
    }

    #[test]
    fn indirect_cnot_leaves_middle_alone() {
        let u = indirect_cnot(3);
        // |100> -> |101>, |110> -> |111>, |010> stays
        assert_eq!(u.mat()[[0b101, 0b100]].re, 1.0);
        assert_eq!(u.mat()[[0b111, 0b110]].re, 1.0);
        assert_eq!(u.mat()[[0b010, 0b010]].re, 1.0);
    }
}
