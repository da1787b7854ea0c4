use proptest::prelude::*;
use qcisc_sim::linalg::{eig_unitary, max_abs_diff, unitarity_error};
use qcisc_sim::{haar_random_unitary, trace_fidelity, trace_fidelity_frobenius};

/// Chi-square statistic of eigenphase counts against the uniform law.
fn eigenphase_chi2(samples: usize, n: u32, bins: usize, seed: u64, left_mix: bool) -> f64 {
    let mixer = haar_random_unitary(n, 999_001);
    let mut counts = vec![0usize; bins];
    let mut total = 0usize;
    for s in 0..samples {
        let u = haar_random_unitary(n, seed + s as u64);
        let m = if left_mix {
            mixer.mat().dot(u.mat())
        } else {
            u.mat().clone()
        };
        let (phases, _) = eig_unitary(&m);
        for t in phases {
            let x = (t + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
            let b = ((x * bins as f64) as usize).min(bins - 1);
            counts[b] += 1;
            total += 1;
        }
    }
    let expected = total as f64 / bins as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

#[test]
fn haar_eigenphases_are_uniform() {
    // 2000 samples on 2 qubits -> 8000 phases in 16 bins; the chi-square
    // 99th percentile for 15 degrees of freedom is 30.58
    let chi2 = eigenphase_chi2(2000, 2, 16, 5000, false);
    assert!(chi2 < 30.58, "chi2 = {chi2}");
}

#[test]
fn left_multiplication_leaves_eigenphase_statistics_unchanged() {
    let chi2_mixed = eigenphase_chi2(1000, 2, 16, 9000, true);
    assert!(chi2_mixed < 30.58, "chi2 after mixing = {chi2_mixed}");
}

#[test]
fn unitary_eigendecomposition_reconstructs_haar_samples() {
    for seed in 0..5u64 {
        let u = haar_random_unitary(3, seed);
        let (phases, v) = eig_unitary(u.mat());
        assert!(unitarity_error(&v) < 1e-9);
        let diag: Vec<_> = phases
            .iter()
            .map(|&t| ndarray_linalg_c64_exp(t))
            .collect();
        let back = qcisc_sim::linalg::from_eigh(&v, &diag);
        assert!(max_abs_diff(&back, u.mat()) < 1e-9, "seed {seed}");
    }
}

fn ndarray_linalg_c64_exp(t: f64) -> ndarray_linalg::c64 {
    ndarray_linalg::c64::new(0.0, t).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The two trace-fidelity forms agree on random unitary pairs.
    #[test]
    fn fidelity_forms_agree(seed_u in 0u64..500, seed_v in 500u64..1000) {
        let u = haar_random_unitary(2, seed_u);
        let v = haar_random_unitary(2, seed_v);
        let a = trace_fidelity(u.mat(), v.mat());
        let b = trace_fidelity_frobenius(u.mat(), v.mat());
        prop_assert!((a - b).abs() < 1e-12);
    }

    /// Re-trace symmetry: F(U, V) == F(V, U).
    #[test]
    fn fidelity_is_symmetric(seed_u in 0u64..500, seed_v in 500u64..1000) {
        let u = haar_random_unitary(2, seed_u);
        let v = haar_random_unitary(2, seed_v);
        let a = trace_fidelity(u.mat(), v.mat());
        let b = trace_fidelity(v.mat(), u.mat());
        prop_assert!((a - b).abs() < 1e-12);
    }
}
