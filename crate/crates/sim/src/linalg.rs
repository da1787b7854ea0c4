//! Complex dense linear algebra helpers: matrix exponential via
//! scaling-and-squaring Pade, Hermitian eigendecomposition through the
//! divide-and-conquer LAPACK driver, and eigendecomposition / principal
//! logarithm of unitary matrices.

use ndarray::{Array1, Array2};
use ndarray_linalg::{c64, Solve};
use std::f64::consts::PI;

pub type CMat = Array2<c64>;
pub type CVec = Array1<c64>;

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn unitarity_error(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs_diff(&dagger(u).dot(u), &identity(n))
}

fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|z| z.norm()).sum();
        if s > best {
            best = s;
        }
    }
    best
}

/// Matrix exponential by the degree-13 Pade approximant with scaling and
/// squaring (desk-scale sizes, general complex input).
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let theta13 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as i32
    } else {
        0
    };
    let a_scaled = a.mapv(|z| z / c64::new(2f64.powi(s), 0.0));
    let b: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let a2 = a_scaled.dot(&a_scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let eye = identity(n);
    // u = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let inner_u = a6.mapv(|z| z * b[13]) + a4.mapv(|z| z * b[11]) + a2.mapv(|z| z * b[9]);
    let u_poly = a6.dot(&inner_u)
        + a6.mapv(|z| z * b[7])
        + a4.mapv(|z| z * b[5])
        + a2.mapv(|z| z * b[3])
        + eye.mapv(|z| z * b[1]);
    let u = a_scaled.dot(&u_poly);
    let inner_v = a6.mapv(|z| z * b[12]) + a4.mapv(|z| z * b[10]) + a2.mapv(|z| z * b[8]);
    let v = a6.dot(&inner_v)
        + a6.mapv(|z| z * b[6])
        + a4.mapv(|z| z * b[4])
        + a2.mapv(|z| z * b[2])
        + eye.mapv(|z| z * b[0]);
    // solve (v - u) x = (v + u) column by column
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut x = CMat::zeros((n, n));
    let f = lhs;
    for j in 0..n {
        let col = rhs.column(j).to_owned();
        let sol = f.solve(&col).expect("Pade denominator invertible");
        x.column_mut(j).assign(&sol);
    }
    for _ in 0..s {
        x = x.dot(&x);
    }
    x
}

/// Hermitian eigendecomposition via LAPACK `zheevd`; returns ascending
/// eigenvalues and the matrix whose columns are the eigenvectors, so that
/// `a = v diag(w) v^dagger`.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    // LAPACK wants column-major; passing the row-major buffer hands it the
    // transpose, i.e. conj(a) for Hermitian input. Eigenvectors of conj(a)
    // are conjugates of those of a, which the final map corrects.
    let mut buf = a.clone();
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    let nn = n as i32;
    unsafe {
        let mut work_q = [c64::new(0.0, 0.0)];
        let mut rwork_q = [0.0f64];
        let mut iwork_q = [0i32];
        let m1 = -1i32;
        lapack_sys::zheevd_(
            &(b'V' as core::ffi::c_char),
            &(b'L' as core::ffi::c_char),
            &nn,
            buf.as_mut_ptr() as *mut _,
            &nn,
            w.as_mut_ptr(),
            work_q.as_mut_ptr() as *mut _,
            &m1,
            rwork_q.as_mut_ptr(),
            &m1,
            iwork_q.as_mut_ptr(),
            &m1,
            &mut info,
        );
        assert_eq!(info, 0, "zheevd workspace query failed");
        let lwork = work_q[0].re as i32;
        let lrwork = rwork_q[0] as i32;
        let liwork = iwork_q[0];
        let mut work = vec![c64::new(0.0, 0.0); lwork.max(1) as usize];
        let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        lapack_sys::zheevd_(
            &(b'V' as core::ffi::c_char),
            &(b'L' as core::ffi::c_char),
            &nn,
            buf.as_mut_ptr() as *mut _,
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
        assert_eq!(info, 0, "zheevd failed");
    }
    // Row i of the row-major view holds the i-th eigenvector of conj(a);
    // conjugate-transpose turns rows into eigenvector columns of a.
    let v = buf
        .mapv(|z| z.conj())
        .reversed_axes()
        .as_standard_layout()
        .to_owned();
    (w, v)
}

/// Reconstruct `v diag(f(w)) v^dagger`.
pub fn from_eigh(v: &CMat, diag: &[c64]) -> CMat {
    let n = v.nrows();
    let mut scaled = v.clone();
    for (j, d) in diag.iter().enumerate() {
        for i in 0..n {
            scaled[[i, j]] *= *d;
        }
    }
    scaled.dot(&dagger(v))
}

/// Eigendecomposition of a unitary matrix: returns eigenphases
/// `theta_k` and unitary `v` with `u = v diag(e^{i theta}) v^dagger`.
///
/// Uses the Hermitian part `(u + u^dagger)/2`, whose eigenspaces are shared
/// with `u`; clusters degenerate in `cos(theta)` are split by the compressed
/// skew part, which separates `theta` from `-theta`.
pub fn eig_unitary(u: &CMat) -> (Vec<f64>, CMat) {
    let n = u.nrows();
    let ud = dagger(u);
    let b = (u + &ud).mapv(|z| z * 0.5);
    let (bw, mut v) = eigh(&b);
    // cluster refinement with K = (u - u^dagger) / (2i)
    let tol = 1e-7;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (bw[end] - bw[start]).abs() < tol {
            end += 1;
        }
        if end - start > 1 {
            let k = (u - &ud).mapv(|z| z * c64::new(0.0, -0.5));
            let vc = v.slice(ndarray::s![.., start..end]).to_owned();
            let kc = dagger(&vc).dot(&k).dot(&vc);
            let (_, rot) = eigh(&kc);
            let refined = vc.dot(&rot);
            v.slice_mut(ndarray::s![.., start..end]).assign(&refined);
        }
        start = end;
    }
    // eigenphases from Rayleigh quotients
    let uv = u.dot(&v);
    let mut phases = vec![0.0f64; n];
    for k in 0..n {
        let mut q = c64::new(0.0, 0.0);
        for i in 0..n {
            q += v[[i, k]].conj() * uv[[i, k]];
        }
        phases[k] = q.im.atan2(q.re);
    }
    (phases, v)
}

/// Hermitian generator `h` of a unitary `u = e^{-i h}` on the principal
/// branch, eigenphases folded to `(-pi, pi]`.
pub fn log_unitary_generator(u: &CMat) -> CMat {
    let (phases, v) = eig_unitary(u);
    let folded: Vec<c64> = phases
        .iter()
        .map(|&t| {
            let mut g = -t;
            if g <= -PI {
                g += 2.0 * PI;
            }
            c64::new(g, 0.0)
        })
        .collect();
    from_eigh(&v, &folded)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_hermitian(n: usize) -> CMat {
        Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                c64::new(i as f64 * 0.3, 0.0)
            } else if i < j {
                c64::new(0.1 * (i + j) as f64, 0.05 * (j as f64 - i as f64))
            } else {
                c64::new(0.1 * (i + j) as f64, -0.05 * (i as f64 - j as f64))
            }
        })
    }

    #[test]
    fn eigh_reconstructs_input() {
        let h = test_hermitian(9);
        let (w, v) = eigh(&h);
        let diag: Vec<c64> = w.iter().map(|&x| c64::new(x, 0.0)).collect();
        let back = from_eigh(&v, &diag);
        assert!(max_abs_diff(&back, &h) < 1e-12);
        assert!(unitarity_error(&v) < 1e-12);
    }

    #[test]
    fn expm_matches_eigendecomposition_for_hermitian_generators() {
        let h = test_hermitian(8);
        let a = h.mapv(|z| z * c64::new(0.0, -1.0));
        let via_pade = expm(&a);
        let (w, v) = eigh(&h);
        let diag: Vec<c64> = w.iter().map(|&x| (c64::new(0.0, -1.0) * x).exp()).collect();
        let via_eig = from_eigh(&v, &diag);
        assert!(max_abs_diff(&via_pade, &via_eig) < 1e-11);
        assert!(unitarity_error(&via_pade) < 1e-11);
    }

    #[test]
    fn unitary_log_round_trips_including_degenerate_spectra() {
        // phase pairs (t, -t) are degenerate in cos t: exercises the cluster path
        let thetas = [1.3f64, -1.3, 0.4, -0.4, 0.0, std::f64::consts::PI - 1e-3];
        let n = thetas.len();
        let h0 = test_hermitian(n);
        let (_, v) = eigh(&h0);
        let diag: Vec<c64> = thetas.iter().map(|&t| c64::new(0.0, t).exp()).collect();
        let u = from_eigh(&v, &diag);
        let g = log_unitary_generator(&u);
        let herm_err = max_abs_diff(&g, &dagger(&g));
        assert!(herm_err < 1e-10, "generator hermitian, err {herm_err}");
        let back = expm(&g.mapv(|z| z * c64::new(0.0, -1.0)));
        assert!(max_abs_diff(&back, &u) < 1e-9);
    }
}
