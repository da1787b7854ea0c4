//! Multiply-controlled general unitaries: the similarity transform taking a
//! self-inverse non-special 1-qubit unitary to sigma_x, and the duration
//! bounds it yields on top of a multiply-controlled NOT realization.

use ndarray::array;
use ndarray_linalg::c64;

use qcisc_core::{BlockLibrary, CostModel, LocalPolicy};

use crate::cnnot::{plan_backbone, BackbonePlan};
use crate::error::AssemblerError;
use qcisc_sim::linalg::{dagger, max_abs_diff, CMat};

/// Class of the controlled 1-qubit unitary for the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UClass {
    /// self-inverse, det = -1: conjugated NOT, one V / V^dagger pair
    SelfInverseNonSpecial,
    /// generic SU(2): two controlled-NOT realizations plus local gates
    GenericSu2,
}

/// Find `V` in SU(2) with `V sigma_x V^dagger = U` for a self-inverse
/// `U` with `det U = -1`. The input is checked to be unitary and
/// self-inverse to 1e-10.
pub fn decompose_self_inverse(u: &CMat) -> Result<CMat, AssemblerError> {
    assert_eq!(u.nrows(), 2);
    let uu = u.dot(u);
    let eye: CMat = ndarray::Array2::eye(2);
    let self_inv_err = max_abs_diff(&uu, &eye);
    let unit_err = max_abs_diff(&dagger(u).dot(u), &eye);
    if self_inv_err > 1e-10 || unit_err > 1e-10 {
        return Err(AssemblerError::NotSelfInverse(self_inv_err.max(unit_err)));
    }
    let det = u[[0, 0]] * u[[1, 1]] - u[[0, 1]] * u[[1, 0]];
    if (det.re + 1.0).abs() > 1e-8 || det.im.abs() > 1e-8 {
        return Err(AssemblerError::WrongDeterminant(det.re));
    }
    // U = x sigma_x + y sigma_y + z sigma_z (a pure quaternion):
    // x = Re U10, y = Im U10, z = Re U00
    let x = u[[1, 0]].re;
    let y = u[[1, 0]].im;
    let z = u[[0, 0]].re;
    // Rotate the x-axis onto (x, y, z): a rotation by angle theta about the
    // unit axis w = x_hat cross v / |..| realizes V = exp(-i theta w.sigma / 2).
    let (vx, vy, vz) = (x, y, z);
    let dot = vx; // x_hat . v
    let theta = dot.clamp(-1.0, 1.0).acos();
    let (wx, wy, wz) = (0.0, vz, -vy); // x_hat cross v... axis = x_hat x v normalized
    let norm = (wy * wy + wz * wz).sqrt();
    let v: CMat = if norm < 1e-12 {
        if dot > 0.0 {
            ndarray::Array2::eye(2)
        } else {
            // v = -x_hat: rotate by pi about z
            array![
                [c64::new(0.0, -1.0), c64::new(0.0, 0.0)],
                [c64::new(0.0, 0.0), c64::new(0.0, 1.0)],
            ]
        }
    } else {
        let (ax, ay, az) = (wx / norm, wy / norm, wz / norm);
        let (s, c) = (theta / 2.0).sin_cos();
        // exp(-i theta/2 (a . sigma)) = cos 1 - i sin (a . sigma)
        array![
            [
                c64::new(c, -s * az),
                c64::new(-s * ay, -s * ax)
            ],
            [
                c64::new(s * ay, -s * ax),
                c64::new(c, s * az)
            ],
        ]
    };
    // verify the construction
    let sx = array![
        [c64::new(0.0, 0.0), c64::new(1.0, 0.0)],
        [c64::new(1.0, 0.0), c64::new(0.0, 0.0)],
    ];
    let rebuilt = v.dot(&sx).dot(&dagger(&v));
    let err = max_abs_diff(&rebuilt, u);
    if err > 1e-10 {
        return Err(AssemblerError::PlanConstraintViolated(format!(
            "similarity residual {err:.3e} exceeds 1e-10"
        )));
    }
    Ok(v)
}

/// Duration bound for a multiply-controlled general unitary on n qubits.
#[derive(Debug, Clone)]
pub struct ControlledUBound {
    pub n: u32,
    pub class: UClass,
    pub cnnot_duration: f64,
    pub local_duration: f64,
    pub total: f64,
    pub plan: BackbonePlan,
}

/// Bound the controlled-U time by the backbone C^{n-2}NOT realization:
/// self-inverse non-special U costs one C^{n-2}NOT plus V and V^dagger;
/// generic SU(2) costs two C^{n-2}NOTs plus three local gates.
pub fn bound_controlled_u(
    n: u32,
    class: UClass,
    lib: &BlockLibrary,
    cm: &CostModel,
) -> Result<ControlledUBound, AssemblerError> {
    let plan = plan_backbone(n);
    let cnnot = plan.duration(lib)?;
    let local = match cm.local_policy {
        LocalPolicy::FastLocal => 0.0,
        LocalPolicy::TimedLocal { duration } => duration,
    };
    let (cn, locals) = match class {
        UClass::SelfInverseNonSpecial => (1.0, 2.0),
        UClass::GenericSu2 => (2.0, 3.0),
    };
    Ok(ControlledUBound {
        n,
        class,
        cnnot_duration: cnnot,
        local_duration: locals * local,
        total: cn * cnnot + locals * local,
        plan,
    })
}
