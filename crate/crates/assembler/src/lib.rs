//! Assembly of compound gates on a linear Ising chain from pre-compiled
//! multi-qubit instruction blocks: indirect SWAPs, quantum Fourier
//! transforms (two variants), multiply-controlled NOTs (expansion and
//! backbone schemes) and multiply-controlled general unitaries, with
//! closed-form duration / quality accounting and slope metrics.

pub mod cnnot;
pub mod controlled_u;
pub mod error;
pub mod metrics;
pub mod qft;
pub mod swap;

pub use cnnot::{
    assemble_cnnot_backbone, assemble_cnnot_basic, backbone_jordan_power, optimize_m3_split,
    plan_backbone, BackbonePlan, BasicPlan, RegressionConstants,
};
pub use controlled_u::{bound_controlled_u, decompose_self_inverse, ControlledUBound, UClass};
pub use error::AssemblerError;
pub use metrics::{slope_metrics, ingested_slopes, FamilySlopes, SlopeMetrics};
pub use qft::{
    assemble_qft, cooley_tukey_factors, truncated_cpswap_unitary, QftPlan, QftVariant,
    DEFAULT_TRUNCATION_THRESHOLD,
};
pub use swap::{assemble_swap, assemble_swap_odd_from_even, enumerate_swap_plans, SwapPlan};
