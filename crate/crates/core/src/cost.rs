use serde::{Deserialize, Serialize};

/// Timing policy for 1-qubit gates. `FastLocal` is the limit where local
/// unitaries are instantaneous next to coupling evolutions; `TimedLocal`
/// charges a fixed duration so assembly stays valid for slow local controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalPolicy {
    FastLocal,
    TimedLocal { duration: f64 },
}

/// Physical constants of the cost model. `j_zz` fixes the time unit (all
/// stored durations are multiples of `1/J_ZZ`); `t_r` is the uniform
/// relaxation time in the same unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub j_zz: f64,
    pub t_r: f64,
    pub local_policy: LocalPolicy,
}

impl CostModel {
    pub fn new(j_zz: f64, t_r: f64, local_policy: LocalPolicy) -> Self {
        CostModel { j_zz, t_r, local_policy }
    }
}

impl Default for CostModel {
    /// `1/T_R = 0.004 J_ZZ`, i.e. `T_R = 250` time units, fast local gates.
    fn default() -> Self {
        CostModel {
            j_zz: 1.0,
            t_r: 250.0,
            local_policy: LocalPolicy::FastLocal,
        }
    }
}

/// Fidelity, duration and the relaxation-weighted quality
/// `q = F * exp(-tau / T_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityFactor {
    pub fidelity: f64,
    pub duration: f64,
    pub quality: f64,
}

impl QualityFactor {
    pub fn new(fidelity: f64, duration: f64, t_r: f64) -> Self {
        QualityFactor {
            fidelity,
            duration,
            quality: fidelity * (-duration / t_r).exp(),
        }
    }
}
