//! Slope metrics of assembled-gate durations versus width: the slope
//! `Delta_m` of each m-block decomposition, the extrapolated
//! direct-compilation slope `Delta_inf`, and the derived ratios
//! `pi_cisc = Delta_2 / Delta_inf` (potential), `eta_m = Delta_inf / Delta_m`
//! (exploitation) and `xi_m = Delta_2 / Delta_m` (improvement).

use std::collections::BTreeMap;

use crate::error::AssemblerError;

/// Least-squares slope of tau versus n.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "need at least two points for a slope");
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[derive(Debug, Clone)]
pub struct SlopeMetrics {
    /// slope per block size m
    pub delta_m: BTreeMap<u32, f64>,
    pub delta_inf: f64,
    pub pi_cisc: f64,
    /// eta_m = delta_inf / delta_m
    pub eta_m: BTreeMap<u32, f64>,
    /// xi_m = delta_2 / delta_m
    pub xi_m: BTreeMap<u32, f64>,
}

/// Duration-vs-n data per block size, plus the extrapolated slope.
pub fn slope_metrics(
    durations: &BTreeMap<u32, Vec<(f64, f64)>>,
    delta_inf: f64,
) -> Result<SlopeMetrics, AssemblerError> {
    let mut delta_m = BTreeMap::new();
    for (&m, pts) in durations {
        if pts.len() < 2 {
            return Err(AssemblerError::PlanConstraintViolated(format!(
                "need at least two duration points for m = {m}"
            )));
        }
        delta_m.insert(m, fit_slope(pts));
    }
    let delta_2 = *delta_m
        .get(&2)
        .ok_or_else(|| AssemblerError::PlanConstraintViolated("metrics need the m = 2 family".into()))?;
    let pi_cisc = delta_2 / delta_inf;
    let mut eta_m = BTreeMap::new();
    let mut xi_m = BTreeMap::new();
    for (&m, &d) in &delta_m {
        eta_m.insert(m, delta_inf / d);
        xi_m.insert(m, delta_2 / d);
    }
    Ok(SlopeMetrics {
        delta_m,
        delta_inf,
        pi_cisc,
        eta_m,
        xi_m,
    })
}

/// Slopes of the ingested pre-compilation data, used to reproduce the
/// reported potential/exploitation table.
#[derive(Debug, Clone, Copy)]
pub struct FamilySlopes {
    /// standard two-qubit decomposition slope
    pub delta_2: f64,
    /// extrapolated direct-compilation slope
    pub delta_inf: f64,
}

/// Ingested extrapolation slopes per gate family. The SWAP family pairs
/// the exact `3 (n-1) / (2 J)` two-qubit slope with the extrapolated
/// direct-compilation line; the QFT family is normalized to its
/// extrapolated slope.
pub fn ingested_slopes(family: &str) -> Option<FamilySlopes> {
    match family {
        "swap" => Some(FamilySlopes {
            delta_2: 1.5,
            delta_inf: 1.5 / 2.16,
        }),
        "qft" => Some(FamilySlopes {
            delta_2: 2.27,
            delta_inf: 1.0,
        }),
        "cnnot" => Some(FamilySlopes {
            delta_2: 13.6 * 2.15,
            delta_inf: 2.15,
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_line_recovers_its_slope() {
        let pts: Vec<(f64, f64)> = (2..14).map(|n| (n as f64, 0.777 * n as f64 + 0.3)).collect();
        let slope = fit_slope(&pts);
        assert!((slope - 0.777).abs() < 1e-12);
    }

    #[test]
    fn xi_equals_eta_times_pi() {
        let mut durations = BTreeMap::new();
        durations.insert(2u32, (2..20).map(|n| (n as f64, 1.5 * n as f64)).collect::<Vec<_>>());
        durations.insert(8u32, (8..40).map(|n| (n as f64, 0.8 * n as f64 + 0.2)).collect::<Vec<_>>());
        let m = slope_metrics(&durations, 0.694).unwrap();
        for (&mm, &xi) in &m.xi_m {
            let eta = m.eta_m[&mm];
            assert!((xi - eta * m.pi_cisc).abs() < 1e-12, "m = {mm}");
        }
    }
}
