//! Lower bounds on the number of m-qubit gates and time slots needed to
//! implement a generic n-qubit unitary on a linear architecture, via
//! parameter counting over unitary groups and their cosets.
//!
//! Counts grow like `4^n`, so everything is exact big-integer arithmetic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("invalid query: need 2 <= m <= n, got n={n}, m={m}")]
    InvalidQuery { n: u32, m: u32 },

    #[error("invalid overlap: need 1 <= mu <= m-1, got mu={mu}, m={m}")]
    InvalidOverlap { mu: u32, m: u32 },

    #[error("residue {residue} (n mod m) cannot be split with overlap mu={mu}")]
    NoValidOverheadSplit { residue: u32, mu: u32 },
}

/// Which Margolus-pattern variant a bound was computed with: block size
/// divides n exactly, or one / two overhead groups of `mu` qubits remain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Exact,
    OneOverhead,
    TwoOverheads,
}

/// A bound query: target width `n`, block size `m`, and optionally a forced
/// overlap `mu` (otherwise the efficient default `m/2`, or `(m +- 1)/2` for
/// odd `m`, is chosen).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundQuery {
    pub n: u32,
    pub m: u32,
    pub mu: Option<u32>,
}

impl BoundQuery {
    pub fn new(n: u32, m: u32) -> Self {
        BoundQuery { n, m, mu: None }
    }

    pub fn with_mu(n: u32, m: u32, mu: u32) -> Self {
        BoundQuery { n, m, mu: Some(mu) }
    }

    fn validate(&self) -> Result<(), BoundsError> {
        if self.m < 2 || self.m > self.n {
            return Err(BoundsError::InvalidQuery { n: self.n, m: self.m });
        }
        if let Some(mu) = self.mu {
            if mu < 1 || mu >= self.m {
                return Err(BoundsError::InvalidOverlap { mu, m: self.m });
            }
        }
        Ok(())
    }
}

/// Computed bound with the parameters actually used. `fallback` marks
/// queries whose residue did not fit the efficient overlap so the nearest
/// valid split was used instead.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub g: BigUint,
    pub t: BigUint,
    pub variant: Variant,
    pub n: u32,
    pub m: u32,
    pub mu: u32,
    pub fallback: bool,
}

/// Coset chosen when counting parameters contributed by one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetVariant {
    /// full group SU(2^m): 4^m - 1 parameters
    Group,
    /// SU(2^m) / (SU(2^{m-mu}) (x) 1): 4^{m-mu} (4^mu - 1)
    OneSided,
    /// SU(2^m) / (SU(2^{m-mu}) (x) SU(2^mu)): (4^{m-mu} - 1)(4^mu - 1)
    TwoSided,
}

fn pow4(e: u32) -> BigUint {
    BigUint::one() << (2 * e as usize)
}

/// Number of real parameters in the group / coset describing one m-qubit
/// block overlapping `mu` qubits with its neighbours.
pub fn coset_param_count(m: u32, mu: u32, variant: CosetVariant) -> BigUint {
    match variant {
        CosetVariant::Group => pow4(m) - 1u32,
        CosetVariant::OneSided => pow4(m - mu) * (pow4(mu) - 1u32),
        CosetVariant::TwoSided => (pow4(m - mu) - 1u32) * (pow4(mu) - 1u32),
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

/// Denominator common to all bound formulas:
/// `4^m - 4^mu - 4^{m-mu} + 1 = (4^{m-mu} - 1)(4^mu - 1)`.
fn denom(m: u32, mu: u32) -> BigUint {
    coset_param_count(m, mu, CosetVariant::TwoSided)
}

struct RawBound {
    g: BigUint,
    t: BigUint,
}

fn bound_for(n: u32, m: u32, mu: u32, variant: Variant) -> RawBound {
    let q = BigUint::from(n / m); // floor(n/m); equals n/m exactly for Variant::Exact
    let d = denom(m, mu);
    let group = pow4(m) - 1u32;
    let numerator: BigUint = match variant {
        Variant::Exact => pow4(n) - 1u32 - &q * &group,
        Variant::OneOverhead => pow4(n) - pow4(m - mu) - &q * &group,
        Variant::TwoOverheads => pow4(n) + 1u32 - 2u32 * pow4(m - mu) - &q * &group,
    };
    let g = ceil_div(&numerator, &d) + &q;
    let t = if numerator.is_zero() {
        BigUint::one()
    } else {
        BigUint::one() + ceil_div(&numerator, &(&q * &d))
    };
    RawBound { g, t }
}

fn efficient_mus(m: u32) -> Vec<u32> {
    if m % 2 == 0 {
        vec![m / 2]
    } else {
        vec![(m - 1) / 2, (m + 1) / 2]
    }
}

/// Pick (variant, mu, fallback) for a query: exact split when `m | n`,
/// else the overhead variant whose residue matches an efficient `mu`
/// (two-overhead preferred), else the nearest valid split, flagged.
fn select_variant(n: u32, m: u32, forced_mu: Option<u32>) -> Result<Vec<(Variant, u32, bool)>, BoundsError> {
    let residue = n % m;
    if let Some(mu) = forced_mu {
        let variant = if residue == 0 {
            Variant::Exact
        } else if residue == 2 * mu {
            Variant::TwoOverheads
        } else if residue == mu {
            Variant::OneOverhead
        } else {
            return Err(BoundsError::NoValidOverheadSplit { residue, mu });
        };
        return Ok(vec![(variant, mu, false)]);
    }
    let mus = efficient_mus(m);
    if residue == 0 {
        return Ok(mus.into_iter().map(|mu| (Variant::Exact, mu, false)).collect());
    }
    let two: Vec<_> = mus
        .iter()
        .filter(|&&mu| residue == 2 * mu)
        .map(|&mu| (Variant::TwoOverheads, mu, false))
        .collect();
    if !two.is_empty() {
        return Ok(two);
    }
    let one: Vec<_> = mus
        .iter()
        .filter(|&&mu| residue == mu)
        .map(|&mu| (Variant::OneOverhead, mu, false))
        .collect();
    if !one.is_empty() {
        return Ok(one);
    }
    // fallback: nearest valid split to m/2, two-overhead preferred on ties
    let mut candidates: Vec<(Variant, u32)> = vec![(Variant::OneOverhead, residue)];
    if residue % 2 == 0 && residue / 2 >= 1 {
        candidates.push((Variant::TwoOverheads, residue / 2));
    }
    candidates.retain(|&(_, mu)| mu >= 1 && mu < m);
    let half = m as f64 / 2.0;
    candidates.sort_by(|a, b| {
        let da = (a.1 as f64 - half).abs();
        let db = (b.1 as f64 - half).abs();
        da.partial_cmp(&db)
            .unwrap()
            .then_with(|| match (a.0, b.0) {
                (Variant::TwoOverheads, Variant::OneOverhead) => std::cmp::Ordering::Less,
                (Variant::OneOverhead, Variant::TwoOverheads) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            })
    });
    match candidates.first() {
        Some(&(v, mu)) => Ok(vec![(v, mu, true)]),
        None => Err(BoundsError::NoValidOverheadSplit { residue, mu: 0 }),
    }
}

fn best_report(q: &BoundQuery, by_gates: bool) -> Result<ComplexityReport, BoundsError> {
    q.validate()?;
    let picks = select_variant(q.n, q.m, q.mu)?;
    let mut best: Option<ComplexityReport> = None;
    for (variant, mu, fallback) in picks {
        let raw = bound_for(q.n, q.m, mu, variant);
        let report = ComplexityReport {
            g: raw.g,
            t: raw.t,
            variant,
            n: q.n,
            m: q.m,
            mu,
            fallback,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                if by_gates {
                    report.g < b.g
                } else {
                    report.t < b.t
                }
            }
        };
        if better {
            best = Some(report);
        }
    }
    Ok(best.expect("at least one variant candidate"))
}

/// Lower bound on the number of m-qubit gates for a generic n-qubit unitary.
pub fn gate_bound(q: &BoundQuery) -> Result<ComplexityReport, BoundsError> {
    best_report(q, true)
}

/// Lower bound on the number of m-qubit time slots.
pub fn slot_bound(q: &BoundQuery) -> Result<ComplexityReport, BoundsError> {
    best_report(q, false)
}

/// Large-n limit coefficient: `g_m ~ 4^n / asymptotic_denominator(m)`.
pub fn asymptotic_denominator(m: u32) -> BigUint {
    let mu = if m % 2 == 0 { m / 2 } else { (m - 1) / 2 };
    denom(m, mu)
}

/// Large-n gate and slot speed-up ratios of m_large-blocks over
/// m_small-blocks: `(g_large/g_small, t_large/t_small)` in the limit.
pub fn asymptotic_speedup(m_small: u32, m_large: u32) -> (f64, f64) {
    let cs = asymptotic_denominator(m_small).to_f64().expect("fits f64");
    let cl = asymptotic_denominator(m_large).to_f64().expect("fits f64");
    let gate_ratio = cs / cl;
    let slot_ratio = (m_large as f64 * cs) / (m_small as f64 * cl);
    (gate_ratio, slot_ratio)
}

/// Leading decimal digits as `d.dd x 10^k`, for comparing against printed
/// table entries.
pub fn leading_digits(x: &BigUint, digits: usize) -> (String, usize) {
    let s = x.to_string();
    let exp = s.len() - 1;
    let mut lead = s[..digits.min(s.len())].to_string();
    // round using the next digit
    if s.len() > digits {
        let next = s.as_bytes()[digits] - b'0';
        if next >= 5 {
            let mut v: u64 = lead.parse().unwrap();
            v += 1;
            lead = v.to_string();
            if lead.len() > digits {
                lead.truncate(digits);
                return (lead, exp + 1);
            }
        }
    }
    (lead, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_counts_match_dimension_formulas() {
        assert_eq!(coset_param_count(2, 1, CosetVariant::Group), BigUint::from(15u32));
        assert_eq!(coset_param_count(2, 1, CosetVariant::OneSided), BigUint::from(12u32));
        assert_eq!(coset_param_count(2, 1, CosetVariant::TwoSided), BigUint::from(9u32));
    }

    #[test]
    fn single_block_when_n_equals_m() {
        let r = gate_bound(&BoundQuery::new(6, 6)).unwrap();
        assert_eq!(r.g, BigUint::one());
        assert_eq!(r.t, BigUint::one());
        assert_eq!(r.variant, Variant::Exact);
    }

    #[test]
    fn forced_mu_mismatch_errors() {
        let err = gate_bound(&BoundQuery::with_mu(7, 4, 1)).unwrap_err();
        assert!(matches!(err, BoundsError::NoValidOverheadSplit { residue: 3, mu: 1 }));
    }

    #[test]
    fn fallback_split_is_flagged() {
        // n mod m = 3 with m = 10: efficient mu = 5 fits neither variant;
        // nearest valid split is one overhead with mu = 3.
        let r = gate_bound(&BoundQuery::new(13, 10)).unwrap();
        assert!(r.fallback);
        assert_eq!(r.mu, 3);
        assert_eq!(r.variant, Variant::OneOverhead);
    }
}
