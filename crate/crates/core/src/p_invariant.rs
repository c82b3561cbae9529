//! The invariant ℘ of a spherical skeleton and the gap to `|R^+ ∖ R^+_{S^p}|`.
//!
//! `℘(𝓡) = Σ_D (m_D - 1) + max Σ_D <ρ(D), ϑ>` over `ϑ ∈ cone(Σ)` with
//! `<ρ(D), ϑ> >= -m_D` for all `D ∈ Δ`. Writing `ϑ = Σ x_γ γ` gives the linear
//! program `max c·x, A x <= b, x >= 0` with `c_γ = Σ_D <ρ(D), γ>`,
//! `A_{D,γ} = -<ρ(D), γ>` and `b_D = m_D`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lp_solver::{self, LpProblem, LpResult, LpStatus};
use crate::rational_geometry::{format_rational, rat, serde_rational, RatMatrix, RatVector, Rational};
use crate::skeleton::{SkeletonError, SphericalSkeleton, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PError {
    #[error("invalid skeleton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSkeleton(Vec<Violation>),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

/// A value in `ℚ_{>=0} ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PValue {
    Finite(Rational),
    Infinite,
}

impl PValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            PValue::Finite(r) => Some(r),
            PValue::Infinite => None,
        }
    }
}

impl PartialOrd for PValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PValue::Finite(a), PValue::Finite(b)) => a.cmp(b),
            (PValue::Finite(_), PValue::Infinite) => Ordering::Less,
            (PValue::Infinite, PValue::Finite(_)) => Ordering::Greater,
            (PValue::Infinite, PValue::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Finite(r) => write!(f, "{}", format_rational(r)),
            PValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Result of [`compute_p`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PInvariantReport {
    pub p_value: PValue,
    pub bound: usize,
    /// `bound - ℘`, absent when ℘ is infinite.
    #[serde(with = "serde_rational::opt")]
    pub gap: Option<Rational>,
    /// Coordinates of an optimal `ϑ` over `Σ`.
    #[serde(with = "serde_rational::opt_vec")]
    pub theta: Option<RatVector>,
    /// Optimal dual values, one per divisor of `Δ` (colors first).
    #[serde(with = "serde_rational::opt_vec")]
    pub dual: Option<RatVector>,
    pub is_equality: bool,
}

/// The ℘ linear program of a skeleton and its constant offset `Σ_D (m_D - 1)`.
pub fn p_program(sk: &SphericalSkeleton) -> (LpProblem, Rational) {
    let r = sk.rank();
    let delta = sk.delta();
    let mut c = vec![Rational::zero(); r];
    let mut rows = Vec::with_capacity(delta.len());
    let mut b = Vec::with_capacity(delta.len());
    let mut offset = Rational::zero();
    for d in &delta {
        for (cj, &v) in c.iter_mut().zip(d.pairings) {
            *cj += rat(v);
        }
        rows.push(d.pairings.iter().map(|&v| rat(-v)).collect());
        b.push(rat(d.m));
        offset += rat(d.m - 1);
    }
    let a = RatMatrix::new(r, rows).expect("pairing rows have length |Σ|");
    (LpProblem { c, a, b }, offset)
}

/// Computes ℘ for a valid skeleton.
pub fn compute_p(sk: &SphericalSkeleton) -> Result<PInvariantReport, PError> {
    let violations = sk.validate();
    if !violations.is_empty() {
        return Err(PError::InvalidSkeleton(violations));
    }
    Ok(compute_p_unchecked(sk))
}

/// Computes ℘ without validating the skeleton first.
pub fn compute_p_unchecked(sk: &SphericalSkeleton) -> PInvariantReport {
    let (problem, offset) = p_program(sk);
    let result: LpResult = lp_solver::solve(&problem).expect("well-formed program");
    let bound = sk.root_system.parabolic_count(&sk.sp);
    match result.status {
        LpStatus::Optimal => {
            let value = offset + result.value.expect("optimal value");
            let gap = rat(bound as i64) - &value;
            PInvariantReport {
                is_equality: gap.is_zero(),
                p_value: PValue::Finite(value),
                bound,
                gap: Some(gap),
                theta: result.x,
                dual: result.y,
            }
        }
        LpStatus::Unbounded => PInvariantReport {
            p_value: PValue::Infinite,
            bound,
            gap: None,
            theta: None,
            dual: None,
            is_equality: false,
        },
        LpStatus::Infeasible => unreachable!("x = 0 is feasible since every m_D > 0"),
    }
}

/// One row of [`mukai_gap_table`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapRow {
    pub id: String,
    pub p_value: Option<PValue>,
    pub bound: Option<usize>,
    #[serde(with = "serde_rational::opt")]
    pub gap: Option<Rational>,
    pub is_equality: bool,
    pub error: Option<String>,
}

/// ℘, bound and gap for a batch of named skeletons, evaluated in parallel.
pub fn mukai_gap_table(sks: &[(String, SphericalSkeleton)]) -> Vec<GapRow> {
    sks.par_iter()
        .map(|(id, sk)| match compute_p(sk) {
            Ok(r) => GapRow {
                id: id.clone(),
                p_value: Some(r.p_value),
                bound: Some(r.bound),
                gap: r.gap,
                is_equality: r.is_equality,
                error: None,
            },
            Err(e) => GapRow {
                id: id.clone(),
                p_value: None,
                bound: None,
                gap: None,
                is_equality: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// Outcome of [`smoothness_test`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub localized_rank: usize,
    pub local_root_system: Vec<String>,
    pub report: PInvariantReport,
    pub smooth: bool,
}

/// Smoothness along the orbit with divisor set `I`: ℘ of the localization
/// equals its bound.
pub fn smoothness_test(
    sk: &SphericalSkeleton,
    subset: &BTreeSet<String>,
) -> Result<SmoothnessReport, PError> {
    let violations = sk.validate();
    if !violations.is_empty() {
        return Err(PError::InvalidSkeleton(violations));
    }
    let local = sk.localize(subset)?;
    let report = compute_p(&local)?;
    Ok(SmoothnessReport {
        localized_rank: local.rank(),
        local_root_system: local.root_system.names(),
        smooth: report.is_equality,
        report,
    })
}

/// True when `theta` is feasible for the ℘ program of `sk` (coordinates `>= 0`
/// and `<ρ(D), ϑ> >= -m_D`).
pub fn is_feasible_theta(sk: &SphericalSkeleton, theta: &[Rational]) -> bool {
    if theta.len() != sk.rank() || theta.iter().any(|x| x.is_negative()) {
        return false;
    }
    sk.delta().iter().all(|d| {
        let v: Rational = d.pairings.iter().zip(theta).map(|(&p, x)| rat(p) * x).sum();
        v >= rat(-d.m)
    })
}

/// `Σ_D (m_D - 1 + <ρ(D), ϑ>)`, the ℘ objective at `ϑ`.
pub fn objective_at(sk: &SphericalSkeleton, theta: &[Rational]) -> Rational {
    sk.delta()
        .iter()
        .map(|d| {
            let v: Rational = d.pairings.iter().zip(theta).map(|(&p, x)| rat(p) * x).sum();
            rat(d.m - 1) + v
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_solver::check_certificate;
    use crate::root_systems::RootSystem;
    use crate::skeleton::{AdaptedColor, GammaDivisor};
    use crate::spherical_roots::{PatternKind, SphericalRoot};

    fn example_35() -> SphericalSkeleton {
        let rs = RootSystem::parse("A1").unwrap();
        let alpha = SphericalRoot::new(&rs, PatternKind::Simple, vec![0]).unwrap();
        let adapted = vec![
            AdaptedColor { id: "D1".into(), pairings: vec![1] },
            AdaptedColor { id: "D2".into(), pairings: vec![1] },
        ];
        let gamma = vec![
            GammaDivisor { id: "D3".into(), pairings: vec![0] },
            GammaDivisor { id: "D4".into(), pairings: vec![-1] },
        ];
        SphericalSkeleton::from_system(rs, vec![alpha], BTreeSet::new(), adapted, gamma).unwrap()
    }

    #[test]
    fn example_value_and_certificate() {
        let sk = example_35();
        let r = compute_p(&sk).unwrap();
        assert_eq!(r.p_value, PValue::Finite(rat(1)));
        assert_eq!(r.bound, 1);
        assert!(r.is_equality);
        assert_eq!(r.theta, Some(vec![rat(1)]));
        let (problem, _) = p_program(&sk);
        let lp = lp_solver::solve(&problem).unwrap();
        check_certificate(&problem, &lp).unwrap();
    }

    #[test]
    fn missing_gamma_gives_infinity() {
        let mut sk = example_35();
        sk.gamma.clear();
        let r = compute_p(&sk).unwrap();
        assert_eq!(r.p_value, PValue::Infinite);
        assert_eq!(r.gap, None);
    }

    #[test]
    fn smoothness_of_the_example() {
        let sk = example_35();
        let i: BTreeSet<String> = ["D1", "D2", "D4"].iter().map(|s| s.to_string()).collect();
        assert!(smoothness_test(&sk, &i).unwrap().smooth);
        assert!(smoothness_test(&sk, &BTreeSet::new()).unwrap().smooth);
    }

    #[test]
    fn pvalue_order_puts_infinity_last() {
        assert!(PValue::Finite(rat(100)) < PValue::Infinite);
        assert_eq!(PValue::Infinite.to_string(), "inf");
    }
}
