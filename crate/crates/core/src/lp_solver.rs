//! Exact dense-tableau simplex for `max c·x  s.t.  A x <= b, x >= 0`.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. When some `b_i < 0` a phase-one problem with artificial variables
//! finds a feasible basis first. Optimal dual values are read off the reduced
//! costs of the slack columns.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational_geometry::{dot, serde_rational, zero_vec, RatMatrix, RatVector, Rational};

/// Linear program `max c·x  s.t.  A x <= b, x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub c: RatVector,
    pub a: RatMatrix,
    pub b: RatVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Outcome of [`solve`].
///
/// `x` is present for optimal and unbounded problems (for the latter it is the
/// feasible point at which an improving ray was found). `y` is present exactly
/// when the status is optimal; `ray` exactly when it is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpResult {
    pub status: LpStatus,
    #[serde(with = "serde_rational::opt")]
    pub value: Option<Rational>,
    #[serde(with = "serde_rational::opt_vec")]
    pub x: Option<RatVector>,
    #[serde(with = "serde_rational::opt_vec")]
    pub y: Option<RatVector>,
    #[serde(with = "serde_rational::opt_vec")]
    pub ray: Option<RatVector>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("objective has length {found}, constraint matrix has {expected} columns")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("right-hand side has length {found}, constraint matrix has {expected} rows")]
    RhsLength { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("result is not optimal")]
    NotOptimal,
    #[error("primal vector violates constraint row {0}")]
    PrimalInfeasible(usize),
    #[error("primal vector has a negative entry at {0}")]
    PrimalNegative(usize),
    #[error("dual vector violates dual constraint for column {0}")]
    DualInfeasible(usize),
    #[error("dual vector has a negative entry at {0}")]
    DualNegative(usize),
    #[error("objective values differ: primal {primal}, dual {dual}")]
    DualityGap { primal: String, dual: String },
    #[error("reported value does not match c·x")]
    ValueMismatch,
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<RatVector>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: RatVector,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        for v in self.rows[p].iter_mut() {
            *v /= &piv;
        }
        let prow = self.rows[p].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[q].is_zero() {
            let f = self.obj[q].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[p] = q;
    }

    /// Sets the reduced-cost row for the objective `cost` (one entry per column).
    fn set_objective(&mut self, cost: &[Rational]) {
        let w = self.width();
        let mut obj: RatVector = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=w {
                obj[j] -= cb * &row[j];
            }
        }
        self.obj = obj;
    }

    /// Runs Bland's-rule simplex. Returns `Err(column)` if the column proves unboundedness.
    fn optimize(&mut self) -> Result<(), usize> {
        let w = self.width();
        loop {
            let Some(q) = (0..w).find(|&j| self.allowed[j] && self.obj[j].is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[w] / &row[q];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return Err(q),
            }
        }
    }

    fn basic_values(&self, nvars: usize) -> RatVector {
        let w = self.width();
        let mut x = zero_vec(nvars);
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if bv < nvars {
                x[bv] = row[w].clone();
            }
        }
        x
    }
}

/// Solves `max c·x  s.t.  A x <= b, x >= 0` exactly.
pub fn solve(p: &LpProblem) -> Result<LpResult, LpError> {
    let n = p.a.ncols();
    let m = p.a.nrows();
    if p.c.len() != n {
        return Err(LpError::ObjectiveLength { expected: n, found: p.c.len() });
    }
    if p.b.len() != m {
        return Err(LpError::RhsLength { expected: m, found: p.b.len() });
    }
    let negative: Vec<usize> = (0..m).filter(|&i| p.b[i].is_negative()).collect();
    let n_art = negative.len();
    let width = n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = zero_vec(width + 1);
        for j in 0..n {
            row[j] = p.a.get(i, j).clone();
        }
        row[n + i] = Rational::one();
        row[width] = p.b[i].clone();
        if let Some(k) = negative.iter().position(|&r| r == i) {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            row[n + m + k] = Rational::one();
            basis.push(n + m + k);
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: zero_vec(width + 1),
        basis,
        allowed: vec![true; width],
    };

    if n_art > 0 {
        let mut cost = zero_vec(width);
        for c in cost.iter_mut().skip(n + m) {
            *c = -Rational::one();
        }
        t.set_objective(&cost);
        t.optimize()
            .expect("phase-one objective is bounded above by zero");
        if !t.obj[width].is_zero() {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                value: None,
                x: None,
                y: None,
                ray: None,
            });
        }
        // Drive artificial variables that stayed basic at level zero out of the basis.
        for i in 0..m {
            if t.basis[i] >= n + m {
                let q = (0..n + m)
                    .find(|&j| !t.rows[i][j].is_zero())
                    .expect("[A | I] has full row rank");
                t.pivot(i, q);
            }
        }
        for j in (n + m)..width {
            t.allowed[j] = false;
        }
    }

    let mut cost = zero_vec(width);
    cost[..n].clone_from_slice(&p.c);
    t.set_objective(&cost);
    match t.optimize() {
        Ok(()) => {
            let x = t.basic_values(n);
            let y: RatVector = (0..m).map(|i| -t.obj[n + i].clone()).collect();
            let value = dot(&p.c, &x);
            Ok(LpResult {
                status: LpStatus::Optimal,
                value: Some(value),
                x: Some(x),
                y: Some(y),
                ray: None,
            })
        }
        Err(q) => {
            let x = t.basic_values(n);
            let mut ray = zero_vec(n);
            if q < n {
                ray[q] = Rational::one();
            }
            for (row, &bv) in t.rows.iter().zip(&t.basis) {
                if bv < n {
                    ray[bv] = -row[q].clone();
                }
            }
            Ok(LpResult {
                status: LpStatus::Unbounded,
                value: None,
                x: Some(x),
                y: None,
                ray: Some(ray),
            })
        }
    }
}

/// Checks primal feasibility, dual feasibility and equal objective values.
pub fn check_certificate(p: &LpProblem, r: &LpResult) -> Result<(), CertificateError> {
    if r.status != LpStatus::Optimal {
        return Err(CertificateError::NotOptimal);
    }
    let (Some(x), Some(y), Some(value)) = (&r.x, &r.y, &r.value) else {
        return Err(CertificateError::NotOptimal);
    };
    if let Some(j) = x.iter().position(|v| v.is_negative()) {
        return Err(CertificateError::PrimalNegative(j));
    }
    for i in 0..p.a.nrows() {
        if dot(p.a.row(i), x) > p.b[i] {
            return Err(CertificateError::PrimalInfeasible(i));
        }
    }
    if let Some(i) = y.iter().position(|v| v.is_negative()) {
        return Err(CertificateError::DualNegative(i));
    }
    let at = p.a.transpose();
    for j in 0..p.a.ncols() {
        if dot(at.row(j), y) < p.c[j] {
            return Err(CertificateError::DualInfeasible(j));
        }
    }
    let primal = dot(&p.c, x);
    let dual = dot(&p.b, y);
    if primal != dual {
        return Err(CertificateError::DualityGap {
            primal: primal.to_string(),
            dual: dual.to_string(),
        });
    }
    if *value != primal {
        return Err(CertificateError::ValueMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_geometry::{frac, rat, rat_vec};

    fn lp(c: &[i64], a: &[Vec<i64>], b: &[i64]) -> LpProblem {
        LpProblem {
            c: rat_vec(c),
            a: RatMatrix::from_int_rows(c.len(), a).unwrap(),
            b: rat_vec(b),
        }
    }

    #[test]
    fn textbook_optimum_with_duals() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18.
        let p = lp(&[3, 5], &[vec![1, 0], vec![0, 2], vec![3, 2]], &[4, 12, 18]);
        let r = solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(rat(36)));
        assert_eq!(r.x, Some(rat_vec(&[2, 6])));
        assert_eq!(r.y, Some(vec![rat(0), frac(3, 2), rat(1)]));
        check_certificate(&p, &r).unwrap();
    }

    #[test]
    fn unbounded_problem_reports_a_ray() {
        let p = lp(&[1, 1], &[vec![1, -1]], &[1]);
        let r = solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let ray = r.ray.unwrap();
        assert!(dot(&p.c, &ray).is_positive());
        assert!(!dot(p.a.row(0), &ray).is_positive());
    }

    #[test]
    fn phase_one_detects_infeasibility() {
        // x <= 1 and -x <= -2.
        let p = lp(&[1], &[vec![1], vec![-1]], &[1, -2]);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn phase_one_finds_a_start_when_origin_is_infeasible() {
        // max -x - y with x + y >= 2.
        let p = lp(&[-1, -1], &[vec![-1, -1]], &[-2]);
        let r = solve(&p).unwrap();
        assert_eq!(r.value, Some(rat(-2)));
        check_certificate(&p, &r).unwrap();
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example, rescaled to integers.
        let p = lp(
            &[3, -80, 2, -24],
            &[vec![1, -32, -4, 36], vec![1, -24, -1, 6], vec![0, 0, 1, 0]],
            &[0, 0, 1],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        check_certificate(&p, &r).unwrap();
    }

    #[test]
    fn shape_errors() {
        let mut p = lp(&[1, 1], &[vec![1, 1]], &[1]);
        p.b.push(rat(1));
        assert!(matches!(solve(&p), Err(LpError::RhsLength { .. })));
        p.b.pop();
        p.c.pop();
        assert!(matches!(solve(&p), Err(LpError::ObjectiveLength { .. })));
    }

    #[test]
    fn certificate_rejects_tampering() {
        let p = lp(&[1], &[vec![1]], &[2]);
        let mut r = solve(&p).unwrap();
        check_certificate(&p, &r).unwrap();
        r.y = Some(vec![rat(2)]);
        assert!(matches!(check_certificate(&p, &r), Err(CertificateError::DualityGap { .. })));
    }
}
