//! Augmented data, `G/H`-reflexive polytopes and the invariants of the
//! associated Gorenstein spherical Fano embedding: supported vertices, curve
//! degrees, the pseudo-index bound `ε_X`, and the Mukai-type inequality.
//!
//! `M` and `N` are handled in a fixed basis: `sigma_in_m` gives each spherical
//! root in `M`-coordinates and `ρ'(D)` is given in the dual basis of `N`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lp_solver::{self, LpProblem, LpStatus};
use crate::p_invariant::{compute_p, PError, PValue};
use crate::rational_geometry::{
    cone_contains, dot, dot_int, dualize, format_vector, is_integral, lattice_gcd, rank, rat, rat_vec,
    scale, serde_rational, spans_positively, sub, vertex_enumerate, GeometryError, HPolytope, RatMatrix,
    RatVector, Rational, VPolytope,
};
use crate::skeleton::{ColorKind, SphericalSkeleton};
use crate::spherical_roots::PatternKind;

/// One divisor of `Δ` with its lift to `N` and its anticanonical coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedDivisor {
    pub id: String,
    pub rho_prime: Vec<i64>,
    pub m: i64,
}

/// A skeleton together with a lattice `M ⊇ Λ` and the lift `ρ'` of every divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedData {
    pub skeleton: SphericalSkeleton,
    pub lattice_rank: usize,
    /// Coordinates of each `γ ∈ Σ` in the basis of `M`, in the order of `Σ`.
    pub sigma_in_m: Vec<Vec<i64>>,
    /// Every divisor of `Δ`, colors and `Γ` alike.
    pub divisors: Vec<AugmentedDivisor>,
    /// `α^∨|_M` for each simple root, when known.
    pub coroots: Option<Vec<Vec<i64>>>,
}

/// A broken augmentation axiom or consistency rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
pub enum AugmentationViolation {
    VectorLength { what: String, expected: usize, found: usize },
    SigmaDependent,
    MissingDivisor { id: String },
    UnknownDivisor { id: String },
    DuplicateDivisor { id: String },
    Coefficient { id: String, expected: i64, found: i64 },
    Restriction { id: String, gamma: usize, expected: i64, found: i64 },
    PairSum { alpha: usize },
    HalfParity { alpha: usize },
    OrthogonalCoroots { alpha: usize, beta: usize },
    ParabolicCoroot { alpha: usize },
    ColorLift { id: String },
}

impl fmt::Display for AugmentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AugmentationViolation::*;
        match self {
            VectorLength { what, expected, found } => {
                write!(f, "{what}: expected {expected} coordinates, found {found}")
            }
            SigmaDependent => write!(f, "Σ is not linearly independent in M"),
            MissingDivisor { id } => write!(f, "divisor {id} of Δ has no lift"),
            UnknownDivisor { id } => write!(f, "lift given for unknown divisor {id}"),
            DuplicateDivisor { id } => write!(f, "divisor {id} listed twice"),
            Coefficient { id, expected, found } => {
                write!(f, "{id}: m = {found} but the skeleton requires {expected}")
            }
            Restriction { id, gamma, expected, found } => write!(
                f,
                "(a1) {id}: <ρ'(D), γ{}> = {found} but ρ(D) gives {expected}",
                gamma + 1
            ),
            PairSum { alpha } => write!(f, "(a2) ρ'(D+) + ρ'(D-) ≠ α{}^∨ on M", alpha + 1),
            HalfParity { alpha } => write!(f, "(σ1) <α{}^∨, M> is not contained in 2Z", alpha + 1),
            OrthogonalCoroots { alpha, beta } => {
                write!(f, "(σ2) α{}^∨ and α{}^∨ differ on M", alpha + 1, beta + 1)
            }
            ParabolicCoroot { alpha } => write!(f, "(s) α{}^∨ does not vanish on M", alpha + 1),
            ColorLift { id } => write!(f, "color {id}: ρ'(D) differs from the coroot rule"),
        }
    }
}

/// A failed condition of `G/H`-reflexivity, numbered as the four conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum ReflexiveViolation {
    /// (1) `u_D ∉ Q` for a color `D`.
    ColorOutside { id: String },
    /// (2) `0` is not an interior point of `Q`.
    OriginNotInterior,
    /// (3) a vertex of `Q` is neither some `u_D` of a color nor a lattice point of `𝒱`.
    ForeignVertex { vertex: String },
    /// (4) a supported vertex of `Q*` is not in `M`.
    NonLatticeSupported { vertex: String },
}

impl ReflexiveViolation {
    pub fn condition(&self) -> u8 {
        match self {
            ReflexiveViolation::ColorOutside { .. } => 1,
            ReflexiveViolation::OriginNotInterior => 2,
            ReflexiveViolation::ForeignVertex { .. } => 3,
            ReflexiveViolation::NonLatticeSupported { .. } => 4,
        }
    }
}

impl fmt::Display for ReflexiveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflexiveViolation::ColorOutside { id } => write!(f, "(1) u_{id} is not in Q"),
            ReflexiveViolation::OriginNotInterior => write!(f, "(2) 0 is not an interior point of Q"),
            ReflexiveViolation::ForeignVertex { vertex } => {
                write!(f, "(3) vertex {vertex} of Q is neither a color point nor a lattice point of the valuation cone")
            }
            ReflexiveViolation::NonLatticeSupported { vertex } => {
                write!(f, "(4) supported vertex {vertex} of Q* is not in M")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanoError {
    #[error("invalid augmentation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidAugmentation(Vec<AugmentationViolation>),
    #[error("not G/H-reflexive: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotReflexive(Vec<ReflexiveViolation>),
    #[error("Q* has no supported vertex")]
    NoSupportedVertices,
    #[error("not Q-factorial at the supported vertex {0}")]
    NotQFactorial(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    P(#[from] PError),
}

impl AugmentedData {
    /// `u_D = ρ'(D) / m_D` for each divisor, in the order of `divisors`.
    pub fn u(&self) -> Vec<RatVector> {
        self.divisors
            .iter()
            .map(|d| scale(&rat_vec(&d.rho_prime), &Rational::new(1.into(), d.m.into())))
            .collect()
    }

    fn sigma_rat(&self) -> Vec<RatVector> {
        self.sigma_in_m.iter().map(|g| rat_vec(g)).collect()
    }

    /// True when `u ∈ 𝒱`, that is `<u, γ> <= 0` for every `γ ∈ Σ`.
    pub fn in_valuation_cone(&self, u: &[Rational]) -> bool {
        self.sigma_in_m.iter().all(|g| !dot_int(u, g).is_positive())
    }

    fn is_color(&self, id: &str) -> bool {
        self.skeleton.colors.iter().any(|c| c.id == id)
    }

    /// Checks the lift against the skeleton and, when coroots are supplied,
    /// the augmentation axioms that involve them.
    pub fn validate(&self) -> Vec<AugmentationViolation> {
        use AugmentationViolation::*;
        let mut out = Vec::new();
        let n = self.lattice_rank;
        let sk = &self.skeleton;
        if self.sigma_in_m.len() != sk.rank() {
            out.push(VectorLength { what: "sigma_in_m".into(), expected: sk.rank(), found: self.sigma_in_m.len() });
            return out;
        }
        for (j, g) in self.sigma_in_m.iter().enumerate() {
            if g.len() != n {
                out.push(VectorLength { what: format!("γ{}", j + 1), expected: n, found: g.len() });
            }
        }
        for d in &self.divisors {
            if d.rho_prime.len() != n {
                out.push(VectorLength { what: format!("ρ'({})", d.id), expected: n, found: d.rho_prime.len() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        if rank(&self.sigma_rat()) != sk.rank() {
            out.push(SigmaDependent);
        }
        let mut seen = BTreeSet::new();
        for d in &self.divisors {
            if !seen.insert(d.id.as_str()) {
                out.push(DuplicateDivisor { id: d.id.clone() });
            }
        }
        let delta = sk.delta();
        for e in &delta {
            let Some(d) = self.divisors.iter().find(|d| d.id == e.id) else {
                out.push(MissingDivisor { id: e.id.to_string() });
                continue;
            };
            if d.m != e.m {
                out.push(Coefficient { id: d.id.clone(), expected: e.m, found: d.m });
            }
            for (j, g) in self.sigma_in_m.iter().enumerate() {
                let found: i64 = d.rho_prime.iter().zip(g).map(|(a, b)| a * b).sum();
                if found != e.pairings[j] {
                    out.push(Restriction { id: d.id.clone(), gamma: j, expected: e.pairings[j], found });
                }
            }
        }
        for d in &self.divisors {
            if !delta.iter().any(|e| e.id == d.id) {
                out.push(UnknownDivisor { id: d.id.clone() });
            }
        }
        if let Some(coroots) = &self.coroots {
            out.extend(self.validate_coroots(coroots));
        }
        out
    }

    fn validate_coroots(&self, coroots: &[Vec<i64>]) -> Vec<AugmentationViolation> {
        use AugmentationViolation::*;
        let mut out = Vec::new();
        let sk = &self.skeleton;
        let n = self.lattice_rank;
        let r = sk.root_system.rank();
        if coroots.len() != r {
            out.push(VectorLength { what: "coroots".into(), expected: r, found: coroots.len() });
            return out;
        }
        if let Some((i, c)) = coroots.iter().enumerate().find(|(_, c)| c.len() != n) {
            out.push(VectorLength { what: format!("α{}^∨", i + 1), expected: n, found: c.len() });
            return out;
        }
        let lift = |id: &str| self.divisors.iter().find(|d| d.id == id).map(|d| d.rho_prime.clone());
        for c in &sk.colors {
            let Some(rho) = lift(&c.id) else { continue };
            let alpha = *c.moved_by.iter().next().expect("colors are moved by a simple root");
            match c.kind {
                ColorKind::PairPlus(a) => {
                    let minus = sk
                        .colors
                        .iter()
                        .find(|o| o.kind == ColorKind::PairMinus(a) || (o.id != c.id && o.moved_by.contains(&a)));
                    if let Some(rm) = minus.and_then(|o| lift(&o.id)) {
                        let sum: Vec<i64> = rho.iter().zip(&rm).map(|(x, y)| x + y).collect();
                        if sum != coroots[a] {
                            out.push(PairSum { alpha: a });
                        }
                    }
                }
                ColorKind::PairMinus(_) => {}
                ColorKind::Half(a) => {
                    if coroots[a].iter().any(|x| x % 2 != 0) {
                        out.push(HalfParity { alpha: a });
                    } else if rho.iter().zip(&coroots[a]).any(|(x, y)| 2 * x != *y) {
                        out.push(ColorLift { id: c.id.clone() });
                    }
                }
                ColorKind::Around => {
                    if c.moved_by.iter().any(|&b| rho != coroots[b]) {
                        out.push(ColorLift { id: c.id.clone() });
                    }
                    let _ = alpha;
                }
            }
        }
        for g in &sk.sigma {
            if g.kind() == PatternKind::OrthogonalPair {
                let e = g.embedding();
                if coroots[e[0]] != coroots[e[1]] {
                    out.push(OrthogonalCoroots { alpha: e[0], beta: e[1] });
                }
            }
        }
        for &a in &sk.sp {
            if coroots[a].iter().any(|&x| x != 0) {
                out.push(ParabolicCoroot { alpha: a });
            }
        }
        out
    }

    /// `dim X = rank M + |R^+ ∖ R^+_{S^p}|`.
    pub fn dim(&self) -> usize {
        self.lattice_rank + self.skeleton.root_system.parabolic_count(&self.skeleton.sp)
    }

    /// `ρ_X = |Δ| - rank M`.
    pub fn picard(&self) -> i64 {
        self.divisors.len() as i64 - self.lattice_rank as i64
    }
}

/// A candidate `G/H`-reflexive polytope with its dual and supported vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoPolytope {
    pub aug: AugmentedData,
    pub q: VPolytope,
    /// `Q*` by inequalities, absent when `0` is not interior to `Q`.
    pub qstar_h: Option<HPolytope>,
    pub qstar: Option<VPolytope>,
    /// Indices into the vertices of `Q*`.
    pub supported: Vec<usize>,
}

impl FanoPolytope {
    /// Builds `Q` from the given points, or from `{u_D : D ∈ Δ}` when none are given.
    pub fn new(aug: AugmentedData, points: Option<Vec<RatVector>>) -> Result<Self, FanoError> {
        let violations = aug.validate();
        if !violations.is_empty() {
            return Err(FanoError::InvalidAugmentation(violations));
        }
        let n = aug.lattice_rank;
        let q = VPolytope::from_points(n, points.unwrap_or_else(|| aug.u()))?;
        let (qstar_h, qstar, supported) = if spans_positively(q.vertices(), n) {
            let h = dualize(&q)?;
            let v = vertex_enumerate(&h)?;
            let sigma = aug.sigma_rat();
            let supported = (0..v.vertices().len())
                .filter(|&i| is_supported(&h, &sigma, &v.vertices()[i]))
                .collect();
            (Some(h), Some(v), supported)
        } else {
            (None, None, Vec::new())
        };
        Ok(FanoPolytope { aug, q, qstar_h, qstar, supported })
    }

    pub fn supported_vertices(&self) -> Vec<RatVector> {
        match &self.qstar {
            Some(v) => self.supported.iter().map(|&i| v.vertices()[i].clone()).collect(),
            None => Vec::new(),
        }
    }

    /// The four reflexivity conditions, each checked exactly.
    pub fn validate_reflexive(&self) -> Vec<ReflexiveViolation> {
        let mut out = Vec::new();
        let u = self.aug.u();
        let mut color_points = Vec::new();
        for (d, ud) in self.aug.divisors.iter().zip(&u) {
            if self.aug.is_color(&d.id) {
                color_points.push(ud.clone());
                if !self.q.contains(ud) {
                    out.push(ReflexiveViolation::ColorOutside { id: d.id.clone() });
                }
            }
        }
        if self.qstar_h.is_none() {
            out.push(ReflexiveViolation::OriginNotInterior);
        }
        for v in self.q.vertices() {
            let ok = color_points.contains(v) || (is_integral(v) && self.aug.in_valuation_cone(v));
            if !ok {
                out.push(ReflexiveViolation::ForeignVertex { vertex: format_vector(v) });
            }
        }
        for v in self.supported_vertices() {
            if !is_integral(&v) {
                out.push(ReflexiveViolation::NonLatticeSupported { vertex: format_vector(&v) });
            }
        }
        out
    }

    /// Indices of the divisors `D` whose `u_D` lies on the face of `Q` dual to `v`.
    fn dual_face_divisors(&self, v: &[Rational]) -> Vec<usize> {
        let minus_one = -Rational::one();
        self.aug.u().iter().enumerate().filter(|(_, u)| dot(u, v) == minus_one).map(|(i, _)| i).collect()
    }

    /// Curve degrees, `ι_X` as the minimum over both curve families, and `ε_X`.
    pub fn curve_degrees(&self) -> Result<CurveDegreeReport, FanoError> {
        let supported = self.supported_vertices();
        if supported.is_empty() {
            return Err(FanoError::NoSupportedVertices);
        }
        let u = self.aug.u();
        let minus_one = -Rational::one();
        let mut dv_curves = Vec::new();
        let mut epsilon: Option<Rational> = None;
        for (d, ud) in self.aug.divisors.iter().zip(&u) {
            for v in &supported {
                let pairing = dot(ud, v);
                if pairing == minus_one {
                    continue;
                }
                let value = rat(d.m) * (Rational::one() + &pairing);
                if epsilon.as_ref().is_none_or(|e| &value < e) {
                    epsilon = Some(value.clone());
                }
                if self.aug.is_color(&d.id) {
                    dv_curves.push(DvCurve { divisor: d.id.clone(), vertex: v.clone(), degree: value });
                }
            }
        }
        let h = self.qstar_h.as_ref().expect("supported vertices exist only with Q*");
        let mut edge_curves = Vec::new();
        for (i, v) in supported.iter().enumerate() {
            for w in &supported[i + 1..] {
                if !is_edge(h, v, w) {
                    continue;
                }
                let diff = sub(v, w);
                let t = Rational::from_integer(lattice_gcd(&diff));
                let chi = scale(&diff, &(Rational::one() / &t));
                edge_curves.push(EdgeCurve { from: v.clone(), to: w.clone(), chi, degree: t });
            }
        }
        let iota = dv_curves
            .iter()
            .map(|c| c.degree.clone())
            .chain(edge_curves.iter().map(|c| c.degree.clone()))
            .min();
        Ok(CurveDegreeReport {
            supported,
            dv_curves,
            edge_curves,
            iota,
            epsilon,
            picard: self.aug.picard(),
            dim: self.aug.dim(),
            lattice_rank: self.aug.lattice_rank,
        })
    }

    /// Q-factoriality: the dual face of each supported vertex has exactly
    /// `rank M` vertices, each coming from a single divisor.
    pub fn is_q_factorial(&self) -> Result<(), FanoError> {
        let u = self.aug.u();
        let minus_one = -Rational::one();
        for v in self.supported_vertices() {
            let face: Vec<&RatVector> = self.q.vertices().iter().filter(|q| dot(q, &v) == minus_one).collect();
            let shared = face.iter().any(|q| u.iter().filter(|ud| *ud == *q).count() > 1);
            if face.len() != self.aug.lattice_rank || shared {
                return Err(FanoError::NotQFactorial(format_vector(&v)));
            }
        }
        Ok(())
    }

    /// `Σ_D (m_D - 1 + <ρ'(D), ϑ>)`.
    pub fn anticanonical_sum(&self, theta: &[Rational]) -> Rational {
        self.aug
            .divisors
            .iter()
            .map(|d| rat(d.m - 1) + dot_int(theta, &d.rho_prime))
            .sum()
    }

    /// ℘ as the optimum of the anticanonical sum over `Q* ∩ cone(Σ)`.
    pub fn p_over_polytope(&self) -> PValue {
        let sigma = self.aug.sigma_rat();
        let r = sigma.len();
        let offset: Rational = self.aug.divisors.iter().map(|d| rat(d.m - 1)).sum();
        let c: RatVector = (0..r)
            .map(|j| self.aug.divisors.iter().map(|d| dot_int(&sigma[j], &d.rho_prime)).sum())
            .collect();
        let rows: Vec<RatVector> = self
            .q
            .vertices()
            .iter()
            .map(|u| sigma.iter().map(|g| -dot(u, g)).collect())
            .collect();
        let b = vec![Rational::one(); rows.len()];
        let problem = LpProblem { c, a: RatMatrix::new(r, rows).expect("rows of length |Σ|"), b };
        let result = lp_solver::solve(&problem).expect("well-formed program");
        match result.status {
            LpStatus::Optimal => PValue::Finite(offset + result.value.expect("optimal value")),
            _ => PValue::Infinite,
        }
    }

    /// Checks `ρ_X (ι_X - 1) <= dim X`, evaluates the anticanonical sum at the
    /// supported vertices and compares ℘ of the polytope with ℘ of the skeleton.
    pub fn mukai_check(&self) -> Result<MukaiReport, FanoError> {
        self.is_q_factorial()?;
        let curves = self.curve_degrees()?;
        let iota = curves.iota.clone().ok_or(FanoError::NoSupportedVertices)?;
        let picard = self.aug.picard();
        let dim = self.aug.dim();
        let lhs = rat(picard) * (&iota - Rational::one());
        let sigma = self.aug.sigma_rat();
        let bound = rat((dim - self.aug.lattice_rank) as i64);
        let vertex_values: Vec<VertexValue> = curves
            .supported
            .iter()
            .map(|v| {
                let value = self.anticanonical_sum(v);
                VertexValue {
                    vertex: v.clone(),
                    in_cone_sigma: cone_contains(&sigma, v),
                    below_bound: value <= bound,
                    value,
                }
            })
            .collect();
        let p_polytope = self.p_over_polytope();
        let p_skeleton = compute_p(&self.aug.skeleton)?.p_value;
        Ok(MukaiReport {
            picard,
            iota: iota.clone(),
            dim,
            lattice_rank: self.aug.lattice_rank,
            mukai_lhs: lhs.clone(),
            holds: lhs <= rat(dim as i64),
            hypothesis_met: vertex_values.iter().any(|v| v.below_bound),
            vertex_values,
            p_cross_check: p_polytope == p_skeleton,
            p_polytope,
            p_skeleton,
        })
    }

    /// Every color with `u_D ∉ 𝒱` has `u_D` among the vertices of `Q`.
    pub fn color_vertex_check(&self) -> bool {
        self.aug
            .divisors
            .iter()
            .zip(self.aug.u())
            .filter(|(d, u)| self.aug.is_color(&d.id) && !self.aug.in_valuation_cone(u))
            .all(|(_, u)| self.q.vertices().contains(&u))
    }

    /// `Σ_D (m_D + <ρ'(D), ϑ>) >= ε_X (|Δ| - rank M)` at the supported
    /// vertices and at the midpoints of pairs of them.
    pub fn epsilon_inequality_holds(&self, epsilon: &Rational) -> bool {
        let supported = self.supported_vertices();
        let rhs = epsilon * rat(self.aug.picard());
        let lhs = |t: &[Rational]| -> Rational {
            self.aug.divisors.iter().map(|d| rat(d.m) + dot_int(t, &d.rho_prime)).sum()
        };
        let half = Rational::new(1.into(), 2.into());
        let mut points = supported.clone();
        for (i, v) in supported.iter().enumerate() {
            for w in &supported[i + 1..] {
                points.push(v.iter().zip(w).map(|(a, b)| (a + b) * &half).collect());
            }
        }
        points.iter().all(|t| lhs(t) >= rhs)
    }

    /// Indices of divisors on the dual face of each supported vertex.
    pub fn dual_faces(&self) -> Vec<(RatVector, Vec<String>)> {
        self.supported_vertices()
            .into_iter()
            .map(|v| {
                let ids = self.dual_face_divisors(&v).into_iter().map(|i| self.aug.divisors[i].id.clone()).collect();
                (v, ids)
            })
            .collect()
    }
}

/// `v` is supported when `max{Σ λ : v + Σ λ_γ γ ∈ Q*, λ >= 0}` is `0`.
fn is_supported(h: &HPolytope, sigma: &[RatVector], v: &[Rational]) -> bool {
    if sigma.is_empty() {
        return true;
    }
    let rows: Vec<RatVector> = h
        .halfspaces()
        .iter()
        .map(|hs| sigma.iter().map(|g| -dot(&hs.normal, g)).collect())
        .collect();
    let b: RatVector = h.halfspaces().iter().map(|hs| dot(&hs.normal, v) - &hs.offset).collect();
    let problem = LpProblem {
        c: vec![Rational::one(); sigma.len()],
        a: RatMatrix::new(sigma.len(), rows).expect("rows of length |Σ|"),
        b,
    };
    let result = lp_solver::solve(&problem).expect("well-formed program");
    result.status == LpStatus::Optimal && result.value.is_some_and(|x| x.is_zero())
}

/// Two vertices span an edge when their common active constraints have rank `d - 1`.
fn is_edge(h: &HPolytope, v: &[Rational], w: &[Rational]) -> bool {
    let av: BTreeSet<usize> = h.active_set(v).into_iter().collect();
    let common: Vec<RatVector> = h
        .active_set(w)
        .into_iter()
        .filter(|i| av.contains(i))
        .map(|i| h.halfspaces()[i].normal.clone())
        .collect();
    rank(&common) + 1 == h.dim()
}

/// A curve `C_{D,v}` with `(-K_X · C) = m_D + <ρ'(D), v>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DvCurve {
    pub divisor: String,
    #[serde(with = "serde_rational::vec")]
    pub vertex: RatVector,
    #[serde(with = "serde_rational")]
    pub degree: Rational,
}

/// A curve along an edge of `Q*` between supported vertices, `v - w = t χ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCurve {
    #[serde(with = "serde_rational::vec")]
    pub from: RatVector,
    #[serde(with = "serde_rational::vec")]
    pub to: RatVector,
    #[serde(with = "serde_rational::vec")]
    pub chi: RatVector,
    #[serde(with = "serde_rational")]
    pub degree: Rational,
}

/// Curve degrees and the numbers derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveDegreeReport {
    #[serde(serialize_with = "serialize_points")]
    pub supported: Vec<RatVector>,
    pub dv_curves: Vec<DvCurve>,
    pub edge_curves: Vec<EdgeCurve>,
    /// Minimum degree over both curve families.
    #[serde(with = "serde_rational::opt")]
    pub iota: Option<Rational>,
    #[serde(with = "serde_rational::opt")]
    pub epsilon: Option<Rational>,
    pub picard: i64,
    pub dim: usize,
    pub lattice_rank: usize,
}

impl CurveDegreeReport {
    /// True when every listed degree is a positive integer.
    pub fn degrees_are_positive_integers(&self) -> bool {
        self.dv_curves
            .iter()
            .map(|c| &c.degree)
            .chain(self.edge_curves.iter().map(|c| &c.degree))
            .all(|d| d.is_integer() && d.is_positive())
    }
}

/// The anticanonical sum at a supported vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexValue {
    #[serde(with = "serde_rational::vec")]
    pub vertex: RatVector,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub in_cone_sigma: bool,
    /// `value <= dim X - rank X`.
    pub below_bound: bool,
}

/// Outcome of [`FanoPolytope::mukai_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MukaiReport {
    pub picard: i64,
    #[serde(with = "serde_rational")]
    pub iota: Rational,
    pub dim: usize,
    pub lattice_rank: usize,
    #[serde(with = "serde_rational")]
    pub mukai_lhs: Rational,
    /// `ρ_X (ι_X - 1) <= dim X`.
    pub holds: bool,
    /// Some supported vertex has anticanonical sum at most `dim X - rank X`.
    pub hypothesis_met: bool,
    pub vertex_values: Vec<VertexValue>,
    pub p_polytope: PValue,
    pub p_skeleton: PValue,
    pub p_cross_check: bool,
}

fn serialize_points<S: serde::Serializer>(points: &[RatVector], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        let v: Vec<String> = p.iter().map(crate::rational_geometry::format_rational).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}
