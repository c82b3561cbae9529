//! Spherical skeletons: a spherically closed spherical system together with a
//! finite set `Γ` of extra divisors whose pairing rows are nonpositive.
//!
//! The lattice `Λ` is spanned by `Σ`, and every divisor `D` is recorded by its
//! pairing row `(<ρ(D), γ>)_{γ ∈ Σ}` in the order of `sigma`. Simple roots are
//! 0-based in this API and 1-based in divisor ids (`D1+`, `D3`, ...).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational_geometry::{cone_contains, rank, rat_vec, unit_vec, RatVector};
use crate::root_systems::{support, RootError, RootSystem};
use crate::spherical_roots::{
    anticanonical_coefficient, is_compatible, PatternKind, SphericalRoot, SphericalRootError,
};

/// How a color arises from the Luna diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorKind {
    /// `D_α^+` for `α ∈ Σ ∩ S`.
    PairPlus(usize),
    /// `D_α^-` for `α ∈ Σ ∩ S`.
    PairMinus(usize),
    /// The color below `α` when `2α ∈ Σ`.
    Half(usize),
    /// A circle around one simple root, or joined circles around several.
    Around,
}

impl ColorKind {
    pub fn is_pair(&self) -> bool {
        matches!(self, ColorKind::PairPlus(_) | ColorKind::PairMinus(_))
    }
}

impl fmt::Display for ColorKind {
    /// Renders `pair_plus(k)`, `pair_minus(k)`, `half(k)` with 1-based `k`, or `around`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorKind::PairPlus(a) => write!(f, "pair_plus({})", a + 1),
            ColorKind::PairMinus(a) => write!(f, "pair_minus({})", a + 1),
            ColorKind::Half(a) => write!(f, "half({})", a + 1),
            ColorKind::Around => write!(f, "around"),
        }
    }
}

impl std::str::FromStr for ColorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "around" {
            return Ok(ColorKind::Around);
        }
        let (name, rest) = s.split_once('(').ok_or_else(|| format!("bad color kind {s:?}"))?;
        let k: usize = rest
            .strip_suffix(')')
            .and_then(|k| k.trim().parse().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| format!("bad color kind {s:?}"))?;
        match name {
            "pair_plus" => Ok(ColorKind::PairPlus(k - 1)),
            "pair_minus" => Ok(ColorKind::PairMinus(k - 1)),
            "half" => Ok(ColorKind::Half(k - 1)),
            _ => Err(format!("bad color kind {s:?}")),
        }
    }
}

/// A color: a `B`-stable prime divisor of the open orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Color {
    pub id: String,
    /// Simple roots `α` with `D ∈ 𝒟(α)`.
    pub moved_by: BTreeSet<usize>,
    pub kind: ColorKind,
    pub pairings: Vec<i64>,
    /// Coefficient in the anticanonical divisor.
    pub m: i64,
}

/// A `G`-stable prime divisor; its coefficient in `-K` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaDivisor {
    pub id: String,
    pub pairings: Vec<i64>,
}

/// An element of `𝒟^a` given only by its pairing row, used to build skeletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedColor {
    pub id: String,
    pub pairings: Vec<i64>,
}

/// One failed axiom, with a witness. Simple roots and spherical roots are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    DuplicateId { id: String },
    PairingLength { id: String, expected: usize, found: usize },
    SigmaDependent,
    Compatibility { gamma: usize },
    A1 { color: String, gamma: usize },
    A2 { alpha: usize },
    A3 { color: String },
    Sigma1 { alpha: usize, gamma: usize },
    Sigma2 { alpha: usize, beta: usize, gamma: usize },
    ColorStructure { alpha: usize, reason: String },
    ColorPairing { color: String, gamma: usize },
    ColorCoefficient { color: String, expected: i64, found: i64 },
    GammaSign { divisor: String, gamma: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateId { id } => write!(f, "duplicate divisor id {id}"),
            PairingLength { id, expected, found } => {
                write!(f, "{id}: pairing row has length {found}, expected {expected}")
            }
            SigmaDependent => write!(f, "spherical roots are linearly dependent"),
            Compatibility { gamma } => write!(f, "(S) γ{} is not compatible with S^p", gamma + 1),
            A1 { color, gamma } => write!(f, "(A1) {color} pairs wrongly with γ{}", gamma + 1),
            A2 { alpha } => write!(f, "(A2) 𝒟^a(α{}) is not a pair summing to α^∨", alpha + 1),
            A3 { color } => write!(f, "(A3) {color} is not moved by any α ∈ Σ ∩ S"),
            Sigma1 { alpha, gamma } => {
                write!(f, "(Σ1) <α{}^∨, γ{}> is odd or positive", alpha + 1, gamma + 1)
            }
            Sigma2 { alpha, beta, gamma } => write!(
                f,
                "(Σ2) α{}^∨ and α{}^∨ differ on γ{}",
                alpha + 1,
                beta + 1,
                gamma + 1
            ),
            ColorStructure { alpha, reason } => write!(f, "colors of α{}: {reason}", alpha + 1),
            ColorPairing { color, gamma } => {
                write!(f, "{color}: pairing with γ{} contradicts its kind", gamma + 1)
            }
            ColorCoefficient { color, expected, found } => {
                write!(f, "{color}: coefficient {found}, expected {expected}")
            }
            GammaSign { divisor, gamma } => {
                write!(f, "{divisor}: positive pairing with γ{}", gamma + 1)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("invalid skeleton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("divisor {0} is not in Δ")]
    SubsetNotInDelta(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    SphericalRoot(#[from] SphericalRootError),
}

/// A spherical skeleton `(Σ, S^p, 𝒟^a, Γ)` with its full color set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalSkeleton {
    pub root_system: RootSystem,
    pub sigma: Vec<SphericalRoot>,
    pub sp: BTreeSet<usize>,
    pub colors: Vec<Color>,
    pub gamma: Vec<GammaDivisor>,
}

/// Divisor in `Δ = 𝒟 ∪ Γ` as seen by the ℘ linear program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaEntry<'a> {
    pub id: &'a str,
    pub pairings: &'a [i64],
    pub m: i64,
    pub is_color: bool,
}

/// Id of the color around, below or above a simple root (1-based in the id).
pub fn color_id(kind: ColorKind, moved_by: &BTreeSet<usize>) -> String {
    let roots: Vec<String> = moved_by.iter().map(|a| (a + 1).to_string()).collect();
    match kind {
        ColorKind::PairPlus(a) => format!("D{}+", a + 1),
        ColorKind::PairMinus(a) => format!("D{}-", a + 1),
        _ => format!("D{}", roots.join(".")),
    }
}

impl SphericalSkeleton {
    /// Builds a skeleton from `(Σ, S^p, 𝒟^a, Γ)`, deriving the full color set,
    /// and rejects it unless it validates.
    pub fn from_system(
        root_system: RootSystem,
        sigma: Vec<SphericalRoot>,
        sp: BTreeSet<usize>,
        adapted: Vec<AdaptedColor>,
        gamma: Vec<GammaDivisor>,
    ) -> Result<Self, SkeletonError> {
        let colors = complete_colors(&root_system, &sigma, &sp, &adapted)?;
        let sk = SphericalSkeleton {
            root_system,
            sigma,
            sp,
            colors,
            gamma,
        };
        let v = sk.validate();
        if v.is_empty() {
            Ok(sk)
        } else {
            Err(SkeletonError::Invalid(v))
        }
    }

    /// The empty skeleton (trivial group, no spherical roots, no divisors).
    pub fn empty() -> Self {
        SphericalSkeleton {
            root_system: RootSystem::empty(),
            sigma: Vec::new(),
            sp: BTreeSet::new(),
            colors: Vec::new(),
            gamma: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Position in `Σ` of the spherical root with the given coefficients.
    pub fn sigma_position(&self, coeffs: &[i64]) -> Option<usize> {
        self.sigma.iter().position(|g| g.coeffs().as_slice() == coeffs)
    }

    /// Position of `α` in `Σ`, if `α ∈ Σ ∩ S`.
    pub fn simple_in_sigma(&self, alpha: usize) -> Option<usize> {
        self.sigma_position(&self.root_system.simple_root(alpha))
    }

    /// Position of `2α` in `Σ`, if present.
    pub fn double_in_sigma(&self, alpha: usize) -> Option<usize> {
        let d: Vec<i64> = self.root_system.simple_root(alpha).iter().map(|c| 2 * c).collect();
        self.sigma_position(&d)
    }

    /// `(<α^∨, γ>)_{γ ∈ Σ}`.
    pub fn coroot_row(&self, alpha: usize) -> Vec<i64> {
        coroot_row(&self.root_system, &self.sigma, alpha)
    }

    /// Colors in `𝒟^a`.
    pub fn adapted(&self) -> impl Iterator<Item = &Color> {
        self.colors.iter().filter(|c| c.kind.is_pair())
    }

    /// `Δ = 𝒟 ∪ Γ`, colors first.
    pub fn delta(&self) -> Vec<DeltaEntry<'_>> {
        let mut out: Vec<DeltaEntry<'_>> = self
            .colors
            .iter()
            .map(|c| DeltaEntry {
                id: &c.id,
                pairings: &c.pairings,
                m: c.m,
                is_color: true,
            })
            .collect();
        out.extend(self.gamma.iter().map(|g| DeltaEntry {
            id: &g.id,
            pairings: &g.pairings,
            m: 1,
            is_color: false,
        }));
        out
    }

    /// Checks every axiom and structural rule; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let rs = &self.root_system;
        let r = self.rank();

        let mut ids = BTreeSet::new();
        for d in self.delta() {
            if !ids.insert(d.id) {
                out.push(Violation::DuplicateId { id: d.id.to_string() });
            }
            if d.pairings.len() != r {
                out.push(Violation::PairingLength {
                    id: d.id.to_string(),
                    expected: r,
                    found: d.pairings.len(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }

        let vectors: Vec<RatVector> = self.sigma.iter().map(|g| rat_vec(g.coeffs())).collect();
        if rank(&vectors) != r {
            out.push(Violation::SigmaDependent);
        }
        for (j, g) in self.sigma.iter().enumerate() {
            if !is_compatible(rs, g, &self.sp) {
                out.push(Violation::Compatibility { gamma: j });
            }
        }

        // (A1), (A3) for every element of 𝒟^a.
        for d in self.adapted() {
            let mut in_some = false;
            for (j, &v) in d.pairings.iter().enumerate() {
                let simple = support(self.sigma[j].coeffs())
                    .into_iter()
                    .next()
                    .filter(|&a| self.simple_in_sigma(a) == Some(j));
                let allowed_one = simple.is_some_and(|a| d.moved_by.contains(&a));
                if v > 1 || (v == 1) != allowed_one {
                    out.push(Violation::A1 { color: d.id.clone(), gamma: j });
                }
                if v == 1 && simple.is_some() {
                    in_some = true;
                }
            }
            if !in_some {
                out.push(Violation::A3 { color: d.id.clone() });
            }
        }

        // (A2).
        for alpha in 0..rs.rank() {
            let Some(j) = self.simple_in_sigma(alpha) else { continue };
            let members: Vec<&Color> = self.adapted().filter(|d| d.pairings[j] == 1).collect();
            let ok = members.len() == 2 && {
                let sum: Vec<i64> = members[0]
                    .pairings
                    .iter()
                    .zip(&members[1].pairings)
                    .map(|(a, b)| a + b)
                    .collect();
                sum == self.coroot_row(alpha)
            };
            if !ok {
                out.push(Violation::A2 { alpha });
            }
        }

        // (Σ1).
        for alpha in 0..rs.rank() {
            let Some(jd) = self.double_in_sigma(alpha) else { continue };
            for (j, v) in self.coroot_row(alpha).into_iter().enumerate() {
                if v % 2 != 0 || (j != jd && v > 0) {
                    out.push(Violation::Sigma1 { alpha, gamma: j });
                }
            }
        }

        // (Σ2).
        for g in &self.sigma {
            if g.kind() != PatternKind::OrthogonalPair {
                continue;
            }
            let (a, b) = (g.embedding()[0], g.embedding()[1]);
            let (ra, rb) = (self.coroot_row(a), self.coroot_row(b));
            for j in 0..r {
                if ra[j] != rb[j] {
                    out.push(Violation::Sigma2 { alpha: a.min(b), beta: a.max(b), gamma: j });
                }
            }
        }

        out.extend(self.check_color_structure());

        for g in &self.gamma {
            for (j, &v) in g.pairings.iter().enumerate() {
                if v > 0 {
                    out.push(Violation::GammaSign { divisor: g.id.clone(), gamma: j });
                }
            }
        }
        out
    }

    /// Kinds, pairings and coefficients of the full color set.
    fn check_color_structure(&self) -> Vec<Violation> {
        let rs = &self.root_system;
        let mut out = Vec::new();
        for c in &self.colors {
            if c.moved_by.is_empty() {
                out.push(Violation::ColorStructure {
                    alpha: 0,
                    reason: format!("{} is moved by no simple root", c.id),
                });
            }
            for &a in &c.moved_by {
                if a >= rs.rank() {
                    out.push(Violation::ColorStructure {
                        alpha: a,
                        reason: format!("{} refers to a missing simple root", c.id),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for alpha in 0..rs.rank() {
            let moved: Vec<&Color> = self.colors.iter().filter(|c| c.moved_by.contains(&alpha)).collect();
            let structure = |reason: &str| Violation::ColorStructure {
                alpha,
                reason: reason.to_string(),
            };
            if self.sp.contains(&alpha) {
                if !moved.is_empty() {
                    out.push(structure("root of S^p moves a color"));
                }
                continue;
            }
            if self.simple_in_sigma(alpha).is_some() {
                if moved.len() != 2 || moved.iter().any(|c| !c.kind.is_pair()) {
                    out.push(structure("expected exactly two colors above and below"));
                }
                for c in moved {
                    if c.m != 1 {
                        out.push(Violation::ColorCoefficient { color: c.id.clone(), expected: 1, found: c.m });
                    }
                }
                continue;
            }
            let row = self.coroot_row(alpha);
            if self.double_in_sigma(alpha).is_some() {
                if moved.len() != 1 || moved[0].kind != ColorKind::Half(alpha) {
                    out.push(structure("expected exactly one color below"));
                    continue;
                }
                let c = moved[0];
                for (j, &v) in row.iter().enumerate() {
                    if 2 * c.pairings[j] != v {
                        out.push(Violation::ColorPairing { color: c.id.clone(), gamma: j });
                    }
                }
                if c.m != 1 {
                    out.push(Violation::ColorCoefficient { color: c.id.clone(), expected: 1, found: c.m });
                }
                continue;
            }
            if moved.len() != 1 || moved[0].kind != ColorKind::Around {
                out.push(structure("expected exactly one color around"));
                continue;
            }
            let c = moved[0];
            for (j, &v) in row.iter().enumerate() {
                if c.pairings[j] != v {
                    out.push(Violation::ColorPairing { color: c.id.clone(), gamma: j });
                }
            }
            let expected = anticanonical_coefficient(rs, &self.sp, alpha, &self.sigma);
            if c.m != expected {
                out.push(Violation::ColorCoefficient { color: c.id.clone(), expected, found: c.m });
            }
            // Circles around two roots are joined exactly when their sum is a spherical root.
            for &beta in &c.moved_by {
                if beta == alpha {
                    continue;
                }
                let mut sum = rs.simple_root(alpha);
                sum[beta] += 1;
                let joined = self
                    .sigma
                    .iter()
                    .any(|g| g.kind() == PatternKind::OrthogonalPair && *g.coeffs() == sum);
                if !joined {
                    out.push(structure("joined circles need α + β ∈ Σ"));
                }
            }
        }
        for g in &self.sigma {
            if g.kind() != PatternKind::OrthogonalPair {
                continue;
            }
            let (a, b) = (g.embedding()[0], g.embedding()[1]);
            let shared = self
                .colors
                .iter()
                .any(|c| c.kind == ColorKind::Around && c.moved_by.contains(&a) && c.moved_by.contains(&b));
            if !shared {
                out.push(Violation::ColorStructure {
                    alpha: a.min(b),
                    reason: "circles of an orthogonal pair in Σ must be joined".to_string(),
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// True when the pairing rows of `Δ` generate `Λ*_ℚ` as a cone.
    pub fn is_complete(&self) -> bool {
        let r = self.rank();
        let rows: Vec<RatVector> = self.delta().iter().map(|d| rat_vec(d.pairings)).collect();
        (0..r).all(|i| {
            let e = unit_vec(r, i);
            let minus: RatVector = e.iter().map(|x| -x).collect();
            cone_contains(&rows, &e) && cone_contains(&rows, &minus)
        })
    }

    /// Product skeleton; ids of `b` that collide with ids of `a` get a trailing `'`.
    pub fn product(a: &SphericalSkeleton, b: &SphericalSkeleton) -> SphericalSkeleton {
        let mut factors = a.root_system.factors().to_vec();
        factors.extend_from_slice(b.root_system.factors());
        let rs = RootSystem::new(factors);
        let na = a.root_system.rank();
        let n = rs.rank();
        let map_a: Vec<usize> = (0..na).collect();
        let map_b: Vec<usize> = (0..b.root_system.rank()).map(|i| i + na).collect();
        let mut sigma: Vec<SphericalRoot> = a.sigma.iter().map(|g| g.relabel(&map_a, n)).collect();
        sigma.extend(b.sigma.iter().map(|g| g.relabel(&map_b, n)));
        let sp: BTreeSet<usize> = a.sp.iter().copied().chain(b.sp.iter().map(|i| i + na)).collect();
        let (ra, rb) = (a.rank(), b.rank());
        let pad_a = |row: &[i64]| -> Vec<i64> { row.iter().copied().chain(std::iter::repeat(0).take(rb)).collect() };
        let pad_b = |row: &[i64]| -> Vec<i64> { std::iter::repeat(0).take(ra).chain(row.iter().copied()).collect() };
        let mut used: BTreeSet<String> = a.delta().iter().map(|d| d.id.to_string()).collect();
        let mut fresh = |id: &str| -> String {
            let mut id = id.to_string();
            while used.contains(&id) {
                id.push('\'');
            }
            used.insert(id.clone());
            id
        };
        let shift_kind = |k: ColorKind| match k {
            ColorKind::PairPlus(x) => ColorKind::PairPlus(x + na),
            ColorKind::PairMinus(x) => ColorKind::PairMinus(x + na),
            ColorKind::Half(x) => ColorKind::Half(x + na),
            ColorKind::Around => ColorKind::Around,
        };
        let mut colors: Vec<Color> = a
            .colors
            .iter()
            .map(|c| Color { pairings: pad_a(&c.pairings), ..c.clone() })
            .collect();
        colors.extend(b.colors.iter().map(|c| Color {
            id: fresh(&c.id),
            moved_by: c.moved_by.iter().map(|i| i + na).collect(),
            kind: shift_kind(c.kind),
            pairings: pad_b(&c.pairings),
            m: c.m,
        }));
        let mut gamma: Vec<GammaDivisor> = a
            .gamma
            .iter()
            .map(|g| GammaDivisor { id: g.id.clone(), pairings: pad_a(&g.pairings) })
            .collect();
        gamma.extend(b.gamma.iter().map(|g| GammaDivisor {
            id: fresh(&g.id),
            pairings: pad_b(&g.pairings),
        }));
        SphericalSkeleton { root_system: rs, sigma, sp, colors, gamma }
    }

    /// `[𝓡]`: drops `Γ`-divisors whose pairing row vanishes.
    pub fn normalize(&self) -> SphericalSkeleton {
        let mut sk = self.clone();
        sk.gamma.retain(|g| g.pairings.iter().any(|&v| v != 0));
        sk
    }

    /// `n_γ = -Σ_{D ∈ Γ} <ρ(D), γ>` for each `γ ∈ Σ`.
    pub fn gamma_weights(&self) -> Vec<i64> {
        (0..self.rank())
            .map(|j| -self.gamma.iter().map(|g| g.pairings[j]).sum::<i64>())
            .collect()
    }

    fn marked_gamma(&self, reduced: bool) -> Vec<GammaDivisor> {
        let r = self.rank();
        let mut out = Vec::new();
        for (j, n) in self.gamma_weights().into_iter().enumerate() {
            let copies = if reduced { n.min(1) } else { n };
            for c in 0..copies.max(0) {
                let mut row = vec![0; r];
                row[j] = -1;
                let id = if copies == 1 { format!("G{}", j + 1) } else { format!("G{}#{}", j + 1, c + 1) };
                out.push(GammaDivisor { id, pairings: row });
            }
        }
        out
    }

    /// `𝓡^el`: `Γ` replaced by `n_γ` copies of the divisor marking `γ`.
    pub fn elementary(&self) -> SphericalSkeleton {
        SphericalSkeleton { gamma: self.marked_gamma(false), ..self.clone() }
    }

    /// `𝓡^vel`: at most one marking divisor per `γ`.
    pub fn reduced_elementary(&self) -> SphericalSkeleton {
        SphericalSkeleton { gamma: self.marked_gamma(true), ..self.clone() }
    }

    /// Positions `γ` marked by the reduced elementary skeleton, `‖Γ‖`.
    pub fn marking(&self) -> BTreeSet<usize> {
        self.gamma_weights()
            .into_iter()
            .enumerate()
            .filter(|(_, n)| *n > 0)
            .map(|(j, _)| j)
            .collect()
    }

    /// Localization at a subset `I ⊆ Δ` of divisor ids.
    pub fn localize(&self, subset: &BTreeSet<String>) -> Result<SphericalSkeleton, SkeletonError> {
        let delta_ids: BTreeSet<&str> = self.delta().iter().map(|d| d.id).collect();
        if let Some(bad) = subset.iter().find(|id| !delta_ids.contains(id.as_str())) {
            return Err(SkeletonError::SubsetNotInDelta(bad.clone()));
        }
        let rs = &self.root_system;
        let s_i: BTreeSet<usize> = (0..rs.rank())
            .filter(|&a| {
                self.colors
                    .iter()
                    .filter(|c| c.moved_by.contains(&a))
                    .all(|c| subset.contains(&c.id))
            })
            .collect();
        let (sub, map) = rs.restrict(&s_i);
        let mut inverse = vec![usize::MAX; rs.rank()];
        for (new, &old) in map.iter().enumerate() {
            inverse[old] = new;
        }
        let kept: Vec<usize> = (0..self.rank())
            .filter(|&j| self.sigma[j].support().is_subset(&s_i))
            .collect();
        let sigma: Vec<SphericalRoot> = kept
            .iter()
            .map(|&j| self.sigma[j].relabel(&inverse, sub.rank()))
            .collect();
        let sp: BTreeSet<usize> = self.sp.iter().filter(|a| s_i.contains(a)).map(|&a| inverse[a]).collect();
        let restrict_row = |row: &[i64]| -> Vec<i64> { kept.iter().map(|&j| row[j]).collect() };
        let simple_kept: BTreeSet<usize> = kept
            .iter()
            .filter_map(|&j| {
                let supp = self.sigma[j].support();
                (self.sigma[j].kind() == PatternKind::Simple).then(|| *supp.iter().next().unwrap())
            })
            .collect();
        let adapted: Vec<AdaptedColor> = self
            .adapted()
            .filter(|d| d.moved_by.iter().any(|a| simple_kept.contains(a)))
            .map(|d| AdaptedColor { id: d.id.clone(), pairings: restrict_row(&d.pairings) })
            .collect();
        let mut colors = complete_colors(&sub, &sigma, &sp, &adapted)?;
        for c in colors.iter_mut() {
            if c.kind.is_pair() {
                continue;
            }
            let old_alpha = map[*c.moved_by.iter().next().expect("nonempty")];
            if let Some(orig) = self.colors.iter().find(|o| !o.kind.is_pair() && o.moved_by.contains(&old_alpha)) {
                c.id = orig.id.clone();
            }
        }
        let color_ids: BTreeSet<String> = colors.iter().map(|c| c.id.clone()).collect();
        let gamma: Vec<GammaDivisor> = self
            .delta()
            .iter()
            .filter(|d| subset.contains(d.id) && !color_ids.contains(d.id))
            .map(|d| GammaDivisor { id: d.id.to_string(), pairings: restrict_row(d.pairings) })
            .collect();
        Ok(SphericalSkeleton { root_system: sub, sigma, sp, colors, gamma })
    }

    /// Isomorphism: a diagram isomorphism carrying `Σ` and `S^p` across, with
    /// matching multisets of `𝒟^a` rows and of `Γ` rows.
    pub fn isomorphic(a: &SphericalSkeleton, b: &SphericalSkeleton) -> bool {
        if a.rank() != b.rank()
            || a.gamma.len() != b.gamma.len()
            || a.sp.len() != b.sp.len()
            || a.adapted().count() != b.adapted().count()
        {
            return false;
        }
        let mut found = false;
        a.root_system.for_each_isomorphism(&b.root_system, |phi| {
            if a.sp.iter().any(|&i| !b.sp.contains(&phi[i])) {
                return true;
            }
            let mut perm = Vec::with_capacity(a.rank());
            for g in &a.sigma {
                let mut image = vec![0; b.root_system.rank()];
                for (i, &c) in g.coeffs().iter().enumerate() {
                    image[phi[i]] = c;
                }
                match b.sigma_position(&image) {
                    Some(p) => perm.push(p),
                    None => return true,
                }
            }
            let carry = |row: &[i64]| -> Vec<i64> {
                let mut out = vec![0; row.len()];
                for (j, &v) in row.iter().enumerate() {
                    out[perm[j]] = v;
                }
                out
            };
            let ms = |rows: Vec<Vec<i64>>| -> BTreeMap<Vec<i64>, usize> {
                let mut m = BTreeMap::new();
                for r in rows {
                    *m.entry(r).or_insert(0) += 1;
                }
                m
            };
            let da = ms(a.adapted().map(|d| carry(&d.pairings)).collect());
            let db = ms(b.adapted().map(|d| d.pairings.clone()).collect());
            let ga = ms(a.gamma.iter().map(|g| carry(&g.pairings)).collect());
            let gb = ms(b.gamma.iter().map(|g| g.pairings.clone()).collect());
            if da == db && ga == gb {
                found = true;
                return false;
            }
            true
        });
        found
    }

    /// `a ∼ b`: isomorphic after normalization.
    pub fn equivalent(a: &SphericalSkeleton, b: &SphericalSkeleton) -> bool {
        Self::isomorphic(&a.normalize(), &b.normalize())
    }
}

fn coroot_row(rs: &RootSystem, sigma: &[SphericalRoot], alpha: usize) -> Vec<i64> {
    sigma.iter().map(|g| rs.coroot_pairing(alpha, g.coeffs())).collect()
}

/// Builds the full color set from `(Σ, S^p, 𝒟^a)` following the Luna diagram rules.
pub fn complete_colors(
    rs: &RootSystem,
    sigma: &[SphericalRoot],
    sp: &BTreeSet<usize>,
    adapted: &[AdaptedColor],
) -> Result<Vec<Color>, SkeletonError> {
    let position = |coeffs: &[i64]| sigma.iter().position(|g| g.coeffs().as_slice() == coeffs);
    let mut colors: Vec<Color> = Vec::new();
    let mut adapted_used = vec![false; adapted.len()];
    let mut violations = Vec::new();
    for alpha in 0..rs.rank() {
        if sp.contains(&alpha) {
            continue;
        }
        let simple = rs.simple_root(alpha);
        let double: Vec<i64> = simple.iter().map(|c| 2 * c).collect();
        let row = coroot_row(rs, sigma, alpha);
        if let Some(j) = position(&simple) {
            let mut count = 0;
            for (k, d) in adapted.iter().enumerate() {
                if d.pairings.get(j) != Some(&1) {
                    continue;
                }
                count += 1;
                if adapted_used[k] {
                    let c = colors.iter_mut().find(|c| c.id == d.id).expect("already placed");
                    c.moved_by.insert(alpha);
                } else {
                    adapted_used[k] = true;
                    let kind = if count == 1 { ColorKind::PairPlus(alpha) } else { ColorKind::PairMinus(alpha) };
                    colors.push(Color {
                        id: d.id.clone(),
                        moved_by: [alpha].into(),
                        kind,
                        pairings: d.pairings.clone(),
                        m: 1,
                    });
                }
            }
            if count != 2 {
                violations.push(Violation::A2 { alpha });
            }
        } else if let Some(jd) = position(&double) {
            let mut half = Vec::with_capacity(row.len());
            for (j, &v) in row.iter().enumerate() {
                if v % 2 != 0 || (j != jd && v > 0) {
                    violations.push(Violation::Sigma1 { alpha, gamma: j });
                }
                half.push(v / 2);
            }
            let moved: BTreeSet<usize> = [alpha].into();
            colors.push(Color {
                id: color_id(ColorKind::Half(alpha), &moved),
                moved_by: moved,
                kind: ColorKind::Half(alpha),
                pairings: half,
                m: 1,
            });
        } else {
            let partner = sigma.iter().find_map(|g| {
                (g.kind() == PatternKind::OrthogonalPair && g.embedding().contains(&alpha))
                    .then(|| g.embedding().iter().copied().find(|&b| b != alpha).unwrap())
            });
            if let Some(beta) = partner.filter(|&b| b < alpha) {
                if let Some(c) = colors
                    .iter_mut()
                    .find(|c| c.kind == ColorKind::Around && c.moved_by.contains(&beta))
                {
                    c.moved_by.insert(alpha);
                    c.id = color_id(ColorKind::Around, &c.moved_by);
                    continue;
                }
            }
            let moved: BTreeSet<usize> = [alpha].into();
            colors.push(Color {
                id: color_id(ColorKind::Around, &moved),
                moved_by: moved,
                kind: ColorKind::Around,
                pairings: row,
                m: anticanonical_coefficient(rs, sp, alpha, sigma),
            });
        }
    }
    for (k, d) in adapted.iter().enumerate() {
        if !adapted_used[k] {
            violations.push(Violation::A3 { color: d.id.clone() });
        }
    }
    if violations.is_empty() {
        Ok(colors)
    } else {
        Err(SkeletonError::Invalid(violations))
    }
}

/// Pair colors for `α ∈ Σ ∩ S` drawn with arrows from `D_α^+` to the listed
/// spherical roots: `D_α^+` pairs to 1 with `α`, to -1 with arrow targets and to 0
/// elsewhere, and `D_α^-` is the complement in `α^∨|_Λ`.
pub fn pair_colors(
    rs: &RootSystem,
    sigma: &[SphericalRoot],
    alpha: usize,
    arrows: &[usize],
) -> [AdaptedColor; 2] {
    let row = coroot_row(rs, sigma, alpha);
    let j = sigma
        .iter()
        .position(|g| *g.coeffs() == rs.simple_root(alpha))
        .expect("α must be a spherical root");
    let mut plus = vec![0; sigma.len()];
    plus[j] = 1;
    for &t in arrows {
        plus[t] = -1;
    }
    let minus: Vec<i64> = row.iter().zip(&plus).map(|(r, p)| r - p).collect();
    let moved: BTreeSet<usize> = [alpha].into();
    [
        AdaptedColor { id: color_id(ColorKind::PairPlus(alpha), &moved), pairings: plus },
        AdaptedColor { id: color_id(ColorKind::PairMinus(alpha), &moved), pairings: minus },
    ]
}

impl fmt::Display for SphericalSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.root_system.names();
        writeln!(f, "root system: {}", if names.is_empty() { "(none)".to_string() } else { names.join(" x ") })?;
        for (j, g) in self.sigma.iter().enumerate() {
            writeln!(f, "γ{} = {} {:?}", j + 1, g.kind(), g.coeffs())?;
        }
        let sp: Vec<String> = self.sp.iter().map(|a| format!("α{}", a + 1)).collect();
        writeln!(f, "S^p = {{{}}}", sp.join(", "))?;
        for c in &self.colors {
            writeln!(f, "color {} [{}] m={} ρ={:?}", c.id, c.kind, c.m, c.pairings)?;
        }
        for g in &self.gamma {
            writeln!(f, "Γ {} ρ={:?}", g.id, g.pairings)?;
        }
        Ok(())
    }
}
