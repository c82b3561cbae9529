//! Spherical roots of reduced root systems and the compatibility rules with `S^p`.
//!
//! A spherical root is one of fourteen patterns laid on a sub-diagram of the
//! ambient Dynkin diagram. Each pattern has a support type, a coefficient vector
//! over its support and a set of support roots that must lie in `S^p`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::root_systems::{support, Root, RootSystem, SimpleType, TypeLetter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SphericalRootError {
    #[error("unknown spherical root pattern {0:?}")]
    UnknownPattern(String),
    #[error("pattern {pattern} does not fit on simple roots {embedding:?}")]
    BadEmbedding { pattern: String, embedding: Vec<usize> },
    #[error("coefficients {coeffs:?} do not match pattern {pattern}")]
    CoefficientMismatch { pattern: String, coeffs: Vec<i64> },
}

/// The shape of a spherical root. Chain patterns carry their support size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternKind {
    /// `α`
    Simple,
    /// `2α`
    Double,
    /// `α + α'` with `α ⟂ α'`
    OrthogonalPair,
    /// `α_1 + ... + α_n` on `A_n`, `n >= 2`
    AChain(usize),
    /// `α_1 + 2α_2 + α_3` on `A_3`
    AThree,
    /// `α_1 + ... + α_n` on `B_n`, `n >= 2`
    BChain(usize),
    /// `2α_1 + ... + 2α_n` on `B_n`, `n >= 2`
    DoubledBChain(usize),
    /// `α_1 + 2α_2 + 3α_3` on `B_3`
    BThree,
    /// `α_1 + 2α_2 + ... + 2α_{n-1} + α_n` on `C_n` with `α_1 ∉ S^p`
    CChain(usize),
    /// The same root on `C_n` with `α_1 ∈ S^p`
    CChainParabolic(usize),
    /// `2α_1 + ... + 2α_{n-2} + α_{n-1} + α_n` on `D_n`, `n >= 4`
    DChain(usize),
    /// `α_1 + 2α_2 + 3α_3 + 2α_4` on `F_4`
    FFour,
    /// `α_1 + α_2` on `G_2`
    GSum,
    /// `4α_1 + 2α_2` on `G_2`
    GDouble,
}

/// Pattern names used in documents, in a fixed order.
pub const PATTERN_NAMES: [&str; 14] = [
    "alpha",
    "2alpha",
    "alpha+alpha'",
    "a-chain",
    "a3",
    "b-chain",
    "2b-chain",
    "b3",
    "c-chain",
    "c-chain-p",
    "d-chain",
    "f4",
    "g2-sum",
    "g2-double",
];

impl PatternKind {
    /// Builds a pattern from its document name and support size.
    pub fn from_name(name: &str, size: usize) -> Result<Self, SphericalRootError> {
        use PatternKind::*;
        let kind = match name {
            "alpha" => Simple,
            "2alpha" => Double,
            "alpha+alpha'" => OrthogonalPair,
            "a-chain" => AChain(size),
            "a3" => AThree,
            "b-chain" => BChain(size),
            "2b-chain" => DoubledBChain(size),
            "b3" => BThree,
            "c-chain" => CChain(size),
            "c-chain-p" => CChainParabolic(size),
            "d-chain" => DChain(size),
            "f4" => FFour,
            "g2-sum" => GSum,
            "g2-double" => GDouble,
            _ => return Err(SphericalRootError::UnknownPattern(name.to_string())),
        };
        if kind.support_size() != size || kind.support_types().is_none() {
            return Err(SphericalRootError::UnknownPattern(format!("{name} on {size} roots")));
        }
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        use PatternKind::*;
        match self {
            Simple => "alpha",
            Double => "2alpha",
            OrthogonalPair => "alpha+alpha'",
            AChain(_) => "a-chain",
            AThree => "a3",
            BChain(_) => "b-chain",
            DoubledBChain(_) => "2b-chain",
            BThree => "b3",
            CChain(_) => "c-chain",
            CChainParabolic(_) => "c-chain-p",
            DChain(_) => "d-chain",
            FFour => "f4",
            GSum => "g2-sum",
            GDouble => "g2-double",
        }
    }

    pub fn support_size(&self) -> usize {
        use PatternKind::*;
        match *self {
            Simple | Double => 1,
            OrthogonalPair | GSum | GDouble => 2,
            AThree | BThree => 3,
            FFour => 4,
            AChain(n) | BChain(n) | DoubledBChain(n) | CChain(n) | CChainParabolic(n)
            | DChain(n) => n,
        }
    }

    /// Simple factors of the support, or `None` for an out-of-range chain length.
    pub fn support_types(&self) -> Option<Vec<SimpleType>> {
        use PatternKind::*;
        use TypeLetter as L;
        let t = |l, n| SimpleType::new(l, n).ok();
        let one = |l, n| t(l, n).map(|s| vec![s]);
        match *self {
            Simple | Double => one(L::A, 1),
            OrthogonalPair => Some(vec![t(L::A, 1)?, t(L::A, 1)?]),
            AChain(n) if n >= 2 => one(L::A, n),
            AThree => one(L::A, 3),
            BChain(n) | DoubledBChain(n) if n >= 2 => one(L::B, n),
            BThree => one(L::B, 3),
            CChain(n) | CChainParabolic(n) if n >= 2 => one(L::C, n),
            DChain(n) if n >= 4 => one(L::D, n),
            FFour => one(L::F, 4),
            GSum | GDouble => one(L::G, 2),
            _ => None,
        }
    }

    /// Coefficients over the support, in the pattern's own numbering.
    pub fn coefficients(&self) -> Vec<i64> {
        use PatternKind::*;
        match *self {
            Simple => vec![1],
            Double => vec![2],
            OrthogonalPair => vec![1, 1],
            AChain(n) | BChain(n) => vec![1; n],
            AThree => vec![1, 2, 1],
            DoubledBChain(n) => vec![2; n],
            BThree => vec![1, 2, 3],
            CChain(n) | CChainParabolic(n) => {
                let mut v = vec![2; n];
                v[0] = 1;
                v[n - 1] = 1;
                v
            }
            DChain(n) => {
                let mut v = vec![2; n];
                v[n - 2] = 1;
                v[n - 1] = 1;
                v
            }
            FFour => vec![1, 2, 3, 2],
            GSum => vec![1, 1],
            GDouble => vec![4, 2],
        }
    }

    /// Support positions that must belong to `S^p`.
    pub fn parabolic_positions(&self) -> Vec<usize> {
        use PatternKind::*;
        match *self {
            Simple | Double | OrthogonalPair | GSum => vec![],
            AChain(n) | BChain(n) => (1..n - 1).collect(),
            AThree => vec![0, 2],
            DoubledBChain(n) | DChain(n) => (1..n).collect(),
            BThree => vec![0, 1],
            CChain(n) => (2..n).collect(),
            CChainParabolic(n) => std::iter::once(0).chain(2..n).collect(),
            FFour => vec![0, 1, 2],
            GDouble => vec![1],
        }
    }

    /// The distinguished colour of the pattern taken on its own support:
    /// the support position it is attached to, its pairing with the root and
    /// its coefficient in the anticanonical divisor.
    pub fn distinguished_color(&self) -> (usize, i64, i64) {
        use PatternKind::*;
        match *self {
            Simple => (0, 1, 1),
            Double => (0, 2, 1),
            OrthogonalPair => (0, 2, 2),
            AChain(n) => (0, 1, n as i64),
            AThree => (1, 2, 4),
            BChain(n) => (0, 1, n as i64),
            DoubledBChain(n) => (0, 2, 2 * n as i64 - 1),
            BThree => (2, 2, 6),
            CChain(n) => (1, 1, 2 * n as i64 - 2),
            CChainParabolic(n) => (1, 1, 2 * n as i64 - 1),
            DChain(n) => (0, 2, 2 * n as i64 - 2),
            FFour => (3, 1, 11),
            GSum => (1, 1, 2),
            GDouble => (0, 2, 5),
        }
    }

    /// Every pattern whose support has exactly `size` simple roots.
    pub fn all_of_size(size: usize) -> Vec<PatternKind> {
        use PatternKind::*;
        let all = [
            Simple,
            Double,
            OrthogonalPair,
            AChain(size),
            AThree,
            BChain(size),
            DoubledBChain(size),
            BThree,
            CChain(size),
            CChainParabolic(size),
            DChain(size),
            FFour,
            GSum,
            GDouble,
        ];
        all.into_iter()
            .filter(|k| k.support_size() == size && k.support_types().is_some())
            .collect()
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for PatternKind {
    type Err = SphericalRootError;

    /// Accepts `name` for fixed-size patterns or `name:n` for chains.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((name, n)) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| SphericalRootError::UnknownPattern(s.to_string()))?;
                PatternKind::from_name(name, n)
            }
            None => {
                let size = (1..=4)
                    .find(|&n| PatternKind::from_name(s, n).is_ok())
                    .ok_or_else(|| SphericalRootError::UnknownPattern(s.to_string()))?;
                PatternKind::from_name(s, size)
            }
        }
    }
}

/// A spherical root placed in an ambient root system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalRoot {
    kind: PatternKind,
    coeffs: Root,
    embedding: Vec<usize>,
}

impl SphericalRoot {
    /// Places `kind` on the simple roots `embedding` (pattern position `p` goes to `embedding[p]`).
    pub fn new(
        rs: &RootSystem,
        kind: PatternKind,
        embedding: Vec<usize>,
    ) -> Result<Self, SphericalRootError> {
        let bad = || SphericalRootError::BadEmbedding {
            pattern: kind.to_string(),
            embedding: embedding.clone(),
        };
        let types = kind.support_types().ok_or_else(bad)?;
        let pattern_rs = RootSystem::new(types);
        if embedding.len() != pattern_rs.rank() || embedding.iter().any(|&i| i >= rs.rank()) {
            return Err(bad());
        }
        let distinct: BTreeSet<usize> = embedding.iter().copied().collect();
        if distinct.len() != embedding.len() {
            return Err(bad());
        }
        for (a, &ea) in embedding.iter().enumerate() {
            for (b, &eb) in embedding.iter().enumerate() {
                if rs.pairing(ea, eb) != pattern_rs.pairing(a, b) {
                    return Err(bad());
                }
            }
        }
        let mut coeffs = vec![0; rs.rank()];
        for (c, &e) in kind.coefficients().iter().zip(&embedding) {
            coeffs[e] = *c;
        }
        Ok(SphericalRoot {
            kind,
            coeffs,
            embedding,
        })
    }

    /// Recovers the placement of `kind` from an ambient coefficient vector.
    pub fn from_coeffs(
        rs: &RootSystem,
        kind: PatternKind,
        coeffs: &[i64],
    ) -> Result<Self, SphericalRootError> {
        let mismatch = || SphericalRootError::CoefficientMismatch {
            pattern: kind.to_string(),
            coeffs: coeffs.to_vec(),
        };
        if coeffs.len() != rs.rank() {
            return Err(mismatch());
        }
        let supp: Vec<usize> = support(coeffs).into_iter().collect();
        if supp.len() != kind.support_size() {
            return Err(mismatch());
        }
        let target = kind.coefficients();
        let mut found = None;
        for_each_embedding(rs, kind, &supp, |emb| {
            if emb.iter().zip(&target).all(|(&e, &c)| coeffs[e] == c) {
                found = Some(emb.to_vec());
                false
            } else {
                true
            }
        });
        let embedding = found.ok_or_else(mismatch)?;
        SphericalRoot::new(rs, kind, embedding)
    }

    /// Parses a document entry: pattern name plus ambient coefficients.
    pub fn from_document(
        rs: &RootSystem,
        pattern: &str,
        coeffs: &[i64],
    ) -> Result<Self, SphericalRootError> {
        let size = support(coeffs).len();
        let kind = PatternKind::from_name(pattern, size)?;
        SphericalRoot::from_coeffs(rs, kind, coeffs)
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn coeffs(&self) -> &Root {
        &self.coeffs
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn support(&self) -> BTreeSet<usize> {
        support(&self.coeffs)
    }

    /// Ambient simple roots that the pattern requires to be in `S^p`.
    pub fn required_parabolic(&self) -> BTreeSet<usize> {
        self.kind()
            .parabolic_positions()
            .into_iter()
            .map(|p| self.embedding[p])
            .collect()
    }

    /// Moves the root along an index map (new index of old simple root `i` is `map[i]`).
    pub fn relabel(&self, map: &[usize], new_rank: usize) -> SphericalRoot {
        let mut coeffs = vec![0; new_rank];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                coeffs[map[i]] = c;
            }
        }
        SphericalRoot {
            kind: self.kind,
            coeffs,
            embedding: self.embedding.iter().map(|&e| map[e]).collect(),
        }
    }
}

/// Calls `f` on each placement of `kind` onto exactly the simple roots `onto`.
fn for_each_embedding<F: FnMut(&[usize]) -> bool>(
    rs: &RootSystem,
    kind: PatternKind,
    onto: &[usize],
    mut f: F,
) {
    let Some(types) = kind.support_types() else {
        return;
    };
    let prs = RootSystem::new(types);
    let n = prs.rank();
    if onto.len() != n {
        return;
    }
    fn rec<F: FnMut(&[usize]) -> bool>(
        rs: &RootSystem,
        prs: &RootSystem,
        onto: &[usize],
        emb: &mut Vec<usize>,
        f: &mut F,
    ) -> bool {
        let i = emb.len();
        if i == prs.rank() {
            return f(emb);
        }
        for &cand in onto {
            if emb.contains(&cand) {
                continue;
            }
            let ok = rs.pairing(cand, cand) == prs.pairing(i, i)
                && (0..i).all(|k| {
                    rs.pairing(cand, emb[k]) == prs.pairing(i, k)
                        && rs.pairing(emb[k], cand) == prs.pairing(k, i)
                });
            if !ok {
                continue;
            }
            emb.push(cand);
            let go = rec(rs, prs, onto, emb, f);
            emb.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(rs, &prs, onto, &mut Vec::new(), &mut f);
}

/// Every spherical root of `rs` (all patterns on all sub-diagrams), without duplicates.
pub fn all_spherical_roots(rs: &RootSystem) -> Vec<SphericalRoot> {
    let n = rs.rank();
    let mut out: Vec<SphericalRoot> = Vec::new();
    let mut seen = BTreeSet::new();
    for size in 1..=n.min(8) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            for kind in PatternKind::all_of_size(size) {
                let mut embs = Vec::new();
                for_each_embedding(rs, kind, &subset, |e| {
                    embs.push(e.to_vec());
                    true
                });
                for e in embs {
                    let r = SphericalRoot::new(rs, kind, e).expect("valid embedding");
                    if seen.insert((kind, r.coeffs.clone())) {
                        out.push(r);
                    }
                }
            }
            if !crate::rational_geometry::next_combination(&mut subset, n) {
                break;
            }
        }
    }
    out
}

/// Compatibility of a spherical root with `S^p`: the support meets `S^p` exactly
/// in the pattern's required roots, and every root of `S^p` outside the support
/// is orthogonal to the spherical root.
pub fn is_compatible(rs: &RootSystem, root: &SphericalRoot, sp: &BTreeSet<usize>) -> bool {
    let supp = root.support();
    let inside: BTreeSet<usize> = supp.intersection(sp).copied().collect();
    if inside != root.required_parabolic() {
        return false;
    }
    sp.difference(&supp)
        .all(|&beta| rs.coroot_pairing(beta, root.coeffs()) == 0)
}

/// Coefficient of the colours moved by `alpha` in the anticanonical divisor:
/// 1 if `alpha` or `2 alpha` is a spherical root, otherwise `<α^∨, 2ρ_S - 2ρ_{S^p}>`.
pub fn anticanonical_coefficient(
    rs: &RootSystem,
    sp: &BTreeSet<usize>,
    alpha: usize,
    sigma: &[SphericalRoot],
) -> i64 {
    let simple = rs.simple_root(alpha);
    let double: Root = simple.iter().map(|c| 2 * c).collect();
    if sigma.iter().any(|g| *g.coeffs() == simple || *g.coeffs() == double) {
        return 1;
    }
    let all: BTreeSet<usize> = (0..rs.rank()).collect();
    let rho_s = rs.two_rho(&all);
    let rho_p = rs.two_rho(sp);
    let diff: Root = rho_s.iter().zip(&rho_p).map(|(a, b)| a - b).collect();
    rs.coroot_pairing(alpha, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    #[test]
    fn coefficients_land_on_the_embedding() {
        let r = SphericalRoot::new(&rs("B4"), PatternKind::DoubledBChain(3), vec![1, 2, 3]).unwrap();
        assert_eq!(r.coeffs(), &vec![0, 2, 2, 2]);
        let r = SphericalRoot::new(&rs("F4"), PatternKind::FFour, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(r.coeffs(), &vec![1, 2, 3, 2]);
        // The B3 pattern needs the short root last.
        assert!(SphericalRoot::new(&rs("C3"), PatternKind::BThree, vec![0, 1, 2]).is_err());
        assert!(SphericalRoot::new(&rs("A3"), PatternKind::OrthogonalPair, vec![0, 1]).is_err());
    }

    #[test]
    fn placements_are_recovered_from_coefficients() {
        let e6 = rs("E6");
        let r = SphericalRoot::from_document(&e6, "a-chain", &[1, 0, 1, 1, 1, 1]).unwrap();
        assert_eq!(r.embedding(), &[0, 2, 3, 4, 5]);
        let r = SphericalRoot::from_document(&e6, "d-chain", &[0, 1, 1, 2, 2, 2]).unwrap();
        assert_eq!(r.embedding(), &[5, 4, 3, 1, 2]);
        assert!(SphericalRoot::from_document(&e6, "d-chain", &[0, 2, 1, 2, 2, 2]).is_err());
        assert!(matches!(
            SphericalRoot::from_document(&e6, "e6-chain", &[1, 0, 0, 0, 0, 0]),
            Err(SphericalRootError::UnknownPattern(_))
        ));
    }

    #[test]
    fn compatibility_follows_the_parabolic_rules() {
        let a3 = rs("A3");
        let chain = SphericalRoot::new(&a3, PatternKind::AChain(3), vec![0, 1, 2]).unwrap();
        assert!(is_compatible(&a3, &chain, &[1].into()));
        assert!(!is_compatible(&a3, &chain, &BTreeSet::new()));
        let g = SphericalRoot::new(&a3, PatternKind::Simple, vec![0]).unwrap();
        assert!(!is_compatible(&a3, &g, &[1].into()));
        assert!(is_compatible(&a3, &g, &[2].into()));
        let g2 = rs("G2");
        let r = SphericalRoot::new(&g2, PatternKind::GDouble, vec![0, 1]).unwrap();
        assert!(is_compatible(&g2, &r, &[1].into()));
    }

    #[test]
    fn distinguished_coefficients_follow_from_the_luna_formula() {
        for size in 1..=5 {
            for kind in PatternKind::all_of_size(size) {
                let types = kind.support_types().unwrap();
                let prs = RootSystem::new(types);
                let emb: Vec<usize> = (0..prs.rank()).collect();
                let root = SphericalRoot::new(&prs, kind, emb).unwrap();
                let sp = root.required_parabolic();
                let (pos, pairing, m) = kind.distinguished_color();
                let alpha = root.embedding()[pos];
                let computed = anticanonical_coefficient(&prs, &sp, alpha, &[root.clone()]);
                assert_eq!(computed, m, "{kind:?}");
                let row = prs.coroot_pairing(alpha, root.coeffs());
                let expected_row = match kind {
                    PatternKind::Double => 2 * pairing,
                    PatternKind::Simple => 2,
                    _ => pairing,
                };
                assert_eq!(row, expected_row, "{kind:?}");
            }
        }
    }

    #[test]
    fn small_systems_have_the_expected_number_of_spherical_roots() {
        // A1: α, 2α.
        assert_eq!(all_spherical_roots(&rs("A1")).len(), 2);
        let b2 = all_spherical_roots(&rs("B2"));
        assert!(b2.iter().any(|r| r.kind() == PatternKind::DoubledBChain(2)));
        assert!(b2.iter().any(|r| r.kind() == PatternKind::CChainParabolic(2)));
        assert_eq!(all_spherical_roots(&rs("G2")).len(), 6);
    }
}
