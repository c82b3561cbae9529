//! Reduced root systems as products of simple factors with Bourbaki numbering.
//!
//! Simple roots of a product are numbered consecutively, factor by factor.
//! Roots are integer coefficient vectors over the simple roots. The basic
//! numerical datum is the coroot pairing `<α_i^∨, α_j>`, available through
//! [`RootSystem::pairing`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::rational_geometry::{frac, RatVector};

/// Integer coefficient vector over the simple roots.
pub type Root = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("invalid Cartan type {0}")]
    InvalidType(String),
    #[error("simple root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// An irreducible Cartan type such as `E6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    pub letter: TypeLetter,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(letter: TypeLetter, rank: usize) -> Result<Self, RootError> {
        use TypeLetter::*;
        let ok = match letter {
            A => rank >= 1,
            B | C => rank >= 2,
            D => rank >= 3,
            E => (6..=8).contains(&rank),
            F => rank == 4,
            G => rank == 2,
        };
        if ok {
            Ok(SimpleType { letter, rank })
        } else {
            Err(RootError::InvalidType(format!("{letter:?}{rank}")))
        }
    }

    /// Doubled squared lengths `2(α_i, α_i)` and the edges of the Dynkin diagram.
    fn diagram(&self) -> (Vec<i64>, Vec<(usize, usize)>) {
        use TypeLetter::*;
        let n = self.rank;
        let path: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        match self.letter {
            A => (vec![4; n], path),
            B => {
                let mut len = vec![4; n];
                len[n - 1] = 2;
                (len, path)
            }
            C => {
                let mut len = vec![2; n];
                len[n - 1] = 4;
                (len, path)
            }
            D => {
                let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
                edges.push((n - 3, n - 1));
                (vec![4; n], edges)
            }
            E => {
                let mut edges = vec![(0, 2), (2, 3), (1, 3)];
                edges.extend((4..n).map(|i| (i - 1, i)));
                (vec![4; n], edges)
            }
            F => (vec![4, 4, 2, 2], path),
            G => (vec![2, 6], vec![(0, 1)]),
        }
    }

    /// Coroot pairing matrix `<α_i^∨, α_j>` of this factor.
    fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let (len, edges) = self.diagram();
        let mut ip = vec![vec![0i64; n]; n];
        for i in 0..n {
            ip[i][i] = len[i];
        }
        for &(i, j) in &edges {
            let v = -len[i].max(len[j]) / 2;
            ip[i][j] = v;
            ip[j][i] = v;
        }
        (0..n)
            .map(|i| (0..n).map(|j| 2 * ip[i][j] / len[i]).collect())
            .collect()
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.letter, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootError::InvalidType(s.to_string());
        let mut chars = s.chars();
        let letter = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => TypeLetter::A,
            Some('B') => TypeLetter::B,
            Some('C') => TypeLetter::C,
            Some('D') => TypeLetter::D,
            Some('E') => TypeLetter::E,
            Some('F') => TypeLetter::F,
            Some('G') => TypeLetter::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        SimpleType::new(letter, rank)
    }
}

/// A product of simple root systems with cached positive roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    factors: Vec<SimpleType>,
    offsets: Vec<usize>,
    pairing: Vec<Vec<i64>>,
    positive: Vec<Root>,
}

impl RootSystem {
    pub fn new(factors: Vec<SimpleType>) -> Self {
        let rank: usize = factors.iter().map(|t| t.rank).sum();
        let mut pairing = vec![vec![0i64; rank]; rank];
        let mut offsets = Vec::with_capacity(factors.len());
        let mut off = 0;
        for t in &factors {
            offsets.push(off);
            let m = t.pairing_matrix();
            for i in 0..t.rank {
                for j in 0..t.rank {
                    pairing[off + i][off + j] = m[i][j];
                }
            }
            off += t.rank;
        }
        let positive = positive_roots_from_pairing(&pairing);
        RootSystem {
            factors,
            offsets,
            pairing,
            positive,
        }
    }

    /// The empty root system (a torus).
    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    /// Parses factor names such as `["E6"]` or `["A2", "A2"]`.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, RootError> {
        let factors = names
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(factors))
    }

    /// Parses a product written as `A2xA2`; the empty string is the empty system.
    pub fn parse(s: &str) -> Result<Self, RootError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let names: Vec<&str> = s.split(['x', 'X', '*']).collect();
        Self::from_names(&names)
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn names(&self) -> Vec<String> {
        self.factors.iter().map(|t| t.to_string()).collect()
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    /// First global index of each factor.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Factor containing the simple root `i`.
    pub fn factor_of(&self, i: usize) -> usize {
        self.offsets.iter().rposition(|&o| o <= i).expect("index in range")
    }

    /// Coroot pairing `<α_i^∨, α_j>`.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.pairing[i][j]
    }

    pub fn pairing_matrix(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    /// Block-diagonal Cartan matrix in Bourbaki's printed orientation,
    /// entry `(i, j) = <α_i, α_j^∨>`; for `G2` this is `[[2, -1], [-3, 2]]`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.pairing[j][i]).collect())
            .collect()
    }

    /// `<α_i^∨, v>` for a vector `v` of simple-root coefficients.
    pub fn coroot_pairing(&self, i: usize, v: &[i64]) -> i64 {
        self.pairing[i].iter().zip(v).map(|(p, c)| p * c).sum()
    }

    pub fn check_index(&self, i: usize) -> Result<(), RootError> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(RootError::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        r
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Root = v.iter().map(|x| -x).collect();
        self.positive.iter().any(|r| r == v || *r == neg)
    }

    /// Positive roots of the subsystem generated by the simple roots in `subset`.
    pub fn positive_roots_in(&self, subset: &BTreeSet<usize>) -> Vec<Root> {
        self.positive
            .iter()
            .filter(|r| support(r).is_subset(subset))
            .cloned()
            .collect()
    }

    /// `2ρ_subset`, the sum of the positive roots supported in `subset`.
    pub fn two_rho(&self, subset: &BTreeSet<usize>) -> Root {
        let mut acc = vec![0; self.rank()];
        for r in self.positive_roots_in(subset) {
            for (a, c) in acc.iter_mut().zip(&r) {
                *a += c;
            }
        }
        acc
    }

    /// `ρ_subset` with half-integer coefficients.
    pub fn half_sum(&self, subset: &BTreeSet<usize>) -> RatVector {
        self.two_rho(subset).into_iter().map(|c| frac(c, 2)).collect()
    }

    /// `|R^+| - |R^+_subset|`, the dimension of `G/P` for the parabolic of `subset`.
    pub fn parabolic_count(&self, subset: &BTreeSet<usize>) -> usize {
        self.positive.len() - self.positive_roots_in(subset).len()
    }

    /// The subsystem spanned by the simple roots in `indices`, relabelled so each
    /// component carries Bourbaki numbering. Returns the subsystem and, for each
    /// new simple root, its index in `self`.
    pub fn restrict(&self, indices: &BTreeSet<usize>) -> (RootSystem, Vec<usize>) {
        let mut remaining: BTreeSet<usize> = indices.clone();
        let mut factors = Vec::new();
        let mut map = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                for &w in indices {
                    if w != v && self.pairing[v][w] != 0 && !comp.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            for v in &comp {
                remaining.remove(v);
            }
            let (t, order) = recognize(&self.pairing, &comp);
            factors.push(t);
            map.extend(order);
        }
        let sub = RootSystem::new(factors);
        debug_assert!((0..sub.rank()).all(|i| (0..sub.rank())
            .all(|j| sub.pairing(i, j) == self.pairing(map[i], map[j]))));
        (sub, map)
    }

    /// All index bijections `φ` with `<α_φ(i)^∨, α_φ(j)> = <α_i^∨, α_j>`.
    pub fn isomorphisms(&self, other: &RootSystem) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_isomorphism(other, |phi| {
            out.push(phi.to_vec());
            true
        });
        out
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.isomorphisms(self)
    }

    /// Calls `f` on each diagram isomorphism until it returns `false`.
    pub fn for_each_isomorphism<F: FnMut(&[usize]) -> bool>(&self, other: &RootSystem, mut f: F) {
        let n = self.rank();
        if other.rank() != n {
            return;
        }
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        extend_iso(&self.pairing, &other.pairing, 0, &mut phi, &mut used, &mut f);
    }
}

fn extend_iso<F: FnMut(&[usize]) -> bool>(
    a: &[Vec<i64>],
    b: &[Vec<i64>],
    i: usize,
    phi: &mut Vec<usize>,
    used: &mut Vec<bool>,
    f: &mut F,
) -> bool {
    let n = a.len();
    if i == n {
        return f(phi);
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        let consistent = (0..i).all(|k| a[i][k] == b[cand][phi[k]] && a[k][i] == b[phi[k]][cand]);
        if !consistent {
            continue;
        }
        phi[i] = cand;
        used[cand] = true;
        let go_on = extend_iso(a, b, i + 1, phi, used, f);
        used[cand] = false;
        phi[i] = usize::MAX;
        if !go_on {
            return false;
        }
    }
    true
}

/// Simple roots with nonzero coefficient.
pub fn support(v: &[i64]) -> BTreeSet<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect()
}

fn positive_roots_from_pairing(pairing: &[Vec<i64>]) -> Vec<Root> {
    let n = pairing.len();
    let mut roots: Vec<Root> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut seen: HashSet<Root> = roots.iter().cloned().collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..n {
            let is_simple_i = beta.iter().enumerate().all(|(k, &c)| c == i64::from(k == i));
            if is_simple_i {
                continue;
            }
            let mut p = 0;
            loop {
                let mut down = beta.clone();
                down[i] -= p + 1;
                if down[i] < 0 || !seen.contains(&down) {
                    break;
                }
                p += 1;
            }
            let bracket: i64 = (0..n).map(|j| pairing[i][j] * beta[j]).sum();
            let q = p - bracket;
            if q > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if seen.insert(up.clone()) {
                    roots.push(up);
                }
            }
        }
        idx += 1;
    }
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.iter().map(|c| -c).collect::<Vec<_>>()));
    roots
}

/// Identifies the Cartan type of a connected set of simple roots and returns
/// its members in Bourbaki order.
fn recognize(p: &[Vec<i64>], comp: &BTreeSet<usize>) -> (SimpleType, Vec<usize>) {
    let nodes: Vec<usize> = comp.iter().copied().collect();
    let n = nodes.len();
    let nbrs = |v: usize| -> Vec<usize> {
        nodes
            .iter()
            .copied()
            .filter(|&w| w != v && p[v][w] != 0)
            .collect()
    };
    let mk = |l: TypeLetter| SimpleType::new(l, n).expect("recognized type is valid");
    if n == 1 {
        return (mk(TypeLetter::A), nodes);
    }
    // Walks from `from` away from `prev` until the path ends.
    let walk = |prev: usize, from: usize| -> Vec<usize> {
        let mut out = vec![from];
        let (mut a, mut b) = (prev, from);
        loop {
            let next: Vec<usize> = nbrs(b).into_iter().filter(|&w| w != a).collect();
            match next.as_slice() {
                [w] => {
                    out.push(*w);
                    a = b;
                    b = *w;
                }
                _ => return out,
            }
        }
    };
    if let Some(&branch) = nodes.iter().find(|&&v| nbrs(v).len() == 3) {
        let mut arms: Vec<Vec<usize>> = nbrs(branch).into_iter().map(|w| walk(branch, w)).collect();
        arms.sort_by_key(|a| a.len());
        let (a0, a1, a2) = (&arms[0], &arms[1], &arms[2]);
        if a1.len() == 1 {
            // D_n: long arm from its far end, then the branch node, then both leaves.
            let mut order: Vec<usize> = a2.iter().rev().copied().collect();
            order.push(branch);
            order.push(a0[0]);
            order.push(a1[0]);
            return (mk(TypeLetter::D), order);
        }
        // Bourbaki: α1 - α3 - α4 - α5 - ..., with α2 attached to α4.
        let mut order = vec![a1[1], a0[0], a1[0], branch];
        order.extend(a2.iter().copied());
        return (mk(TypeLetter::E), order);
    }
    let ends: Vec<usize> = nodes.iter().copied().filter(|&v| nbrs(v).len() == 1).collect();
    let mut path = vec![ends[0]];
    path.extend(walk(ends[0], nbrs(ends[0])[0]));
    let mult = |a: usize, b: usize| p[a][b] * p[b][a];
    let bonds: Vec<i64> = path.windows(2).map(|w| mult(w[0], w[1])).collect();
    if let Some(pos) = bonds.iter().position(|&m| m == 3) {
        let (x, y) = (path[pos], path[pos + 1]);
        let order = if p[x][y] == -3 { vec![x, y] } else { vec![y, x] };
        return (mk(TypeLetter::G), order);
    }
    let Some(pos) = bonds.iter().position(|&m| m == 2) else {
        return (mk(TypeLetter::A), path);
    };
    if n == 4 && pos == 1 {
        // F4 with the long roots first: the short end of the double bond has pairing -2.
        let (x, y) = (path[1], path[2]);
        let order = if p[y][x] == -2 { path } else { path.into_iter().rev().collect() };
        return (mk(TypeLetter::F), order);
    }
    let mut order = path;
    if pos == 0 && n > 2 {
        order.reverse();
    }
    let (x, y) = (order[n - 2], order[n - 1]);
    let last_short = p[y][x] == -2;
    if n == 2 && !last_short {
        order.reverse();
        return (mk(TypeLetter::B), order);
    }
    if last_short {
        (mk(TypeLetter::B), order)
    } else {
        (mk(TypeLetter::C), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        for (name, count) in [
            ("A1", 1),
            ("A4", 10),
            ("B3", 9),
            ("C4", 16),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
            ("A2xG2", 9),
        ] {
            assert_eq!(rs(name).positive_roots().len(), count, "{name}");
        }
    }

    #[test]
    fn highest_roots() {
        let last = |s: &str| rs(s).positive_roots().last().unwrap().clone();
        assert_eq!(last("E8"), vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(last("F4"), vec![2, 3, 4, 2]);
        assert_eq!(last("G2"), vec![3, 2]);
        assert_eq!(last("B3"), vec![1, 2, 2]);
        assert_eq!(last("C3"), vec![2, 2, 1]);
    }

    #[test]
    fn cartan_orientation() {
        assert_eq!(rs("G2").cartan_matrix(), vec![vec![2, -1], vec![-3, 2]]);
        let b3 = rs("B3");
        assert_eq!(b3.pairing(2, 1), -2);
        assert_eq!(b3.pairing(1, 2), -1);
        let c3 = rs("C3");
        assert_eq!(c3.pairing(1, 2), -2);
    }

    #[test]
    fn rho_pairs_to_two_on_simple_coroots() {
        for name in ["A3", "B4", "C3", "D4", "E6", "F4", "G2"] {
            let r = rs(name);
            let all: BTreeSet<usize> = (0..r.rank()).collect();
            let two_rho = r.two_rho(&all);
            for i in 0..r.rank() {
                assert_eq!(r.coroot_pairing(i, &two_rho), 2, "{name} α{}", i + 1);
            }
        }
    }

    #[test]
    fn parsing_rejects_bad_types() {
        assert!("E9".parse::<SimpleType>().is_err());
        assert!("B1".parse::<SimpleType>().is_err());
        assert!("Q2".parse::<SimpleType>().is_err());
        assert_eq!(RootSystem::parse("").unwrap().rank(), 0);
    }

    #[test]
    fn restriction_recognizes_types() {
        let e8 = rs("E8");
        let all_but = |skip: &[usize]| -> BTreeSet<usize> {
            (0..8).filter(|i| !skip.contains(i)).collect()
        };
        let (sub, _) = e8.restrict(&all_but(&[7]));
        assert_eq!(sub.names(), vec!["E7"]);
        let (sub, _) = e8.restrict(&all_but(&[0]));
        assert_eq!(sub.names(), vec!["D7"]);
        let (sub, _) = e8.restrict(&all_but(&[1]));
        assert_eq!(sub.names(), vec!["A7"]);
        let (sub, _) = rs("F4").restrict(&[1, 2, 3].into());
        assert_eq!(sub.names(), vec!["C3"]);
        let (sub, _) = rs("F4").restrict(&[0, 1, 2].into());
        assert_eq!(sub.names(), vec!["B3"]);
        let (sub, map) = rs("C4").restrict(&[2, 3].into());
        assert_eq!(sub.names(), vec!["B2"]);
        assert_eq!(map, vec![3, 2]);
        let (sub, _) = rs("E6").restrict(&[0, 1, 2, 4, 5].into());
        assert_eq!(sub.names(), vec!["A2", "A1", "A2"]);
    }

    #[test]
    fn diagram_automorphism_counts() {
        assert_eq!(rs("A5").automorphisms().len(), 2);
        assert_eq!(rs("D4").automorphisms().len(), 6);
        assert_eq!(rs("E6").automorphisms().len(), 2);
        assert_eq!(rs("B3").automorphisms().len(), 1);
        assert_eq!(rs("A2xA2").automorphisms().len(), 8);
        assert!(rs("B3").isomorphisms(&rs("C3")).is_empty());
    }
}
