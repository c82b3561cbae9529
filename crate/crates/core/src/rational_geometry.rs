//! Exact rational vectors, matrices and polytopes.
//!
//! Everything here works over `BigRational`. Polytopes come in two flavours:
//! an H-representation (`HPolytope`, rows read as `<normal, v> >= offset`) and
//! an irredundant V-representation (`VPolytope`). Vertex enumeration is a
//! combinatorial active-set search, which is plenty for the small dimensions
//! that occur for spherical skeletons and Fano polytopes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lp_solver::{self, LpProblem, LpStatus};

/// Exact rational number.
pub type Rational = BigRational;
/// Dense vector of rationals.
pub type RatVector = Vec<Rational>;

/// Largest ambient dimension accepted by [`vertex_enumerate`].
pub const MAX_ENUMERATION_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("dimension {0} exceeds the enumeration limit of {MAX_ENUMERATION_DIM}")]
    DimensionTooLarge(usize),
    #[error("the origin is not an interior point of the polytope")]
    OriginNotInterior,
    #[error("point is not a vertex of the polytope")]
    NotAVertex,
}

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `p/q`; panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Converts an integer slice into a rational vector.
pub fn rat_vec(v: &[i64]) -> RatVector {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn zero_vec(n: usize) -> RatVector {
    vec![Rational::zero(); n]
}

/// Unit vector `e_i` of length `n`.
pub fn unit_vec(n: usize, i: usize) -> RatVector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Pairing of a rational vector with an integer vector.
pub fn dot_int(a: &[Rational], b: &[i64]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, &y)| acc + x * rat(y))
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RatVector {
    a.iter().map(|x| x * s).collect()
}

/// True when every coordinate is an integer.
pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Renders a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Serde adapters rendering rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let strs: Vec<String> = v.iter().map(format_rational).collect();
            strs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatVector, D::Error> {
            let strs = Vec::<String>::deserialize(d)?;
            strs.iter()
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
                })
                .collect()
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<RatVector>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => {
                    let strs: Vec<String> = v.iter().map(format_rational).collect();
                    s.serialize_some(&strs)
                }
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<RatVector>, D::Error> {
            let strs = Option::<Vec<String>>::deserialize(d)?;
            match strs {
                None => Ok(None),
                Some(strs) => strs
                    .iter()
                    .map(|s| {
                        parse_rational(s)
                            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
                    })
                    .collect::<Result<_, _>>()
                    .map(Some),
            }
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(s) => parse_rational(&s)
                    .map(Some)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
            }
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
    cols: usize,
}

impl RatMatrix {
    /// Builds a matrix with `cols` columns, checking every row length.
    pub fn new(cols: usize, rows: Vec<RatVector>) -> Result<Self, GeometryError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(GeometryError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(RatMatrix { rows, cols })
    }

    pub fn from_int_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, GeometryError> {
        Self::new(cols, rows.iter().map(|r| rat_vec(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &RatVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RatMatrix {
            rows,
            cols: self.rows.len(),
        }
    }
}

/// Rank of a list of vectors, by Gaussian elimination.
pub fn rank(vectors: &[RatVector]) -> usize {
    let mut m: Vec<RatVector> = vectors.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in (rank + 1)..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pivot;
            for j in col..cols {
                let d = &f * &m[rank][j];
                m[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Unique solution of the square system `rows * x = rhs`, if the matrix is regular.
pub fn solve_square(rows: &[RatVector], rhs: &[Rational]) -> Option<RatVector> {
    let n = rows.len();
    let mut m: Vec<RatVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for j in col..=n {
            m[col][j] /= &pivot;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let d = &f * &m[col][j];
                m[i][j] -= d;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// One inequality `<normal, v> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: RatVector,
    pub offset: Rational,
}

/// Polyhedron given by inequalities `<normal, v> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, GeometryError> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: h.normal.len(),
            });
        }
        Ok(HPolytope { dim, halfspaces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.halfspaces
            .iter()
            .all(|h| dot(&h.normal, v) >= h.offset)
    }

    /// Indices of the inequalities that hold with equality at `v`.
    pub fn active_set(&self, v: &[Rational]) -> Vec<usize> {
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| dot(&h.normal, v) == h.offset)
            .map(|(i, _)| i)
            .collect()
    }

    /// True when `v` is a vertex: feasible with active normals of full rank.
    pub fn is_vertex(&self, v: &[Rational]) -> bool {
        if v.len() != self.dim || !self.contains(v) {
            return false;
        }
        let normals: Vec<RatVector> = self
            .active_set(v)
            .into_iter()
            .map(|i| self.halfspaces[i].normal.clone())
            .collect();
        rank(&normals) == self.dim
    }

    /// True when the recession cone `{r : <normal, r> >= 0}` is trivial.
    pub fn is_bounded(&self) -> bool {
        let normals: Vec<RatVector> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        spans_positively(&normals, self.dim)
    }
}

/// Convex hull of finitely many points, stored without redundant points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<RatVector>,
}

impl VPolytope {
    /// Keeps only the points that are not convex combinations of the others.
    /// Duplicates are merged; the order of first occurrence is preserved.
    pub fn from_points(dim: usize, points: Vec<RatVector>) -> Result<Self, GeometryError> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let mut unique: Vec<RatVector> = Vec::new();
        for p in points {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        let keep: Vec<bool> = (0..unique.len())
            .map(|i| {
                let others: Vec<RatVector> = unique
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                !conv_contains(&others, &unique[i])
            })
            .collect();
        let vertices = unique
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(p, _)| p)
            .collect();
        Ok(VPolytope { dim, vertices })
    }

    /// Wraps points already known to be the vertex set.
    pub fn from_vertices_unchecked(dim: usize, vertices: Vec<RatVector>) -> Self {
        VPolytope { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        conv_contains(&self.vertices, v)
    }
}

/// True when `cone(generators)` is all of `R^dim`.
pub fn spans_positively(generators: &[RatVector], dim: usize) -> bool {
    (0..dim).all(|i| {
        let e = unit_vec(dim, i);
        let minus: RatVector = e.iter().map(|x| -x).collect();
        cone_contains(generators, &e) && cone_contains(generators, &minus)
    })
}

/// Decides `target ∈ cone(generators)` by an exact feasibility LP.
pub fn cone_contains(generators: &[RatVector], target: &[Rational]) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let k = generators.len();
    // lambda >= 0 with sum_j lambda_j g_j = target, written as two inequality blocks.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, t) in target.iter().enumerate() {
        let row: RatVector = generators.iter().map(|g| g[i].clone()).collect();
        rows.push(row.iter().map(|x| -x).collect());
        rhs.push(-t.clone());
        rows.push(row);
        rhs.push(t.clone());
    }
    let problem = LpProblem {
        c: zero_vec(k),
        a: RatMatrix::new(k, rows).expect("consistent rows"),
        b: rhs,
    };
    lp_solver::solve(&problem)
        .map(|r| r.status != LpStatus::Infeasible)
        .unwrap_or(false)
}

/// Decides `target ∈ conv(points)` by an exact feasibility LP.
pub fn conv_contains(points: &[RatVector], target: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let lifted: Vec<RatVector> = points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(Rational::one());
            q
        })
        .collect();
    let mut t = target.to_vec();
    t.push(Rational::one());
    cone_contains(&lifted, &t)
}

/// All vertices of a bounded H-polytope, by active-set enumeration.
pub fn vertex_enumerate(h: &HPolytope) -> Result<VPolytope, GeometryError> {
    let d = h.dim;
    if d > MAX_ENUMERATION_DIM {
        return Err(GeometryError::DimensionTooLarge(d));
    }
    if !h.is_bounded() {
        return Err(GeometryError::UnboundedPolytope);
    }
    let mut vertices: Vec<RatVector> = Vec::new();
    if d == 0 {
        if h.contains(&[]) {
            vertices.push(Vec::new());
        }
        return Ok(VPolytope { dim: 0, vertices });
    }
    let n = h.halfspaces.len();
    let mut subset: Vec<usize> = (0..d.min(n)).collect();
    if n < d {
        return Ok(VPolytope { dim: d, vertices });
    }
    loop {
        let rows: Vec<RatVector> = subset.iter().map(|&i| h.halfspaces[i].normal.clone()).collect();
        let rhs: RatVector = subset.iter().map(|&i| h.halfspaces[i].offset.clone()).collect();
        if let Some(v) = solve_square(&rows, &rhs) {
            if h.contains(&v) && !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    vertices.sort();
    Ok(VPolytope { dim: d, vertices })
}

/// Advances `subset` to the next k-combination of `0..n` in lexicographic order.
pub fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Polar dual `{v : <u, v> >= -1 for all vertices u}`; needs 0 in the interior.
pub fn dualize(q: &VPolytope) -> Result<HPolytope, GeometryError> {
    if !spans_positively(&q.vertices, q.dim) {
        return Err(GeometryError::OriginNotInterior);
    }
    let halfspaces = q
        .vertices
        .iter()
        .map(|u| Halfspace {
            normal: u.clone(),
            offset: -Rational::one(),
        })
        .collect();
    HPolytope::new(q.dim, halfspaces)
}

/// Indices of the vertices `u` of `q` with `<u, v> = -1`, for a vertex `v` of the dual.
pub fn dual_face(q: &VPolytope, v: &[Rational]) -> Result<Vec<usize>, GeometryError> {
    let h = dualize(q)?;
    if !h.is_vertex(v) {
        return Err(GeometryError::NotAVertex);
    }
    Ok(h.active_set(v))
}

/// Greatest common divisor of the numerators of an integral vector (0 for the zero vector).
pub fn lattice_gcd(v: &[Rational]) -> BigInt {
    v.iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |g, x| g.gcd(&x.to_integer().abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> VPolytope {
        VPolytope::from_points(
            2,
            vec![rat_vec(&[1, 0]), rat_vec(&[0, 1]), rat_vec(&[-1, 0]), rat_vec(&[0, -1])],
        )
        .unwrap()
    }

    #[test]
    fn rational_formatting_round_trips() {
        for r in [frac(37, 2), rat(-4), frac(-3, 6), rat(0)] {
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
        assert_eq!(format_rational(&frac(13, 2)), "13/2");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn redundant_points_are_dropped() {
        let p = VPolytope::from_points(
            2,
            vec![rat_vec(&[0, 0]), rat_vec(&[2, 0]), rat_vec(&[0, 2]), rat_vec(&[1, 1])],
        )
        .unwrap();
        assert_eq!(
            p.vertices(),
            &[rat_vec(&[0, 0]), rat_vec(&[2, 0]), rat_vec(&[0, 2])][..]
        );
    }

    #[test]
    fn cross_polytope_dual_is_the_cube() {
        let h = dualize(&square()).unwrap();
        let v = vertex_enumerate(&h).unwrap();
        let mut expected = vec![
            rat_vec(&[-1, -1]),
            rat_vec(&[-1, 1]),
            rat_vec(&[1, -1]),
            rat_vec(&[1, 1]),
        ];
        expected.sort();
        assert_eq!(v.vertices(), &expected[..]);
        assert_eq!(dual_face(&square(), &rat_vec(&[1, 1])).unwrap(), vec![2, 3]);
        assert_eq!(
            dual_face(&square(), &rat_vec(&[1, 0])),
            Err(GeometryError::NotAVertex)
        );
    }

    #[test]
    fn origin_on_boundary_is_rejected() {
        let tri = VPolytope::from_points(2, vec![rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1])]).unwrap();
        assert_eq!(dualize(&tri), Err(GeometryError::OriginNotInterior));
    }

    #[test]
    fn unbounded_and_oversized_inputs_fail() {
        let half = HPolytope::new(
            2,
            vec![Halfspace { normal: rat_vec(&[1, 0]), offset: rat(0) }],
        )
        .unwrap();
        assert_eq!(vertex_enumerate(&half), Err(GeometryError::UnboundedPolytope));
        let big = HPolytope::new(9, vec![]).unwrap();
        assert_eq!(vertex_enumerate(&big), Err(GeometryError::DimensionTooLarge(9)));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![rat_vec(&[1, 0]), rat_vec(&[1, 1])];
        assert!(cone_contains(&gens, &rat_vec(&[3, 1])));
        assert!(!cone_contains(&gens, &rat_vec(&[0, 1])));
        assert!(cone_contains(&gens, &rat_vec(&[0, 0])));
        assert!(!cone_contains(&[], &rat_vec(&[1, 0])));
    }

    #[test]
    fn ranks_and_solutions() {
        assert_eq!(rank(&[rat_vec(&[1, 2]), rat_vec(&[2, 4])]), 1);
        assert_eq!(
            solve_square(&[rat_vec(&[2, 1]), rat_vec(&[1, 3])], &rat_vec(&[3, 4])),
            Some(rat_vec(&[1, 1]))
        );
        assert_eq!(lattice_gcd(&rat_vec(&[6, -9, 0])), BigInt::from(3));
    }
}
