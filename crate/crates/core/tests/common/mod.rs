//! Independent oracles and instance generators shared by the integration tests.
//!
//! Nothing here calls the simplex, the vertex enumeration or the cone test of
//! the library: the oracles enumerate tight constraint sets by brute force and
//! solve the resulting systems with their own elimination routine.

#![allow(dead_code)]

pub mod tables;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use spherical_core::fano::{AugmentedData, AugmentedDivisor};
use spherical_core::lp_solver::LpProblem;
use spherical_core::rational_geometry::{rat, RatVector, Rational};
use spherical_core::root_systems::RootSystem;
use spherical_core::spherical_roots::SphericalRoot;
use spherical_core::skeleton::{Color, ColorKind, GammaDivisor, SphericalSkeleton};
use spherical_core::symmetric_catalog::{enumerate_specs, generate, FamilySpec};

/// The unique solution of `rows · x = rhs` in `k` unknowns, or `None` when
/// the system is inconsistent or underdetermined.
pub fn solve_system(rows: &[RatVector], rhs: &[Rational], k: usize) -> Option<RatVector> {
    let mut m: Vec<RatVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(p) = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, p);
        let inv = Rational::one() / &m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != pivot_row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=k {
                    let d = &f * &m[pivot_row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| m[c][k].clone()).collect())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every `k`-subset of `0..n`.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut f);
}

/// Vertices of `{x : a·x <= b for (a, b) in ineq, a·x = b for (a, b) in eq}`
/// in dimension `n`, found by solving every choice of tight inequalities.
pub fn brute_vertices(ineq: &[(RatVector, Rational)], eq: &[(RatVector, Rational)], n: usize) -> Vec<RatVector> {
    let mut out: Vec<RatVector> = Vec::new();
    if eq.len() > n {
        return out;
    }
    for_each_subset(ineq.len(), n - eq.len(), |s| {
        let mut rows: Vec<RatVector> = eq.iter().map(|(a, _)| a.clone()).collect();
        let mut rhs: Vec<Rational> = eq.iter().map(|(_, b)| b.clone()).collect();
        for &i in s {
            rows.push(ineq[i].0.clone());
            rhs.push(ineq[i].1.clone());
        }
        if let Some(x) = solve_system(&rows, &rhs, n) {
            let feasible = ineq.iter().all(|(a, b)| dot(a, &x) <= *b) && eq.iter().all(|(a, b)| dot(a, &x) == *b);
            if feasible && !out.contains(&x) {
                out.push(x);
            }
        }
    });
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oracle {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Solves `max c·x, A x <= b, x >= 0` by vertex enumeration. The feasible
/// region is pointed, so it is empty exactly when it has no vertex; it is
/// unbounded in the objective exactly when some extreme ray of the recession
/// cone, normalized by `Σ d = 1`, has `c·d > 0`.
pub fn brute_lp(p: &LpProblem) -> Oracle {
    let n = p.c.len();
    let mut ineq: Vec<(RatVector, Rational)> =
        p.a.rows().iter().cloned().zip(p.b.iter().cloned()).collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = -Rational::one();
        ineq.push((e, Rational::zero()));
    }
    let vs = brute_vertices(&ineq, &[], n);
    if vs.is_empty() {
        return Oracle::Infeasible;
    }
    let rec: Vec<(RatVector, Rational)> = ineq.iter().map(|(a, _)| (a.clone(), Rational::zero())).collect();
    let norm = (vec![Rational::one(); n], Rational::one());
    if brute_vertices(&rec, &[norm], n).iter().any(|d| dot(&p.c, d).is_positive()) {
        return Oracle::Unbounded;
    }
    Oracle::Optimal(vs.iter().map(|v| dot(&p.c, v)).max().expect("nonempty"))
}

/// `target ∈ cone(gens)`, by Carathéodory: some linearly independent subset
/// of the generators expresses `target` with nonnegative coefficients.
pub fn brute_cone_contains(gens: &[RatVector], target: &[Rational]) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    let dim = target.len();
    let mut found = false;
    for k in 1..=dim.min(gens.len()) {
        for_each_subset(gens.len(), k, |s| {
            if found {
                return;
            }
            let rows: Vec<RatVector> = (0..dim).map(|i| s.iter().map(|&g| gens[g][i].clone()).collect()).collect();
            if let Some(lambda) = solve_system(&rows, target, k) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    found = true;
                }
            }
        });
    }
    found
}

/// `p ∈ conv(pts)` in the plane, via triangles and segments of `pts`.
pub fn in_hull_2d(pts: &[RatVector], p: &[Rational]) -> bool {
    let cross = |o: &[Rational], a: &[Rational], b: &[Rational]| -> Rational {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let on_segment = |a: &[Rational], b: &[Rational]| -> bool {
        cross(a, b, p).is_zero()
            && (&p[0] - &a[0]) * (&p[0] - &b[0]) <= Rational::zero()
            && (&p[1] - &a[1]) * (&p[1] - &b[1]) <= Rational::zero()
    };
    if pts.iter().any(|q| q.as_slice() == p) {
        return true;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if on_segment(&pts[i], &pts[j]) {
                return true;
            }
            for k in j + 1..pts.len() {
                let (a, b, c) = (&pts[i], &pts[j], &pts[k]);
                let s = [cross(a, b, p), cross(b, c, p), cross(c, a, p)];
                let all_nonneg = s.iter().all(|x| !x.is_negative());
                let all_nonpos = s.iter().all(|x| !x.is_positive());
                if (all_nonneg || all_nonpos) && !cross(a, b, c).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// A random LP with `n <= 4` variables and small integer data.
pub fn random_lp<R: Rng>(rng: &mut R) -> LpProblem {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=5);
    let c: RatVector = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
    let rows: Vec<RatVector> = (0..m).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect();
    let b: RatVector = (0..m).map(|_| rat(rng.gen_range(-2..=5))).collect();
    LpProblem { c, a: spherical_core::rational_geometry::RatMatrix::new(n, rows).unwrap(), b }
}

/// Catalog members whose simple factors have rank at most 3.
pub fn small_specs() -> Vec<FamilySpec> {
    enumerate_specs(3)
}

/// Appends `count` random `Γ` rows with entries in `{-2, -1, 0}`.
pub fn add_random_gamma<R: Rng>(rng: &mut R, sk: &mut SphericalSkeleton, count: usize) {
    let r = sk.rank();
    for _ in 0..count {
        let id = format!("E{}", sk.gamma.len() + 1);
        let pairings = (0..r).map(|_| rng.gen_range(-2..=0)).collect();
        sk.gamma.push(GammaDivisor { id, pairings });
    }
}

/// A valid skeleton: a small catalog member with up to three random `Γ` rows,
/// and with probability one quarter the product with a second such skeleton.
pub fn random_skeleton<R: Rng>(rng: &mut R, specs: &[FamilySpec]) -> SphericalSkeleton {
    let one = |rng: &mut R| {
        let spec = specs.choose(rng).expect("nonempty catalog");
        let mut sk = generate(spec).expect("catalog members generate");
        let count = rng.gen_range(0..=3);
        add_random_gamma(rng, &mut sk, count);
        sk
    };
    let a = one(rng);
    if rng.gen_bool(0.25) {
        let b = one(rng);
        SphericalSkeleton::product(&a, &b)
    } else {
        a
    }
}

/// Applies the diagram automorphism `phi` (new index of old simple root `i`
/// is `phi[i]`), keeping `Σ` sorted by the first index of its support.
pub fn relabel(sk: &SphericalSkeleton, phi: &[usize]) -> SphericalSkeleton {
    let n = sk.root_system.rank();
    let moved: Vec<_> = sk.sigma.iter().map(|g| g.relabel(phi, n)).collect();
    let mut order: Vec<usize> = (0..moved.len()).collect();
    order.sort_by_key(|&j| {
        let c = moved[j].coeffs();
        (c.iter().position(|&x| x != 0), c.clone())
    });
    let sigma = order.iter().map(|&j| moved[j].clone()).collect();
    let permute = |row: &[i64]| -> Vec<i64> { order.iter().map(|&j| row[j]).collect() };
    let kind = |k: ColorKind| match k {
        ColorKind::PairPlus(a) => ColorKind::PairPlus(phi[a]),
        ColorKind::PairMinus(a) => ColorKind::PairMinus(phi[a]),
        ColorKind::Half(a) => ColorKind::Half(phi[a]),
        ColorKind::Around => ColorKind::Around,
    };
    SphericalSkeleton {
        root_system: sk.root_system.clone(),
        sigma,
        sp: sk.sp.iter().map(|&a| phi[a]).collect(),
        colors: sk
            .colors
            .iter()
            .map(|c| Color {
                id: c.id.clone(),
                moved_by: c.moved_by.iter().map(|&a| phi[a]).collect::<BTreeSet<_>>(),
                kind: kind(c.kind),
                pairings: permute(&c.pairings),
                m: c.m,
            })
            .collect(),
        gamma: sk
            .gamma
            .iter()
            .map(|g| GammaDivisor { id: g.id.clone(), pairings: permute(&g.pairings) })
            .collect(),
    }
}

/// Appends `count` `Γ` divisors with vanishing pairings.
pub fn with_zero_rows(sk: &SphericalSkeleton, count: usize) -> SphericalSkeleton {
    let mut out = sk.clone();
    for i in 0..count {
        out.gamma.push(GammaDivisor { id: format!("Z{}", i + 1), pairings: vec![0; sk.rank()] });
    }
    out
}

/// Augmented data of a toric variety: no spherical roots, one `Γ` divisor per ray.
pub fn toric(rays: &[[i64; 2]]) -> AugmentedData {
    let ids: Vec<String> = (1..=rays.len()).map(|i| format!("E{i}")).collect();
    let skeleton = SphericalSkeleton {
        root_system: RootSystem::empty(),
        sigma: Vec::new(),
        sp: BTreeSet::new(),
        colors: Vec::new(),
        gamma: ids.iter().map(|id| GammaDivisor { id: id.clone(), pairings: Vec::new() }).collect(),
    };
    AugmentedData {
        skeleton,
        lattice_rank: 2,
        sigma_in_m: Vec::new(),
        divisors: ids
            .iter()
            .zip(rays)
            .map(|(id, r)| AugmentedDivisor { id: id.clone(), rho_prime: r.to_vec(), m: 1 })
            .collect(),
        coroots: None,
    }
}

/// The smooth toric del Pezzo surfaces, rays in cyclic order.
pub fn del_pezzo_fans() -> Vec<(&'static str, Vec<[i64; 2]>)> {
    vec![
        ("P2", vec![[1, 0], [0, 1], [-1, -1]]),
        ("P1xP1", vec![[1, 0], [0, 1], [-1, 0], [0, -1]]),
        ("Bl1", vec![[1, 0], [1, 1], [0, 1], [-1, -1]]),
        ("Bl2", vec![[1, 0], [1, 1], [0, 1], [-1, 0], [0, -1]]),
        ("Bl3", vec![[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]),
    ]
}

/// Anticanonical degrees `2 - b_i` of the invariant curves of a smooth
/// complete toric surface, where `u_{i-1} + u_{i+1} = b_i u_i`.
pub fn toric_curve_degrees(rays: &[[i64; 2]]) -> Vec<i64> {
    let k = rays.len();
    let mut out: Vec<i64> = (0..k)
        .map(|i| {
            let (p, u, q) = (rays[(i + k - 1) % k], rays[i], rays[(i + 1) % k]);
            let s = [p[0] + q[0], p[1] + q[1]];
            let b = if u[0] != 0 { s[0] / u[0] } else { s[1] / u[1] };
            assert_eq!([b * u[0], b * u[1]], s, "fan is not smooth and complete");
            2 - b
        })
        .collect();
    out.sort();
    out
}

/// Augmented data over `SL_2 × torus` with `Σ = {α}` embedded as `(1, 1)`,
/// colors `(1, 0)`, `(0, 1)` and the given `Γ` vectors (which must lie in `𝒱`).
pub fn sl2_instance(gammas: &[[i64; 2]]) -> AugmentedData {
    let rs = RootSystem::parse("A1").unwrap();
    let sigma = vec![SphericalRoot::from_document(&rs, "alpha", &[1]).unwrap()];
    let colors = vec![
        Color { id: "D1".into(), moved_by: [0].into(), kind: ColorKind::PairPlus(0), pairings: vec![1], m: 1 },
        Color { id: "D2".into(), moved_by: [0].into(), kind: ColorKind::PairMinus(0), pairings: vec![1], m: 1 },
    ];
    let ids: Vec<String> = (1..=gammas.len()).map(|i| format!("E{i}")).collect();
    let gamma = ids
        .iter()
        .zip(gammas)
        .map(|(id, g)| GammaDivisor { id: id.clone(), pairings: vec![g[0] + g[1]] })
        .collect();
    let skeleton = SphericalSkeleton { root_system: rs, sigma, sp: BTreeSet::new(), colors, gamma };
    let mut divisors = vec![
        AugmentedDivisor { id: "D1".into(), rho_prime: vec![1, 0], m: 1 },
        AugmentedDivisor { id: "D2".into(), rho_prime: vec![0, 1], m: 1 },
    ];
    divisors.extend(
        ids.iter().zip(gammas).map(|(id, g)| AugmentedDivisor { id: id.clone(), rho_prime: g.to_vec(), m: 1 }),
    );
    AugmentedData { skeleton, lattice_rank: 2, sigma_in_m: vec![vec![1, 1]], divisors, coroots: Some(vec![vec![1, 1]]) }
}

/// Up to three distinct primitive vectors of `𝒱 = {u₁ + u₂ <= 0}` in `[-3, 3]²`.
pub fn random_valuation_vectors<R: Rng>(rng: &mut R) -> Vec<[i64; 2]> {
    let count = rng.gen_range(1..=3);
    let mut out: Vec<[i64; 2]> = Vec::new();
    while out.len() < count {
        let v = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        let g = num_integer::gcd(v[0], v[1]);
        if v[0] + v[1] <= 0 && g == 1 && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Supported vertices of `Q*` for [`sl2_instance`] data, independently: the
/// vertices of `{v : <u_D, v> >= -1}` at which some tight `u_D` has
/// `<u_D, (1, 1)> < 0`, so that no step along `γ` stays inside.
pub fn sl2_supported_oracle(aug: &AugmentedData) -> Vec<RatVector> {
    let ineq: Vec<(RatVector, Rational)> = aug
        .divisors
        .iter()
        .map(|d| (d.rho_prime.iter().map(|&x| rat(-x)).collect(), Rational::one()))
        .collect();
    brute_vertices(&ineq, &[], 2)
        .into_iter()
        .filter(|v| {
            aug.divisors.iter().any(|d| {
                let u: RatVector = d.rho_prime.iter().map(|&x| rat(x)).collect();
                dot(&u, v) == -Rational::one() && d.rho_prime[0] + d.rho_prime[1] < 0
            })
        })
        .collect()
}
