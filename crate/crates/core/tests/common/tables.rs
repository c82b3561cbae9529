//! Printed values transcribed from the published tables, kept apart from the
//! library's own copy so the two can be compared.

use spherical_core::lp_solver::LpProblem;
use spherical_core::rational_geometry::{frac, rat, RatMatrix, RatVector, Rational};

/// Classical group embeddings: `(0-based marking, ℘)` for every marking of
/// `G × G ⊇ diag(G)` with `G` of type `letter` and rank `n`, from the closed forms.
pub fn classical_group_rows(letter: char, n: i64) -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    for k in 1..=n {
        let v = match letter {
            'A' => {
                let j = k.min(n - k + 1);
                n * n - 2 * j * n + 3 * n + 2 * j * j - 6 * j + 4
            }
            'B' if k == 1 => 3 * n - 1,
            'B' if k < n => 3 * n + k * k - 2 * k - 4,
            'B' => n * n - n,
            'C' if k < n => n + k * k - 1,
            'C' => n * n + 1,
            'D' if k == 1 => 3 * n - 3,
            'D' if k <= n - 2 => 3 * n + k * k - 2 * k - 6,
            'D' => n * n - 2 * n + 1,
            _ => unreachable!("classical letters only"),
        };
        out.push(((k - 1) as usize, rat(v)));
    }
    out
}

/// Printed bound of the classical group embeddings.
pub fn classical_group_bound(letter: char, n: i64) -> i64 {
    match letter {
        'A' => n * n + n,
        'B' | 'C' => 2 * n * n,
        'D' => 2 * n * n - 2 * n,
        _ => unreachable!("classical letters only"),
    }
}

/// Exceptional group embeddings: type, printed bound and ℘ for `γ_1, γ_2, ...`.
pub fn exceptional_group_rows() -> Vec<(&'static str, i64, Vec<Rational>)> {
    let ints = |v: &[i64]| -> Vec<Rational> { v.iter().map(|&x| rat(x)).collect() };
    let mut e6 = ints(&[0, 16, 16, 14, 16, 0]);
    e6[0] = frac(37, 2);
    e6[5] = frac(37, 2);
    vec![
        ("E6", 72, e6),
        ("E7", 126, ints(&[27, 25, 25, 22, 19, 19, 20])),
        ("E8", 240, ints(&[38, 36, 36, 32, 27, 24, 22, 21])),
        ("F4", 48, ints(&[12, 10, 8, 7])),
        ("G2", 12, ints(&[2, 4])),
    ]
}

/// Selected rows of the exceptional symmetric subgroups: family, the marked
/// spherical root's coefficients, and ℘.
pub fn exceptional_symmetric_rows() -> Vec<(&'static str, Vec<i64>, Rational)> {
    let two = |n: usize, i: usize| -> Vec<i64> {
        let mut v = vec![0; n];
        v[i - 1] = 2;
        v
    };
    vec![
        ("21", two(6, 1), frac(13, 2)),
        ("21", two(6, 6), frac(13, 2)),
        ("21", two(6, 2), rat(5)),
        ("21", two(6, 4), rat(4)),
        ("25", two(7, 1), rat(10)),
        ("25", two(7, 7), frac(13, 2)),
        ("27", two(8, 1), rat(15)),
        ("27", two(8, 8), frac(13, 2)),
        ("29", two(4, 1), rat(4)),
        ("29", two(4, 2), rat(3)),
        ("29", two(4, 3), rat(2)),
        ("29", two(4, 4), frac(3, 2)),
        ("30", two(2, 1), rat(0)),
        ("30", two(2, 2), rat(1)),
    ]
}

/// The ℘ program of `A_n × A_n ⊇ diag(A_n)` marked at `γ_k`, with every row
/// divided by its right-hand side: the color rows `-½ A_n` and the row `e_k`,
/// objective `e_1 - e_k + e_n`.
pub fn unit_rhs_program(n: usize, k: usize) -> LpProblem {
    let cartan = |i: usize, j: usize| -> i64 {
        if i == j {
            2
        } else if i.abs_diff(j) == 1 {
            -1
        } else {
            0
        }
    };
    let mut rows: Vec<RatVector> = (0..n).map(|i| (0..n).map(|j| frac(-cartan(i, j), 2)).collect()).collect();
    rows.push((0..n).map(|j| rat(i64::from(j + 1 == k))).collect());
    let mut c = vec![rat(0); n];
    c[0] += rat(1);
    c[k - 1] -= rat(1);
    c[n - 1] += rat(1);
    LpProblem { c, a: RatMatrix::new(n, rows).expect("square rows"), b: vec![rat(1); n + 1] }
}

/// The closed-form optimal dual of [`unit_rhs_program`].
pub fn closed_form_dual(n: usize, k: usize) -> RatVector {
    let (n, k) = (n as i64, k as i64);
    let mut y: RatVector = (1..=n).map(|i| rat(if i < k { 2 * (i - 1) } else { 2 * (n - i) })).collect();
    y.push(rat(n - 2 * (k - 1)));
    y
}

/// `n² - 2kn + 2n + 2k² - 6k + 4`.
pub fn closed_form_value(n: usize, k: usize) -> Rational {
    let (n, k) = (n as i64, k as i64);
    rat(n * n - 2 * k * n + 2 * n + 2 * k * k - 6 * k + 4)
}
