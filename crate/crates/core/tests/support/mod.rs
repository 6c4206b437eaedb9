#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use treelimits::algebra::{GaussianRational, LaurentPolynomial};
use treelimits::tree::{MetricTree, Subtree, Q};
use treelimits::valuation::{parse_curve_spec, CurveSpec};
use treelimits::words::{Alphabet, Word};

pub const CANONICAL: &str = r#"{ "generators": { "a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["1", "2"]] }, "words": ["abAB"] }"#;

pub fn canonical() -> CurveSpec {
    parse_curve_spec(CANONICAL).unwrap()
}

pub fn spec(generators: &str) -> CurveSpec {
    parse_curve_spec(&format!(r#"{{ "generators": {generators} }}"#)).unwrap()
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Random tree on `n` vertices, each vertex attached to an earlier one, with
/// edge lengths in `{1/2, 1, 3/2, ..., 3}`.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> MetricTree {
    let edges = (1..n)
        .map(|v| (rng.gen_range(0..v), v, q(rng.gen_range(1..=6), 2)))
        .collect();
    MetricTree::new(n, edges).unwrap()
}

/// Hull of a few random vertices.
pub fn random_subtree(rng: &mut impl Rng, t: &MetricTree) -> Subtree {
    let n = t.vertex_count();
    let root = rng.gen_range(0..n);
    let mut verts = vec![root];
    for _ in 0..rng.gen_range(0..3) {
        verts.extend(t.path(root, rng.gen_range(0..n)));
    }
    Subtree::new(t, verts).unwrap()
}

// Canonical-curve matrices with Laurent polynomial entries, independent of the
// rational-function engine.
pub type LMatrix = [[LaurentPolynomial; 2]; 2];

fn lc(n: i64) -> LaurentPolynomial {
    LaurentPolynomial::constant(GaussianRational::from_integer(n))
}

fn tp(k: i64) -> LaurentPolynomial {
    LaurentPolynomial::monomial(GaussianRational::from_integer(1), k)
}

pub fn lmul(x: &LMatrix, y: &LMatrix) -> LMatrix {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn canonical_laurent(al: &Alphabet, w: &Word) -> LMatrix {
    let mut m = [[lc(1), lc(0)], [lc(0), lc(1)]];
    for l in w.letters() {
        let g = match al.letter_char(*l) {
            'a' => [[tp(1), lc(0)], [lc(0), tp(-1)]],
            'A' => [[tp(-1), lc(0)], [lc(0), tp(1)]],
            'b' => [[lc(1), lc(1)], [lc(1), lc(2)]],
            'B' => [[lc(2), lc(-1)], [lc(-1), lc(1)]],
            c => panic!("letter {c}"),
        };
        m = lmul(&m, &g);
    }
    m
}

/// `max(deg(tr² − 4), 0)`, and 0 when `tr² − 4` vanishes.
pub fn laurent_limit_length(m: &LMatrix) -> i64 {
    let tr = &m[0][0] + &m[1][1];
    let f = &(&tr * &tr) - &lc(4);
    f.degree().map_or(0, |d| d.max(0))
}

/// `2·max(0, max entry degree)`.
pub fn laurent_displacement(m: &LMatrix) -> i64 {
    2 * m
        .iter()
        .flatten()
        .filter_map(|e| e.degree())
        .max()
        .unwrap_or(0)
        .max(0)
}
