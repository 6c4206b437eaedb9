use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{MetricTree, TreeError, TreePoint, Q};

/// A finite pseudo-metric with labelled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    labels: Vec<String>,
    d: Vec<Vec<Q>>,
}

impl FiniteMetric {
    /// Checks squareness, symmetry, a zero diagonal and nonnegativity. The
    /// triangle inequality is left to [`four_point_defect`], which sees it
    /// through degenerate quadruples.
    pub fn new(labels: Vec<String>, d: Vec<Vec<Q>>) -> Result<Self, TreeError> {
        let n = labels.len();
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(TreeError::InvalidMetric(format!(
                "distance table is not {n}×{n}"
            )));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(TreeError::InvalidMetric(format!(
                    "d({0},{0}) ≠ 0",
                    labels[i]
                )));
            }
            for j in 0..i {
                if d[i][j] != d[j][i] {
                    return Err(TreeError::InvalidMetric(format!(
                        "d({},{}) not symmetric",
                        labels[i], labels[j]
                    )));
                }
                if d[i][j].is_negative() {
                    return Err(TreeError::InvalidMetric(format!(
                        "d({},{}) < 0",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Self { labels, d })
    }

    /// Distances between the given points of `t`, labelled `p0, p1, ...`.
    pub fn from_tree_points(t: &MetricTree, points: &[TreePoint]) -> Result<Self, TreeError> {
        let mut d = vec![vec![Q::zero(); points.len()]; points.len()];
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate().skip(i + 1) {
                let x = super::tree_distance(t, p, q)?;
                d[i][j] = x.clone();
                d[j][i] = x;
            }
        }
        Self::new((0..points.len()).map(|k| format!("p{k}")).collect(), d)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn d(&self, i: usize, j: usize) -> &Q {
        &self.d[i][j]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.d
    }

    /// Text form: one `x y distance` line per unordered pair.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                out.push_str(&format!(
                    "{} {} {}\n",
                    self.labels[i], self.labels[j], self.d[i][j]
                ));
            }
        }
        out
    }

    /// Parses `x y distance` lines; every pair of named points must appear.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut entries = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TreeError::Parse {
                line: k + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [x, y, v] = fields.as_slice() else {
                return Err(err(format!("expected `x y distance`, got {line:?}")));
            };
            let v = Q::from_str(v).map_err(|_| err(format!("bad distance {v:?}")))?;
            let mut id = |name: &str| {
                *ids.entry(name.to_string()).or_insert_with(|| {
                    labels.push(name.to_string());
                    labels.len() - 1
                })
            };
            let (i, j) = (id(x), id(y));
            entries.push((k + 1, i, j, v));
        }
        let n = labels.len();
        let mut d: Vec<Vec<Option<Q>>> = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(Q::zero());
        }
        for (line, i, j, v) in entries {
            for (a, b) in [(i, j), (j, i)] {
                if let Some(old) = &d[a][b] {
                    if *old != v {
                        return Err(TreeError::Parse {
                            line,
                            message: "conflicting distance".into(),
                        });
                    }
                }
                d[a][b] = Some(v.clone());
            }
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in d.into_iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, v) in row.into_iter().enumerate() {
                match v {
                    Some(v) => out.push(v),
                    None => {
                        return Err(TreeError::InvalidMetric(format!(
                            "missing distance {} {}",
                            labels[i], labels[j]
                        )))
                    }
                }
            }
            rows.push(out);
        }
        Self::new(labels, rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointDefect {
    /// Largest pair-sum minus the second largest, maximized over quadruples.
    pub defect: Q,
    /// First quadruple (indices, nondecreasing) attaining a positive defect.
    pub witness: Option<[usize; 4]>,
}

/// Sorted-sums gap for one quadruple.
fn gap<T: Ord + Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>>(s: [T; 3]) -> T {
    let mut s = s;
    s.sort();
    s[2].clone() - s[1].clone()
}

/// Scales every entry to a common denominator, if the numerators fit in i64.
fn scaled(m: &FiniteMetric) -> Option<(Vec<Vec<i128>>, BigInt)> {
    let mut l = BigInt::from(1);
    for row in &m.d {
        for x in row {
            l = l.lcm(x.denom());
        }
    }
    let mut out = Vec::with_capacity(m.len());
    for row in &m.d {
        let mut r = Vec::with_capacity(row.len());
        for x in row {
            let v = (x.numer() * (&l / x.denom())).to_i64()?;
            if v.unsigned_abs() >= 1 << 60 {
                return None;
            }
            r.push(v as i128);
        }
        out.push(r);
    }
    Some((out, l))
}

/// Zero exactly when `m` is a tree (0-hyperbolic) pseudo-metric.
/// Quadruples are taken with repetition, so triangle-inequality failures
/// also show up as a positive defect.
pub fn four_point_defect(m: &FiniteMetric) -> FourPointDefect {
    let n = m.len();
    if let Some((d, l)) = scaled(m) {
        let mut best = 0i128;
        let mut witness = None;
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    for h in k..n {
                        let g = gap([d[i][j] + d[k][h], d[i][k] + d[j][h], d[i][h] + d[j][k]]);
                        if g > best {
                            best = g;
                            witness = Some([i, j, k, h]);
                        }
                    }
                }
            }
        }
        return FourPointDefect {
            defect: Q::new(BigInt::from(best), l),
            witness,
        };
    }
    let d = &m.d;
    let mut best = Q::zero();
    let mut witness = None;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for h in k..n {
                    let g = gap([
                        &d[i][j] + &d[k][h],
                        &d[i][k] + &d[j][h],
                        &d[i][h] + &d[j][k],
                    ]);
                    if g > best {
                        best = g;
                        witness = Some([i, j, k, h]);
                    }
                }
            }
        }
    }
    FourPointDefect {
        defect: best,
        witness,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub tree: MetricTree,
    /// Position of each metric point, in input order.
    pub placements: Vec<TreePoint>,
}

/// Builds a tree realizing an additive pseudo-metric exactly.
///
/// Points are inserted in input order. Each new point `x` hangs off the
/// current tree at height `min (i·j)_x` over placed pairs, attached on the
/// arc `[i, j]` of the first minimizing pair.
pub fn reconstruct_tree(m: &FiniteMetric) -> Result<Reconstruction, TreeError> {
    if m.is_empty() {
        return Err(TreeError::Empty);
    }
    let four = four_point_defect(m);
    if let Some(witness) = four.witness {
        return Err(TreeError::NotAdditive {
            witness,
            defect: Box::new(four.defect),
        });
    }
    let two = Q::from_integer(2.into());
    let mut tree = MetricTree::with_labels(vec![m.labels[0].clone()], Vec::new())?;
    let mut place = vec![0usize];
    for x in 1..m.len() {
        let mut best: Option<(Q, usize, usize)> = None;
        for i in 0..x {
            for j in i..x {
                let h = (m.d(x, i) + m.d(x, j) - m.d(i, j)) / &two;
                if best.as_ref().is_none_or(|(b, _, _)| h < *b) {
                    best = Some((h, i, j));
                }
            }
        }
        let (h, i, j) = best.expect("at least one placed point");
        let along = m.d(x, i) - &h;
        let before = tree.vertex_count();
        let at = tree.vertex_along(place[i], place[j], &along);
        if h.is_positive() {
            let leaf = tree.push_leaf(at, h, m.labels[x].clone());
            place.push(leaf);
        } else {
            if at >= before {
                tree.set_label(at, m.labels[x].clone());
            }
            place.push(at);
        }
    }
    for (i, &p) in place.iter().enumerate() {
        let d = tree.distances_from(p);
        for (j, &q) in place.iter().enumerate() {
            if &d[q] != m.d(i, j) {
                return Err(TreeError::InvalidMetric(format!(
                    "reconstruction misses d({},{})",
                    m.labels[i], m.labels[j]
                )));
            }
        }
    }
    Ok(Reconstruction {
        tree,
        placements: place.into_iter().map(TreePoint::Vertex).collect(),
    })
}
