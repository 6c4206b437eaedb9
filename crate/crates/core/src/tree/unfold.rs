//! Finite pieces of trees carrying group actions, built by gluing translates
//! of a base tree. Used to exercise the hyperbolic branch of the orbit
//! classification on explicit, exactly computable examples.

use std::collections::{BTreeMap, BTreeSet};

use super::{MetricTree, Subtree, TreeError, Q};
use crate::words::{enumerate_ball, Alphabet};

/// Copies `g·T₀` of a base tree for group elements `g` up to some length.
/// The element `g` acts by sending vertex `(h, v)` to `(gh, v)`.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub tree: MetricTree,
    index: BTreeMap<(String, usize), usize>,
}

impl Unfolding {
    /// Vertex of the copy of base vertex `v` in the copy indexed by `g`
    /// (letters `a`, `b`, and `A`, `B` for inverses; identity is `""`).
    pub fn vertex(&self, g: &str, v: usize) -> Option<usize> {
        self.index.get(&(g.to_string(), v)).copied()
    }

    /// `d((1, v), (g, v))`.
    pub fn orbit_distance(&self, g: &str, v: usize) -> Option<Q> {
        let x = self.vertex("", v)?;
        let y = self.vertex(g, v)?;
        Some(self.tree.vertex_distance(x, y))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn dihedral_elements(depth: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for len in 1..=depth {
        for first in ['a', 'b'] {
            let w: String = (0..len)
                .map(|k| {
                    if (k % 2 == 0) == (first == 'a') {
                        'a'
                    } else {
                        'b'
                    }
                })
                .collect();
            out.push(w);
        }
    }
    out
}

fn times_involution(g: &str, s: char) -> String {
    let mut w = g.to_string();
    if w.ends_with(s) {
        w.pop();
    } else {
        w.push(s);
    }
    w
}

/// The action of ⟨α, β | α², β²⟩ where `α`, `β` are involutions fixing
/// `fix_a`, `fix_b` pointwise: copies `g·T₀` and `gα·T₀` are identified
/// along `g·fix_a`, and likewise for `β`.
pub fn unfold_involutions(
    base: &MetricTree,
    fix_a: &Subtree,
    fix_b: &Subtree,
    depth: usize,
) -> Result<Unfolding, TreeError> {
    let elements = dihedral_elements(depth);
    let slot: BTreeMap<&str, usize> = elements
        .iter()
        .enumerate()
        .map(|(k, g)| (g.as_str(), k))
        .collect();
    let n = base.vertex_count();
    let mut uf = UnionFind((0..elements.len() * n).collect());
    for (k, g) in elements.iter().enumerate() {
        for (s, fix) in [('a', fix_a), ('b', fix_b)] {
            if let Some(&j) = slot.get(times_involution(g, s).as_str()) {
                for &v in fix.vertices() {
                    uf.union(k * n + v, j * n + v);
                }
            }
        }
    }
    let mut edges = BTreeSet::new();
    for k in 0..elements.len() {
        for (u, v, len) in base.edges() {
            let (a, b) = (uf.find(k * n + u), uf.find(k * n + v));
            edges.insert((a.min(b), a.max(b), len.clone()));
        }
    }
    assemble(base, &elements, n, &mut uf, edges.into_iter().collect())
}

/// The free action of ⟨α, β⟩ in which `g·T₀` is joined to `gα·T₀` by an edge
/// from `g·x` to `gα·y`, for `(x, y, length)` the gluing data of `α`, and
/// likewise for `β`. The axis of `α` meets `T₀` in the arc `[y, x]`.
pub fn unfold_free(
    base: &MetricTree,
    glue_a: (usize, usize, Q),
    glue_b: (usize, usize, Q),
    depth: usize,
) -> Result<Unfolding, TreeError> {
    let alphabet = Alphabet::from_letters("ab").expect("two letters");
    let ball =
        enumerate_ball(&alphabet, depth).map_err(|e| TreeError::InvalidMetric(e.to_string()))?;
    let name = |w: &crate::words::Word| {
        if w.is_identity() {
            String::new()
        } else {
            alphabet.render(w)
        }
    };
    let elements: Vec<String> = ball.words.iter().map(name).collect();
    let n = base.vertex_count();
    let mut uf = UnionFind((0..elements.len() * n).collect());
    let mut edges = Vec::new();
    for (k, g) in ball.words.iter().enumerate() {
        for (u, v, len) in base.edges() {
            edges.push((k * n + u, k * n + v, len.clone()));
        }
        for (gen, (x, y, len)) in [(0, &glue_a), (1, &glue_b)] {
            if let Some(j) = ball.index_of(&g.mul(&alphabet.generator(gen))) {
                edges.push((k * n + x, j * n + y, len.clone()));
            }
        }
    }
    assemble(base, &elements, n, &mut uf, edges)
}

fn assemble(
    base: &MetricTree,
    elements: &[String],
    n: usize,
    uf: &mut UnionFind,
    edges: Vec<(usize, usize, Q)>,
) -> Result<Unfolding, TreeError> {
    let mut compact: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut index = BTreeMap::new();
    for (k, g) in elements.iter().enumerate() {
        for v in 0..n {
            let root = uf.find(k * n + v);
            let id = *compact.entry(root).or_insert_with(|| {
                labels.push(format!(
                    "{}:{}",
                    if g.is_empty() { "1" } else { g },
                    base.label(v)
                ));
                labels.len() - 1
            });
            index.insert((g.clone(), v), id);
        }
    }
    let edges = edges
        .into_iter()
        .map(|(a, b, l)| (compact[&uf.find(a)], compact[&uf.find(b)], l))
        .collect();
    Ok(Unfolding {
        tree: MetricTree::with_labels(labels, edges)?,
        index,
    })
}
