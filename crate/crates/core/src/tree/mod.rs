//! Finite metric simplicial trees with exact rational edge lengths.

mod hull;
mod isometry;
mod metric;
pub mod unfold;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use hull::{half_integer_branch_check, minimal_subtree, BranchCheck};
pub use isometry::{
    classify_from_orbit, classify_isometry, common_fixed_point, product_translation_length, Core,
    IsometryKind, IsometryReport, OrbitClass, TreeIsometry,
};
pub use metric::{
    four_point_defect, reconstruct_tree, FiniteMetric, FourPointDefect, Reconstruction,
};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has a cycle through edge {0}")]
    Cycle(usize),
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("tree has no vertices")]
    Empty,
    #[error("offset {offset} outside edge {edge}")]
    OffsetOutOfRange { edge: usize, offset: Box<Q> },
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("subtree is empty or not convex")]
    NotConvex,
    #[error("not realizable in a tree: d(x,gx) = {d1}, d(x,g²x) = {d2}")]
    NotRealizable { d1: Box<Q>, d2: Box<Q> },
    #[error("formula requires disjoint cores")]
    CoresNotDisjoint,
    #[error("metric is not additive: witness {witness:?} has defect {defect}")]
    NotAdditive { witness: [usize; 4], defect: Box<Q> },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("empty axis list")]
    EmptyAxes,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A point of a tree: a vertex, or an interior point of an edge at `offset`
/// from the edge's first endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { edge: usize, offset: Q },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTree {
    labels: Vec<String>,
    edges: Vec<(usize, usize, Q)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl MetricTree {
    /// A tree on vertices `0..n` labelled by their index.
    pub fn new(n: usize, edges: Vec<(usize, usize, Q)>) -> Result<Self, TreeError> {
        Self::with_labels((0..n).map(|k| k.to_string()).collect(), edges)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: Vec<(usize, usize, Q)>,
    ) -> Result<Self, TreeError> {
        let n = labels.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (k, (u, v, len)) in edges.iter().enumerate() {
            for &w in [u, v] {
                if w >= n {
                    return Err(TreeError::UnknownVertex(w));
                }
            }
            if !len.is_positive() {
                return Err(TreeError::NonPositiveLength(k));
            }
            let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
            if ru == rv {
                return Err(TreeError::Cycle(k));
            }
            parent[ru] = rv;
            adj[*u].push((*v, k));
            adj[*v].push((*u, k));
        }
        if edges.len() + 1 != n {
            return Err(TreeError::Disconnected);
        }
        Ok(Self { labels, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize, Q)] {
        &self.edges
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.adj[v].iter().map(move |&(w, e)| (w, &self.edges[e].2))
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn total_length(&self) -> Q {
        self.edges.iter().fold(Q::zero(), |acc, e| acc + &e.2)
    }

    /// Exact distances from `root` to every vertex.
    pub fn distances_from(&self, root: usize) -> Vec<Q> {
        let (dist, _) = self.search(root);
        dist
    }

    fn search(&self, root: usize) -> (Vec<Q>, Vec<usize>) {
        let n = self.vertex_count();
        let mut dist = vec![Q::zero(); n];
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(w, e) in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    dist[w] = &dist[u] + &self.edges[e].2;
                    stack.push(w);
                }
            }
        }
        (dist, parent)
    }

    /// Vertices of the arc from `u` to `v`, both included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (_, parent) = self.search(v);
        let mut out = vec![u];
        let mut x = u;
        while x != v {
            x = parent[x];
            out.push(x);
        }
        out
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> Q {
        self.distances_from(u)[v].clone()
    }

    /// Checks bounds and rewrites edge endpoints as vertices.
    pub fn canonical_point(&self, p: &TreePoint) -> Result<TreePoint, TreeError> {
        match p {
            TreePoint::Vertex(v) if *v < self.vertex_count() => Ok(p.clone()),
            TreePoint::Vertex(v) => Err(TreeError::UnknownVertex(*v)),
            TreePoint::OnEdge { edge, offset } => {
                let Some((u, v, len)) = self.edges.get(*edge) else {
                    return Err(TreeError::OffsetOutOfRange {
                        edge: *edge,
                        offset: Box::new(offset.clone()),
                    });
                };
                if offset.is_negative() || offset > len {
                    Err(TreeError::OffsetOutOfRange {
                        edge: *edge,
                        offset: Box::new(offset.clone()),
                    })
                } else if offset.is_zero() {
                    Ok(TreePoint::Vertex(*u))
                } else if offset == len {
                    Ok(TreePoint::Vertex(*v))
                } else {
                    Ok(p.clone())
                }
            }
        }
    }

    /// `(vertex, distance)` anchors: the point is at the given distance from
    /// each listed vertex, and the nearer anchor is on its arc to anything else.
    fn anchors(&self, p: &TreePoint) -> Vec<(usize, Q)> {
        match p {
            TreePoint::Vertex(v) => vec![(*v, Q::zero())],
            TreePoint::OnEdge { edge, offset } => {
                let (u, v, len) = &self.edges[*edge];
                vec![(*u, offset.clone()), (*v, len - offset)]
            }
        }
    }

    /// Distance from `p` to every vertex.
    pub fn point_distances(&self, p: &TreePoint) -> Vec<Q> {
        let mut best: Option<Vec<Q>> = None;
        for (v, off) in self.anchors(p) {
            let d: Vec<Q> = self
                .distances_from(v)
                .into_iter()
                .map(|x| x + &off)
                .collect();
            best = Some(match best {
                None => d,
                Some(b) => b
                    .into_iter()
                    .zip(d)
                    .map(|(x, y)| if y < x { y } else { x })
                    .collect(),
            });
        }
        best.expect("a point has an anchor")
    }

    /// Returns a copy with edge `edge` split at `offset`, plus the new vertex.
    pub fn subdivide(&self, edge: usize, offset: &Q) -> Result<(MetricTree, usize), TreeError> {
        let mut t = self.clone();
        let v = t.split_edge(edge, offset)?;
        Ok((t, v))
    }

    fn split_edge(&mut self, edge: usize, offset: &Q) -> Result<usize, TreeError> {
        let (u, v, len) = self.edges[edge].clone();
        if !offset.is_positive() || offset >= &len {
            return Err(TreeError::OffsetOutOfRange {
                edge,
                offset: Box::new(offset.clone()),
            });
        }
        let w = self.labels.len();
        self.labels.push(format!("_{w}"));
        self.adj.push(Vec::new());
        self.edges[edge] = (u, w, offset.clone());
        for entry in self.adj[v].iter_mut() {
            if entry.1 == edge {
                entry.0 = w;
                entry.1 = self.edges.len();
            }
        }
        for entry in self.adj[u].iter_mut() {
            if entry.1 == edge {
                entry.0 = w;
            }
        }
        self.adj[w].push((u, edge));
        self.adj[w].push((v, self.edges.len()));
        self.edges.push((w, v, len - offset));
        Ok(w)
    }

    fn push_leaf(&mut self, at: usize, len: Q, label: String) -> usize {
        let w = self.labels.len();
        self.labels.push(label);
        self.adj.push(Vec::new());
        let e = self.edges.len();
        self.edges.push((at, w, len));
        self.adj[at].push((w, e));
        self.adj[w].push((at, e));
        w
    }

    /// The vertex at distance `s` from `u` along the arc to `v`, splitting an
    /// edge if the point is interior.
    fn vertex_along(&mut self, u: usize, v: usize, s: &Q) -> usize {
        let path = self.path(u, v);
        let mut walked = Q::zero();
        for pair in path.windows(2) {
            if &walked == s {
                return pair[0];
            }
            let e = self
                .edge_between(pair[0], pair[1])
                .expect("consecutive path vertices");
            let len = self.edges[e].2.clone();
            let next = &walked + &len;
            if &next > s {
                let off = s - &walked;
                let off = if self.edges[e].0 == pair[0] {
                    off
                } else {
                    &len - off
                };
                return self.split_edge(e, &off).expect("interior offset");
            }
            walked = next;
        }
        *path.last().unwrap()
    }

    /// Renames vertex `v`.
    pub fn set_label(&mut self, v: usize, label: String) {
        self.labels[v] = label;
    }

    /// Edge-list text: one `u v p/q` line per edge. A tree without edges is
    /// written as its single vertex label.
    pub fn to_edge_list(&self) -> String {
        if self.edges.is_empty() {
            return format!("{}\n", self.labels[0]);
        }
        let mut out = String::new();
        for (u, v, len) in &self.edges {
            out.push_str(&format!(
                "{} {} {}\n",
                self.labels[*u], self.labels[*v], len
            ));
        }
        out
    }
}

impl fmt::Display for MetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Parses the edge-list format; blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<MetricTree, TreeError> {
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |name: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(name.to_string()).or_insert_with(|| {
            labels.push(name.to_string());
            labels.len() - 1
        })
    };
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| TreeError::Parse {
            line: k + 1,
            message,
        };
        match fields.as_slice() {
            [v] => {
                intern(v, &mut labels);
            }
            [u, v, len] => {
                let len = Q::from_str(len).map_err(|_| err(format!("bad length {len:?}")))?;
                let (u, v) = (intern(u, &mut labels), intern(v, &mut labels));
                edges.push((u, v, len));
            }
            _ => return Err(err(format!("expected `u v length`, got {line:?}"))),
        }
    }
    MetricTree::with_labels(labels, edges)
}

/// Exact distance between two points of `t`.
pub fn tree_distance(t: &MetricTree, p: &TreePoint, q: &TreePoint) -> Result<Q, TreeError> {
    let p = t.canonical_point(p)?;
    let q = t.canonical_point(q)?;
    if let (
        TreePoint::OnEdge {
            edge: e1,
            offset: o1,
        },
        TreePoint::OnEdge {
            edge: e2,
            offset: o2,
        },
    ) = (&p, &q)
    {
        if e1 == e2 {
            return Ok((o1 - o2).abs());
        }
    }
    let dp = t.point_distances(&p);
    Ok(t.anchors(&q)
        .into_iter()
        .map(|(v, off)| &dp[v] + off)
        .min()
        .expect("a point has an anchor"))
}

/// A nonempty convex set of vertices, spanning the subtree they induce.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subtree {
    vertices: BTreeSet<usize>,
}

impl Subtree {
    pub fn new(
        t: &MetricTree,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Self, TreeError> {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        let Some(&first) = vertices.iter().next() else {
            return Err(TreeError::NotConvex);
        };
        if let Some(&bad) = vertices.iter().find(|&&v| v >= t.vertex_count()) {
            return Err(TreeError::UnknownVertex(bad));
        }
        // induced subgraph connected ⟺ convex in a tree
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(u) = stack.pop() {
            for (w, _) in t.neighbors(u) {
                if vertices.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != vertices.len() {
            return Err(TreeError::NotConvex);
        }
        Ok(Self { vertices })
    }

    pub fn whole(t: &MetricTree) -> Self {
        Self {
            vertices: (0..t.vertex_count()).collect(),
        }
    }

    pub fn path(t: &MetricTree, u: usize, v: usize) -> Self {
        Self {
            vertices: t.path(u, v).into_iter().collect(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn intersection(&self, other: &Subtree) -> Option<Subtree> {
        let vertices: BTreeSet<usize> = self
            .vertices
            .intersection(&other.vertices)
            .copied()
            .collect();
        (!vertices.is_empty()).then_some(Subtree { vertices })
    }

    /// Distance between two vertex-bounded subtrees; realized at vertices.
    pub fn distance(&self, t: &MetricTree, other: &Subtree) -> Q {
        let mut best: Option<Q> = None;
        for &u in &self.vertices {
            let d = t.distances_from(u);
            for &v in &other.vertices {
                if best.as_ref().is_none_or(|b| d[v] < *b) {
                    best = Some(d[v].clone());
                }
            }
        }
        best.expect("subtrees are nonempty")
    }
}
