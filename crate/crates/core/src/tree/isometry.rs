use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{MetricTree, Subtree, TreeError, TreePoint, Q};

/// An automorphism of a finite metric tree, given by its vertex permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeIsometry {
    map: Vec<usize>,
}

impl TreeIsometry {
    pub fn new(t: &MetricTree, map: Vec<usize>) -> Result<Self, TreeError> {
        let n = t.vertex_count();
        if map.len() != n {
            return Err(TreeError::NotIsometry(format!(
                "map has {} entries for {n} vertices",
                map.len()
            )));
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut hit[v], true) {
                return Err(TreeError::NotIsometry(
                    "vertex map is not a bijection".into(),
                ));
            }
        }
        for (u, v, len) in t.edges() {
            match t.edge_between(map[*u], map[*v]) {
                Some(e) if &t.edges()[e].2 == len => {}
                Some(_) => {
                    return Err(TreeError::NotIsometry(format!(
                        "edge {}-{} changes length",
                        t.label(*u),
                        t.label(*v)
                    )))
                }
                None => {
                    return Err(TreeError::NotIsometry(format!(
                        "edge {}-{} is not mapped to an edge",
                        t.label(*u),
                        t.label(*v)
                    )))
                }
            }
        }
        Ok(Self { map })
    }

    pub fn identity(t: &MetricTree) -> Self {
        Self {
            map: (0..t.vertex_count()).collect(),
        }
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.map[v]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TreeIsometry) -> TreeIsometry {
        TreeIsometry {
            map: other.map.iter().map(|&v| self.map[v]).collect(),
        }
    }

    pub fn apply(&self, t: &MetricTree, p: &TreePoint) -> TreePoint {
        match p {
            TreePoint::Vertex(v) => TreePoint::Vertex(self.map[*v]),
            TreePoint::OnEdge { edge, offset } => {
                let (u, v, len) = &t.edges()[*edge];
                let image = t
                    .edge_between(self.map[*u], self.map[*v])
                    .expect("validated isometry");
                let offset = if t.edges()[image].0 == self.map[*u] {
                    offset.clone()
                } else {
                    len - offset
                };
                TreePoint::OnEdge {
                    edge: image,
                    offset,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Elliptic,
    Hyperbolic,
}

/// Fixed set of an elliptic tree isometry: a vertex subtree, or the midpoint
/// of the single inverted edge when no vertex is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Core {
    Vertices(Subtree),
    Midpoint(TreePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryReport {
    pub kind: IsometryKind,
    pub translation_length: Q,
    pub core: Core,
}

/// Every automorphism of a finite tree fixes a vertex or inverts an edge.
pub fn classify_isometry(t: &MetricTree, tau: &TreeIsometry) -> IsometryReport {
    let fixed: Vec<usize> = (0..t.vertex_count()).filter(|&v| tau.map[v] == v).collect();
    let core = if fixed.is_empty() {
        let (edge, (_, _, len)) = t
            .edges()
            .iter()
            .enumerate()
            .find(|(_, (u, v, _))| tau.map[*u] == *v && tau.map[*v] == *u)
            .expect("a fixed-point-free tree automorphism inverts an edge");
        Core::Midpoint(TreePoint::OnEdge {
            edge,
            offset: len / Q::from_integer(2.into()),
        })
    } else {
        Core::Vertices(Subtree::new(t, fixed).expect("fixed set of a tree automorphism is convex"))
    };
    IsometryReport {
        kind: IsometryKind::Elliptic,
        translation_length: Q::zero(),
        core,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub kind: IsometryKind,
    pub translation_length: Q,
    /// `d(x, Fix g)`, known in the elliptic case.
    pub fix_distance: Option<Q>,
}

/// Type and translation length of `g` from `d1 = d(x, gx)` and
/// `d2 = d(x, g²x)` in any ℝ-tree.
pub fn classify_from_orbit(d1: &Q, d2: &Q) -> Result<OrbitClass, TreeError> {
    if d1.is_negative() || d2.is_negative() || d2 > &(d1 * Q::from_integer(2.into())) {
        return Err(TreeError::NotRealizable {
            d1: Box::new(d1.clone()),
            d2: Box::new(d2.clone()),
        });
    }
    Ok(if d2 > d1 {
        OrbitClass {
            kind: IsometryKind::Hyperbolic,
            translation_length: d2 - d1,
            fix_distance: None,
        }
    } else {
        OrbitClass {
            kind: IsometryKind::Elliptic,
            translation_length: Q::zero(),
            fix_distance: Some(d1 / Q::from_integer(2.into())),
        }
    })
}

/// `t(αβ) = t(α) + t(β) + 2·d(core α, core β)` for disjoint cores.
pub fn product_translation_length(t_a: &Q, t_b: &Q, core_dist: &Q) -> Result<Q, TreeError> {
    if !core_dist.is_positive() {
        return Err(TreeError::CoresNotDisjoint);
    }
    Ok(t_a + t_b + core_dist * Q::from_integer(2.into()))
}

/// A point common to all `cores`, which exists exactly when they pairwise
/// intersect. Returns the smallest common vertex.
pub fn common_fixed_point(cores: &[Subtree]) -> Option<TreePoint> {
    let Some(first) = cores.first() else {
        return Some(TreePoint::Vertex(0));
    };
    for (i, a) in cores.iter().enumerate() {
        for b in &cores[i + 1..] {
            a.intersection(b)?;
        }
    }
    let mut common = first.clone();
    for c in &cores[1..] {
        common = common.intersection(c)?;
    }
    common
        .vertices()
        .iter()
        .next()
        .map(|&v| TreePoint::Vertex(v))
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::tree_distance;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// Every vertex and the points at eighths along each edge.
    fn sample_points(t: &MetricTree) -> Vec<TreePoint> {
        let mut out: Vec<TreePoint> = (0..t.vertex_count()).map(TreePoint::Vertex).collect();
        for (e, (_, _, len)) in t.edges().iter().enumerate() {
            for k in 1..8 {
                out.push(TreePoint::OnEdge {
                    edge: e,
                    offset: len * q(k, 8),
                });
            }
        }
        out
    }

    fn brute_min_displacement(t: &MetricTree, tau: &TreeIsometry) -> (Q, Vec<TreePoint>) {
        let pts = sample_points(t);
        let ds: Vec<Q> = pts
            .iter()
            .map(|p| tree_distance(t, p, &tau.apply(t, p)).unwrap())
            .collect();
        let min = ds.iter().min().unwrap().clone();
        let argmin = pts
            .into_iter()
            .zip(ds)
            .filter(|(_, d)| *d == min)
            .map(|(p, _)| p)
            .collect();
        (min, argmin)
    }

    #[test]
    fn identity_is_elliptic_with_full_core() {
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(1), 6);
        let r = classify_isometry(&t, &TreeIsometry::identity(&t));
        assert_eq!(r.kind, IsometryKind::Elliptic);
        assert_eq!(r.core, Core::Vertices(Subtree::whole(&t)));
        assert!(r.translation_length.is_zero());
    }

    #[test]
    fn path_reflection_fixes_center() {
        let t = MetricTree::new(3, vec![(0, 1, qi(1)), (1, 2, qi(1))]).unwrap();
        let tau = TreeIsometry::new(&t, vec![2, 1, 0]).unwrap();
        let r = classify_isometry(&t, &tau);
        assert_eq!(r.core, Core::Vertices(Subtree::new(&t, [1]).unwrap()));
        let (min, argmin) = brute_min_displacement(&t, &tau);
        assert!(min.is_zero());
        assert_eq!(argmin, vec![TreePoint::Vertex(1)]);
    }

    #[test]
    fn edge_inversion_fixes_midpoint() {
        let t = MetricTree::new(2, vec![(0, 1, qi(1))]).unwrap();
        let tau = TreeIsometry::new(&t, vec![1, 0]).unwrap();
        let r = classify_isometry(&t, &tau);
        assert_eq!(
            r.core,
            Core::Midpoint(TreePoint::OnEdge {
                edge: 0,
                offset: q(1, 2)
            })
        );
        assert!(r.translation_length.is_zero());
    }

    #[test]
    fn rejects_non_isometries() {
        let t = MetricTree::new(3, vec![(0, 1, qi(1)), (1, 2, qi(2))]).unwrap();
        assert!(TreeIsometry::new(&t, vec![2, 1, 0]).is_err());
        assert!(TreeIsometry::new(&t, vec![0, 0, 2]).is_err());
        assert!(TreeIsometry::new(&t, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn orbit_examples() {
        let c = classify_from_orbit(&qi(0), &qi(0)).unwrap();
        assert_eq!(
            (c.kind, c.translation_length),
            (IsometryKind::Elliptic, qi(0))
        );
        let c = classify_from_orbit(&qi(4), &qi(8)).unwrap();
        assert_eq!(
            (c.kind, c.translation_length),
            (IsometryKind::Hyperbolic, qi(4))
        );
        let c = classify_from_orbit(&qi(4), &qi(4)).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert_eq!(c.fix_distance, Some(qi(2)));
        assert!(matches!(
            classify_from_orbit(&qi(1), &qi(3)),
            Err(TreeError::NotRealizable { .. })
        ));
    }

    #[test]
    fn line_action_orbits() {
        // translation by 4 on a path 0..=12; x at 0 sits on the axis
        let n = 13;
        let t = MetricTree::new(n, (0..n - 1).map(|k| (k, k + 1, qi(1))).collect()).unwrap();
        let d1 = t.vertex_distance(0, 4);
        let d2 = t.vertex_distance(0, 8);
        let c = classify_from_orbit(&d1, &d2).unwrap();
        assert_eq!(
            (c.kind, c.translation_length),
            (IsometryKind::Hyperbolic, qi(4))
        );
    }

    #[test]
    fn tripod_rotation_orbit() {
        // rotating three legs of length 2; x at a leaf
        let t = MetricTree::new(4, vec![(0, 1, qi(2)), (0, 2, qi(2)), (0, 3, qi(2))]).unwrap();
        let tau = TreeIsometry::new(&t, vec![0, 2, 3, 1]).unwrap();
        let x = TreePoint::Vertex(1);
        let d1 = tree_distance(&t, &x, &tau.apply(&t, &x)).unwrap();
        let d2 = tree_distance(&t, &x, &tau.compose(&tau).apply(&t, &x)).unwrap();
        let c = classify_from_orbit(&d1, &d2).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert_eq!(c.fix_distance, Some(qi(2)));
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(
            product_translation_length(&qi(0), &qi(0), &qi(1)).unwrap(),
            qi(2)
        );
        assert_eq!(
            product_translation_length(&qi(2), &qi(0), &qi(2)).unwrap(),
            qi(6)
        );
        assert_eq!(
            product_translation_length(&qi(0), &qi(0), &qi(2)).unwrap(),
            qi(4)
        );
        assert_eq!(
            product_translation_length(&qi(1), &qi(1), &qi(0)),
            Err(TreeError::CoresNotDisjoint)
        );
    }

    #[test]
    fn fixed_point_examples() {
        let star = MetricTree::new(4, vec![(0, 1, qi(1)), (0, 2, qi(1)), (0, 3, qi(1))]).unwrap();
        let whole = Subtree::whole(&star);
        assert!(common_fixed_point(&[whole.clone(), whole]).is_some());
        let xc = Subtree::path(&star, 1, 0);
        let yc = Subtree::path(&star, 2, 0);
        assert_eq!(common_fixed_point(&[xc, yc]), Some(TreePoint::Vertex(0)));
        let x = Subtree::new(&star, [1]).unwrap();
        let y = Subtree::new(&star, [2]).unwrap();
        assert_eq!(common_fixed_point(&[x, y]), None);
    }

    #[test]
    fn helly_on_random_subtrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut hits = 0;
        for _ in 0..300 {
            let t = {
                let n = rng.gen_range(3..12);
                random_tree(&mut rng, n)
            };
            let cores: Vec<Subtree> = (0..3).map(|_| random_subtree(&mut rng, &t)).collect();
            let pairwise =
                (0..3).all(|i| (i + 1..3).all(|j| cores[i].intersection(&cores[j]).is_some()));
            let found = common_fixed_point(&cores);
            assert_eq!(found.is_some(), pairwise);
            if let Some(TreePoint::Vertex(v)) = found {
                hits += 1;
                assert!(cores.iter().all(|c| c.contains(v)));
            }
        }
        assert!(hits > 30);
    }

    #[test]
    fn elliptic_orbits_never_look_hyperbolic() {
        // pendant copies permuted cyclically at a random vertex
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let base = {
                let n = rng.gen_range(1..6);
                random_tree(&mut rng, n)
            };
            let pendant = {
                let n = rng.gen_range(1..4);
                random_tree(&mut rng, n)
            };
            let copies = rng.gen_range(2..4);
            let at = rng.gen_range(0..base.vertex_count());
            let stem = q(rng.gen_range(1..4), 2);
            let (nb, np) = (base.vertex_count(), pendant.vertex_count());
            let mut edges: Vec<(usize, usize, Q)> = base.edges().to_vec();
            for c in 0..copies {
                let off = nb + c * np;
                edges.push((at, off, stem.clone()));
                edges.extend(
                    pendant
                        .edges()
                        .iter()
                        .map(|(u, v, l)| (u + off, v + off, l.clone())),
                );
            }
            let n = nb + copies * np;
            let t = MetricTree::new(n, edges).unwrap();
            let map: Vec<usize> = (0..n)
                .map(|v| {
                    if v < nb {
                        v
                    } else {
                        nb + ((v - nb) / np + 1) % copies * np + (v - nb) % np
                    }
                })
                .collect();
            let tau = TreeIsometry::new(&t, map).unwrap();
            let tau2 = tau.compose(&tau);
            let report = classify_isometry(&t, &tau);
            let Core::Vertices(core) = &report.core else {
                panic!("a vertex is fixed")
            };
            let expected: BTreeSet<usize> = (0..nb).collect();
            assert_eq!(core.vertices(), &expected);
            for x in 0..n {
                let d1 = t.vertex_distance(x, tau.vertex_image(x));
                let d2 = t.vertex_distance(x, tau2.vertex_image(x));
                let c = classify_from_orbit(&d1, &d2).unwrap();
                assert_eq!(c.translation_length, qi(0));
                let to_core = core.distance(&t, &Subtree::new(&t, [x]).unwrap());
                assert_eq!(c.fix_distance, Some(to_core));
            }
        }
    }
}
