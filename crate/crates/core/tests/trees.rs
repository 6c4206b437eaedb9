mod support;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{q, qi, random_subtree, random_tree};
use treelimits::tree::{
    four_point_defect, minimal_subtree, parse_edge_list, reconstruct_tree, FiniteMetric,
    MetricTree, TreePoint, Q,
};

/// Triangle inequality plus the four-point condition over distinct indices.
fn additive_oracle(d: &[Vec<Q>]) -> bool {
    let n = d.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d[i][k] > &d[i][j] + &d[j][k] {
                    return false;
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for h in k + 1..n {
                    let mut s = [
                        &d[i][j] + &d[k][h],
                        &d[i][k] + &d[j][h],
                        &d[i][h] + &d[j][k],
                    ];
                    s.sort();
                    if s[2] != s[1] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn sample_points(rng: &mut impl Rng, t: &MetricTree, m: usize) -> Vec<TreePoint> {
    (0..m)
        .map(|_| {
            if rng.gen_bool(0.7) || t.edges().is_empty() {
                TreePoint::Vertex(rng.gen_range(0..t.vertex_count()))
            } else {
                let e = rng.gen_range(0..t.edges().len());
                let len = &t.edges()[e].2;
                TreePoint::OnEdge {
                    edge: e,
                    offset: len * q(rng.gen_range(1..4), 4),
                }
            }
        })
        .collect()
}

#[test]
fn four_point_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut seen = [0usize; 2];
    for case in 0..500 {
        let t = {
            let n = rng.gen_range(2..10);
            random_tree(&mut rng, n)
        };
        let pts = {
            let n = rng.gen_range(4..8);
            sample_points(&mut rng, &t, n)
        };
        let m = FiniteMetric::from_tree_points(&t, &pts).unwrap();
        let mut d = m.rows().to_vec();
        if case % 2 == 1 {
            let i = rng.gen_range(0..d.len());
            let j = (i + rng.gen_range(1..d.len())) % d.len();
            let bump = q(rng.gen_range(1..5), 3);
            d[i][j] = &d[i][j] + &bump;
            d[j][i] = d[i][j].clone();
        }
        let m = FiniteMetric::new(m.labels().to_vec(), d.clone()).unwrap();
        let additive = additive_oracle(&d);
        seen[additive as usize] += 1;
        let defect = four_point_defect(&m);
        assert_eq!(defect.defect == qi(0), additive, "case {case}");
        assert_eq!(defect.witness.is_none(), additive, "case {case}");
        match reconstruct_tree(&m) {
            Ok(r) => {
                assert!(additive, "case {case}");
                for i in 0..m.len() {
                    for j in 0..m.len() {
                        let x = treelimits::tree::tree_distance(
                            &r.tree,
                            &r.placements[i],
                            &r.placements[j],
                        )
                        .unwrap();
                        assert_eq!(&x, m.d(i, j));
                    }
                }
            }
            Err(_) => assert!(!additive, "case {case}"),
        }
    }
    assert!(
        seen[0] > 100 && seen[1] > 100,
        "both kinds exercised: {seen:?}"
    );
}

#[test]
fn edge_list_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let t = {
            let n = rng.gen_range(1..12);
            random_tree(&mut rng, n)
        };
        let back = parse_edge_list(&t.to_edge_list()).unwrap();
        assert_eq!(back.vertex_count(), t.vertex_count());
        let index =
            |tree: &MetricTree, name: &str| tree.labels().iter().position(|l| l == name).unwrap();
        for u in 0..t.vertex_count() {
            for v in 0..t.vertex_count() {
                let (bu, bv) = (index(&back, t.label(u)), index(&back, t.label(v)));
                assert_eq!(back.vertex_distance(bu, bv), t.vertex_distance(u, v));
            }
        }
    }
}

#[test]
fn hull_is_union_of_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let t = {
            let n = rng.gen_range(2..14);
            random_tree(&mut rng, n)
        };
        let axes: Vec<_> = (0..rng.gen_range(1..4))
            .map(|_| random_subtree(&mut rng, &t))
            .collect();
        let marked: Vec<usize> = axes
            .iter()
            .flat_map(|a| a.vertices().iter().copied())
            .collect();
        let mut expected = BTreeSet::new();
        for &u in &marked {
            for &v in &marked {
                expected.extend(t.path(u, v));
            }
        }
        let hull = minimal_subtree(&t, &axes).unwrap();
        let got: BTreeSet<&str> = hull.labels().iter().map(String::as_str).collect();
        let want: BTreeSet<&str> = expected.iter().map(|&v| t.label(v)).collect();
        assert_eq!(got, want);
        let total: Q = t
            .edges()
            .iter()
            .filter(|(u, v, _)| expected.contains(u) && expected.contains(v))
            .map(|(_, _, l)| l.clone())
            .sum();
        assert_eq!(hull.total_length(), total);
    }
}
