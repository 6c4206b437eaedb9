use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{tree_distance, MetricTree, Subtree, TreeError, TreePoint, Q};

/// Convex hull of the union of `axes`: the tree left after repeatedly
/// pruning leaves outside the union. Vertex labels are kept.
pub fn minimal_subtree(t: &MetricTree, axes: &[Subtree]) -> Result<MetricTree, TreeError> {
    if axes.is_empty() {
        return Err(TreeError::EmptyAxes);
    }
    let keep_set: BTreeSet<usize> = axes
        .iter()
        .flat_map(|a| a.vertices().iter().copied())
        .collect();
    let n = t.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut stack: Vec<usize> = (0..n)
        .filter(|&v| degree[v] <= 1 && !keep_set.contains(&v))
        .collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for (w, _) in t.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] <= 1 && !keep_set.contains(&w) {
                    stack.push(w);
                }
            }
        }
    }
    let ids: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut new_id = vec![usize::MAX; n];
    for (k, &v) in ids.iter().enumerate() {
        new_id[v] = k;
    }
    let edges = t
        .edges()
        .iter()
        .filter(|(u, v, _)| alive[*u] && alive[*v])
        .map(|(u, v, l)| (new_id[*u], new_id[*v], l.clone()))
        .collect();
    MetricTree::with_labels(ids.iter().map(|&v| t.label(v).to_string()).collect(), edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCheck {
    pub holds: bool,
    /// The pair whose doubled distance is farthest from an integer.
    pub worst: Option<(String, String, String)>,
}

fn point_name(t: &MetricTree, p: &TreePoint) -> String {
    match p {
        TreePoint::Vertex(v) => t.label(*v).to_string(),
        TreePoint::OnEdge { edge, offset } => {
            let (u, v, _) = &t.edges()[*edge];
            format!("{}+{}→{}", t.label(*u), offset, t.label(*v))
        }
    }
}

/// Distance of `2d` to the nearest integer.
fn half_integer_gap(d: &Q) -> Q {
    let two = d * Q::from_integer(2.into());
    let frac = &two - two.floor();
    let other = Q::one() - &frac;
    if frac < other {
        frac
    } else {
        other
    }
}

/// Whether all distances among branch vertices (degree ≥ 3), and from each
/// placement to each branch vertex, are multiples of 1/2.
pub fn half_integer_branch_check(
    t: &MetricTree,
    placements: &[TreePoint],
) -> Result<BranchCheck, TreeError> {
    let branch: Vec<TreePoint> = (0..t.vertex_count())
        .filter(|&v| t.degree(v) >= 3)
        .map(TreePoint::Vertex)
        .collect();
    let mut worst: Option<(Q, String, String, Q)> = None;
    let mut consider = |p: &TreePoint, q: &TreePoint| -> Result<(), TreeError> {
        let d = tree_distance(t, p, q)?;
        let g = half_integer_gap(&d);
        if !g.is_zero() && worst.as_ref().is_none_or(|w| g > w.0) {
            worst = Some((g, point_name(t, p), point_name(t, q), d));
        }
        Ok(())
    };
    for (i, a) in branch.iter().enumerate() {
        for b in &branch[i + 1..] {
            consider(a, b)?;
        }
    }
    for p in placements {
        for b in &branch {
            consider(p, b)?;
        }
    }
    Ok(BranchCheck {
        holds: worst.is_none(),
        worst: worst.map(|(_, a, b, d)| (a, b, d.to_string())),
    })
}
