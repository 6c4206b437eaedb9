use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{
    aligned_table, read_spec, read_text, write_atomic, Config, ExitStatus, Outcome, PipelineError,
};
use crate::algebra::{
    asymptotic_exponents, branch_exponents_at, newton_polygon, parse_bivariate, AlgebraError,
    Monomial,
};
use crate::hyperbolic::{approximate_center, oracle_grid_best, PointH3};
use crate::tree::{
    four_point_defect, half_integer_branch_check, reconstruct_tree, BranchCheck, FiniteMetric,
};
use crate::valuation::{blows_up, generator_matrices_at, limit_metric, CurveSpec, End};
use crate::words::enumerate_ball;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeCheckReport {
    /// The spec or metric file, verbatim.
    pub source: String,
    pub config: Config,
    pub end: Option<String>,
    pub radius: Option<usize>,
    pub points: usize,
    pub defect: Option<String>,
    pub witness: Option<[String; 4]>,
    pub tree: Option<String>,
    pub half_integer: Option<BranchCheck>,
    pub message: Option<String>,
}

impl TreeCheckReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let (Some(e), Some(r)) = (&self.end, self.radius) {
            let _ = writeln!(out, "end: {e}  radius: {r}");
        }
        let _ = writeln!(out, "points: {}", self.points);
        if let Some(m) = &self.message {
            let _ = writeln!(out, "{m}");
        }
        if let Some(d) = &self.defect {
            let _ = writeln!(out, "four-point defect: {d}");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: {}", w.join(" "));
        }
        if let Some(h) = &self.half_integer {
            let _ = writeln!(out, "half-integer branch check: {}", h.holds);
            if let Some((p, q, d)) = &h.worst {
                let _ = writeln!(out, "  worst: d({p}, {q}) = {d}");
            }
        }
        if let Some(t) = &self.tree {
            let _ = writeln!(out, "tree:");
            out.push_str(t);
        }
        out
    }
}

fn check_metric(
    mut report: TreeCheckReport,
    metric: &FiniteMetric,
) -> Result<Outcome<TreeCheckReport>, PipelineError> {
    let defect = four_point_defect(metric);
    report.points = metric.len();
    report.defect = Some(defect.defect.to_string());
    if let Some(w) = defect.witness {
        report.witness = Some(w.map(|k| metric.labels()[k].clone()));
        return Ok(Outcome::failed(
            report,
            ExitStatus::NonAdditive,
            "four-point",
        ));
    }
    let rec = reconstruct_tree(metric)?;
    let half = half_integer_branch_check(&rec.tree, &rec.placements)?;
    let holds = half.holds;
    report.tree = Some(rec.tree.to_edge_list());
    report.half_integer = Some(half);
    Ok(if holds {
        Outcome::ok(report)
    } else {
        Outcome::failed(report, ExitStatus::Disagreement, "half-integer")
    })
}

/// Four-point defect, reconstructed tree and half-integer verdict for the
/// limit metric on a ball.
pub fn tree_check(
    spec: &CurveSpec,
    end: &End,
    radius: usize,
    config: &Config,
) -> Result<Outcome<TreeCheckReport>, PipelineError> {
    if !spec.has_end(end) {
        return Err(PipelineError::EndNotListed(end.to_string()));
    }
    let ball = enumerate_ball(spec.curve.alphabet(), radius)?;
    let mut report = TreeCheckReport {
        source: spec.text.clone(),
        config: config.clone(),
        end: Some(end.to_string()),
        radius: Some(radius),
        points: ball.len(),
        defect: None,
        witness: None,
        tree: None,
        half_integer: None,
        message: None,
    };
    if blows_up(&spec.curve, end, &ball)?.is_none() {
        report.message = Some("no blow-up at this end; limits are bounded".into());
        return Ok(Outcome::failed(report, ExitStatus::NoBlowUp, "blow-up"));
    }
    let metric = limit_metric(&spec.curve, end, &ball, &config.guard, &config.hyperbolic)?;
    check_metric(report, &metric.metric)
}

fn write_tree(
    outcome: &Outcome<TreeCheckReport>,
    tree_out: Option<&Path>,
) -> Result<(), PipelineError> {
    if let (Some(path), Some(tree)) = (tree_out, &outcome.report.tree) {
        write_atomic(path, tree)?;
    }
    Ok(())
}

pub fn run_tree_check(
    spec_path: &Path,
    end: &End,
    radius: usize,
    tree_out: Option<&Path>,
    config: &Config,
) -> Result<Outcome<TreeCheckReport>, PipelineError> {
    let outcome = tree_check(&read_spec(spec_path)?, end, radius, config)?;
    write_tree(&outcome, tree_out)?;
    Ok(outcome)
}

/// The same checks on a metric given directly as `x y distance` lines.
pub fn run_metric_check(
    metric_path: &Path,
    tree_out: Option<&Path>,
    config: &Config,
) -> Result<Outcome<TreeCheckReport>, PipelineError> {
    let text = read_text(metric_path)?;
    let metric = FiniteMetric::parse(&text)?;
    let report = TreeCheckReport {
        source: text,
        config: config.clone(),
        end: None,
        radius: None,
        points: 0,
        defect: None,
        witness: None,
        tree: None,
        half_integer: None,
        message: None,
    };
    let outcome = check_metric(report, &metric)?;
    write_tree(&outcome, tree_out)?;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterReport {
    pub spec: String,
    pub config: Config,
    pub t: f64,
    pub center: PointH3,
    pub r_s: f64,
    pub grid_point: PointH3,
    pub grid_best: f64,
    /// `r_S(center) − grid_best`.
    pub gap: f64,
}

impl CenterReport {
    pub fn render_text(&self) -> String {
        format!(
            "t: {}\ncenter: {}\nr_S(center): {:.6}\ngrid best: {:.6} at {}\ngap: {:.6} (allowed {})\n",
            self.t, self.center, self.r_s, self.grid_best, self.grid_point, self.gap, self.config.center_gap
        )
    }
}

/// Approximate center of the generators at parameter `t`, compared with the
/// best of two oracle grids, one around the center and one around the
/// basepoint.
pub fn center(
    spec: &CurveSpec,
    t: f64,
    config: &Config,
) -> Result<Outcome<CenterReport>, PipelineError> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(PipelineError::BadParameter(t));
    }
    let mats = generator_matrices_at(&spec.curve, &End::Infinity, t)?;
    let ctx = &config.hyperbolic;
    let (c, r) = approximate_center(&mats, ctx, &PointH3::basepoint())?;
    let (radius, count) = (ctx.center.oracle_radius, ctx.center.oracle_points);
    let near = oracle_grid_best(&mats, &c, radius, count)?;
    let far = oracle_grid_best(&mats, &PointH3::basepoint(), radius, count)?;
    let (grid_point, grid_best) = if far.1 < near.1 { far } else { near };
    let report = CenterReport {
        spec: spec.text.clone(),
        config: config.clone(),
        t,
        center: c,
        r_s: r,
        grid_point,
        grid_best,
        gap: r - grid_best,
    };
    Ok(if report.gap <= config.center_gap {
        Outcome::ok(report)
    } else {
        Outcome::failed(report, ExitStatus::Disagreement, "center-gap")
    })
}

pub fn run_center(
    spec_path: &Path,
    t: f64,
    config: &Config,
) -> Result<Outcome<CenterReport>, PipelineError> {
    center(&read_spec(spec_path)?, t, config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub from: Monomial,
    pub to: Monomial,
    pub normal: (i64, i64),
    pub exponent: Option<String>,
    pub edge_polynomial: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchMatch {
    pub exponent: String,
    pub observed: Vec<f64>,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonNumeric {
    pub z: (f64, f64),
    pub matches: Vec<BranchMatch>,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonReport {
    pub polynomial: String,
    pub expanded: String,
    pub support: Vec<Monomial>,
    pub hull: Vec<Monomial>,
    pub edges: Vec<EdgeReport>,
    /// Distinct exponents with the number of branches each governs.
    pub exponents: Vec<(String, i64)>,
    pub numeric: Option<NewtonNumeric>,
}

impl NewtonReport {
    pub fn render_text(&self) -> String {
        let mono = |m: &Monomial| format!("({}, {})", m.0, m.1);
        let mut out = String::new();
        let _ = writeln!(out, "polynomial: {}", self.expanded);
        let _ = writeln!(
            out,
            "support: {}",
            self.support.iter().map(mono).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(
            out,
            "hull: {}",
            self.hull.iter().map(mono).collect::<Vec<_>>().join(" ")
        );
        let rows: Vec<Vec<String>> = self
            .edges
            .iter()
            .map(|e| {
                vec![
                    format!("{} -> {}", mono(&e.from), mono(&e.to)),
                    format!("({}, {})", e.normal.0, e.normal.1),
                    e.exponent.clone().unwrap_or_else(|| "-".into()),
                    e.edge_polynomial.clone(),
                ]
            })
            .collect();
        out.push_str(&aligned_table(
            &[
                "edge".into(),
                "normal".into(),
                "exponent".into(),
                "edge polynomial".into(),
            ],
            &rows,
        ));
        let exps: Vec<String> = self
            .exponents
            .iter()
            .map(|(e, n)| format!("{e} (x{n})"))
            .collect();
        let _ = writeln!(out, "exponents: {}", exps.join(", "));
        if let Some(n) = &self.numeric {
            let _ = writeln!(out, "numeric at z = {:.1}{:+.1}i:", n.z.0, n.z.1);
            for m in &n.matches {
                let obs: Vec<String> = m.observed.iter().map(|x| format!("{x:.5}")).collect();
                let _ = writeln!(
                    out,
                    "  {}: {} (max relative error {:.2e})",
                    m.exponent,
                    obs.join(" "),
                    m.max_relative_error
                );
            }
            if let Some(d) = &n.detail {
                let _ = writeln!(out, "  {d}");
            }
            let _ = writeln!(
                out,
                "numeric check: {}",
                if n.passed { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

/// Newton polygon and branch exponents of a polynomial in `y`, `z`, with an
/// optional comparison against roots solved at one large `z`.
pub fn run_newton(
    text: &str,
    numeric: bool,
    config: &Config,
) -> Result<Outcome<NewtonReport>, PipelineError> {
    let p = parse_bivariate(text).map_err(AlgebraError::from)?;
    let poly = newton_polygon(&p)?;
    let exps = asymptotic_exponents(&p)?;
    let edges = poly
        .edges
        .iter()
        .map(|e| EdgeReport {
            from: e.from,
            to: e.to,
            normal: e.normal,
            exponent: e.data.exponent.as_ref().map(|x| x.to_string()),
            edge_polynomial: e.data.reconstruct().to_string(),
        })
        .collect();
    // Branches per exponent: the y-width of its edge.
    let mut exponents: Vec<(String, i64)> = Vec::new();
    let mut expected: Vec<f64> = Vec::new();
    for (e, data) in &exps {
        let width = data.a * (data.q.degree().unwrap_or(0) as i64);
        let name = e.to_string();
        match exponents.last_mut() {
            Some((last, n)) if *last == name => *n += width,
            _ => exponents.push((name, width)),
        }
        let value = e.to_f64().expect("finite exponent");
        expected.extend(std::iter::repeat_n(value, width as usize));
    }
    let numeric = if numeric {
        let nc = &config.newton;
        let z = Complex64::from_polar(nc.modulus, nc.phase);
        let mut observed = branch_exponents_at(&p, z)?;
        observed.sort_by(f64::total_cmp);
        Some(match_branches(
            &exponents,
            &expected,
            &observed,
            (z.re, z.im),
            nc.relative_tolerance,
        ))
    } else {
        None
    };
    let passed = numeric.as_ref().is_none_or(|n| n.passed);
    let report = NewtonReport {
        polynomial: text.to_string(),
        expanded: p.to_string(),
        support: poly.support.clone(),
        hull: poly.hull.clone(),
        edges,
        exponents,
        numeric,
    };
    Ok(if passed {
        Outcome::ok(report)
    } else {
        Outcome::failed(report, ExitStatus::Disagreement, "newton-numeric")
    })
}

fn match_branches(
    exponents: &[(String, i64)],
    expected: &[f64],
    observed: &[f64],
    z: (f64, f64),
    tol: f64,
) -> NewtonNumeric {
    if expected.len() != observed.len() {
        return NewtonNumeric {
            z,
            matches: Vec::new(),
            passed: false,
            detail: Some(format!(
                "{} nonzero roots for {} expected branches",
                observed.len(),
                expected.len()
            )),
        };
    }
    let mut matches = Vec::new();
    let mut k = 0;
    for (name, n) in exponents {
        let obs = observed[k..k + *n as usize].to_vec();
        let target = expected[k];
        k += *n as usize;
        let err = obs
            .iter()
            .map(|x| (x - target).abs() / target.abs().max(1.0))
            .fold(0.0, f64::max);
        matches.push(BranchMatch {
            exponent: name.clone(),
            observed: obs,
            max_relative_error: err,
        });
    }
    let passed = matches.iter().all(|m| m.max_relative_error <= tol);
    NewtonNumeric {
        z,
        matches,
        passed,
        detail: None,
    }
}
