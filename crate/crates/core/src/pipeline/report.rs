use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{aligned_table, read_spec, write_atomic, Config, ExitStatus, Outcome, PipelineError};
use crate::tree::{four_point_defect, half_integer_branch_check, reconstruct_tree, BranchCheck};
use crate::valuation::{
    check_basepoint, conversion_factor, irreducibility_probe, limit_metric_unchecked,
    numeric_samples_of_trace, CurveSpec, End, MatrixCache, ValuationError,
};
use crate::words::enumerate_ball;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthRow {
    pub word: String,
    pub symbolic: i64,
    /// `None` when the orbit distances are not realizable in a tree.
    pub orbit: Option<i64>,
    /// `t(ρ w)/log s` at each sample, `None` on overflow.
    pub numeric: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub witness: Option<(String, String, u32)>,
    pub commutator_lengths: BTreeMap<u32, i64>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub spec: String,
    pub config: Config,
    pub end: String,
    pub radius: usize,
    pub ts: Vec<f64>,
    pub lengths: Vec<LengthRow>,
    pub blow_up: Option<String>,
    pub message: Option<String>,
    pub irreducibility: Option<ProbeReport>,
    /// Distance from the basepoint to the approximate centers at the two
    /// guard samples.
    pub basepoint_drift: Option<(f64, f64)>,
    pub four_point_defect: Option<String>,
    pub non_additive_witness: Option<[String; 4]>,
    pub tree: Option<String>,
    pub half_integer: Option<BranchCheck>,
    pub simplicial: Option<String>,
    /// Symbolic lengths divided by this give generator-displacement-scaled ones.
    pub conversion_factor: Option<i64>,
    pub checks: Vec<Check>,
    pub status: ExitStatus,
}

const NO_BLOW_UP: &str = "no blow-up at this end; limits are bounded";

impl Report {
    pub fn length_of(&self, word: &str) -> Option<&LengthRow> {
        self.lengths.iter().find(|r| r.word == word)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "end: {}  radius: {}  status: {}",
            self.end,
            self.radius,
            self.status.code()
        );
        let mut header = vec!["word".to_string(), "symbolic".into(), "orbit".into()];
        header.extend(self.ts.iter().map(|t| format!("t={t:e}")));
        let rows: Vec<Vec<String>> = self
            .lengths
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.word.clone(),
                    r.symbolic.to_string(),
                    r.orbit.map_or("-".into(), |v| v.to_string()),
                ];
                row.extend(
                    r.numeric
                        .iter()
                        .map(|x| x.map_or("overflow".into(), |v| format!("{v:.4}"))),
                );
                row
            })
            .collect();
        out.push_str(&aligned_table(&header, &rows));
        if let Some(m) = &self.message {
            let _ = writeln!(out, "{m}");
        }
        if let Some(w) = &self.blow_up {
            let _ = writeln!(out, "blow-up witness: {w}");
        }
        if let Some(p) = &self.irreducibility {
            let lengths: Vec<String> = p
                .commutator_lengths
                .iter()
                .map(|(p, l)| format!("p={p}:{l}"))
                .collect();
            let _ = writeln!(out, "irreducibility: {} {}", p.verdict, lengths.join(" "));
        }
        if let Some((near, far)) = self.basepoint_drift {
            let _ = writeln!(out, "basepoint drift: {near:.4} then {far:.4}");
        }
        if let Some(d) = &self.four_point_defect {
            let _ = writeln!(out, "four-point defect: {d}");
        }
        if let Some(w) = &self.non_additive_witness {
            let _ = writeln!(out, "non-additive witness: {}", w.join(" "));
        }
        if let Some(h) = &self.half_integer {
            let _ = writeln!(out, "half-integer branch check: {}", h.holds);
        }
        if let Some(s) = &self.simplicial {
            let _ = writeln!(out, "simplicial: {s}");
        }
        if let Some(c) = self.conversion_factor {
            let _ = writeln!(out, "conversion factor: {c}");
        }
        if let Some(t) = &self.tree {
            let _ = writeln!(out, "tree:");
            out.push_str(t);
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        out
    }
}

/// All engines on one spec and end. The status is that of the first failing
/// check, in report order.
pub fn limit_report(
    spec: &CurveSpec,
    end: &End,
    radius: usize,
    ts: &[f64],
    config: &Config,
) -> Result<Outcome<Report>, PipelineError> {
    if !spec.has_end(end) {
        return Err(PipelineError::EndNotListed(end.to_string()));
    }
    if ts.iter().any(|&s| !(s > 1.0)) || ts.windows(2).any(|p| p[1] <= p[0]) {
        return Err(ValuationError::BadSamples.into());
    }
    let curve = &spec.curve;
    let al = curve.alphabet();
    let ball = enumerate_ball(al, radius)?;
    let mut cache = MatrixCache::new(curve);
    let mut lengths = Vec::with_capacity(ball.len());
    let mut mismatches = Vec::new();
    let extra = spec.words.iter().filter(|w| !ball.contains(w));
    for w in ball.words.iter().chain(extra) {
        let symbolic = cache.limit_length(end, w)?;
        let orbit = match cache.orbit_limit_length(end, w) {
            Ok(v) => Some(v),
            Err(ValuationError::OrbitNotRealizable { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        if orbit != Some(symbolic) {
            mismatches.push(al.render(w));
        }
        let trace = cache.matrix(w).trace();
        let numeric = ts
            .iter()
            .map(|&s| {
                numeric_samples_of_trace(&trace, end, &[s])
                    .ok()
                    .map(|v| v[0].1)
            })
            .collect();
        lengths.push(LengthRow {
            word: al.render(w),
            symbolic,
            orbit,
            numeric,
        });
    }
    let mut checks = vec![Check {
        name: "engines".into(),
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            format!(
                "symbolic and orbit lengths agree on {} words",
                lengths.len()
            )
        } else {
            format!(
                "symbolic and orbit lengths differ on {}",
                mismatches.join(", ")
            )
        },
    }];
    let blow_up = lengths[..ball.len()]
        .iter()
        .find(|r| r.symbolic > 0)
        .map(|r| r.word.clone());
    let mut report = Report {
        spec: spec.text.clone(),
        config: config.clone(),
        end: end.to_string(),
        radius,
        ts: ts.to_vec(),
        lengths,
        blow_up: blow_up.clone(),
        message: None,
        irreducibility: None,
        basepoint_drift: None,
        four_point_defect: None,
        non_additive_witness: None,
        tree: None,
        half_integer: None,
        simplicial: None,
        conversion_factor: None,
        checks: Vec::new(),
        status: ExitStatus::Ok,
    };
    if blow_up.is_none() {
        report.message = Some(NO_BLOW_UP.into());
        checks.push(Check {
            name: "blow-up".into(),
            passed: false,
            detail: NO_BLOW_UP.into(),
        });
        return Ok(finish(report, checks));
    }

    let probe = irreducibility_probe(curve, end, &ball, config.pmax)?;
    let witness = probe
        .witness
        .as_ref()
        .map(|(u, w, p)| (al.render(u), al.render(w), *p));
    let verdict = match &witness {
        Some((u, w, p)) => format!("witness u={u} w={w} p={p}"),
        None => "irreducibility not established".to_string(),
    };
    report.irreducibility = Some(ProbeReport {
        witness: witness.clone(),
        commutator_lengths: probe.commutator_lengths.clone(),
        verdict,
    });
    report.conversion_factor = Some(conversion_factor(curve, end)?);

    match check_basepoint(curve, end, &config.guard, &config.hyperbolic) {
        Ok(drift) => {
            report.basepoint_drift = Some(drift);
            checks.push(Check {
                name: "basepoint".into(),
                passed: true,
                detail: format!(
                    "distance to approximate centers {:.4} then {:.4}",
                    drift.0, drift.1
                ),
            });
        }
        Err(e @ ValuationError::CenterDrift { .. }) => {
            checks.push(Check {
                name: "basepoint".into(),
                passed: false,
                detail: e.to_string(),
            });
            return Ok(finish(report, checks));
        }
        Err(e) => return Err(e.into()),
    }

    let metric = limit_metric_unchecked(curve, end, &ball)?;
    let defect = four_point_defect(&metric.metric);
    report.four_point_defect = Some(defect.defect.to_string());
    if let Some(w) = defect.witness {
        let names = w.map(|k| metric.metric.labels()[k].clone());
        checks.push(Check {
            name: "four-point".into(),
            passed: false,
            detail: format!("defect {} at {}", defect.defect, names.join(" ")),
        });
        report.non_additive_witness = Some(names);
        return Ok(finish(report, checks));
    }
    checks.push(Check {
        name: "four-point".into(),
        passed: true,
        detail: "defect 0".into(),
    });

    let rec = reconstruct_tree(&metric.metric)?;
    let half = half_integer_branch_check(&rec.tree, &rec.placements)?;
    checks.push(Check {
        name: "half-integer".into(),
        passed: half.holds,
        detail: match &half.worst {
            None => "all branch distances are multiples of 1/2".into(),
            Some((p, q, d)) => format!("d({p}, {q}) = {d}"),
        },
    });
    report.simplicial = Some(if witness.is_some() && half.holds {
        "verified".into()
    } else if witness.is_none() {
        "unverified: no irreducibility witness in search bounds".into()
    } else {
        "unverified: branch distances are not half-integers".into()
    });
    report.tree = Some(rec.tree.to_edge_list());
    report.half_integer = Some(half);
    Ok(finish(report, checks))
}

fn finish(mut report: Report, checks: Vec<Check>) -> Outcome<Report> {
    let failed = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    let status = match failed.as_deref() {
        None => ExitStatus::Ok,
        Some("blow-up") => ExitStatus::NoBlowUp,
        Some("four-point") => ExitStatus::NonAdditive,
        Some("basepoint") => ExitStatus::InputError,
        Some(_) => ExitStatus::Disagreement,
    };
    report.checks = checks;
    report.status = status;
    match failed {
        None => Outcome::ok(report),
        Some(name) => Outcome::failed(report, status, name),
    }
}

/// Reads the spec, builds the report and writes it as JSON to `out`.
pub fn run_limit_report(
    spec_path: &Path,
    end: &End,
    radius: usize,
    ts: &[f64],
    out: Option<&Path>,
    config: &Config,
) -> Result<Outcome<Report>, PipelineError> {
    let spec = read_spec(spec_path)?;
    let outcome = limit_report(&spec, end, radius, ts, config)?;
    if let Some(path) = out {
        write_atomic(path, &outcome.report.to_json())?;
    }
    Ok(outcome)
}
