//! Orchestration behind the command-line tool: configuration, the limit
//! report, tree checks, the center check and Newton exponent reports.

mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::hyperbolic::{HyperbolicContext, HyperbolicError};
use crate::tree::TreeError;
use crate::valuation::{
    numeric_samples_of_trace, parse_curve_spec, BasepointGuard, CurveSpec, End, MatrixCache,
    ValuationError,
};
use crate::words::{enumerate_ball, Word, WordError};

pub use commands::{
    center, run_center, run_metric_check, run_newton, run_tree_check, tree_check, BranchMatch,
    CenterReport, EdgeReport, NewtonNumeric, NewtonReport, TreeCheckReport,
};
pub use report::{limit_report, run_limit_report, Check, LengthRow, ProbeReport, Report};

/// Name of the environment variable holding a TOML config path.
pub const CONFIG_ENV: &str = "TREELIMITS_CONFIG";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("end {0} is not listed in the spec")]
    EndNotListed(String),
    #[error("t must be greater than 1, got {0}")]
    BadParameter(f64),
    #[error("zero length function has no projective class")]
    ZeroLengthFunction,
    #[error("length vectors cover {0} and {1} words")]
    LengthMismatch(usize, usize),
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Ok,
    InputError,
    NoBlowUp,
    Disagreement,
    NonAdditive,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::InputError => 1,
            ExitStatus::NoBlowUp => 2,
            ExitStatus::Disagreement => 3,
            ExitStatus::NonAdditive => 4,
        }
    }
}

/// Settings shared by all commands. Every field has a default and may be
/// overridden from the TOML file named by `TREELIMITS_CONFIG`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Numeric sample points, as chart coordinates of the end.
    pub ts: Vec<f64>,
    pub radius: usize,
    /// Largest commutator exponent tried by the irreducibility probe.
    pub pmax: u32,
    pub guard: BasepointGuard,
    pub hyperbolic: HyperbolicContext,
    /// Allowed gap between the computed center and the oracle grid.
    pub center_gap: f64,
    /// Allowed projective sup-norm distance in `compare`.
    pub compare_tolerance: f64,
    /// Numeric lengths at or below this count as zero when normalizing.
    pub zero_threshold: f64,
    pub newton: NewtonConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NewtonConfig {
    /// `|z|` at which branches are solved numerically.
    pub modulus: f64,
    /// `arg z`, kept away from 0 so real coefficients do not produce
    /// coincident roots.
    pub phase: f64,
    /// Allowed `|observed − exponent| / max(|exponent|, 1)`.
    pub relative_tolerance: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            modulus: 1e4,
            phase: 0.5,
            relative_tolerance: 0.02,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Self {
            ts: vec![1e3, 1e4, 1e5, 1e6],
            radius: 3,
            pmax: 4,
            guard: BasepointGuard::default(),
            hyperbolic: HyperbolicContext::default(),
            center_gap: 1.0,
            compare_tolerance: 0.05,
            zero_threshold: 1e-9,
            newton: NewtonConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = read_text(path)?;
        Self::from_toml(&text).map_err(|message| PipelineError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    /// The file named by `TREELIMITS_CONFIG`, or the defaults when unset.
    pub fn from_env() -> Result<Self, PipelineError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_spec(path: &Path) -> Result<CurveSpec, PipelineError> {
    Ok(parse_curve_spec(&read_text(path)?)?)
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), PipelineError> {
    let io = |e: std::io::Error| PipelineError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let name = path
        .file_name()
        .ok_or_else(|| io(std::io::Error::other("not a file path")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

/// Two length vectors on a common ball, each divided by its first nonzero
/// entry in shortlex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectiveLengthComparison {
    pub ball: Vec<String>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub distance: f64,
}

fn normalize(v: &[f64], zero: f64) -> Result<Vec<f64>, PipelineError> {
    let pivot = v
        .iter()
        .copied()
        .find(|x| x.abs() > zero)
        .ok_or(PipelineError::ZeroLengthFunction)?;
    Ok(v.iter().map(|x| x / pivot).collect())
}

/// Sup-norm distance between the projective classes of two length vectors
/// listed in the order of `ball` (which must be shortlex).
pub fn projective_compare(
    first: &[f64],
    second: &[f64],
    ball: &[Word],
    render: impl Fn(&Word) -> String,
    zero: f64,
) -> Result<ProjectiveLengthComparison, PipelineError> {
    if first.len() != ball.len() || second.len() != ball.len() {
        return Err(PipelineError::LengthMismatch(first.len(), second.len()));
    }
    let (a, b) = (normalize(first, zero)?, normalize(second, zero)?);
    let distance = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(ProjectiveLengthComparison {
        ball: ball.iter().map(render).collect(),
        first: a,
        second: b,
        distance,
    })
}

impl ProjectiveLengthComparison {
    pub fn render_text(&self, tolerance: f64) -> String {
        let rows: Vec<Vec<String>> = self
            .ball
            .iter()
            .zip(self.first.iter().zip(&self.second))
            .map(|(w, (a, b))| {
                vec![
                    w.clone(),
                    format!("{a:.4}"),
                    format!("{b:.4}"),
                    format!("{:.4}", (a - b).abs()),
                ]
            })
            .collect();
        let mut out = aligned_table(
            &[
                "word".into(),
                "numeric".into(),
                "symbolic".into(),
                "|diff|".into(),
            ],
            &rows,
        );
        out.push_str(&format!(
            "projective distance: {:.6} (allowed {tolerance})\n",
            self.distance
        ));
        out
    }
}

/// Numeric lengths at chart coordinate `t` against the symbolic limit, as
/// projective classes on the ball.
pub fn compare(
    spec: &CurveSpec,
    end: &End,
    t: f64,
    radius: usize,
    config: &Config,
) -> Result<Outcome<ProjectiveLengthComparison>, PipelineError> {
    if !spec.has_end(end) {
        return Err(PipelineError::EndNotListed(end.to_string()));
    }
    if !(t > 1.0) || !t.is_finite() {
        return Err(PipelineError::BadParameter(t));
    }
    let al = spec.curve.alphabet();
    let ball = enumerate_ball(al, radius)?;
    let mut cache = MatrixCache::new(&spec.curve);
    let mut numeric = Vec::with_capacity(ball.len());
    let mut symbolic = Vec::with_capacity(ball.len());
    for w in &ball.words {
        symbolic.push(cache.limit_length(end, w)? as f64);
        numeric.push(numeric_samples_of_trace(&cache.matrix(w).trace(), end, &[t])?[0].1);
    }
    let c = projective_compare(
        &numeric,
        &symbolic,
        &ball.words,
        |w| al.render(w),
        config.zero_threshold,
    )?;
    Ok(if c.distance <= config.compare_tolerance {
        Outcome::ok(c)
    } else {
        Outcome::failed(c, ExitStatus::Disagreement, "projective-distance")
    })
}

pub fn run_compare(
    spec_path: &Path,
    end: &End,
    t: f64,
    radius: usize,
    config: &Config,
) -> Result<Outcome<ProjectiveLengthComparison>, PipelineError> {
    compare(&read_spec(spec_path)?, end, t, radius, config)
}

/// Result of a command together with the exit status it implies.
#[derive(Debug, Clone)]
pub struct Outcome<R> {
    pub report: R,
    pub status: ExitStatus,
    /// Name of the first failing check, if any.
    pub failure: Option<String>,
}

impl<R> Outcome<R> {
    fn ok(report: R) -> Self {
        Self {
            report,
            status: ExitStatus::Ok,
            failure: None,
        }
    }

    fn failed(report: R, status: ExitStatus, check: impl Into<String>) -> Self {
        Self {
            report,
            status,
            failure: Some(check.into()),
        }
    }
}

/// Left-aligned first column, right-aligned others.
pub(crate) fn aligned_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (k, cell) in r.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (k, c) in cells.iter().enumerate() {
            let pad = widths[k] - c.chars().count();
            if k == 0 {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str("  ");
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    out.push_str(&line(
        &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
    ));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
