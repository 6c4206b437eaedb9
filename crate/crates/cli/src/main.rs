use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use treelimits::pipeline::{
    run_center, run_compare, run_limit_report, run_metric_check, run_newton, run_tree_check,
    Config, ExitStatus, Outcome, PipelineError,
};
use treelimits::valuation::End;

/// Limits of rational curves of SL(2,C) representations as tree actions.
#[derive(Parser)]
#[command(name = "treelimits", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limit lengths, limit tree and cross-checks for one end of a curve.
    Limitlen {
        spec: PathBuf,
        #[arg(long, default_value = "infinity", value_parser = parse_end)]
        end: End,
        #[arg(long)]
        radius: Option<usize>,
        /// Comma-separated sample points, e.g. 1e3,1e4.
        #[arg(long, value_delimiter = ',')]
        ts: Option<Vec<f64>>,
        /// JSON report destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-point defect and tree reconstruction of the limit metric.
    Treecheck {
        #[arg(required_unless_present = "metric")]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "infinity", value_parser = parse_end)]
        end: End,
        #[arg(long)]
        radius: Option<usize>,
        /// Check a metric file of `x y distance` lines instead of a spec.
        #[arg(long, conflicts_with = "spec")]
        metric: Option<PathBuf>,
        /// Edge-list destination for the reconstructed tree.
        #[arg(long)]
        tree_out: Option<PathBuf>,
    },
    /// Approximate center of the generators at parameter t.
    Center {
        spec: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Newton polygon and branch exponents of a polynomial in y and z.
    Newton {
        polynomial: String,
        #[arg(long)]
        numeric: bool,
    },
    /// Projective distance between numeric lengths at t and the limit.
    Compare {
        spec: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value = "infinity", value_parser = parse_end)]
        end: End,
    },
}

fn parse_end(s: &str) -> Result<End, String> {
    s.parse()
        .map_err(|e: treelimits::valuation::ValuationError| e.to_string())
}

fn emit<R>(outcome: Outcome<R>, text: impl Fn(&R) -> String) -> ExitStatus {
    print!("{}", text(&outcome.report));
    if let Some(check) = &outcome.failure {
        eprintln!("failed check: {check}");
    }
    outcome.status
}

fn run(cli: Cli) -> Result<ExitStatus, PipelineError> {
    let config = Config::from_env()?;
    Ok(match cli.command {
        Command::Limitlen {
            spec,
            end,
            radius,
            ts,
            out,
        } => {
            let ts = ts.unwrap_or_else(|| config.ts.clone());
            let outcome = run_limit_report(
                &spec,
                &end,
                radius.unwrap_or(config.radius),
                &ts,
                out.as_deref(),
                &config,
            )?;
            emit(outcome, |r| r.render_text())
        }
        Command::Treecheck {
            spec,
            end,
            radius,
            metric,
            tree_out,
        } => {
            let outcome = match (metric, spec) {
                (Some(m), _) => run_metric_check(&m, tree_out.as_deref(), &config)?,
                (None, Some(s)) => run_tree_check(
                    &s,
                    &end,
                    radius.unwrap_or(config.radius),
                    tree_out.as_deref(),
                    &config,
                )?,
                (None, None) => unreachable!("clap requires a spec or a metric file"),
            };
            emit(outcome, |r| r.render_text())
        }
        Command::Center { spec, t } => emit(run_center(&spec, t, &config)?, |r| r.render_text()),
        Command::Newton {
            polynomial,
            numeric,
        } => emit(run_newton(&polynomial, numeric, &config)?, |r| {
            r.render_text()
        }),
        Command::Compare {
            spec,
            t,
            radius,
            end,
        } => {
            let outcome = run_compare(&spec, &end, t, radius.unwrap_or(config.radius), &config)?;
            emit(outcome, |r| r.render_text(config.compare_tolerance))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::InputError
        }
    };
    ExitCode::from(status.code() as u8)
}
