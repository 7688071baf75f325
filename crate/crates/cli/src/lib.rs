//! Batch driver for `lpst-core`: experiment runners, report writers and the
//! invariant check suite.

pub mod check;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use std::path::PathBuf;

use config::{Experiment, RunConfig};
use error::CliError;
use experiments::Outcome;

/// Runs one configured experiment and writes its report under `cfg.out`.
///
/// Outputs are written before any deferred error (degenerate data, failed
/// checks) is returned, so a nonzero exit still leaves a full report.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let outcome = match &cfg.experiment {
        Experiment::Norm { matrix } => experiments::norm(cfg, matrix)?,
        Experiment::Group {
            group,
            radius,
            coeffs,
        } => experiments::group(cfg, group, *radius, coeffs)?,
        Experiment::Uhf { dims, alpha } => experiments::uhf(cfg, dims, alpha)?,
        Experiment::Metric {
            dims,
            alpha,
            states,
        } => experiments::metric(cfg, dims, alpha, states)?,
        Experiment::Check { quick } => {
            let ctx = check::Ctx {
                seed: cfg.seed,
                quick: *quick,
            };
            let report = check::check_report(&ctx, &check::run_suites(&ctx));
            let failures = check::failures(&report);
            Outcome {
                report,
                deferred: (!failures.is_empty()).then_some(CliError::CheckFailed { failures }),
            }
        }
    };
    let written = report::write_report(&outcome.report, &cfg.out)?;
    match outcome.deferred {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
