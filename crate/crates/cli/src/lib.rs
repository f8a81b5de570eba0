//! Command-line front end for the critstrip verification suites.
//!
//! Each suite produces a [`report::Report`]: rows sorted by object, one pass
//! flag per row, written atomically as CSV or JSON. [`run_suite`] maps the
//! outcome onto the process exit code.

pub mod config;
pub mod report;
pub mod suites;

use config::RunConfig;
use critstrip_core::{Error, Execution};
use report::Report;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    pub path: Option<PathBuf>,
    pub message: Option<String>,
}

impl Outcome {
    fn failed(code: i32, message: String) -> Self {
        Self {
            code,
            report: None,
            path: None,
            message: Some(message),
        }
    }
}

/// Exit code for a suite that stopped on an error: accuracy problems map to
/// 3, caps exceeded by the configuration to 2, anything else to 1.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::AccuracyUnattainable(_) | Error::Convergence(_) => EXIT_ACCURACY,
        Error::EnumerationOverflow { .. } | Error::Range { .. } | Error::SearchCap { .. } => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

pub fn default_output(suite: &str, cfg: &RunConfig) -> PathBuf {
    PathBuf::from(format!("{suite}.{}", cfg.format.extension()))
}

/// Run a suite and write its report.
pub fn run_suite(name: &str, cfg: &RunConfig, exec: Execution) -> Outcome {
    let report = match suites::build_report(name, cfg, exec) {
        None => return Outcome::failed(EXIT_CONFIG, format!("unknown suite {name:?}")),
        Some(Err(e)) => return Outcome::failed(error_exit_code(&e), e.to_string()),
        Some(Ok(r)) => r,
    };
    let path = cfg.out.clone().unwrap_or_else(|| default_output(name, cfg));
    if let Err(e) = report.write_atomic(&path, cfg.format) {
        return Outcome::failed(EXIT_FAIL, format!("writing {}: {e}", path.display()));
    }
    let failing = report.failing().count();
    Outcome {
        code: if failing == 0 { EXIT_PASS } else { EXIT_FAIL },
        message: (failing > 0).then(|| format!("{failing} of {} rows failed", report.rows.len())),
        report: Some(report),
        path: Some(path),
    }
}
