use clap::Parser;
use critstrip_cli::config::{parse_disc_min, parse_q_max, Format, RunConfig};
use critstrip_cli::suites::SUITES;
use critstrip_cli::{run_suite, EXIT_CONFIG};
use critstrip_core::Execution;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "critstrip", version, about = "Run an L-function verification suite and write its report")]
struct Cli {
    /// Suite to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// Flat key = value config file (default: $CRITSTRIP_CONFIG if set).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path (default: <suite>.<format>).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[arg(long, value_parser = parse_q_max)]
    q_max: Option<u64>,
    #[arg(long, value_parser = parse_disc_min, allow_hyphen_values = true)]
    disc_min: Option<i64>,
    /// Run family scans on one thread.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let mut cfg = match RunConfig::resolve(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(out) = cli.out {
        cfg.out = Some(out);
    }
    if let Some(f) = cli.format {
        cfg.format = f.parse::<Format>().expect("validated by clap");
    }
    cfg.q_max = cli.q_max.or(cfg.q_max);
    cfg.disc_min = cli.disc_min.or(cfg.disc_min);
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let outcome = run_suite(&cli.suite, &cfg, exec);
    if let Some(msg) = &outcome.message {
        eprintln!("{}: {msg}", cli.suite);
    }
    if let (Some(rep), Some(path)) = (&outcome.report, &outcome.path) {
        println!("{}: {} rows -> {}", cli.suite, rep.rows.len(), path.display());
    }
    ExitCode::from(outcome.code as u8)
}
