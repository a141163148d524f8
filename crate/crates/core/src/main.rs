use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use surface_lcs::cli::{run, ReportFormat, RunConfig, Suite};

/// Exact checks on the lower central series of surface groups.
#[derive(Parser, Debug)]
#[command(name = "surface-lcs", version)]
struct Args {
    #[arg(long, default_value_t = 3)]
    genus: usize,

    #[arg(long, default_value_t = 4)]
    max_degree: usize,

    /// Suite to run; repeat for several. Defaults to all suites.
    #[arg(long = "suite")]
    suites: Vec<String>,

    /// Report format: json or text.
    #[arg(long, default_value = "json")]
    report: String,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of randomized trials per property check.
    #[arg(long, default_value_t = 1000)]
    trials: usize,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Euler characteristic of the subgroup, for index-formula.
    #[arg(long, allow_hyphen_values = true, requires = "chi_ambient")]
    chi_sub: Option<i64>,

    /// Euler characteristic of the ambient group, for index-formula.
    #[arg(long, allow_hyphen_values = true, requires = "chi_sub")]
    chi_ambient: Option<i64>,
}

fn config_from(args: &Args) -> surface_lcs::Result<RunConfig> {
    let suites = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites.iter().map(|s| s.parse()).collect::<surface_lcs::Result<_>>()?
    };
    let config = RunConfig {
        genus: args.genus,
        max_degree: args.max_degree,
        suites,
        report_format: args.report.parse::<ReportFormat>()?,
        seed: args.seed,
        trials: args.trials,
        chi: args.chi_sub.zip(args.chi_ambient),
    };
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match config_from(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("surface-lcs: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("surface-lcs: {e}");
            return ExitCode::from(2);
        }
    };
    let mut text = report.render();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("surface-lcs: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
