//! Command-line driver for the scenario registry.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exact_uncertainty::cli_report::{
    emit_report, parse_param, resolve_grid_n, run_scenario, verify_all, Config, Format, ReportDocument, ScenarioSpec,
    GRID_N_ENV, SCENARIOS,
};
use exact_uncertainty::relations::Status;
use exact_uncertainty::Result;

#[derive(Parser)]
#[command(name = "eur", version, about = "Run and verify exact uncertainty relation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and emit its report.
    Run {
        scenario: String,
        /// Scenario parameter override, `key=value`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long)]
        hbar: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report file (json) or output directory (csv); json goes to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["json", "csv"])]
        format: Option<String>,
        #[arg(long)]
        tol_scale: Option<f64>,
        /// TOML file with the same keys as the flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every scenario with defaults; exits nonzero if any check fails.
    Verify {
        #[arg(long, required = true)]
        all: bool,
        #[arg(long)]
        tol_scale: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List the registered scenarios.
    List,
}

fn load(config: Option<&PathBuf>) -> Result<Config> {
    config.map(|p| Config::load(p)).transpose().map(Option::unwrap_or_default)
}

fn env_grid_n() -> Option<String> {
    std::env::var(GRID_N_ENV).ok()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            for s in SCENARIOS {
                let params: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<20} {}", s.name, s.summary);
                if !params.is_empty() {
                    println!("{:<20} params: {}", "", params.join(" "));
                }
            }
            Ok(true)
        }
        Command::Run { scenario, params, grid_n, hbar, seed, out, format, tol_scale, config } => {
            let cfg = load(config.as_ref())?;
            let mut spec = ScenarioSpec::new(scenario);
            spec.params = cfg.param.clone();
            for p in &params {
                let (k, v) = parse_param(p)?;
                spec.params.insert(k, v);
            }
            spec.grid_n = resolve_grid_n(grid_n, cfg.grid_n, env_grid_n().as_deref())?;
            spec.hbar = hbar.or(cfg.hbar).unwrap_or(1.0);
            spec.seed = seed.or(cfg.seed);
            spec.tol_scale = tol_scale.or(cfg.tol_scale).unwrap_or(1.0);
            let format: Format = format.or(cfg.format).as_deref().unwrap_or("json").parse()?;
            let report = run_scenario(&spec)?;
            match out.or(cfg.out) {
                Some(path) => {
                    for f in emit_report(&report, format, &path)? {
                        eprintln!("wrote {}", f.display());
                    }
                }
                None if format == Format::Json => {
                    print!("{}", ReportDocument::new(&report, &Default::default()).to_json()?);
                }
                None => {
                    return Err(exact_uncertainty::Error::InvalidParameter("csv output needs --out DIR".into()));
                }
            }
            eprintln!("{}", report.summary());
            Ok(true)
        }
        Command::Verify { all: _, tol_scale, grid_n, config } => {
            let cfg = load(config.as_ref())?;
            let grid_n = resolve_grid_n(grid_n, cfg.grid_n, env_grid_n().as_deref())?;
            let reports = verify_all(grid_n, tol_scale.or(cfg.tol_scale).unwrap_or(1.0))?;
            for r in &reports {
                println!("{}", r.summary());
                for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                    println!("  {c}");
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} of {} scenarios without failures", reports.len() - failed, reports.len());
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
