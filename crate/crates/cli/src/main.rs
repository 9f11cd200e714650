use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tauforge::report::{IdentityReport, SuiteReport};
use tauforge::suite::{report_suite, run_check, CheckName, ConfigError, OutputFormat, RunConfig};
use tauforge::tau::staircase_tau;

const ENV_PREFIX: &str = "TAUFORGE_";

#[derive(Parser)]
#[command(name = "tauforge", version, about = "Exact verification of polynomial KdV tau-function identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the staircase tau function of index k.
    GenTau {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run one named check.
    Check {
        /// One of: fay, diff-fay, lemma22, cubic-i, cubic-ii, seventh, generated,
        /// lemma23, sturm, ft, theta-fay, theta-cubic, theta-degenerate, sine.
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run every check on staircase taus 1..=max-k plus the numeric sweeps.
    ReportSuite {
        #[arg(long)]
        max_k: Option<u32>,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Staircase index k of the tau function.
    #[arg(long, conflicts_with = "tau_file")]
    tau: Option<u32>,
    /// File holding a tau polynomial.
    #[arg(long)]
    tau_file: Option<PathBuf>,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Order n of the generated identity.
    #[arg(long)]
    order: Option<u32>,
    /// Comma-separated z indices.
    #[arg(long)]
    z: Option<String>,
    /// Comma-separated nomes.
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    sine_points: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// mumford or jacobi
    #[arg(long)]
    convention: Option<String>,
}

impl RunOpts {
    /// Defaults, then the config file, then environment, then flags.
    fn config(&self, extra: &[(&str, Option<String>)]) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.clone(),
                source,
            })?;
            cfg.apply_text(&text)?;
        }
        cfg.apply_env(ENV_PREFIX, std::env::vars())?;
        let flags = [
            ("tau", self.tau.map(|v| v.to_string())),
            ("tau_file", self.tau_file.as_ref().map(|p| p.display().to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("order", self.order.map(|v| v.to_string())),
            ("z", self.z.clone()),
            ("q", self.q.clone()),
            ("points", self.points.map(|v| v.to_string())),
            ("sine_points", self.sine_points.map(|v| v.to_string())),
            ("tolerance", self.tolerance.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("threads", self.threads.map(|v| v.to_string())),
            ("convention", self.convention.clone()),
            ("format", self.json.then(|| "json".to_string())),
        ];
        for (key, value) in flags.iter().chain(extra) {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn print_report(r: &IdentityReport) {
    println!("{}", r.summary());
    if let Some(l) = &r.lhs {
        println!("  lhs: {l}");
    }
    if let Some(rhs) = &r.rhs {
        println!("  rhs: {rhs}");
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

fn to_json(value: Result<serde_json::Value, serde_json::Error>) -> String {
    value
        .and_then(|v| serde_json::to_string_pretty(&v))
        .expect("reports serialize")
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn outcome(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::GenTau { k, json } => match staircase_tau(k) {
            Ok(tau) => {
                let status = if tau.is_certified() { "certified" } else { "uncertified" };
                if json {
                    let doc = serde_json::json!({
                        "k": k,
                        "tau": tau.poly().to_string(),
                        "certification": status,
                    });
                    println!("{}", to_json(Ok(doc)));
                } else {
                    println!("{}", tau.poly());
                    eprintln!("{status}: Fay residual vanishes");
                }
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(e),
        },
        Command::Check { name, opts } => {
            let check: CheckName = match name.parse() {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let cfg = match opts.config(&[]) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let reports = match run_check(check, &cfg) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                OutputFormat::Json => println!("{}", to_json(serde_json::to_value(&reports))),
                OutputFormat::Text => {
                    for r in &reports {
                        print_report(r);
                        for row in &r.rows {
                            println!("  {}", row.to_delimited());
                        }
                    }
                }
            }
            outcome(reports.iter().all(IdentityReport::passed))
        }
        Command::ReportSuite { max_k, opts } => {
            let cfg = match opts.config(&[("max_k", max_k.map(|v| v.to_string()))]) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let suite: SuiteReport = match report_suite(&cfg) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            match cfg.format {
                OutputFormat::Json => println!("{}", to_json(serde_json::to_value(&suite))),
                OutputFormat::Text => {
                    for r in &suite.reports {
                        println!("{}", r.summary());
                    }
                    println!(
                        "{} passed, {} failed, {} errors (seed {}, max k {})",
                        suite.passed, suite.failed, suite.errors, suite.seed, suite.max_k
                    );
                }
            }
            outcome(suite.all_passed())
        }
    }
}
