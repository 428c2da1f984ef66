use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use eqindex::scenarios::{emit_fixtures, emit_report, index_check, run_suite, suite_anchor, suite_names, Report, ScenarioConfig};

#[derive(Parser)]
#[command(name = "eqindex", version, about = "Exact verification suites for the equivariant algebraic index identities")]
struct Cli {
    /// JSON scenario configuration; defaults are used for missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Writes the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs one suite, the suites named in the config, or `all`.
    Verify { suite: Option<String> },
    /// Compares both sides of the index identity for the configured scenario.
    IndexCheck,
    /// Prints the registered suites with their anchors.
    ListSuites,
    /// Writes one golden report per suite into a directory.
    EmitFixtures {
        #[arg(default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn print_report(r: &Report) {
    for c in &r.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        println!("{mark}  {}  [{}]  {} ms", c.name, c.anchor, c.runtime_ms);
        if !c.pass {
            println!("      expected: {}", c.expected);
            println!("      actual:   {}", c.actual);
        }
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks passed", r.checks.len());
}

fn finish(cli: &Cli, r: &Report) -> Result<ExitCode> {
    print_report(r);
    if let Some(p) = &cli.report {
        emit_report(r, p).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if r.all_pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::ListSuites => {
            for name in suite_names() {
                println!("{name:24} {}", suite_anchor(name).unwrap_or_default());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let cfg = load_config(cli)?;
            let names: Vec<String> = match suite.as_deref() {
                Some("all") => suite_names().into_iter().map(String::from).collect(),
                Some(s) => vec![s.to_string()],
                None if !cfg.suites.is_empty() => cfg.suites.clone(),
                None => suite_names().into_iter().map(String::from).collect(),
            };
            let mut report = Report::default();
            for name in &names {
                report.extend(run_suite(name, &cfg)?);
            }
            finish(cli, &report)
        }
        Command::IndexCheck => {
            let cfg = load_config(cli)?;
            finish(cli, &index_check(&cfg)?)
        }
        Command::EmitFixtures { dir } => {
            let cfg = load_config(cli)?;
            for p in emit_fixtures(dir, &cfg)? {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
