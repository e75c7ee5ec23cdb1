use std::path::PathBuf;
use std::process::ExitCode;

use adiabatic_forms::harness::{self, Command, CommandReport, Outcome, RunOptions};
use clap::{Parser, Subcommand};

/// Adiabatic-limit checks for invariant forms on principal bundles over tori.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output directory; defaults to the scenario's `output` or `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the scenario's Fourier band.
    #[arg(long, global = true)]
    band: Option<usize>,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lie algebra identities, Betti numbers and the Green operator.
    LieCheck,
    /// Degree-one Chern–Simons form of an abelian scenario.
    VerifyCs1,
    /// Corrected degree-three Chern–Simons series on T⁴.
    VerifyCs3,
    /// Page dimensions, their limit and the Galerkin kernel.
    Pages,
    /// Eigenvalue decay sweep against page dimensions.
    Spectrum,
    /// Aggregate every report under --out into a pass/fail matrix.
    Report,
}

fn print(report: &CommandReport) {
    println!("{} {}: {:?}", report.scenario, report.command, report.outcome);
    if let Some(e) = &report.error {
        println!("  error: {e}");
    }
    for c in &report.checks {
        let tag = c.criterion.as_deref().map_or(String::new(), |id| format!("[{id}] "));
        println!("  {} {tag}{}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { out: cli.out.clone(), seed: cli.seed, band: cli.band, quiet: cli.quiet };
    let command = match cli.command {
        Cmd::LieCheck => Command::LieCheck,
        Cmd::VerifyCs1 => Command::VerifyCs1,
        Cmd::VerifyCs3 => Command::VerifyCs3,
        Cmd::Pages => Command::Pages,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Report => {
            let dir = cli.out.unwrap_or_else(|| PathBuf::from("out"));
            return match harness::cmd_report(&dir) {
                Ok(summary) => {
                    if !cli.quiet {
                        for r in &summary.criteria {
                            println!("criterion {}: {} ({} checks)", r.criterion, if r.pass { "pass" } else { "FAIL" }, r.checks);
                        }
                        for e in &summary.errors {
                            println!("error: {e}");
                        }
                    }
                    let failed = summary.criteria.iter().any(|r| !r.pass);
                    let outcome = if failed { summary.outcome.max(Outcome::ToleranceFailure) } else { summary.outcome };
                    ExitCode::from(outcome.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(Outcome::of_error(&e).exit_code() as u8)
                }
            };
        }
    };
    let Some(path) = cli.scenario else {
        eprintln!("--scenario is required for {}", command.name());
        return ExitCode::from(Outcome::ConfigError.exit_code() as u8);
    };
    let report = harness::run(command, &path, &opts);
    if !opts.quiet {
        print(&report);
    }
    ExitCode::from(report.outcome.exit_code() as u8)
}
