use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use gfa_cli::runner::{run_spec, RunConfig};
use gfa_cli::{check_spec, Diagnostic};
use gfa_core::props::{run_suite, Suite};
use gfa_core::seqspace::Budget;

#[derive(Parser)]
#[command(name = "gfa", version, about = "Run generalized-function experiments from a spec file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a spec and write CSV reports.
    Run {
        spec: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "gfa-out")]
        out: PathBuf,
        /// Seed for property suites without their own.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Default sampling limit N_max.
        #[arg(long, env = "GFA_NMAX")]
        nmax: Option<u64>,
        /// Run tasks concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// Parse and validate a spec without running it.
    Check {
        spec: PathBuf,
        /// Print the canonical form of the experiment file.
        #[arg(long)]
        print: bool,
    },
    /// Run built-in property suites.
    Props {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Instances per suite; defaults to each suite's own count.
        #[arg(long)]
        instances: Option<usize>,
    },
}

fn report(diags: &[Diagnostic], src: &str, path: &str) {
    for d in diags {
        eprint!("{}", d.render(src, path));
    }
}

fn load(path: &PathBuf) -> anyhow::Result<(String, Option<gfa_cli::ExperimentSpec>, Vec<Diagnostic>)> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (spec, diags) = check_spec(&src);
    Ok((src, spec, diags))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Check { spec, print } => {
            let (src, parsed, diags) = load(&spec)?;
            report(&diags, &src, &spec.display().to_string());
            match parsed {
                Some(s) => {
                    if print {
                        print!("{s}");
                    } else {
                        println!("{}: {} declarations, {} tasks", spec.display(), s.decls().count(), s.tasks().count());
                    }
                    Ok(0)
                }
                None => Ok(1),
            }
        }
        Command::Run { spec, out, seed, nmax, parallel } => {
            let (src, parsed, diags) = load(&spec)?;
            report(&diags, &src, &spec.display().to_string());
            let Some(parsed) = parsed else { return Ok(1) };
            let n_max = nmax.unwrap_or(Budget::default().n_max);
            if !(gfa_cli::resolve::MIN_NMAX..=gfa_cli::resolve::MAX_NMAX).contains(&n_max) {
                anyhow::bail!(
                    "--nmax must be between {} and {}",
                    gfa_cli::resolve::MIN_NMAX,
                    gfa_cli::resolve::MAX_NMAX
                );
            }
            let rep = run_spec(&parsed, &out, &RunConfig { seed, n_max, parallel })?;
            for o in &rep.outcomes {
                let line = format!("[{}] {:02} {} {}: {} {}", o.status, o.index, o.kind, o.subject, o.outcome, o.detail);
                println!("{}", line.trim_end());
            }
            println!("reports written to {}", out.display());
            Ok(rep.exit_code as u8)
        }
        Command::Props { suite, seed, instances } => {
            let suites = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>()?] };
            let mut failed = false;
            for s in suites {
                let n = instances.unwrap_or_else(|| s.default_instances());
                let rep = run_suite(s, seed, n, &Budget::default())?;
                let verdict = if rep.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} {:<18} instances={} vacuous={} violations={}",
                    s.name(),
                    rep.instances,
                    rep.vacuous,
                    rep.violations.len()
                );
                for v in rep.violations.iter().take(5) {
                    println!("    {v}");
                }
                failed |= !rep.passed();
            }
            Ok(u8::from(failed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
