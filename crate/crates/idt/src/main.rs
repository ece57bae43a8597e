use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use idt::config::{config_hash, SimulateConfig, VerifyConfig};
use idt::error::{AppError, AppResult};
use idt::suites::{run_suite, ItemOutcome};

/// Simulation and law-level verification of IDT processes and fields.
#[derive(Debug, Parser)]
#[command(name = "idt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate the target of a TOML config and write a CSV artifact.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config and the IDT_SEED environment variable.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Defaults to the config's `output`, then stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a registered verification suite.
    Verify {
        /// association, idt, ito, decomposition, type1, type2, counterexamples or all.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the available constructions and fields.
    Catalogue {
        /// Print entries with example specs as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn open_output(path: Option<&PathBuf>) -> AppResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| AppError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn status(o: &ItemOutcome) -> String {
    let verdict = match o.passed {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "error",
    };
    let expected = if o.expect_pass { "pass" } else { "fail" };
    let detail = match (&o.report, &o.error) {
        (Some(r), _) => format!(
            "statistic={:.6e} threshold={:.6e}",
            r.statistic, r.threshold
        ),
        (None, Some(e)) => e.clone(),
        (None, None) => String::new(),
    };
    format!(
        "{} {} ({verdict}, expected {expected}) {detail}",
        if o.met { "OK  " } else { "MISS" },
        o.name
    )
}

fn run(cli: Cli) -> AppResult<i32> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            count,
            output,
        } => {
            let mut cfg = SimulateConfig::load(&config)?;
            if let Some(c) = count {
                cfg.count = c;
                cfg.validate()?;
            }
            let seed = idt::simulate_seed(&cfg, seed)?;
            let path = output.or_else(|| cfg.output.clone());
            let mut out = open_output(path.as_ref())?;
            idt::simulate(&cfg, seed, &mut out)?;
            out.flush()
                .map_err(|e| AppError::io(path.unwrap_or_else(|| "<stdout>".into()), e))?;
            Ok(0)
        }
        Command::Verify {
            suite,
            config,
            seed,
            count,
            report,
        } => {
            let cfg = match (config, suite) {
                (Some(path), flag) => {
                    let mut cfg = VerifyConfig::load(&path)?;
                    if let Some(s) = flag {
                        cfg.suite = s;
                    }
                    cfg
                }
                (None, Some(s)) => VerifyConfig {
                    suite: s,
                    seed: None,
                    count: None,
                    report: None,
                },
                (None, None) => {
                    return Err(AppError::Config("verify needs --suite or --config".into()))
                }
            };
            let plan = cfg.plan(seed, count)?;
            let hash = config_hash(&plan)?;
            eprintln!(
                "suite {} seed {} count {}",
                plan.suite, plan.seed, plan.count
            );
            let rep = run_suite(plan.suite, plan.seed, plan.count, &hash, |o| {
                println!("{}", status(o))
            });
            let met = rep.items.iter().filter(|o| o.met).count();
            println!("{met}/{} expectations met", rep.items.len());
            if let Some(path) = report.or(cfg.report) {
                let f = File::create(&path).map_err(|e| AppError::io(&path, e))?;
                serde_json::to_writer_pretty(BufWriter::new(f), &rep)?;
            }
            Ok(rep.exit_code())
        }
        Command::Catalogue { json } => {
            let entries = idt::catalogue::entries();
            let mut out = std::io::stdout().lock();
            let res = if json {
                serde_json::to_writer_pretty(&mut out, &entries)
                    .map_err(AppError::from)
                    .map(|_| writeln!(out))
            } else {
                Ok(entries.iter().try_for_each(|e| {
                    writeln!(
                        out,
                        "{:<22} {:<6} {} [{}]",
                        e.name, e.kind, e.summary, e.anchor
                    )
                }))
            };
            res?.map_err(|e| AppError::io("<stdout>", e))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
