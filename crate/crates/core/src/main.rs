use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use impact::concepts::format;
use impact::experiments::{emit_plot_data, run_configured_sweep, SweepConfig, SweepMode};
use impact::learner::{ErrorBudget, LearnMode};
use impact::oracle::{exhaustive_equivalence, reference_value, Domain};
use impact::sampling::Distribution;
use impact::session::{postfix_order_for, run_teaching_session, ModerationKind, SessionConfig};
use impact::{Error, Result};

#[derive(Parser)]
#[command(
    name = "impact",
    version,
    about = "Moderated round-by-round teaching of circuits and automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    BestFit,
    Reliable,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModerationArg {
    Relevant,
    Partition,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    M,
    K,
}

#[derive(Subcommand)]
enum Command {
    /// Run one teaching session and print its report as JSON.
    Teach {
        #[arg(long)]
        concept: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "best-fit")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "relevant")]
        moderation: ModerationArg,
        /// Total error target; with --delta, enforces the per-round budget.
        #[arg(long, requires = "delta")]
        epsilon: Option<f64>,
        #[arg(long, requires = "epsilon")]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        test_size: usize,
        /// Record per-round full-sample and relevant-only node errors.
        #[arg(long)]
        diagnostics: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Export the learned classifier as a concept file.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Run a parity sweep and write CSV (and optionally an SVG chart).
    Sweep {
        #[arg(long, value_enum)]
        mode: SweepArg,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a concept file by exhaustive enumeration.
    Verify {
        #[arg(long)]
        concept: PathBuf,
        #[arg(long, required = true)]
        exhaustive: bool,
        /// Compare against a second concept instead of the reference evaluator.
        #[arg(long)]
        against: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InsufficientData { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Teach {
            concept,
            m,
            seed,
            mode,
            moderation,
            epsilon,
            delta,
            test_size,
            diagnostics,
            report,
            model_out,
        } => {
            let c = format::load(&concept)?;
            let budget = match (epsilon, delta) {
                (Some(e), Some(d)) => Some(ErrorBudget::new(e, d, postfix_order_for(&c)?.len())?),
                _ => None,
            };
            let cfg = SessionConfig {
                mode: match mode {
                    ModeArg::BestFit => LearnMode::BestFit,
                    ModeArg::Reliable => LearnMode::Reliable,
                },
                moderation: match moderation {
                    ModerationArg::Relevant => ModerationKind::Relevant,
                    ModerationArg::Partition => ModerationKind::Partition,
                },
                budget,
                diagnostics,
                test_size,
                ..SessionConfig::default()
            };
            let d = Distribution::uniform(c.n(), seed);
            let r = run_teaching_session(&c, &d, m, &cfg)?;
            let json = serde_json::to_string_pretty(&r)?;
            match report {
                Some(p) => std::fs::write(p, json + "\n")?,
                None => println!("{json}"),
            }
            if let Some(p) = model_out {
                format::save(&r.model.to_concept()?, p)?;
            }
            eprintln!(
                "rounds {}  test accuracy {:.4}  don't-know {:.4}",
                r.rounds.len(),
                r.test_accuracy,
                r.dont_know_rate
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            mode,
            config,
            output,
            plot,
            workers,
        } => {
            let mut cfg = SweepConfig::load(&config)?;
            let mode = match mode {
                SweepArg::M => SweepMode::SampleSize,
                SweepArg::K => SweepMode::ProblemSize,
            };
            if cfg.mode.is_some_and(|m| m != mode) {
                return Err(Error::Config(format!(
                    "config declares mode {:?} but --mode {} was given",
                    cfg.mode.unwrap(),
                    mode.tag()
                )));
            }
            cfg.mode = Some(mode);
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if output.is_some() {
                cfg.output = output;
            }
            let table = run_configured_sweep(&cfg)?;
            match &cfg.output {
                Some(p) => {
                    table.save_csv(p)?;
                    let meta =
                        serde_json::json!({ "config": cfg, "subsets": table.subsets, "summaries": table.summaries });
                    std::fs::write(
                        p.with_extension("meta.json"),
                        serde_json::to_string_pretty(&meta)? + "\n",
                    )?;
                }
                None => table.write_csv(std::io::stdout().lock())?,
            }
            if let Some(p) = plot {
                emit_plot_data(&table, p)?;
            }
            for s in &table.summaries {
                eprintln!(
                    "{:<16} k={:<3} m={:<6} mean {:.4}  sd {:.4}",
                    s.learner, s.k, s.m, s.mean_accuracy, s.std_accuracy
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            concept,
            exhaustive: _,
            against,
        } => {
            let c = format::load(&concept)?;
            let domain = Domain::for_concept(&c);
            let report = match against {
                Some(p) => {
                    let other = format::load(&p)?;
                    if other.n() != c.n() {
                        return Err(Error::ArityMismatch {
                            expected: c.n(),
                            got: other.n(),
                        });
                    }
                    let f = |b: &[bool]| reference_value(&c, b);
                    let g = |b: &[bool]| reference_value(&other, b);
                    exhaustive_equivalence(&f, &g, domain)?
                }
                None => {
                    let f = |b: &[bool]| reference_value(&c, b);
                    exhaustive_equivalence(&f, &c, domain)?
                }
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.disagreements == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
