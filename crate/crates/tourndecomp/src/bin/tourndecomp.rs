use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tourndecomp::exceptional::classify;
use tourndecomp::excess::excess_profile;
use tourndecomp::expander::{is_robust_outexpander, RobustParams};
use tourndecomp::pipeline::{decompose, PipelineConfig};
use tourndecomp::solver::{pn_exact_with_budget, DEFAULT_SOLVER_BUDGET};
use tourndecomp::verify::{run_verify, Selection, Strategy, VerifyConfig};
use tourndecomp::{Digraph, Error, Result};

#[derive(Parser)]
#[command(name = "tourndecomp", version, about = "Path decompositions of tournaments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute pn for every (or a sample of) tournament on n vertices and check the invariants.
    Verify(VerifyArgs),
    /// Exact path number of a digraph, with a certificate.
    Pn {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SOLVER_BUDGET)]
        budget: u64,
    },
    /// Excess profile and exceptional class of a tournament.
    Classify { file: PathBuf },
    /// Brute-force robust outexpander test.
    Expander {
        file: PathBuf,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        tau: String,
    },
    /// Decompose a tournament into paths.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DecomposeStrategy::Pipeline)]
        strategy: DecomposeStrategy,
        #[arg(long, default_value_t = DEFAULT_SOLVER_BUDGET)]
        budget: u64,
        /// Include the per-stage trace of every pipeline attempt.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with_all = ["sample", "seed"])]
    all: bool,
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Strategy::Exact)]
    strategy: Strategy,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value_t = DEFAULT_SOLVER_BUDGET)]
    budget: u64,
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeStrategy {
    Exact,
    Pipeline,
}

fn read_digraph(path: &PathBuf) -> Result<Digraph> {
    Digraph::from_text(&std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Verify(a) => {
            let selection = match (a.all, a.sample) {
                (true, _) => Selection::All,
                (false, Some(k)) => Selection::Sample { k, seed: a.seed },
                (false, None) => return Err(Error::InvalidArgument("pass --all or --sample K".into())),
            };
            let mut cfg = VerifyConfig::new(a.n, selection, a.strategy, a.out);
            cfg.resume = a.resume;
            cfg.budget = a.budget;
            cfg.trace = a.trace;
            let s = run_verify(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&s).expect("serializable"));
            Ok(s.ok())
        }
        Cmd::Pn { file, budget } => {
            let d = read_digraph(&file)?;
            let r = pn_exact_with_budget(&d, budget)?;
            let p = excess_profile(&d);
            let out = json!({
                "pn": r.pn,
                "optimal": r.optimal,
                "texc": p.texc,
                "exc": p.exc_total,
                "nodes": r.nodes_explored,
                "certificate": r.certificate,
            });
            println!("{out}");
            Ok(true)
        }
        Cmd::Classify { file } => {
            let d = read_digraph(&file)?;
            let c = classify(&d)?;
            let out = json!({ "class": c.name(), "detail": c.to_string(), "profile": excess_profile(&d) });
            println!("{out}");
            Ok(true)
        }
        Cmd::Expander { file, nu, tau } => {
            let d = read_digraph(&file)?;
            let p = RobustParams::parse(&nu, &tau)?;
            println!("{}", json!({ "nu": nu, "tau": tau, "robust_outexpander": is_robust_outexpander(&d, p)? }));
            Ok(true)
        }
        Cmd::Decompose { file, strategy, budget, trace } => {
            let d = read_digraph(&file)?;
            match strategy {
                DecomposeStrategy::Exact => {
                    let r = pn_exact_with_budget(&d, budget)?;
                    println!("{}", json!({ "size": r.pn, "optimal": r.optimal, "decomposition": r.certificate }));
                }
                DecomposeStrategy::Pipeline => {
                    let cfg = PipelineConfig { solver_budget: budget, ..Default::default() };
                    let mut rep = decompose(&d, &cfg)?;
                    if !trace {
                        rep.attempts.clear();
                    }
                    println!("{}", rep.to_json());
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("invariant violations found");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
