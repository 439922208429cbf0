//! Command line front end. Exit codes: 0 win or verified, 1 not a win,
//! 2 usage, parse, or IO trouble, 3 a solver hit its resource ceiling.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hanabi::dp::{self, DpError, DpOptions};
use hanabi::format::{emit_instance, emit_layout, emit_plan, parse_instance, parse_plan};
use hanabi::gen::gen_random;
use hanabi::greedy;
use hanabi::lazy::{self, FilterOutcome};
use hanabi::model::{Instance, PlaySequence, Verdict};
use hanabi::oracle::{self, OracleOptions, OracleOutcome};
use hanabi::reduction::{self, ReductionOptions};

const EXIT_NO_WIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "hanabi", version, about = "Solitaire Hanabi solvers and instance tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an instance is winnable.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Write a witness plan here when the instance is winnable.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Ceiling on stored states for the exact solver. Overrides the
        /// HANABI_STATE_LIMIT environment variable.
        #[arg(long)]
        state_limit: Option<u64>,
        /// Node budget for the reference search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a plan file against an instance.
    Verify { instance: PathBuf, plan: PathBuf },
    /// Turn a DIMACS 3-CNF formula into an instance.
    Reduce {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = VariantArg::Base)]
        variant: VariantArg,
        /// Multiplicity override (base: at least 2, h1: at least 3).
        #[arg(long)]
        r: Option<u32>,
        /// Hand bound override (base only, at least 2).
        #[arg(long = "h")]
        h: Option<u32>,
        /// Write the gadget layout (spans, color map, offsets) here.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Remove useless cards from a single-color instance.
    Filter { instance: PathBuf },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long = "h")]
        h: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reshuffle until the deal is winnable (r=1 only).
        #[arg(long)]
        solvable: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time the solvers on generated decks; prints TSV.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchAlgo::All)]
        algo: BenchAlgo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Greedy,
    Lazy,
    Dp,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Base,
    H1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchAlgo {
    All,
    Greedy,
    Lazy,
    Dp,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn resource(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_RESOURCE, message: message.into() }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("hanabi: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|err| usage(format!("{}: {err}", path.display())))
}

fn write_out(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, content)
            .map_err(|err| usage(format!("{}: {err}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|err| usage(format!("{}: {err}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve { instance, algo, plan, state_limit, budget } => {
            let inst = load_instance(&instance)?;
            let (winnable, witness) = solve(&inst, algo, plan.is_some(), state_limit, budget)?;
            if !winnable {
                println!("no win");
                return Ok(EXIT_NO_WIN);
            }
            println!("win");
            if let (Some(path), Some(witness)) = (plan, witness) {
                write_out(Some(&path), &emit_plan(&witness))?;
            }
            Ok(0)
        }
        Command::Verify { instance, plan } => {
            let inst = load_instance(&instance)?;
            let plan = parse_plan(&read(&plan)?)
                .map_err(|err| usage(format!("{}: {err}", plan.display())))?;
            match hanabi::verify(&inst, &plan) {
                Verdict::Win => {
                    println!("verified");
                    Ok(0)
                }
                Verdict::NotWin { reason, failing_step } => {
                    match failing_step {
                        Some(step) => println!("not a win: {reason} (step {})", step + 1),
                        None => println!("not a win: {reason}"),
                    }
                    Ok(EXIT_NO_WIN)
                }
            }
        }
        Command::Reduce { cnf, output, variant, r, h, meta } => {
            let formula = reduction::parse_dimacs(&read(&cnf)?)
                .map_err(|err| usage(format!("{}: {err}", cnf.display())))?;
            let opts = ReductionOptions {
                variant: Some(match variant {
                    VariantArg::Base => reduction::Variant::Base,
                    VariantArg::H1 => reduction::Variant::H1,
                }),
                r,
                h,
            };
            let built = reduction::reduce(&formula, &opts).map_err(|err| usage(err.to_string()))?;
            write_out(output.as_deref(), &emit_instance(&built.instance))?;
            if let Some(path) = meta {
                write_out(Some(&path), &emit_layout(&built.layout))?;
            }
            Ok(0)
        }
        Command::Filter { instance } => {
            let inst = load_instance(&instance)?;
            let outcome = lazy::filter_useless(&inst).map_err(|err| usage(err.to_string()))?;
            match outcome {
                FilterOutcome::Unwinnable { value } => {
                    println!("no win: value {value} runs out of copies");
                    Ok(EXIT_NO_WIN)
                }
                FilterOutcome::Filtered(filtered) => {
                    let positions: Vec<String> =
                        filtered.removed.iter().map(|at| (at + 1).to_string()).collect();
                    println!("# removed: {}", positions.join(" "));
                    let deck =
                        filtered.surviving.iter().map(|&at| inst.deck()[at]).collect();
                    let kept =
                        Instance::new(inst.n(), inst.c(), inst.r(), inst.h(), deck)
                            .expect("filtering keeps the deck valid");
                    print!("{}", emit_instance(&kept));
                    Ok(0)
                }
            }
        }
        Command::Gen { n, c, r, h, seed, solvable, output } => {
            let inst = gen_random(n, c, r, h, seed, solvable)
                .map_err(|err| usage(err.to_string()))?;
            write_out(output.as_deref(), &emit_instance(&inst))?;
            Ok(0)
        }
        Command::Bench { algo, seed } => {
            bench(algo, seed)?;
            Ok(0)
        }
    }
}

fn env_state_limit() -> Option<u64> {
    std::env::var("HANABI_STATE_LIMIT").ok().and_then(|raw| raw.parse().ok())
}

/// Decides the instance; also returns a witness plan when one was built.
fn solve(
    inst: &Instance,
    algo: Algo,
    want_plan: bool,
    state_limit: Option<u64>,
    budget: Option<u64>,
) -> Result<(bool, Option<PlaySequence>), Failure> {
    let algo = if algo == Algo::Auto {
        if inst.r() == 1 {
            Algo::Greedy
        } else if inst.c() == 1 {
            Algo::Lazy
        } else {
            Algo::Dp
        }
    } else {
        algo
    };
    match algo {
        Algo::Auto => unreachable!(),
        Algo::Greedy => {
            if inst.r() != 1 {
                return Err(usage(format!(
                    "instance declares r={}; the interval solver needs r=1, use --algo dp",
                    inst.r()
                )));
            }
            let plan = greedy::solve_unique(inst).map_err(|err| usage(err.to_string()))?;
            Ok((plan.is_some(), plan))
        }
        Algo::Lazy => {
            if inst.c() != 1 {
                return Err(usage(format!(
                    "instance declares c={}; the filtering solver needs c=1, use --algo dp",
                    inst.c()
                )));
            }
            let plan = lazy::solve_single_color(inst).map_err(|err| usage(err.to_string()))?;
            Ok((plan.is_some(), plan))
        }
        Algo::Dp => {
            let mut opts = DpOptions { journal: want_plan, ..DpOptions::default() };
            if let Some(limit) = state_limit.or_else(env_state_limit) {
                opts.state_limit = limit;
            }
            let decision = dp::decide(inst, &opts).map_err(|err| match err {
                DpError::ResourceLimit { limit } => {
                    resource(format!("state count exceeded {limit}"))
                }
                DpError::NoJournal => usage(err.to_string()),
            })?;
            if !decision.winnable() {
                return Ok((false, None));
            }
            let plan = if want_plan {
                decision.extract_plan().map_err(|err| usage(err.to_string()))?
            } else {
                None
            };
            Ok((true, plan))
        }
        Algo::Oracle => {
            let mut opts = OracleOptions::default();
            if let Some(nodes) = budget {
                opts.budget = nodes;
            }
            match oracle::solve(inst, &opts) {
                OracleOutcome::Win(plan) => Ok((true, Some(plan))),
                OracleOutcome::NoWin => Ok((false, None)),
                OracleOutcome::BudgetExceeded => {
                    Err(resource(format!("search budget of {} nodes exceeded", opts.budget)))
                }
            }
        }
    }
}

fn bench(algo: BenchAlgo, seed: u64) -> Result<(), Failure> {
    println!("algo\tN\tn\tc\tr\th\tdecision\twall_time_ns");
    let all = algo == BenchAlgo::All;
    if all || algo == BenchAlgo::Greedy {
        for n in [20_000u32, 40_000] {
            let deal = gen_random(n, 5, 1, 0, seed, false).map_err(|e| usage(e.to_string()))?;
            let width = greedy::compute_f(&deal).expect("r=1 deal").width;
            let inst = deal.with_hand(width as u32);
            let started = Instant::now();
            let plan = greedy::solve_unique(&inst).expect("r=1 deal");
            report("greedy", &inst, plan.is_some(), started);
        }
    }
    if all || algo == BenchAlgo::Lazy {
        let inst =
            gen_random(50_000, 1, 2, 100, seed, false).map_err(|e| usage(e.to_string()))?;
        let started = Instant::now();
        let plan = lazy::solve_single_color(&inst).expect("c=1 deal");
        report("lazy", &inst, plan.is_some(), started);
    }
    if all || algo == BenchAlgo::Dp {
        let inst = gen_random(4, 3, 2, 2, seed, false).map_err(|e| usage(e.to_string()))?;
        let started = Instant::now();
        let decision =
            dp::decide(&inst, &DpOptions::default()).map_err(|e| resource(e.to_string()))?;
        report("dp", &inst, decision.winnable(), started);
    }
    Ok(())
}

fn report(algo: &str, inst: &Instance, winnable: bool, started: Instant) {
    let elapsed = started.elapsed().as_nanos();
    println!(
        "{algo}\t{}\t{}\t{}\t{}\t{}\t{}\t{elapsed}",
        inst.len(),
        inst.n(),
        inst.c(),
        inst.r(),
        inst.h(),
        if winnable { "win" } else { "no win" },
    );
}
