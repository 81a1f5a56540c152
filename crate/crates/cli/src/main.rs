//! `tdcheck` — decide whether the language of a deterministic bottom-up
//! tree automaton can be recognized by a deterministic top-down tree
//! automaton.
//!
//! Exit codes: 0 = top-down deterministic (or, for `fuzz`, no
//! discrepancies), 1 = not (or discrepancies found), 2 = parse or resource
//! errors. All stdout output is deterministic for a fixed input; `--stats`
//! timing goes to stderr only.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tdcheck::format::{parse_dba, render_dba, render_dta};
use tdcheck::oracle::{
    bounded_language_equal, bounded_subset, confirm_witness, differential_batch,
    parse_symbol_list, random_dba, DifferentialOptions, DifferentialOutcome, GenSpec,
};
use tdcheck::report::VerificationReport;
use tdcheck::{associated_dta, explain, is_top_down_deterministic, Tree};

#[derive(Parser)]
#[command(
    name = "tdcheck",
    version,
    about = "Checks whether a regular tree language is deterministic top-down"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a `.dba` file; exit 0 = yes, 1 = no (with witness)
    Check(CheckArgs),
    /// Write the subset-state top-down automaton of a `.dba` file
    BuildDta(BuildDtaArgs),
    /// Generate a seeded random `.dba`
    Gen(GenArgs),
    /// Differential-test the decision against the brute-force oracle
    Fuzz(FuzzArgs),
    /// Evaluate a tree against a `.dba` file (debugging aid)
    Eval(EvalArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Automaton file
    path: PathBuf,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    /// Cross-check the outcome with the bounded oracle
    #[arg(long)]
    verify: bool,
    /// Tree-size bound used by --verify
    #[arg(long, default_value_t = 6)]
    oracle_bound: usize,
    /// Print timing to stderr
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct BuildDtaArgs {
    /// Automaton file
    path: PathBuf,
    /// Output path; stdout when absent
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    states: usize,
    /// Comma-separated `name/arity` list, e.g. `f/2,a/0`
    #[arg(long)]
    symbols: String,
    #[arg(long, default_value_t = 0.7)]
    density: f64,
    #[arg(long, default_value_t = 0.5)]
    final_prob: f64,
    /// Output path; stdout when absent
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    /// Number of consecutive seeds to test
    #[arg(long, default_value_t = 50)]
    count: u64,
    /// First seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    states: usize,
    /// Comma-separated `name/arity` list
    #[arg(long, default_value = "f/2,g/1,a/0,b/0")]
    symbols: String,
    #[arg(long, default_value_t = 0.7)]
    density: f64,
    #[arg(long, default_value_t = 0.5)]
    final_prob: f64,
    /// Tree-size bound for the oracle comparisons
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Read the generator spec from a JSON file instead of flags
    #[arg(long, conflicts_with_all = ["seed", "states", "symbols", "density", "final_prob"])]
    spec: Option<PathBuf>,
    /// Also run the exhaustive exchange-property search per automaton
    #[arg(long)]
    exchange: bool,
    /// Print timing to stderr
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Automaton file
    path: PathBuf,
    /// Tree in the textual syntax, e.g. `f(a,b)`
    tree: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::BuildDta(args) => cmd_build_dta(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Eval(args) => cmd_eval(args),
    };
    outcome.unwrap_or_else(|message| {
        eprintln!("error: {message}");
        ExitCode::from(2)
    })
}

fn load_dba(path: &PathBuf) -> Result<tdcheck::Dba, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_dba(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(out: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, String> {
    let dba = load_dba(&args.path)?;
    let started = Instant::now();
    let decision = is_top_down_deterministic(&dba).map_err(|e| e.to_string())?;
    let decision_time = started.elapsed();

    let mut report = explain(&decision);
    let mut verification_failed = false;
    if args.verify {
        let reduced = dba.reduce();
        let dta = associated_dta(&reduced).map_err(|e| e.to_string())?;
        let subset_holds = bounded_subset(&dba, &dta, args.oracle_bound)
            .map_err(|e| e.to_string())?
            .is_none();
        let witness_confirmed = decision
            .witness
            .as_ref()
            .map(|w| confirm_witness(&dba, w).is_ok());
        let bounded_equal = if decision.answer {
            Some(
                bounded_language_equal(&dba, &dta, args.oracle_bound)
                    .map_err(|e| e.to_string())?
                    .is_none(),
            )
        } else {
            None
        };
        verification_failed = !subset_holds
            || witness_confirmed == Some(false)
            || bounded_equal == Some(false);
        report.verification = Some(VerificationReport {
            bound: args.oracle_bound,
            witness_confirmed,
            bounded_equal,
            subset_holds: Some(subset_holds),
        });
    }

    if args.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if args.stats {
        eprintln!("decision: {decision_time:?}, total: {:?}", started.elapsed());
    }
    if verification_failed {
        eprintln!("error: oracle verification refuted the reported outcome");
        return Ok(ExitCode::from(2));
    }
    Ok(if decision.answer { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_build_dta(args: BuildDtaArgs) -> Result<ExitCode, String> {
    let dba = load_dba(&args.path)?;
    let reduced = dba.reduce();
    let dta = associated_dta(&reduced).map_err(|e| e.to_string())?;
    write_out(args.out.as_ref(), &render_dta(&dta))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let spec = GenSpec {
        seed: args.seed,
        states: args.states,
        symbols: parse_symbol_list(&args.symbols)?,
        density: args.density,
        final_prob: args.final_prob,
    };
    let dba = random_dba(&spec).map_err(|e| e.to_string())?;
    write_out(args.out.as_ref(), &render_dba(&dba))?;
    Ok(ExitCode::SUCCESS)
}

fn outcome_row(outcome: &DifferentialOutcome) -> String {
    let mark = |field: Option<bool>, yes: &str, no: &str| match field {
        None => "-".to_string(),
        Some(true) => yes.to_string(),
        Some(false) => no.to_string(),
    };
    format!(
        "{:<8} {:<7} {:<7} {:<8} {:<7} {:<6} {}",
        outcome.seed,
        outcome.states,
        if outcome.answer { "yes" } else { "no" },
        mark(outcome.witness_confirmed, "ok", "FAIL"),
        mark(Some(outcome.subset_holds), "ok", "FAIL"),
        mark(outcome.bounded_equal, "ok", "FAIL"),
        mark(outcome.exchange_violation, "found", "none"),
    )
}

fn cmd_fuzz(args: FuzzArgs) -> Result<ExitCode, String> {
    let spec = match &args.spec {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str::<GenSpec>(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => GenSpec {
            seed: args.seed,
            states: args.states,
            symbols: parse_symbol_list(&args.symbols)?,
            density: args.density,
            final_prob: args.final_prob,
        },
    };
    spec.validate()?;

    let started = Instant::now();
    let options = DifferentialOptions { bound: args.bound, exchange_search: args.exchange };
    let outcomes =
        differential_batch(&spec, args.count, &options).map_err(|e| e.to_string())?;

    println!(
        "{:<8} {:<7} {:<7} {:<8} {:<7} {:<6} {}",
        "seed", "states", "answer", "witness", "subset", "equal", "exchange"
    );
    let mut conflicted = 0usize;
    let mut clean = 0usize;
    let mut discrepancies = 0usize;
    for outcome in &outcomes {
        println!("{}", outcome_row(outcome));
        if outcome.answer {
            clean += 1;
        } else {
            conflicted += 1;
        }
        if !outcome.consistent() {
            discrepancies += 1;
        }
    }
    println!(
        "fuzz: {} seeds, {} no (witnesses confirmed), {} yes (bounded equality confirmed), {} discrepancies",
        outcomes.len(),
        conflicted,
        clean,
        discrepancies
    );
    if args.stats {
        eprintln!("fuzz: {:?}", started.elapsed());
    }
    Ok(if discrepancies == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, String> {
    let dba = load_dba(&args.path)?;
    let tree = Tree::parse(&args.tree).map_err(|e| e.to_string())?;
    if !dba.alphabet().validates(&tree) {
        return Err(format!("tree {tree} does not validate against the alphabet"));
    }
    println!("tree: {tree}");
    match dba.eval_tree(&tree) {
        Ok(state) => {
            println!("state: {}", dba.state_name(state));
            println!("member: {}", dba.is_final(state));
        }
        Err(e) => {
            println!("state: stuck ({e})");
            println!("member: false");
        }
    }
    Ok(ExitCode::SUCCESS)
}
