//! `bsv` — exact desk-scale checks for Borel ideal subspaces: order-ideal
//! listings and census, verification of the determinant-factor identities,
//! and trace-map splitting reports for candidate sections.
//!
//! Exit codes: 0 when every mathematical check passes, 1 when a check fails
//! (witnesses are in the output), 2 for usage, capacity and domain errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bsv_core::claims::{
    verify_all, verify_chain_with_options, ChainReport, RankChoice, VerifyOptions,
};
use bsv_core::poset::{
    check_span_b_invariance, enumerate_ideals, is_coordinate_lie_ideal, parabolic_to_ideal,
    BlockComposition, PosetIdeal, Position,
};
use bsv_core::splitting::{simultaneous_report, CandidateExpr, SimultaneousReport};
use bsv_core::{Caps, Error, MinorCache, Result, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(
    name = "bsv",
    version,
    about = "Exact checks for Borel ideal subspaces of gl_n: poset ideals, determinant factors, Frobenius splittings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the order ideals for a given n, optionally with a Lie-ideal census
    Ideals(IdealsArgs),
    /// Verify the determinant-factor identities for one ideal or the whole family
    Verify(VerifyArgs),
    /// Build a candidate section and report splitting plus per-ideal compatibility
    Split(SplitArgs),
}

#[derive(Debug, Args)]
struct IdealsArgs {
    /// Matrix size
    #[arg(long)]
    n: usize,
    /// Compare the coordinate-spanned Lie ideals of the Borel against the b[S] family
    #[arg(long)]
    census: bool,
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Seed for the randomized B-stability test in the census
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RankArg {
    Auto,
    Symbolic,
    Randomized,
}

impl From<RankArg> for RankChoice {
    fn from(value: RankArg) -> RankChoice {
        match value {
            RankArg::Auto => RankChoice::Auto,
            RankArg::Symbolic => RankChoice::Symbolic,
            RankArg::Randomized => RankChoice::Randomized,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Matrix size
    #[arg(long)]
    n: usize,
    /// Verify a single ideal, given as a JSON member list, e.g. "[[2,1],[1,1]]"
    #[arg(long, conflicts_with = "parabolic")]
    ideal: Option<String>,
    /// Verify the ideal of a standard parabolic given by block sizes, e.g. "2,1"
    #[arg(long)]
    parabolic: Option<String>,
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Omit timing fields (reports become byte-stable regression fixtures)
    #[arg(long)]
    no_timing: bool,
    /// Seed for the randomized rank checks
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Rank certification strategy
    #[arg(long, value_enum, default_value_t = RankArg::Auto)]
    rank: RankArg,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// On-disk cache for determinant factors (default: $BSV_CACHE_DIR, else memory only)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Cap on n
    #[arg(long, default_value_t = 4)]
    max_n: usize,
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Matrix size
    #[arg(long)]
    n: usize,
    /// Prime characteristic
    #[arg(long)]
    p: u64,
    /// Candidate expression file (JSON)
    #[arg(long)]
    candidate: PathBuf,
    /// Exit nonzero unless the candidate splits and compatibly splits every ideal
    #[arg(long)]
    expect_split: bool,
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// On-disk cache for determinant factors (default: $BSV_CACHE_DIR, else memory only)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Cap on candidate term count
    #[arg(long, default_value_t = 5_000_000)]
    max_terms: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ideals(args) => cmd_ideals(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Split(args) => cmd_split(args),
    }
}

fn open_cache(dir: &Option<PathBuf>) -> Result<MinorCache> {
    let dir = dir
        .clone()
        .or_else(|| std::env::var_os("BSV_CACHE_DIR").map(PathBuf::from));
    match dir {
        Some(d) => MinorCache::with_dir(d),
        None => Ok(MinorCache::in_memory()),
    }
}

fn set_jobs(jobs: Option<usize>) {
    if let Some(jobs) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn require_prime(p: u64) -> Result<()> {
    let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if is_prime {
        Ok(())
    } else {
        Err(Error::domain(format!("p = {p} is not a prime")))
    }
}

fn print_json<T: Serialize>(doc: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("reports serialize")
    );
}

// ---- ideals ----

#[derive(Serialize)]
struct CensusDoc {
    upper_positions: usize,
    subsets_scanned: usize,
    coordinate_lie_ideals: usize,
    b_stable_lie_ideals: usize,
    family_subspaces: usize,
    all_b_stable_lie_ideals_in_family: bool,
    missing: Vec<Vec<Position>>,
}

#[derive(Serialize)]
struct IdealsDoc {
    schema: &'static str,
    n: usize,
    count: usize,
    ideals: Vec<PosetIdeal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<CensusDoc>,
}

/// Scan every subset of the on-or-above positions: which span Lie ideals of
/// the Borel, which of those survive random conjugation, and whether each
/// survivor is the coordinate subspace of some enumerated ideal.
fn census(n: usize, ideals: &[PosetIdeal], seed: u64) -> Result<CensusDoc> {
    let upper: Vec<Position> = (1..=n)
        .flat_map(|i| (i..=n).map(move |j| Position::new(i, j)))
        .collect();
    let family: BTreeSet<Vec<Position>> = ideals.iter().map(|s| s.free_positions()).collect();
    let mut lie = 0usize;
    let mut stable = 0usize;
    let mut missing = Vec::new();
    let subsets = 1u32 << upper.len();
    for mask in 0..subsets {
        let span: BTreeSet<Position> = upper
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if !is_coordinate_lie_ideal(&span, n)? {
            continue;
        }
        lie += 1;
        if !check_span_b_invariance(&span, n, 101, 20, seed)? {
            continue;
        }
        stable += 1;
        let as_list: Vec<Position> = span.iter().copied().collect();
        if !family.contains(&as_list) {
            missing.push(as_list);
        }
    }
    Ok(CensusDoc {
        upper_positions: upper.len(),
        subsets_scanned: subsets as usize,
        coordinate_lie_ideals: lie,
        b_stable_lie_ideals: stable,
        family_subspaces: family.len(),
        all_b_stable_lie_ideals_in_family: missing.is_empty(),
        missing,
    })
}

fn cmd_ideals(args: IdealsArgs) -> Result<ExitCode> {
    let ideals = enumerate_ideals(args.n)?;
    let census = if args.census {
        Some(census(args.n, &ideals, args.seed)?)
    } else {
        None
    };
    let doc = IdealsDoc {
        schema: "1",
        n: args.n,
        count: ideals.len(),
        ideals,
        census,
    };
    if args.json {
        print_json(&doc);
    } else {
        println!("n = {}: {} order ideals", doc.n, doc.count);
        for ideal in &doc.ideals {
            println!("  {ideal}");
        }
        if let Some(c) = &doc.census {
            println!(
                "census: {} subsets of {} upper positions scanned",
                c.subsets_scanned, c.upper_positions
            );
            println!(
                "  coordinate Lie ideals: {}; B-stable among them: {}; family subspaces: {}",
                c.coordinate_lie_ideals, c.b_stable_lie_ideals, c.family_subspaces
            );
            if c.all_b_stable_lie_ideals_in_family {
                println!("  every B-stable coordinate Lie ideal is a b[S] subspace");
            } else {
                println!("  NOT covered by the family: {:?}", c.missing);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---- verify ----

#[derive(Serialize)]
struct ChainDoc<'a> {
    schema: &'static str,
    #[serde(flatten)]
    chain: &'a ChainReport,
}

fn parse_ideal_selector(n: usize, text: &str) -> Result<PosetIdeal> {
    let members: Vec<(usize, usize)> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("bad ideal member list {text:?}: {e}")))?;
    PosetIdeal::new(n, members.into_iter().map(|(i, j)| Position::new(i, j)))
}

fn print_chain_text(chain: &ChainReport) {
    let verdict = if chain.passed { "PASS" } else { "FAIL" };
    println!(
        "{verdict} {} ({} steps{})",
        chain.ideal,
        chain.steps.len(),
        chain
            .elapsed_ms
            .map(|ms| format!(", {ms} ms"))
            .unwrap_or_default()
    );
    if !chain.base_case.passed() {
        println!("  base_case: {:?}", chain.base_case);
    }
    for step in &chain.steps {
        if !step.passed() {
            println!("  step {} (r = {}):", step.st, step.r);
            let named = [
                ("degree_one", &step.checks.degree_one),
                ("divisibility", &step.checks.divisibility),
                ("residue_identity", &step.checks.residue_identity),
                ("rank_drop", &step.checks.rank_drop),
                ("block_zeros", &step.checks.block_zeros),
            ];
            for (name, outcome) in named {
                if let bsv_core::claims::CheckOutcome::Fail { witness } = outcome {
                    println!("    {name}: FAIL ({witness})");
                }
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    set_jobs(args.jobs);
    let cache = open_cache(&args.cache_dir)?;
    let caps = Caps {
        max_n: args.max_n,
        ..Caps::default()
    };
    if args.n > caps.max_n {
        return Err(Error::Capacity {
            what: "verify n",
            actual: args.n,
            cap: caps.max_n,
        });
    }
    let opts = VerifyOptions {
        seed: args.seed,
        rank: args.rank.into(),
        ..VerifyOptions::default()
    };

    let target = if let Some(text) = &args.ideal {
        Some(parse_ideal_selector(args.n, text)?)
    } else if let Some(blocks) = &args.parabolic {
        let composition: BlockComposition = blocks.parse()?;
        if composition.n() != args.n {
            return Err(Error::domain(format!(
                "block sizes sum to {}, but n = {}",
                composition.n(),
                args.n
            )));
        }
        Some(parabolic_to_ideal(&composition))
    } else {
        None
    };

    match target {
        Some(ideal) => {
            let mut chain = verify_chain_with_options(&cache, &ideal, &opts)?;
            if args.no_timing {
                chain.elapsed_ms = None;
            }
            if args.json {
                print_json(&ChainDoc {
                    schema: "1",
                    chain: &chain,
                });
            } else {
                print_chain_text(&chain);
            }
            Ok(exit_for(chain.passed))
        }
        None => {
            let mut summary = verify_all(&cache, args.n, &opts, &caps)?;
            if args.no_timing {
                summary.clear_timings();
            }
            if args.json {
                print_json(&summary);
            } else {
                println!(
                    "n = {}: {}/{} ideals pass{}",
                    summary.n,
                    summary.passed_ideals,
                    summary.total_ideals,
                    summary
                        .elapsed_ms
                        .map(|ms| format!(" ({ms} ms)"))
                        .unwrap_or_default()
                );
                for chain in summary.chains.iter().filter(|c| !c.passed) {
                    print_chain_text(chain);
                }
            }
            Ok(exit_for(summary.all_passed))
        }
    }
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

// ---- split ----

#[derive(Serialize)]
struct SplitDoc<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a SimultaneousReport,
}

fn cmd_split(args: SplitArgs) -> Result<ExitCode> {
    set_jobs(args.jobs);
    require_prime(args.p)?;
    let cache = open_cache(&args.cache_dir)?;
    let caps = Caps {
        max_terms: args.max_terms,
        ..Caps::default()
    };
    let text = std::fs::read_to_string(&args.candidate)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", args.candidate.display())))?;
    let expr: CandidateExpr = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bad candidate file {}: {e}", args.candidate.display())))?;
    let ideals = enumerate_ideals(args.n)?;
    let report = simultaneous_report(&cache, &expr, args.p, &ideals, &caps)?;
    if args.json {
        print_json(&SplitDoc {
            schema: "1",
            report: &report,
        });
    } else {
        println!(
            "candidate over F_{} (n = {}): splits = {}",
            report.p, report.n, report.splits
        );
        println!("  trace = {}", report.trace);
        for ideal in &report.ideals {
            let verdict = if ideal.compatibly_split {
                "compatible"
            } else {
                "NOT compatible"
            };
            println!("  {}: {verdict}", ideal.ideal);
            for var in ideal.variables.iter().filter(|v| !v.compatible) {
                if let Some(w) = &var.witness {
                    println!(
                        "    {} fails: multiplier {}, trace term {}",
                        var.variable, w.multiplier, w.trace_monomial
                    );
                }
            }
        }
        println!("all compatible: {}", report.all_compatible);
    }
    if args.expect_split && !(report.splits && report.all_compatible) {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
