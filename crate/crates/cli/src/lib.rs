//! The `dbp` command line: solve, verify, oracle, gen, render, bench.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 input outside a solver's
//! or generator's domain, 3 verification failure, 4 oracle gave up.

pub mod bench;
pub mod format;
pub mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbp_core::generators::{gen_3part_short, gen_3part_squares, gen_gap, gen_random, Family};
use dbp_core::oracle::{exact_demand_bp, geometric_feasible, single_bin_feasible, OracleOutcome, SearchBudget, Verdict};
use dbp_core::solve::{solve, Algorithm};
use dbp_core::{verify_solution, Instance, Solution};
use format::{parse_instance, parse_solution, write_instance, write_solution, ParseError};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    OracleUnknown(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn parse(path: &Path, source: ParseError) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Domain(_) => 2,
            CliError::Verification(_) => 3,
            CliError::OracleUnknown(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dbp", version, about = "Two-dimensional demand bin packing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pack an instance and verify the result.
    Solve(SolveArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Exact search: optimum, one-bin decision or geometric packing.
    Oracle(OracleArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Draw a solution as SVG.
    Render(RenderArgs),
    /// Run solvers over a corpus and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
    pub algo: Algorithm,
    /// Solution file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report; a one-line summary goes to stderr either way.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub sol: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Opt,
    OneBin,
    Geometric,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "opt")]
    pub mode: OracleMode,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_nodes: u64,
    /// Seconds.
    #[arg(long, default_value_t = 600)]
    pub timeout: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Instance file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Fourteen squares that fit one 21x21 demand bin but not geometrically.
    Gap {
        /// Also write the one-bin allocation here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// One bin that is feasible iff the numbers form a 3-partition.
    #[command(name = "3part-short")]
    ThreePartShort {
        #[arg(long)]
        numbers: String,
    },
    /// Squares that fill one square bin iff the numbers form a 3-partition.
    #[command(name = "3part-squares")]
    ThreePartSquares {
        #[arg(long)]
        numbers: String,
    },
    /// Seeded random instance.
    Random {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        horizon: u64,
        #[arg(long = "C")]
        capacity: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub sol: PathBuf,
    /// SVG file; stdout when omitted.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of `.dbp` instances.
    #[arg(long)]
    pub dir: Option<PathBuf>,
    /// Comma-separated algorithms.
    #[arg(long, default_value = "auto", value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Vec<Algorithm>,
    /// Random instances for these seeds: `A`, `A..B` or `A..=B`.
    #[arg(long)]
    pub seeds: Option<String>,
    /// Families for `--seeds`.
    #[arg(long, default_value = "short,squares,mixed", value_delimiter = ',', value_parser = parse_family)]
    pub families: Vec<Family>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long = "T", default_value_t = 12)]
    pub horizon: u64,
    #[arg(long = "C", default_value_t = 18)]
    pub capacity: u64,
    /// Node budget of the oracle per instance.
    #[arg(long, default_value_t = 2_000_000)]
    pub oracle_nodes: u64,
    /// Leave `wall_ms` empty so the output is reproducible.
    #[arg(long)]
    pub omit_timing: bool,
    /// CSV file; stdout when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: dbp_core::generators::GenError| e.to_string())
}

/// Parses arguments, runs, prints errors and returns the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::parse(path, e))
}

pub fn load_solution(path: &Path, instance: &Instance) -> Result<Solution, CliError> {
    parse_solution(&read(path)?, instance).map_err(|e| CliError::parse(path, e))
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input)?;
    let summary = solve(&instance, args.algo).map_err(|e| CliError::Domain(e.to_string()))?;
    let check = verify_solution(&instance, &summary.solution);
    if !check.is_valid() {
        return Err(CliError::Verification(format!(
            "{} produced an invalid solution: {check}",
            summary.algorithm
        )));
    }
    emit(args.out.as_deref(), &write_solution(&summary.solution))?;
    let report = serde_json::json!({
        "algorithm": summary.algorithm.to_string(),
        "bins": summary.solution.num_bins(),
        "area_lower_bound": summary.area_lower_bound,
        "accepted_guess": summary.accepted_guess,
        "structured_bins": summary.structured_bins,
        "certified": summary.certified,
        "verified": true,
        "notes": summary.notes,
    });
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&report).expect("json values serialize") + "\n";
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    eprintln!(
        "{}: {} bins (area bound {}, guess {}){}",
        summary.algorithm,
        summary.solution.num_bins(),
        summary.area_lower_bound,
        summary
            .accepted_guess
            .map_or_else(|| "-".to_string(), |g| g.to_string()),
        if summary.certified { "" } else { ", bound not certified" }
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input)?;
    let solution = load_solution(&args.sol, &instance)?;
    let report = verify_solution(&instance, &solution);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    println!("feasible: {}", yes_no(report.is_feasible()));
    println!("complete: {}", yes_no(report.is_complete()));
    println!("bins: {}", report.bins);
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Verification(report.to_string()))
    }
}

fn outcome<T>(out: OracleOutcome<T>, describe: impl FnOnce(&T) -> String) -> Result<(), CliError> {
    match out {
        OracleOutcome::Proven { value, nodes } => {
            println!("Proven {} (nodes {nodes})", describe(&value));
            Ok(())
        }
        OracleOutcome::Unknown { nodes } => {
            println!("Unknown (budget exhausted after {nodes} nodes)");
            Err(CliError::OracleUnknown(format!("search budget exhausted after {nodes} nodes")))
        }
    }
}

fn verdict<W>(v: &Verdict<W>) -> String {
    if v.is_feasible() { "feasible" } else { "infeasible" }.to_string()
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input)?;
    let budget = SearchBudget::new(args.max_nodes, args.timeout);
    match args.mode {
        OracleMode::Opt => outcome(exact_demand_bp(&instance, budget), |o| format!("opt {}", o.bins)),
        OracleMode::OneBin => outcome(single_bin_feasible(&instance, budget), verdict),
        OracleMode::Geometric => outcome(
            geometric_feasible(instance.tasks(), instance.horizon(), instance.capacity(), budget),
            verdict,
        ),
    }
}

fn parse_numbers(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Domain(format!("invalid numbers: {s:?} is not a non-negative integer")))
        })
        .collect()
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let domain = |e: dbp_core::generators::GenError| CliError::Domain(e.to_string());
    let instance = match &args.kind {
        GenKind::Gap { witness } => {
            let (instance, solution) = gen_gap();
            if let Some(path) = witness {
                std::fs::write(path, write_solution(&solution)).map_err(|e| CliError::io(path, e))?;
            }
            instance
        }
        GenKind::ThreePartShort { numbers } => {
            let (instance, info) = gen_3part_short(&parse_numbers(numbers)?).map_err(domain)?;
            if !info.range_ok {
                eprintln!("warning: numbers violate B/4 < a < B/2");
            }
            instance
        }
        GenKind::ThreePartSquares { numbers } => {
            let (instance, params) = gen_3part_squares(&parse_numbers(numbers)?).map_err(domain)?;
            for w in &params.warnings {
                eprintln!("warning: {w}");
            }
            instance
        }
        GenKind::Random {
            family,
            n,
            horizon,
            capacity,
            seed,
        } => gen_random(*family, *n, *horizon, *capacity, *seed).map_err(domain)?,
    };
    emit(args.out.as_deref(), &write_instance(&instance))
}

fn cmd_render(args: &RenderArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input)?;
    let solution = load_solution(&args.sol, &instance)?;
    emit(args.svg.as_deref(), &render::render_svg(&instance, &solution))
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut corpus = match &args.dir {
        Some(dir) => bench::load_dir(dir)?,
        None => Vec::new(),
    };
    if let Some(seeds) = &args.seeds {
        let seeds = bench::parse_seed_range(seeds).map_err(CliError::Domain)?;
        corpus.extend(bench::random_corpus(&bench::RandomCorpus {
            seeds,
            families: args.families.clone(),
            n: args.n,
            horizon: args.horizon,
            capacity: args.capacity,
        })?);
    }
    if corpus.is_empty() {
        return Err(CliError::Domain("empty corpus: pass --dir and/or --seeds".into()));
    }
    let config = bench::BenchConfig {
        algos: args.algos.clone(),
        oracle_budget: SearchBudget::nodes(args.oracle_nodes),
        omit_timing: args.omit_timing,
    };
    let rows = bench::run(&corpus, &config);
    let mut buffer = Vec::new();
    bench::write_csv(&rows, &mut buffer).map_err(|e| CliError::Domain(e.to_string()))?;
    emit(args.csv.as_deref(), &String::from_utf8(buffer).expect("csv output is UTF-8"))
}
