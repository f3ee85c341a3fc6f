//! Command-line front end: `solve`, `gen`, `verify` and `bench`.
//!
//! Every failure ends in a single `error: <kind>: <message>` line on the
//! error stream and a nonzero exit code.

use std::ffi::OsString;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groebner::DEFAULT_STEP_BUDGET;
use crate::poly::{parse_polynomial, PolyError, Polynomial, VarContext};
use crate::problems::{generate, read_instance, serialize, Family, FamilySpec, GeneratedInstance};
use crate::solver::{solve, Algorithm, ParetoResult, SolveError, SolveOptions, Solved, Status};
use crate::systems::{ProblemInstance, SlackMode};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the default Gröbner step budget.
pub const BUDGET_ENV: &str = "MOPIP_BUDGET";

/// Pipelines compared by `verify` and run by `bench` unless told otherwise.
pub const PIPELINES: [Algorithm; 6] = [
    Algorithm::Alg1,
    Algorithm::Kkt,
    Algorithm::KktSl,
    Algorithm::Fj,
    Algorithm::FjSl,
    Algorithm::Mofj,
];

/// Parses a polynomial in `x1..xn` (and other context variables).
///
/// Grammar: terms `[coef][*var[^exp]]…` joined by `+`/`-`, where `coef` is
/// an integer or `num/den`. Whitespace is ignored.
pub fn parse_expression(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial, PolyError> {
    parse_polynomial(text, ctx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Solved,
    Infeasible,
    BudgetExceeded,
    Error,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Solved => EXIT_SOLVED,
            RunStatus::Infeasible => EXIT_INFEASIBLE,
            RunStatus::BudgetExceeded => EXIT_BUDGET,
            RunStatus::Error => EXIT_ERROR,
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Solved => "solved",
            RunStatus::Infeasible => "infeasible",
            RunStatus::BudgetExceeded => "budget_exceeded",
            RunStatus::Error => "error",
        })
    }
}

/// One row of benchmark output, also attached to `solve` results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub family: Option<Family>,
    pub n: usize,
    pub seed: Option<u64>,
    pub algorithm: String,
    pub gb_millis: u128,
    pub total_millis: u128,
    /// System size; absent for brute force.
    pub n_vars: Option<usize>,
    pub n_gens: Option<usize>,
    pub max_deg: Option<u32>,
    pub n_nondominated: usize,
    pub status: RunStatus,
}

pub const CSV_HEADER: [&str; 11] = [
    "family",
    "n",
    "seed",
    "algorithm",
    "gb_ms",
    "total_ms",
    "n_vars",
    "n_gens",
    "max_deg",
    "n_nd",
    "status",
];

impl RunRecord {
    fn new(
        inst: &GeneratedInstance,
        algo: Algorithm,
        outcome: &Result<Solved, SolveError>,
    ) -> Self {
        let mut rec = RunRecord {
            family: inst.spec.map(|s| s.family),
            n: inst.problem.n(),
            seed: inst.spec.map(|s| s.seed),
            algorithm: algo.name().to_string(),
            gb_millis: 0,
            total_millis: 0,
            n_vars: None,
            n_gens: None,
            max_deg: None,
            n_nondominated: 0,
            status: RunStatus::Error,
        };
        match outcome {
            Ok(s) => {
                rec.gb_millis = s.gb_time.as_millis();
                rec.total_millis = s.total_time.as_millis().max(rec.gb_millis);
                if let Some(st) = s.stats {
                    rec.n_vars = Some(st.n_vars);
                    rec.n_gens = Some(st.n_gens);
                    rec.max_deg = Some(st.max_deg);
                }
                rec.n_nondominated = s.result.y_e().len();
                rec.status = match s.result.status() {
                    Status::Solved => RunStatus::Solved,
                    Status::Infeasible => RunStatus::Infeasible,
                };
            }
            Err(e) if e.is_budget_exceeded() => rec.status = RunStatus::BudgetExceeded,
            Err(_) => {}
        }
        rec
    }

    /// Fields in [`CSV_HEADER`] order.
    pub fn csv_fields(&self) -> [String; 11] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            opt(self.family.map(|f| f.to_string())),
            self.n.to_string(),
            opt(self.seed.map(|s| s.to_string())),
            self.algorithm.clone(),
            self.gb_millis.to_string(),
            self.total_millis.to_string(),
            opt(self.n_vars.map(|v| v.to_string())),
            opt(self.n_gens.map(|v| v.to_string())),
            opt(self.max_deg.map(|v| v.to_string())),
            self.n_nondominated.to_string(),
            self.status.to_string(),
        ]
    }
}

/// Document written by `solve`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveDocument {
    pub run: RunRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ParetoResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "mopip",
    version,
    about = "Exact multiobjective polynomial binary programming"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file and write the Pareto set.
    Solve(SolveArgs),
    /// Generate a random benchmark instance.
    Gen(GenArgs),
    /// Compare pipelines against brute-force enumeration.
    Verify(VerifyArgs),
    /// Run the benchmark grid and append CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value = "alg1")]
    algorithm: Algorithm,
    #[arg(long)]
    slack_mode: Option<SlackMode>,
    #[arg(long)]
    budget: Option<u64>,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Instance file; alternatively give `--family` and `--n`.
    input: Option<PathBuf>,
    #[arg(long, default_value = "brute")]
    against: String,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of generated instances (seeds 1..=K).
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    families: Vec<Family>,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Number of instances per (family, n), seeds 1..=K.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    #[arg(long)]
    budget: Option<u64>,
    /// Rows are appended; the header is written when the file is new or empty.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// A failure reported as one `error: <kind>: <message>` line.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        CliError {
            kind,
            message: message.to_string().replace('\n', " "),
        }
    }

    fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::new("io", format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}: {}", self.kind, self.message)
    }
}

fn budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::new(
                "usage",
                format!("{BUDGET_ENV} must be an unsigned integer, got '{v}'"),
            )
        }),
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new("io", e)),
    }
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst = read_instance(&args.input).map_err(|e| CliError::new("parse", e))?;
    let mut opts = SolveOptions::default().with_budget(budget(args.budget)?);
    let mut algo = args.algorithm;
    if let Some(mode) = args.slack_mode {
        algo = algo.with_slack_mode(mode);
        opts = opts.with_slack(mode);
    }
    let outcome = solve(&inst.problem, algo, &opts);
    let run = RunRecord::new(&inst, algo, &outcome);
    let status = run.status;
    let (result, error) = match outcome {
        Ok(s) => (Some(s.result), None),
        Err(e) => (None, Some(e)),
    };
    let doc = SolveDocument {
        run,
        result,
        error: error.as_ref().map(|e| e.to_string()),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::new("io", e))?;
    text.push('\n');
    write_output(args.output.as_deref(), &text, out)?;
    match error {
        Some(e) if status == RunStatus::BudgetExceeded => Err(CliError::new("budget", e)),
        Some(e) => Err(CliError::new("solve", e)),
        None => Ok(status.exit_code()),
    }
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec =
        FamilySpec::new(args.family, args.n, args.seed).map_err(|e| CliError::new("usage", e))?;
    let inst = generate(&spec).map_err(|e| CliError::new("usage", e))?;
    write_output(args.output.as_deref(), &serialize(&inst), out)?;
    Ok(EXIT_SOLVED)
}

fn instances_for(family: Family, n: usize, seeds: u64) -> Result<Vec<GeneratedInstance>, CliError> {
    (1..=seeds)
        .map(|seed| {
            let spec = FamilySpec::new(family, n, seed).map_err(|e| CliError::new("usage", e))?;
            generate(&spec).map_err(|e| CliError::new("usage", e))
        })
        .collect()
}

fn describe(inst: &GeneratedInstance) -> String {
    match inst.spec {
        Some(s) => format!("{} n={} seed={}", s.family, s.n, s.seed),
        None => format!("instance n={}", inst.problem.n()),
    }
}

type Verdicts = Vec<(Algorithm, Result<bool, SolveError>)>;

fn verify_one(
    problem: &ProblemInstance,
    algorithms: &[Algorithm],
    opts: &SolveOptions,
) -> Result<Verdicts, CliError> {
    let oracle = solve(problem, Algorithm::Brute, opts).map_err(|e| CliError::new("usage", e))?;
    Ok(algorithms
        .iter()
        .map(|&a| {
            (
                a,
                solve(problem, a, opts).map(|s| s.result.same_front(&oracle.result)),
            )
        })
        .collect())
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.against != "brute" {
        return Err(CliError::new(
            "usage",
            format!("unsupported oracle '{}'", args.against),
        ));
    }
    let instances = match (&args.input, args.family, args.n) {
        (Some(path), None, None) => {
            vec![read_instance(path).map_err(|e| CliError::new("parse", e))?]
        }
        (None, Some(f), Some(n)) => instances_for(f, n, args.seeds)?,
        _ => {
            return Err(CliError::new(
                "usage",
                "give either an input file or --family with --n",
            ))
        }
    };
    let algorithms = args.algorithms.unwrap_or_else(|| PIPELINES.to_vec());
    let opts = SolveOptions::default().with_budget(budget(args.budget)?);
    let mut all_ok = true;
    for inst in &instances {
        for (algo, outcome) in verify_one(&inst.problem, &algorithms, &opts)? {
            let verdict = match outcome {
                Ok(true) => "ok".to_string(),
                Ok(false) => {
                    all_ok = false;
                    "mismatch".to_string()
                }
                Err(e) => {
                    all_ok = false;
                    format!("error {}", e.to_string().replace('\n', " "))
                }
            };
            writeln!(out, "{} {} {verdict}", describe(inst), algo)
                .map_err(|e| CliError::new("io", e))?;
        }
    }
    if all_ok {
        Ok(EXIT_SOLVED)
    } else {
        Err(CliError::new(
            "mismatch",
            "some pipelines disagree with brute force",
        ))
    }
}

/// Runs every algorithm on every instance of the grid. Instances are solved
/// in parallel; rows come back in (family, n, seed, algorithm) order.
pub fn bench_records(
    families: &[Family],
    n_range: std::ops::RangeInclusive<usize>,
    seeds: u64,
    algorithms: &[Algorithm],
    opts: &SolveOptions,
) -> Result<Vec<RunRecord>, CliError> {
    let mut grid = Vec::new();
    for &family in families {
        for n in n_range.clone().filter(|&n| n >= family.min_n()) {
            grid.extend(instances_for(family, n, seeds)?);
        }
    }
    let rows: Vec<Vec<RunRecord>> = grid
        .par_iter()
        .map(|inst| {
            algorithms
                .iter()
                .map(|&a| RunRecord::new(inst, a, &solve(&inst.problem, a, opts)))
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn cmd_bench(args: BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.n_min > args.n_max {
        return Err(CliError::new("usage", "--n-min exceeds --n-max"));
    }
    let algorithms = args.algorithms.unwrap_or_else(|| Algorithm::ALL.to_vec());
    let opts = SolveOptions::default().with_budget(budget(args.budget)?);
    let records = bench_records(
        &args.families,
        args.n_min..=args.n_max,
        args.seeds,
        &algorithms,
        &opts,
    )?;
    match &args.csv {
        Some(path) => {
            let fresh = std::fs::metadata(path)
                .map(|m| m.len() == 0)
                .unwrap_or(true);
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| CliError::io(path, e))?;
            write_csv(file, fresh, &records).map_err(|e| CliError::io(path, e))?;
        }
        None => write_csv(out, true, &records).map_err(|e| CliError::new("io", e))?,
    }
    Ok(EXIT_SOLVED)
}

fn write_csv<W: Write>(w: W, header: bool, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    if header {
        wtr.write_record(CSV_HEADER)?;
    }
    for r in records {
        wtr.write_record(r.csv_fields())?;
    }
    wtr.flush()?;
    Ok(())
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_SOLVED;
            }
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "{}", CliError::new("usage", first));
            return EXIT_ERROR;
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            match e.kind {
                "budget" => EXIT_BUDGET,
                _ => EXIT_ERROR,
            }
        }
    }
}

/// Runs the command line against the process's standard streams.
pub fn main_with_env() -> i32 {
    run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}
