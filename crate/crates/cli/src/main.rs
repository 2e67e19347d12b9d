//! Command-line front end: instance generation, solving, the exact oracle,
//! and the benchmark runner.
//!
//! Exit codes: 0 success, 1 infeasible, 2 time or memory budget exceeded,
//! 3 bad input.

use std::io::Read;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use blocksched::budget::{Budget, SolveError};
use blocksched::experiment::{
    run_experiment, to_csv, Algorithm, ExperimentConfig, SpeedSpec,
};
use blocksched::flow::solve_uniform_unit;
use blocksched::graph::{b_function, generate_block_graph, random_partition, BFn, RngSeed};
use blocksched::greedy::{greedy_schedule, greedy_unit_load_bound};
use blocksched::kblock::{k_approx, ptas_uniform};
use blocksched::model::{is_feasible, makespan, ExactTime, Instance, MachineEnv, Schedule};
use blocksched::oracle::brute_force_with_cap;
use blocksched::pattern::{decide_bounded_makespan, PatternOpts};
use blocksched::ptas_unit::ptas_trace;
use blocksched::treewidth::fptas;

#[derive(Parser)]
#[command(name = "blocksched", version, about = "Makespan solvers for block-graph conflicts")]
struct Cli {
    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cooperative per-run time budget in milliseconds.
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    /// Memory budget for the table-building solvers, in MiB.
    #[arg(long, global = true)]
    mem_mb: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance and print its JSON.
    Gen(GenArgs),
    /// Solve an instance (JSON on stdin or --in) and print the schedule.
    Solve(SolveArgs),
    /// Exhaustive exact solver for small instances.
    Oracle(OracleArgs),
    /// Run an experiment config and print a CSV report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Block-count function.
    #[arg(long, value_enum, default_value_t = BArg::Min)]
    b: BArg,
    /// Processing-time distribution.
    #[arg(long, value_enum, default_value_t = ProcArg::Unit)]
    proc: ProcArg,
    /// Machine environment.
    #[arg(long, value_enum, default_value_t = EnvArg::Identical)]
    env: EnvArg,
    /// Speeds for uniform machines: a comma list ("5,5,5,1") or a named set
    /// ("s5", "s25").
    #[arg(long)]
    speeds: Option<String>,
    /// Upper bound for unrelated times (drawn from [1..tmax]).
    #[arg(long, default_value_t = 5)]
    tmax: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BArg {
    Min,
    Avg,
    Max,
}

impl From<BArg> for BFn {
    fn from(b: BArg) -> BFn {
        match b {
            BArg::Min => BFn::Min,
            BArg::Avg => BFn::Avg,
            BArg::Max => BFn::Max,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcArg {
    Unit,
    P0,
    P1,
    P2,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvArg {
    Identical,
    Uniform,
    Unrelated,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Greedy,
    ExactCmax,
    PtasUnit,
    Flow,
    KApprox,
    PtasUniform,
    TwFptas,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Approximation parameter as an exact rational ("1/4" or "0.25").
    #[arg(long)]
    eps: Option<String>,
    /// Makespan bound for exact-cmax; "auto" searches up to the greedy bound.
    #[arg(long)]
    k: Option<String>,
    /// Instance JSON file (stdin when absent).
    #[arg(long = "in")]
    input: Option<String>,
    /// Number of worker threads for the flow solver's assignment scan.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: Option<String>,
    /// Exhaustive-search job cap.
    #[arg(long, default_value_t = blocksched::oracle::DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment config JSON.
    #[arg(long)]
    config: String,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {:#}", e.err);
            e.code
        }
    });
}

struct CliError {
    code: i32,
    err: anyhow::Error,
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError { code: 3, err }
    }
}

impl From<SolveError> for CliError {
    fn from(err: SolveError) -> Self {
        let code = match err {
            SolveError::Infeasible(_) => 1,
            SolveError::Timeout | SolveError::OutOfBudget => 2,
            _ => 3,
        };
        CliError { code, err: anyhow::Error::new(err) }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let budget = Budget::new(cli.timeout_ms.map(Duration::from_millis), cli.mem_mb);
    match cli.cmd {
        Cmd::Gen(args) => gen(args, cli.seed),
        Cmd::Solve(args) => solve(args, budget),
        Cmd::Oracle(args) => oracle(args),
        Cmd::Bench(args) => bench(args, cli.seed, cli.timeout_ms, cli.mem_mb),
    }
}

fn gen(args: GenArgs, seed: u64) -> Result<(), CliError> {
    use rand::Rng;
    if args.n < args.m || args.m < 2 {
        return Err(anyhow::anyhow!("gen requires n >= m >= 2").into());
    }
    let blocks = b_function(args.n, args.m, args.b.into());
    let total = args.n + blocks - 1;
    let parts = random_partition(total, blocks, 2, args.m, RngSeed(seed).derive(1, 0))
        .map_err(|e| CliError { code: 3, err: anyhow::Error::new(e) })?;
    let graph = generate_block_graph(&parts, RngSeed(seed).derive(2, 0))
        .map_err(|e| CliError { code: 3, err: anyhow::Error::new(e) })?;
    let mut rng = RngSeed(seed).derive(3, 0).rng();
    let hi = match args.proc {
        ProcArg::Unit => 1,
        ProcArg::P0 => 5,
        ProcArg::P1 => 10,
        ProcArg::P2 => 20,
    };
    let proc: Vec<u64> = (0..args.n).map(|_| rng.gen_range(1..=hi)).collect();
    let inst = match args.env {
        EnvArg::Identical => {
            Instance::new(graph, MachineEnv::Identical { m: args.m }, Some(proc))?
        }
        EnvArg::Uniform => {
            let spec = match &args.speeds {
                Some(s) if s.contains(',') => SpeedSpec::List(
                    s.split(',')
                        .map(|x| x.trim().parse::<u64>())
                        .collect::<Result<Vec<_>, _>>()
                        .context("parsing --speeds")?,
                ),
                Some(s) => SpeedSpec::Named(s.clone()),
                None => SpeedSpec::Named("s5".into()),
            };
            let mut speeds = spec.resolve(args.m)?;
            speeds.sort_unstable_by(|a, b| b.cmp(a));
            Instance::new(graph, MachineEnv::Uniform { m: args.m, speeds }, Some(proc))?
        }
        EnvArg::Unrelated => {
            let times: Vec<Vec<u64>> = (0..args.m)
                .map(|_| (0..args.n).map(|_| rng.gen_range(1..=args.tmax)).collect())
                .collect();
            Instance::new(graph, MachineEnv::Unrelated { m: args.m, times }, None)?
        }
    };
    println!("{}", serde_json::to_string(&inst).context("serializing instance")?);
    Ok(())
}

fn read_instance(path: Option<&str>) -> Result<Instance, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            buf
        }
    };
    let inst: Instance = serde_json::from_str(&text).context("parsing instance JSON")?;
    inst.validate()?;
    Ok(inst)
}

fn parse_eps(s: Option<&str>) -> Result<ExactTime, CliError> {
    let s = s.ok_or_else(|| anyhow::anyhow!("--eps required for this algorithm"))?;
    let e: ExactTime = s
        .parse()
        .map_err(|m: String| anyhow::anyhow!("bad --eps: {}", m))?;
    if e.is_zero() {
        return Err(anyhow::anyhow!("--eps must be positive").into());
    }
    Ok(e)
}

fn emit_schedule(inst: &Instance, sched: &Schedule) -> Result<(), CliError> {
    debug_assert!(is_feasible(inst, sched));
    let c = makespan(inst, sched);
    #[derive(serde::Serialize)]
    struct Out<'a> {
        assign: &'a [u32],
        makespan: String,
    }
    let out = Out { assign: &sched.assign, makespan: c.to_string() };
    println!("{}", serde_json::to_string(&out).context("serializing schedule")?);
    Ok(())
}

fn solve(args: SolveArgs, budget: Budget) -> Result<(), CliError> {
    let inst = read_instance(args.input.as_deref())?;
    let sched = match args.alg {
        AlgArg::Greedy => greedy_schedule(&inst)?,
        AlgArg::ExactCmax => {
            let k = args.k.as_deref().unwrap_or("auto");
            if k == "auto" {
                let (s, _) = greedy_unit_load_bound(&inst)?;
                let upper = makespan(&inst, &s).floor_u64();
                let mut found = None;
                for k in 1..=upper as usize {
                    match decide_bounded_makespan(&inst, k, &budget, PatternOpts::default()) {
                        Ok(s) => {
                            found = Some(s);
                            break;
                        }
                        Err(SolveError::Infeasible(_)) => continue,
                        Err(e) => return Err(e.into()),
                    }
                }
                found.ok_or(SolveError::Infeasible("no k up to the greedy bound".into()))?
            } else {
                let k: usize = k.parse().map_err(|_| anyhow::anyhow!("bad --k"))?;
                decide_bounded_makespan(&inst, k, &budget, PatternOpts::default())?
            }
        }
        AlgArg::PtasUnit => {
            let eps = parse_eps(args.eps.as_deref())?;
            ptas_trace(&inst, &eps, &budget, PatternOpts::default())?.0
        }
        AlgArg::Flow => {
            let parallel = args.parallel.is_some_and(|t| t > 1);
            if let Some(threads) = args.parallel {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                    .ok();
            }
            solve_uniform_unit(&inst, &budget, parallel)?.0
        }
        AlgArg::KApprox => k_approx(&inst, &budget)?.0,
        AlgArg::PtasUniform => {
            let eps = parse_eps(args.eps.as_deref())?;
            ptas_uniform(&inst, &eps, &budget)?.0
        }
        AlgArg::TwFptas => {
            let eps = parse_eps(args.eps.as_deref())?;
            fptas(&inst, &eps, &budget)?.0
        }
    };
    emit_schedule(&inst, &sched)
}

fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let inst = read_instance(args.input.as_deref())?;
    let (sched, _) = brute_force_with_cap(&inst, args.cap)?;
    emit_schedule(&inst, &sched)
}

fn bench(args: BenchArgs, seed: u64, timeout_ms: Option<u64>, mem_mb: Option<u64>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text).context("parsing config")?;
    if seed != 0 {
        cfg.seed = seed;
    }
    if timeout_ms.is_some() {
        cfg.timeout_ms = timeout_ms;
    }
    if mem_mb.is_some() {
        cfg.mem_mb = mem_mb;
    }
    if matches!(cfg.alg, Algorithm::PtasUnit | Algorithm::PtasUniform | Algorithm::TwFptas)
        && cfg.eps.is_none()
    {
        return Err(anyhow::anyhow!("config needs eps for this algorithm").into());
    }
    let rows = run_experiment(&cfg)?;
    print!("{}", to_csv(&rows));
    Ok(())
}
