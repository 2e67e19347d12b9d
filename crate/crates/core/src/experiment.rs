//! Experiment runner: generates random instances cell by cell, applies a
//! solver under time and memory budgets, and aggregates ratio/time rows
//! into CSV reports.
//!
//! Per cell, `instances` random instances are generated from the partition
//! sampler and the block-graph generator; the first timeout marks the cell
//! 'T' and the first memory trip marks it 'M', skipping the remaining
//! instances of that cell.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, SolveError};
use crate::flow::solve_uniform_unit;
use crate::graph::{b_function, generate_block_graph, random_partition, BFn, RngSeed};
use crate::greedy::greedy_schedule;
use crate::kblock::{k_approx, ptas_uniform};
use crate::model::{makespan, ExactTime, Instance, MachineEnv, Schedule};
use crate::oracle::brute_force_with_cap;
use crate::pattern::{decide_bounded_makespan, PatternOpts};
use crate::ptas_unit::{ptas_trace, BranchTag};
use crate::treewidth::fptas;

/// Processing-time distributions: unit, or uniform over [1..5], [1..10],
/// [1..20].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcDist {
    Unit,
    P0,
    P1,
    P2,
}

impl ProcDist {
    pub fn draw(self, n: usize, rng: &mut impl Rng) -> Vec<u64> {
        let hi = match self {
            ProcDist::Unit => return vec![1; n],
            ProcDist::P0 => 5,
            ProcDist::P1 => 10,
            ProcDist::P2 => 20,
        };
        (0..n).map(|_| rng.gen_range(1..=hi)).collect()
    }
}

impl std::fmt::Display for ProcDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProcDist::Unit => write!(f, "unit"),
            ProcDist::P0 => write!(f, "p0"),
            ProcDist::P1 => write!(f, "p1"),
            ProcDist::P2 => write!(f, "p2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    ExactCmax,
    PtasUnit,
    Flow,
    KApprox,
    PtasUniform,
    TwFptas,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Algorithm::Greedy => "greedy",
            Algorithm::ExactCmax => "exact-cmax",
            Algorithm::PtasUnit => "ptas-unit",
            Algorithm::Flow => "flow",
            Algorithm::KApprox => "k-approx",
            Algorithm::PtasUniform => "ptas-uniform",
            Algorithm::TwFptas => "tw-fptas",
        };
        write!(f, "{}", s)
    }
}

/// What the achieved makespan is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// sum(p)/m for identical machines, sum(p)/sum(s) for uniform.
    Lb,
    /// Exhaustive branch-and-bound (small n only).
    Oracle,
    /// The treewidth algorithm with delta = 1/(n+1), exact on unit jobs.
    Tree,
}

/// Speeds for uniform cells: an explicit non-increasing list, or the named
/// defaults (per machine count) drawn from [1,5] or [1,25].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", untagged)]
pub enum SpeedSpec {
    Named(String),
    List(Vec<u64>),
}

impl SpeedSpec {
    pub fn resolve(&self, m: usize) -> Result<Vec<u64>, SolveError> {
        match self {
            SpeedSpec::List(v) => {
                if v.len() != m {
                    return Err(SolveError::InvalidInput(format!(
                        "speed list has {} entries for m = {}",
                        v.len(),
                        m
                    )));
                }
                Ok(v.clone())
            }
            SpeedSpec::Named(name) => default_speeds(name, m),
        }
    }
}

/// The speed sets used by the reference experiments.
pub fn default_speeds(name: &str, m: usize) -> Result<Vec<u64>, SolveError> {
    let v: Vec<u64> = match (name, m) {
        ("s5", 4) => vec![5, 5, 5, 1],
        ("s5", 6) => vec![5, 5, 5, 5, 5, 1],
        ("s5", 8) => vec![5, 5, 5, 5, 5, 2, 1, 1],
        ("s25", 4) => vec![23, 21, 21, 4],
        ("s25", 6) => vec![25, 23, 21, 21, 4, 4],
        ("s25", 8) => vec![25, 23, 23, 21, 21, 6, 4, 4],
        ("s5", m) => {
            let mut v = vec![5u64; m.saturating_sub(1)];
            v.push(1);
            v
        }
        ("s25", m) => {
            let mut v = vec![25u64; m.saturating_sub(1)];
            v.push(4);
            v
        }
        _ => {
            return Err(SolveError::InvalidInput(format!(
                "unknown speed set '{}'",
                name
            )))
        }
    };
    Ok(v)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
    pub bs: Vec<BFn>,
    pub procs: Vec<ProcDist>,
    pub alg: Algorithm,
    #[serde(default)]
    pub eps: Option<ExactTime>,
    #[serde(default)]
    pub speeds: Option<SpeedSpec>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Per-instance wall-clock budget; the reference protocol used 15 min.
    #[serde(default)]
    pub timeout_ms: Option<u64>,
    #[serde(default)]
    pub mem_mb: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_reference")]
    pub reference: Reference,
    /// Cap for the oracle reference.
    #[serde(default = "default_oracle_cap")]
    pub oracle_cap: usize,
}

fn default_instances() -> usize {
    25
}

fn default_reference() -> Reference {
    Reference::Lb
}

fn default_oracle_cap() -> usize {
    crate::oracle::DEFAULT_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    Timeout,
    Memory,
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellStatus::Ok => write!(f, "OK"),
            CellStatus::Timeout => write!(f, "T"),
            CellStatus::Memory => write!(f, "M"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub m: usize,
    pub n: usize,
    pub b: BFn,
    pub proc: ProcDist,
    pub alg: Algorithm,
    pub eps: Option<ExactTime>,
    pub mean_ratio: Option<f64>,
    pub mean_us: Option<u64>,
    pub status: CellStatus,
    /// For the unit PTAS: percentage of instances per branch combination.
    pub participation: String,
    pub solved: usize,
}

/// Generate one instance of a cell.
pub fn cell_instance(
    n: usize,
    m: usize,
    b: BFn,
    proc: ProcDist,
    speeds: Option<&SpeedSpec>,
    seed: RngSeed,
) -> Result<Instance, SolveError> {
    let blocks = b_function(n, m, b);
    let total = n + blocks - 1;
    let parts = random_partition(total, blocks, 2, m, seed.derive(1, 0))
        .map_err(|e| SolveError::InvalidInput(e.to_string()))?;
    let graph = generate_block_graph(&parts, seed.derive(2, 0))
        .map_err(|e| SolveError::InvalidInput(e.to_string()))?;
    let mut rng = seed.derive(3, 0).rng();
    let p = proc.draw(n, &mut rng);
    let env = match speeds {
        None => MachineEnv::Identical { m },
        Some(spec) => {
            let mut s = spec.resolve(m)?;
            s.sort_unstable_by(|a, b| b.cmp(a));
            MachineEnv::Uniform { m, speeds: s }
        }
    };
    Instance::new(graph, env, Some(p))
}

fn run_algorithm(
    alg: Algorithm,
    inst: &Instance,
    eps: Option<&ExactTime>,
    budget: &Budget,
) -> Result<(Schedule, Option<BranchTag>), SolveError> {
    let need_eps = || {
        eps.cloned()
            .ok_or_else(|| SolveError::InvalidInput("eps required for this algorithm".into()))
    };
    match alg {
        Algorithm::Greedy => Ok((greedy_schedule(inst)?, None)),
        Algorithm::ExactCmax => {
            // exact solver: search k upward from 1 to the greedy bound
            let upper = {
                let (s, _) = crate::greedy::greedy_unit_load_bound(inst)?;
                makespan(inst, &s).floor_u64()
            };
            for k in 1..=upper {
                match decide_bounded_makespan(inst, k as usize, budget, PatternOpts::default()) {
                    Ok(s) => return Ok((s, None)),
                    Err(SolveError::Infeasible(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(SolveError::Infeasible("no k up to the greedy bound".into()))
        }
        Algorithm::PtasUnit => {
            let e = need_eps()?;
            let (s, tag) = ptas_trace(inst, &e, budget, PatternOpts::default())?;
            Ok((s, Some(tag)))
        }
        Algorithm::Flow => Ok((solve_uniform_unit(inst, budget, false)?.0, None)),
        Algorithm::KApprox => Ok((k_approx(inst, budget)?.0, None)),
        Algorithm::PtasUniform => {
            let e = need_eps()?;
            Ok((ptas_uniform(inst, &e, budget)?.0, None))
        }
        Algorithm::TwFptas => {
            let e = need_eps()?;
            Ok((fptas(inst, &e, budget)?.0, None))
        }
    }
}

fn reference_value(
    reference: Reference,
    inst: &Instance,
    oracle_cap: usize,
    budget: &Budget,
) -> Result<ExactTime, SolveError> {
    match reference {
        Reference::Lb => {
            let total: u64 = inst.proc().iter().sum();
            match &inst.env {
                MachineEnv::Identical { m } => Ok(ExactTime::ratio(total, *m as u64)),
                MachineEnv::Uniform { speeds, .. } => {
                    Ok(ExactTime::ratio(total, speeds.iter().sum()))
                }
                MachineEnv::Unrelated { .. } => Err(SolveError::WrongEnvironment(
                    "lb reference needs P or Q".into(),
                )),
            }
        }
        Reference::Oracle => Ok(brute_force_with_cap(inst, oracle_cap)?.1),
        Reference::Tree => {
            let delta = ExactTime::ratio(1, inst.n() as u64 + 1);
            Ok(fptas(inst, &delta, budget)?.1)
        }
    }
}

/// Run every cell of the config; rows come back in cell order
/// (n x m x b x proc).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, SolveError> {
    let mut rows = Vec::new();
    let mut cell_idx = 0u64;
    for &m in &cfg.ms {
        for &n in &cfg.ns {
            for &b in &cfg.bs {
                for &proc in &cfg.procs {
                    rows.push(run_cell(cfg, n, m, b, proc, cell_idx)?);
                    cell_idx += 1;
                }
            }
        }
    }
    Ok(rows)
}

fn run_cell(
    cfg: &ExperimentConfig,
    n: usize,
    m: usize,
    b: BFn,
    proc: ProcDist,
    cell_idx: u64,
) -> Result<ReportRow, SolveError> {
    let mut ratios: Vec<f64> = Vec::new();
    let mut times: Vec<Duration> = Vec::new();
    let mut tags: BTreeMap<String, usize> = BTreeMap::new();
    let mut status = CellStatus::Ok;
    for inst_idx in 0..cfg.instances {
        let seed = RngSeed(cfg.seed).derive(cell_idx, inst_idx as u64);
        let inst = cell_instance(n, m, b, proc, cfg.speeds.as_ref(), seed)?;
        let budget = Budget::new(cfg.timeout_ms.map(Duration::from_millis), cfg.mem_mb);
        let start = Instant::now();
        let solved = run_algorithm(cfg.alg, &inst, cfg.eps.as_ref(), &budget);
        let elapsed = start.elapsed();
        match solved {
            Ok((sched, tag)) => {
                debug_assert!(crate::model::is_feasible(&inst, &sched));
                let c = makespan(&inst, &sched);
                let reference = reference_value(cfg.reference, &inst, cfg.oracle_cap, &budget)?;
                if !reference.is_zero() {
                    ratios.push(c.to_f64() / reference.to_f64());
                }
                times.push(elapsed);
                if let Some(t) = tag {
                    *tags.entry(t.to_string()).or_insert(0) += 1;
                }
            }
            Err(SolveError::Timeout) => {
                status = CellStatus::Timeout;
                break; // skip the remaining instances of the cell
            }
            Err(SolveError::OutOfBudget) => {
                status = CellStatus::Memory;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let solved = ratios.len();
    let mean_ratio = if ratios.is_empty() {
        None
    } else {
        Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
    };
    let mean_us = if times.is_empty() {
        None
    } else {
        Some((times.iter().map(|d| d.as_micros()).sum::<u128>() / times.len() as u128) as u64)
    };
    let participation = if tags.is_empty() {
        String::new()
    } else {
        let total: usize = tags.values().sum();
        tags.iter()
            .map(|(t, c)| format!("{}: {}", t, (100 * c).div_ceil(total).min(100)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(ReportRow {
        m,
        n,
        b,
        proc,
        alg: cfg.alg,
        eps: cfg.eps.clone(),
        mean_ratio,
        mean_us,
        status,
        participation,
        solved,
    })
}

/// CSV with a fixed column set; ratios use two decimals.
pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from("m,n,b,proc,alg,eps,mean_ratio,mean_us,status,participation\n");
    for r in rows {
        let eps = r.eps.as_ref().map(|e| e.to_string()).unwrap_or_default();
        let ratio = r
            .mean_ratio
            .map(|x| format!("{:.2}", x))
            .unwrap_or_default();
        let us = r.mean_us.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.m, r.n, r.b, r.proc, r.alg, eps, ratio, us, r.status, r.participation
        ));
    }
    out
}
