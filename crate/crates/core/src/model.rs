//! Machine environments, instances, schedules, and exact load arithmetic.
//!
//! All time comparisons go through exact rationals; the solvers never touch
//! floating point.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::SolveError;
use crate::graph::BlockCutTree;

/// An exact nonnegative rational time value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactTime(BigRational);

impl ExactTime {
    pub fn zero() -> Self {
        ExactTime(BigRational::zero())
    }

    pub fn from_int(v: u64) -> Self {
        ExactTime(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        ExactTime(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactTime(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Floor to a nonnegative integer; panics if negative or too large.
    pub fn floor_u64(&self) -> u64 {
        let f = self.0.floor();
        assert!(!f.is_negative(), "floor of negative time");
        f.to_integer().to_u64().expect("time too large for u64")
    }

    /// Best-effort f64 view for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_div_int(&self, d: u64) -> ExactTime {
        assert!(d > 0);
        ExactTime(&self.0 / BigRational::from_integer(BigInt::from(d)))
    }

    pub fn mul_int(&self, d: u64) -> ExactTime {
        ExactTime(&self.0 * BigRational::from_integer(BigInt::from(d)))
    }
}

impl fmt::Display for ExactTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExactTime {
    type Err = String;

    /// Accepts "5", "5/3", and decimal strings like "0.25" (parsed exactly).
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num.trim().parse().map_err(|e| format!("{}", e))?;
            let d: BigInt = den.trim().parse().map_err(|e| format!("{}", e))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            return Ok(ExactTime(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int_part: BigInt = if int.is_empty() {
                BigInt::zero()
            } else {
                int.parse().map_err(|e| format!("{}", e))?
            };
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().map_err(|e| format!("{}", e))?
            };
            return Ok(ExactTime(BigRational::new(
                int_part * &scale + frac_part,
                scale,
            )));
        }
        let n: BigInt = s.parse().map_err(|e| format!("{}", e))?;
        Ok(ExactTime(BigRational::from_integer(n)))
    }
}

impl Serialize for ExactTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for ExactTime {
    type Output = ExactTime;
    fn add(self, rhs: ExactTime) -> ExactTime {
        ExactTime(self.0 + rhs.0)
    }
}

impl AddAssign for ExactTime {
    fn add_assign(&mut self, rhs: ExactTime) {
        self.0 += rhs.0;
    }
}

impl Mul for ExactTime {
    type Output = ExactTime;
    fn mul(self, rhs: ExactTime) -> ExactTime {
        ExactTime(self.0 * rhs.0)
    }
}

/// Machine environment: identical (P), uniform (Q), or unrelated (R).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MachineEnv {
    Identical {
        m: usize,
    },
    /// Speeds sorted non-increasing.
    Uniform {
        m: usize,
        speeds: Vec<u64>,
    },
    /// `times[i][j]` is the processing time of job j on machine i.
    Unrelated {
        m: usize,
        times: Vec<Vec<u64>>,
    },
}

impl MachineEnv {
    pub fn m(&self) -> usize {
        match self {
            MachineEnv::Identical { m } => *m,
            MachineEnv::Uniform { m, .. } => *m,
            MachineEnv::Unrelated { m, .. } => *m,
        }
    }

    fn validate(&self, n: usize) -> Result<(), SolveError> {
        match self {
            MachineEnv::Identical { m } => {
                if *m == 0 {
                    return Err(SolveError::InvalidInput("m must be >= 1".into()));
                }
            }
            MachineEnv::Uniform { m, speeds } => {
                if *m == 0 || speeds.len() != *m {
                    return Err(SolveError::InvalidInput("speeds must have length m".into()));
                }
                if speeds.iter().any(|&s| s == 0) {
                    return Err(SolveError::InvalidInput("speeds must be positive".into()));
                }
                if speeds.windows(2).any(|w| w[0] < w[1]) {
                    return Err(SolveError::InvalidInput(
                        "speeds must be sorted non-increasing".into(),
                    ));
                }
            }
            MachineEnv::Unrelated { m, times } => {
                if *m == 0 || times.len() != *m {
                    return Err(SolveError::InvalidInput("times must have m rows".into()));
                }
                for row in times {
                    if row.len() != n {
                        return Err(SolveError::InvalidInput("times rows must have n columns".into()));
                    }
                    if row.iter().any(|&p| p == 0) {
                        return Err(SolveError::InvalidInput("times must be positive".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A scheduling instance: conflict graph + machine environment + processing
/// requirements (`proc` is used for P and Q, ignored for R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: BlockCutTree,
    pub env: MachineEnv,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proc: Option<Vec<u64>>,
}

impl Instance {
    pub fn new(graph: BlockCutTree, env: MachineEnv, proc: Option<Vec<u64>>) -> Result<Self, SolveError> {
        let inst = Instance { graph, env, proc };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let n = self.graph.n();
        self.env.validate(n)?;
        match self.env {
            MachineEnv::Identical { .. } | MachineEnv::Uniform { .. } => {
                let proc = self
                    .proc
                    .as_ref()
                    .ok_or_else(|| SolveError::InvalidInput("proc required for P and Q".into()))?;
                if proc.len() != n {
                    return Err(SolveError::InvalidInput("proc must have length n".into()));
                }
                if proc.iter().any(|&p| p == 0) {
                    return Err(SolveError::InvalidInput("proc must be positive".into()));
                }
            }
            MachineEnv::Unrelated { .. } => {}
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.env.m()
    }

    pub fn proc(&self) -> &[u64] {
        self.proc.as_ref().expect("proc present for P/Q")
    }

    pub fn is_unit(&self) -> bool {
        matches!(&self.proc, Some(p) if p.iter().all(|&x| x == 1))
    }

    /// Exact processing time of job `j` on machine `i`.
    pub fn time(&self, machine: usize, job: usize) -> ExactTime {
        match &self.env {
            MachineEnv::Identical { .. } => ExactTime::from_int(self.proc()[job]),
            MachineEnv::Uniform { speeds, .. } => {
                ExactTime::ratio(self.proc()[job], speeds[machine])
            }
            MachineEnv::Unrelated { times, .. } => ExactTime::from_int(times[machine][job]),
        }
    }

    /// A common scale L such that L * time(i, j) is an integer for all i, j
    /// (L = lcm of speeds for Q, 1 otherwise).
    pub fn time_scale(&self) -> u64 {
        match &self.env {
            MachineEnv::Uniform { speeds, .. } => {
                speeds.iter().fold(1u64, |acc, &s| acc.lcm(&s))
            }
            _ => 1,
        }
    }

    /// L * time(i, j) as an integer; see [`Instance::time_scale`].
    pub fn scaled_time(&self, scale: u64, machine: usize, job: usize) -> u64 {
        match &self.env {
            MachineEnv::Identical { .. } => self.proc()[job],
            MachineEnv::Uniform { speeds, .. } => self.proc()[job] * (scale / speeds[machine]),
            MachineEnv::Unrelated { times, .. } => times[machine][job],
        }
    }
}

/// A total assignment of jobs to machines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub assign: Vec<u32>,
}

impl Schedule {
    pub fn new(assign: Vec<u32>) -> Self {
        Schedule { assign }
    }
}

/// True iff no two jobs sharing a block run on the same machine.
pub fn is_feasible(inst: &Instance, sched: &Schedule) -> bool {
    if sched.assign.len() != inst.n() {
        return false;
    }
    if sched.assign.iter().any(|&mi| (mi as usize) >= inst.m()) {
        return false;
    }
    for block in inst.graph.blocks() {
        for (idx, &u) in block.iter().enumerate() {
            for &w in &block[idx + 1..] {
                if sched.assign[u as usize] == sched.assign[w as usize] {
                    return false;
                }
            }
        }
    }
    true
}

/// C_max of the schedule under exact arithmetic.
pub fn makespan(inst: &Instance, sched: &Schedule) -> ExactTime {
    let scale = inst.time_scale();
    let mut loads = vec![0u64; inst.m()];
    for (job, &mi) in sched.assign.iter().enumerate() {
        loads[mi as usize] += inst.scaled_time(scale, mi as usize, job);
    }
    let max = loads.into_iter().max().unwrap_or(0);
    if scale == 1 {
        ExactTime::from_int(max)
    } else {
        ExactTime::ratio(max, scale)
    }
}

/// max(sum p_j / m, p_max); for unit jobs additionally ceil(n/m).
pub fn identical_lower_bound(inst: &Instance) -> Result<ExactTime, SolveError> {
    if !matches!(inst.env, MachineEnv::Identical { .. }) {
        return Err(SolveError::WrongEnvironment(
            "identical machines required".into(),
        ));
    }
    let proc = inst.proc();
    let total: u64 = proc.iter().sum();
    let m = inst.m() as u64;
    let p_max = proc.iter().copied().max().unwrap_or(0);
    let mut lb = ExactTime::ratio(total, m).max(ExactTime::from_int(p_max));
    if inst.is_unit() {
        let n = inst.n() as u64;
        lb = lb.max(ExactTime::from_int(n.div_ceil(m)));
    }
    Ok(lb)
}
