//! PTAS for unit jobs on identical machines under a block conflict graph,
//! composed from three ingredients:
//!
//! 1. the exact bounded-makespan coloring DP, searched ascending for
//!    k = 1..floor(2/eps) (optimal when it answers),
//! 2. otherwise, when m <= 2/eps + 1, the treewidth FPTAS with
//!    delta = 1/(n+1), which is exact for unit jobs, and
//! 3. otherwise the greedy algorithm, whose unit-job load bound already
//!    implies a (1+eps) ratio in this regime.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::budget::{Budget, SolveError};
use crate::greedy::greedy_schedule;
use crate::model::{ExactTime, Instance, MachineEnv, Schedule};
use crate::pattern::{decide_bounded_makespan, PatternOpts};
use crate::treewidth::fptas;

/// Which sub-algorithms ran: the bounded-makespan DP alone, DP plus the
/// treewidth FPTAS, or DP plus greedy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchTag {
    C,
    CT,
    CG,
}

impl std::fmt::Display for BranchTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BranchTag::C => write!(f, "C"),
            BranchTag::CT => write!(f, "C+T"),
            BranchTag::CG => write!(f, "C+G"),
        }
    }
}

pub fn ptas_unit(
    inst: &Instance,
    eps: &ExactTime,
    budget: &Budget,
    opts: PatternOpts,
) -> Result<Schedule, SolveError> {
    Ok(ptas_trace(inst, eps, budget, opts)?.0)
}

/// As [`ptas_unit`], also reporting which sub-algorithms participated.
pub fn ptas_trace(
    inst: &Instance,
    eps: &ExactTime,
    budget: &Budget,
    opts: PatternOpts,
) -> Result<(Schedule, BranchTag), SolveError> {
    if !matches!(inst.env, MachineEnv::Identical { .. }) {
        return Err(SolveError::WrongEnvironment(
            "identical machines required".into(),
        ));
    }
    if !inst.is_unit() {
        return Err(SolveError::WrongEnvironment("unit jobs required".into()));
    }
    if eps.is_zero() {
        return Err(SolveError::InvalidInput("eps must be positive".into()));
    }
    let m = inst.m();
    if inst.graph.max_block_size() > m {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            m
        )));
    }

    let two_over_eps =
        BigRational::from_integer(BigInt::from(2)) / eps.as_rational().clone();
    let k_cap = {
        let f = two_over_eps.floor().to_integer();
        // the DP never needs more than n jobs per machine
        let f: u64 = f.try_into().unwrap_or(u64::MAX);
        (f as usize).min(inst.n())
    };
    for k in 1..=k_cap {
        match decide_bounded_makespan(inst, k, budget, opts) {
            Ok(sched) => return Ok((sched, BranchTag::C)),
            Err(SolveError::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }

    let m_rat = BigRational::from_integer(BigInt::from(m as u64));
    if m_rat <= two_over_eps + BigRational::one() {
        let delta = ExactTime::ratio(1, inst.n() as u64 + 1);
        let (sched, _) = fptas(inst, &delta, budget)?;
        return Ok((sched, BranchTag::CT));
    }
    let sched = greedy_schedule(inst)?;
    Ok((sched, BranchTag::CG))
}
