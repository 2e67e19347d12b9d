//! Cooperative time and memory budgets shared by the solvers.
//!
//! Deadlines are checked inside solver loops rather than enforced by killing
//! the process; memory is accounted by counting live DP entries in the
//! guarded modules.

use std::cell::Cell;
use std::time::{Duration, Instant};

use thiserror::Error;

/// Errors shared by all solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    /// No schedule exists under the given constraints.
    #[error("instance is infeasible: {0}")]
    Infeasible(String),
    /// The environment does not match what the solver expects.
    #[error("wrong machine environment: {0}")]
    WrongEnvironment(String),
    /// The cooperative deadline was exceeded.
    #[error("time budget exceeded")]
    Timeout,
    /// The DP state count exceeded the configured memory budget.
    #[error("memory budget exceeded")]
    OutOfBudget,
    /// The instance is larger than the configured exhaustive-search cap.
    #[error("instance size {n} exceeds oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    /// Malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A cooperative budget. Cheap to check; solvers poll it in their hot loops.
#[derive(Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    /// Cap on live DP entries (patterns, configurations, partial schedules).
    entry_cap: Option<usize>,
    live_entries: Cell<usize>,
}

impl Budget {
    /// No limits.
    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            entry_cap: None,
            live_entries: Cell::new(0),
        }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
            entry_cap: None,
            live_entries: Cell::new(0),
        }
    }

    /// `mem_mb` is converted to an entry cap assuming a conservative
    /// per-entry footprint; entries are pattern/configuration records.
    pub fn new(timeout: Option<Duration>, mem_mb: Option<u64>) -> Self {
        const BYTES_PER_ENTRY: u64 = 256;
        Budget {
            deadline: timeout.map(|t| Instant::now() + t),
            entry_cap: mem_mb.map(|mb| (mb * 1024 * 1024 / BYTES_PER_ENTRY) as usize),
            live_entries: Cell::new(0),
        }
    }

    /// Returns `Err(Timeout)` once the deadline passed.
    pub fn check_time(&self) -> Result<(), SolveError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(SolveError::Timeout),
            _ => Ok(()),
        }
    }

    /// Account for `count` new live entries.
    pub fn alloc_entries(&self, count: usize) -> Result<(), SolveError> {
        let total = self.live_entries.get() + count;
        self.live_entries.set(total);
        match self.entry_cap {
            Some(cap) if total > cap => Err(SolveError::OutOfBudget),
            _ => Ok(()),
        }
    }

    /// Release previously accounted entries.
    pub fn free_entries(&self, count: usize) {
        let cur = self.live_entries.get();
        self.live_entries.set(cur.saturating_sub(count));
    }

    pub fn live_entries(&self) -> usize {
        self.live_entries.get()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
