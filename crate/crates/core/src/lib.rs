//! Solvers for makespan minimization on identical, uniform, and unrelated
//! parallel machines under a conflict graph that is a block graph: no two
//! adjacent jobs may run on the same machine.
//!
//! The crate provides
//! * a block-graph representation with block-cut tree construction, random
//!   instance generation, and tree-decomposition export ([`graph`]),
//! * exact-rational scheduling primitives ([`model`]),
//! * a greedy 2-approximation for identical machines ([`greedy`]),
//! * an exact coloring-pattern DP for unit jobs and bounded makespan
//!   ([`pattern`]) plus the PTAS built on top of it ([`ptas_unit`]),
//! * an exact flow-based solver for uniform machines, unit jobs, and few
//!   cut-vertices ([`flow`]),
//! * a k-approximation and a configuration PTAS for uniform machines with a
//!   bounded number of blocks ([`kblock`]),
//! * an FPTAS over tree decompositions for unrelated machines ([`treewidth`]),
//! * an exhaustive branch-and-bound oracle ([`oracle`]), and
//! * a benchmarking harness with CSV reports ([`experiment`]).

pub mod budget;
pub mod experiment;
pub mod flow;
pub mod graph;
pub mod greedy;
pub mod kblock;
pub mod model;
pub mod oracle;
pub mod pattern;
pub mod ptas_unit;
pub mod treewidth;

pub use budget::{Budget, SolveError};
pub use graph::{BlockCutTree, RngSeed, TreeDecomposition};
pub use model::{ExactTime, Instance, MachineEnv, Schedule};
