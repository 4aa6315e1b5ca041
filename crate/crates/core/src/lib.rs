//! Proof dependency networks and the belief dynamics that run on them.
//!
//! The crate turns proof structures (machine-extracted term dumps or
//! hand-written edge lists) into directed acyclic graphs, characterizes
//! their degree statistics and module structure, and simulates an
//! asymmetric Ising model of belief formation on them.
//!
//! | module | purpose |
//! |---|---|
//! | [`ast`] | s-expression dumps, alpha numbering, hash-consed reification |
//! | [`graph`] | [`ProofDag`], `.deps` edge lists, degrees, roles, truncation |
//! | [`format`] | canonical JSON graphs, DOT and partition files |
//! | [`assembly`] | synthetic assembly-and-tinkering networks |
//! | [`netstats`] | power-law and exponential degree fits, histograms |
//! | [`communities`] | edge betweenness, Girvan-Newman, modularity |
//! | [`belief`] | couplings, local fields, Metropolis chains, energies |
//! | [`experiments`] | sweeps, prior curves, abductive grids, firewalls |
//! | [`cli`] | the `ept-lab` command line |

pub mod assembly;
pub mod ast;
pub mod belief;
pub mod cli;
pub mod communities;
pub mod error;
pub mod experiments;
pub mod format;
pub mod graph;
pub mod netstats;
mod special;

pub use error::{Error, Result};
pub use graph::{DagBuilder, DegreeTable, NodeId, NodeRoles, ProofDag};
