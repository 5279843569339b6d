//! Present-biased planning on task graphs.
//!
//! A present-biased agent walks a DAG from `s` to `t`, at every node
//! re-planning against the perceived cost `c(v,w) + beta * d(w)` and quitting
//! whenever the cheapest perceived option exceeds her perceived reward
//! `beta * r`. This crate provides the task-graph model with exact rational
//! arithmetic, motivation verifiers for fixed, uncertain and variable bias,
//! penalty-fee incentive algorithms with certified reward bounds, the
//! polynomial solver for occasionally unbiased agents, instance families with
//! known thresholds, and a vector-scheduling reduction pipeline.
//!
//! All decisions (path preferences, motivation tests, interval endpoints) are
//! made in exact rational arithmetic; floating point only ever appears in
//! human-readable renderings.

pub mod agent;
pub mod bias;
pub mod families;
pub mod graph;
pub mod incentives;
pub mod num;
pub mod report;

pub use agent::{DistanceTable, PreferenceProfile, Verdict, Witness};
pub use bias::{BiasInterval, BiasSet};
pub use graph::{CostConfiguration, Edge, EdgeId, Node, NodeId, TaskGraph};
pub use num::Rational;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("cycle detected")]
    Cycle,
    #[error("negative cost on edge {0}")]
    NegativeCost(usize),
    #[error("no s-t path")]
    NoPath,
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("invalid bias set: {0}")]
    InvalidBias(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("agent walk failed: {0}")]
    Walk(String),
}

pub type Result<T> = std::result::Result<T, Error>;
