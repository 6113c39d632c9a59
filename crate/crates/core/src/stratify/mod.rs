//! Stratification: can the variables of a formula be given integer types so
//! that `s = t` relates equal types and `s in t` raises the type by one?
//!
//! [`extract_constraints`] turns a formula into difference constraints,
//! [`solve`] decides them with a union-find over type offsets, and
//! [`brute_force_oracle`] decides the same question by enumerating
//! assignments against the clause checker, which reads the formula directly.
//!
//! In L* the unit of typing is the term occurrence. Class variables are
//! merged across their occurrences and tie every pair term they occur in to
//! their own type. Set variables stay per occurrence unless
//! [`Options::merge_set_vars`] is set.

mod clauses;
mod graph;
mod solve;
mod typing;

pub use clauses::{brute_force_oracle, oracle_complete, ClauseChecker, ClauseViolation, OracleVerdict, ORACLE_CAP};
pub use graph::{extract_constraints, ConstraintGraph, Edge, Node, NodeKind, SortTag};
pub use solve::{solve, Cycle, CycleStep, StratifyVerdict, TypeAssignment};
pub use typing::type_of_occurrences;

use crate::formula::{Dialect, Formula};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Give every occurrence of an L* set variable the same type.
    pub merge_set_vars: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StratifyError {
    #[error("tst formulas are already typed; stratification applies to plain and lstar formulas")]
    TypedInput,
    #[error("{what} would need {size} steps, over the cap of {cap}")]
    FeasibilityCap { what: &'static str, size: u128, cap: u128 },
    #[error("assignment does not solve this formula")]
    AssignmentMismatch,
    #[error("formula is not stratified")]
    NotStratified,
    #[error("{0}")]
    Untypable(String),
}

/// Extracts and solves in one step.
pub fn check_stratified(f: &Formula, dialect: Dialect, opts: &Options) -> Result<StratifyVerdict, StratifyError> {
    Ok(check_stratified_with_graph(f, dialect, opts)?.1)
}

/// Like [`check_stratified`], also returning the graph the verdict refers to.
pub fn check_stratified_with_graph(
    f: &Formula,
    dialect: Dialect,
    opts: &Options,
) -> Result<(ConstraintGraph, StratifyVerdict), StratifyError> {
    let graph = extract_constraints(f, dialect, opts)?;
    let verdict = solve(&graph);
    Ok((graph, verdict))
}

/// Types a stratified plain formula as TST.
pub fn to_tst(f: &Formula) -> Result<Formula, StratifyError> {
    let (graph, verdict) = check_stratified_with_graph(f, Dialect::Plain, &Options::default())?;
    let assignment = verdict.assignment().ok_or(StratifyError::NotStratified)?;
    type_of_occurrences(assignment, &graph, f)
}
