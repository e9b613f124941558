//! Proportional committee reconfiguration for approval-based elections.
//!
//! The crate covers the election model ([`Instance`]), checkers for JR, EJR
//! and EJR+ and their approximate variants ([`axioms`]), seven committee
//! voting rules ([`rules`]), exact and constructive search in the space of
//! committees ([`reconfig`]), interval domains ([`domains`]), the reduction
//! from SAT reconfiguration ([`reductions`]) and instance families
//! ([`generators`]).
//!
//! Candidates and voters are 0-based indices. All thresholds are compared
//! with exact integer or rational arithmetic.

pub mod axioms;
pub mod bitset;
pub mod combin;
pub mod domains;
pub mod generators;
pub mod instance;
pub mod rational;
pub mod reconfig;
pub mod reductions;
pub mod rules;

pub use axioms::{Alpha, CohesionMode, EjrPlusWitness, EjrWitness, JrWitness, Witness};
pub use bitset::{distance, BitSet, CandidateSet, VoterSet};
pub use instance::{Instance, InstanceBuilder, InstanceJson};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("committee sizes differ ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("set of size {size} is not a valid committee for k = {k}")]
    NotACommittee { size: usize, k: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),
    #[error("max_ell = {max_ell} outside 1..={k}")]
    MaxEllOutOfRange { max_ell: usize, k: usize },
    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge { what: &'static str, size: u128, limit: u128 },
    #[error("{0}")]
    PredicateViolated(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("{0}")]
    InvalidInput(String),
}
