use thiserror::Error;

use crate::axioms::AxiomVerdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Positive mass on an item outside its menu, or a history step whose
    /// chosen item is not in the offered menu.
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("invalid distribution: {0}")]
    DistributionInvalid(String),
    #[error("missing entry: {0}")]
    MissingEntry(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("invalid index: {0}")]
    IndexInvalid(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("axiom violation: {}", summarize(.0))]
    AxiomViolation(Vec<AxiomVerdict>),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("negative atom: {0}")]
    NegativeAtom(String),
    #[error("perturbation infeasible: {0}")]
    PerturbationInfeasible(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn summarize(verdicts: &[AxiomVerdict]) -> String {
    let failed: Vec<String> = verdicts.iter().filter(|v| !v.pass).map(|v| v.title()).collect();
    failed.join(", ")
}
