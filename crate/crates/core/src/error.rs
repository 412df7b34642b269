use alloc::string::String;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("{what}: {requested} exceeds the configured limit of {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("expansion exceeded {cap} monomials at node {node}")]
    MonomialCap { node: usize, cap: usize },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("circuit is not certified multilinear: {0}")]
    Uncertified(String),
    #[error("product node {node} is not syntactically multilinear")]
    NotSyntacticallyMultilinear { node: usize },
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(Rational),
    #[error("interpolation needs at least one sample")]
    NoSamples,
    #[error("malformed evidence `{0}`")]
    BadEvidence(String),
    #[error("virtual evidence pair {index} is invalid: {reason}")]
    InvalidVirtualEvidence { index: usize, reason: &'static str },
    #[error("posterior undefined: the normalizing mass is zero")]
    UndefinedPosterior,
    #[error("weight {k} out of range 0..={n}")]
    WeightOutOfRange { k: usize, n: usize },
    #[error("parameter n = {0} must be at least 1")]
    EmptyParameter(usize),
    #[error("clause index {index} out of range for {n} variables")]
    ClauseIndex { index: usize, n: usize },
}
