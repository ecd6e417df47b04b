//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A constructor or generator was asked for something larger than it supports.
    #[error("{what} = {value} exceeds the supported maximum of {max}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{}", no_order_message(*.requested, *.smallest_admissible))]
    NoHadamardOrder {
        requested: usize,
        smallest_admissible: Option<usize>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("duplicate spin name `{0}`")]
    DuplicateName(String),

    #[error("unknown spin `{0}`")]
    UnknownSpin(String),

    #[error("self-loop on spin `{0}`")]
    SelfLoop(String),

    #[error("spin count {0} outside the supported range 1..=64")]
    SpinCount(usize),

    #[error("invalid pin: {0}")]
    InvalidPin(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    /// The compiler needs a Hadamard order that the construction table does not reach.
    #[error("{required} distinct balanced rows needed, but the largest supported Hadamard order is {max_order}")]
    Capacity { required: usize, max_order: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

fn no_order_message(requested: usize, next: Option<usize>) -> String {
    match next {
        Some(n) => format!(
            "no Hadamard matrix of order {requested}; smallest admissible order >= {requested} is {n}"
        ),
        None => format!("no Hadamard matrix of order {requested} within the supported range"),
    }
}
