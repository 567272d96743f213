use thiserror::Error;

use crate::root_data::Family;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}: {reason}")]
    InvalidRank {
        family: Family,
        rank: usize,
        reason: &'static str,
    },

    #[error("no diagram automorphism of order {order} on {label}")]
    UnsupportedAutomorphism { label: String, order: u32 },

    #[error("order of tau ({r}) does not divide m ({m})")]
    IncompatibleOrder { r: u32, m: u64 },

    #[error("method {method} requires {required} isogeny")]
    MethodUnavailable {
        method: &'static str,
        required: &'static str,
    },

    #[error("operation requires adjoint isogeny")]
    NotAdjoint,

    #[error("operation requires simply connected isogeny")]
    NotSimplyConnected,

    #[error("sublattice has lower rank than the ambient lattice; quotient is infinite")]
    RankDefect,

    #[error("vector is not in the lattice: {0}")]
    NotInLattice(String),

    #[error("enumeration of {size} elements exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },

    #[error("invalid local type assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
