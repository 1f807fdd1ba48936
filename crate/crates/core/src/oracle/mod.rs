//! Reductions built on the dovetailer: halting from a prefix of `Ω`,
//! program-size complexity search, and the smallest-unproducible-integer
//! construction with a pluggable halting decider.
//!
//! All of these are semi-algorithms in principle. Every entry point here
//! takes a fuel or stage ceiling and reports what it could not settle.

mod berry;
mod complexity;
pub mod decider;
mod halting;

use thiserror::Error;

use crate::bits::{BitsError, DyadicRational};
use crate::enumerate::EnumerateError;
use crate::machine::MachineError;

pub use berry::{
    berry_demo, first_complex_integer, AuditEntry, BerryOutcome, Contradiction, DEFAULT_MULTIPLIER,
};
pub use complexity::{
    complexity_upper, print_program, print_program_ops, BoundKind, ComplexityBound,
};
pub use decider::{Claim, DeciderError, HaltingDecider};
pub use halting::{halting_from_omega_prefix, OracleVerdict, ProgramVerdict, Verdict};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("at least one bit of Ω is required")]
    EmptyBits,
    #[error(
        "supplied bits are inconsistent with this machine: Ω_{stage} = {omega_lower} \
         already reaches the limit {limit} they allow"
    )]
    Inconsistent {
        stage: usize,
        omega_lower: DyadicRational,
        limit: DyadicRational,
    },
    #[error("size {size} exceeds the length bound {bound}")]
    SizeBeyondBound { size: usize, bound: usize },
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Decider(#[from] DeciderError),
}
