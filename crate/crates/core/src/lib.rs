//! Executable algorithmic information theory at desk scale.
//!
//! * [`bits`]: bit strings, exact dyadic rationals, prefix codes, Kraft sums.
//! * [`machine`]: the halting-model contract, finite table machines and the
//!   self-delimiting `bitbf-v1` reference machine.
//! * [`enumerate`]: staged dovetailing, lower bounds `Ω_K`, exact `Ω` for
//!   table machines, and resumable checkpoints.
//! * [`oracle`]: halting verdicts from a prefix of `Ω`, program-size
//!   complexity search and the smallest-unproducible-integer construction.
//! * [`cli`]: the `omega` command-line front end.
//!
//! Every number is exact. Nothing here ever rounds.

pub mod bits;
pub mod cli;
pub mod enumerate;
pub mod machine;
pub mod oracle;

pub use bits::{BitString, DyadicRational, LengthBound};
pub use machine::{ExecConfig, Machine, RunOutcome};
