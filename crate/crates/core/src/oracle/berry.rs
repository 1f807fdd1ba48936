//! The smallest positive integer that no small program outputs.
//!
//! Outputs are identified with integers through the length-lex rank
//! (`"0"` → 1, `"1"` → 2, `"00"` → 3, …); the empty output is 0 and never
//! counts as a positive integer.

use std::collections::BTreeSet;

use serde::Serialize;

use super::decider::{Claim, HaltingDecider};
use super::OracleError;
use crate::bits::{integer_of_bitstring, BitString};
use crate::machine::{ExecConfig, HaltingModel, Machine, RunOutcome};

pub const DEFAULT_MULTIPLIER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contradiction {
    /// Claimed to halt, but still running when fuel ran out.
    ClaimedHaltsButExhausted,
    /// Claimed never to halt, but halted.
    ClaimedNeverHaltsButHalted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub program: BitString,
    /// `None` when no decider was consulted.
    pub claimed: Option<Claim>,
    pub outcome: RunOutcome,
    pub contradiction: Option<Contradiction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BerryOutcome {
    pub n: usize,
    pub multiplier: usize,
    /// `n · multiplier`: every valid program up to this size was examined.
    pub size_bound: usize,
    pub fuel: u64,
    pub integer_found: u128,
    /// Distinct outputs collected from halting programs.
    pub produced_set_size: usize,
    pub audit: Vec<AuditEntry>,
}

impl BerryOutcome {
    pub fn contradictions(&self) -> impl Iterator<Item = &AuditEntry> {
        self.audit.iter().filter(|a| a.contradiction.is_some())
    }
}

fn least_missing_positive(outputs: &BTreeSet<BitString>) -> u128 {
    let images: BTreeSet<u128> = outputs
        .iter()
        .filter_map(|o| integer_of_bitstring(o).ok())
        .collect();
    (1..).find(|i| !images.contains(i)).expect("finite set")
}

fn check_size(machine: &Machine, size: usize) -> Result<(), OracleError> {
    let bound = machine.bound().get();
    if size > bound {
        return Err(OracleError::SizeBeyondBound { size, bound });
    }
    Ok(())
}

/// Runs every valid program of at most `size_bound` bits with fixed fuel
/// and returns the least positive integer none of them output.
///
/// The audit lists programs that ran out of fuel: any of them might later
/// halt and output the returned integer.
pub fn first_complex_integer(
    machine: &Machine,
    size_bound: usize,
    fuel: ExecConfig,
) -> Result<BerryOutcome, OracleError> {
    check_size(machine, size_bound)?;
    let mut outputs = BTreeSet::new();
    let mut audit = Vec::new();
    for program in machine.valid_programs(size_bound) {
        match machine.run(&program, &fuel) {
            RunOutcome::Halted { output, .. } => {
                outputs.insert(output);
            }
            outcome @ RunOutcome::Exhausted { .. } => audit.push(AuditEntry {
                program,
                claimed: None,
                outcome,
                contradiction: None,
            }),
            RunOutcome::Invalid { .. } => {}
        }
    }
    Ok(BerryOutcome {
        n: size_bound,
        multiplier: 1,
        size_bound,
        fuel: fuel.fuel(),
        integer_found: least_missing_positive(&outputs),
        produced_set_size: outputs.len(),
        audit,
    })
}

/// Follows the paradoxical program's recipe with a supplied decider: ask
/// the decider about every valid program of at most `n · multiplier` bits,
/// collect the outputs of those it says halt, and return the least positive
/// integer not among them.
///
/// Every program is also run with the given fuel, and the audit records
/// each claim next to what execution showed, flagging the contradictions.
/// A program that genuinely knew its own size `n` cannot be built here;
/// `n` is an explicit parameter.
pub fn berry_demo<D: HaltingDecider + ?Sized>(
    machine: &Machine,
    decider: &mut D,
    n: usize,
    multiplier: usize,
    fuel: ExecConfig,
) -> Result<BerryOutcome, OracleError> {
    if n == 0 || multiplier == 0 {
        return Err(OracleError::BadParameter(
            "n and multiplier must be positive".into(),
        ));
    }
    let size_bound = n
        .checked_mul(multiplier)
        .ok_or(OracleError::SizeBeyondBound {
            size: usize::MAX,
            bound: machine.bound().get(),
        })?;
    check_size(machine, size_bound)?;

    let mut outputs = BTreeSet::new();
    let mut audit = Vec::new();
    for program in machine.valid_programs(size_bound) {
        let claim = decider.decide(&program)?;
        let outcome = machine.run(&program, &fuel);
        let contradiction = match (claim, &outcome) {
            (Claim::Halts, RunOutcome::Halted { output, .. }) => {
                outputs.insert(output.clone());
                None
            }
            (Claim::Halts, RunOutcome::Exhausted { .. }) => {
                Some(Contradiction::ClaimedHaltsButExhausted)
            }
            (Claim::NeverHalts, RunOutcome::Halted { .. }) => {
                Some(Contradiction::ClaimedNeverHaltsButHalted)
            }
            _ => None,
        };
        audit.push(AuditEntry {
            program,
            claimed: Some(claim),
            outcome,
            contradiction,
        });
    }
    Ok(BerryOutcome {
        n,
        multiplier,
        size_bound,
        fuel: fuel.fuel(),
        integer_found: least_missing_positive(&outputs),
        produced_set_size: outputs.len(),
        audit,
    })
}
