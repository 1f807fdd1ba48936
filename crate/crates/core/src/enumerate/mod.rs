//! Staged dovetailing and the lower bounds `Ω_K`.
//!
//! Stage `K` runs every valid program of at most `K` bits for at most `K`
//! steps. Programs seen to halt are kept; the Kraft sum of everything kept
//! so far is `Ω_K`, a nondecreasing sequence of exact lower bounds on the
//! machine's halting probability. Nothing here can tell when `Ω_K` has
//! stopped moving for the universal machine, and nothing tries to.

mod checkpoint;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::{BitString, DyadicRational};
use crate::machine::{ExecConfig, HaltingModel, Machine, RunOutcome};

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT};

/// Name of the frozen hash used for `state_digest`.
pub const DIGEST_ALGORITHM: &str = "sha256-lenlex-lines-v1";

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("stages start at K = 1")]
    ZeroStage,
    #[error("stage {stage} exceeds the length bound {bound}")]
    StageBeyondBound { stage: usize, bound: usize },
    #[error(
        "exact Ω is uncomputable for the universal machine {0}; only lower bounds Ω_K are available"
    )]
    Uncomputable(&'static str),
    #[error("checkpoint was written for machine {checkpoint}, not {machine}; refusing to resume")]
    DigestMismatch { checkpoint: String, machine: String },
    #[error("invalid checkpoint: {0}")]
    BadCheckpoint(String),
    #[error("checkpoint i/o on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HaltedProgram {
    pub program: BitString,
    pub output: BitString,
    pub steps: u64,
}

/// Programs known to halt, with their exact Kraft sum.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HaltedSet {
    programs: BTreeSet<BitString>,
    omega: DyadicRational,
}

impl HaltedSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a program; returns false if it was already present.
    pub fn insert(&mut self, program: BitString) -> bool {
        let weight = DyadicRational::unit(program.len() as u64);
        let fresh = self.programs.insert(program);
        if fresh {
            self.omega += &weight;
        }
        fresh
    }

    pub fn contains(&self, program: &BitString) -> bool {
        self.programs.contains(program)
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    /// Length-lex order.
    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.programs.iter()
    }

    pub fn omega(&self) -> &DyadicRational {
        &self.omega
    }

    /// `sha256:<hex>` per [`DIGEST_ALGORITHM`].
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for p in &self.programs {
            h.update(p.to_string().as_bytes());
            h.update(b"\n");
        }
        format!("sha256:{}", hex::encode(h.finalize()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    /// Length-lex order.
    pub newly_halted: Vec<HaltedProgram>,
    pub omega_lower: DyadicRational,
    pub cumulative_halted_count: usize,
    pub state_digest: String,
    /// Valid programs of at most `stage` bits.
    pub valid_programs: u64,
    /// Strings of 1..=`stage` bits that are not programs.
    pub invalid_strings: u128,
}

fn check_stage(machine: &Machine, stage: usize) -> Result<(), EnumerateError> {
    if stage == 0 {
        return Err(EnumerateError::ZeroStage);
    }
    let bound = machine.bound().get();
    if stage > bound {
        return Err(EnumerateError::StageBeyondBound { stage, bound });
    }
    Ok(())
}

/// Runs stage `stage` against `prior` without modifying it.
fn discover(machine: &Machine, stage: usize, prior: &HaltedSet) -> (Vec<HaltedProgram>, u64) {
    let config = ExecConfig::new(stage as u64).expect("stage is positive");
    let mut valid = 0u64;
    let mut newly = Vec::new();
    for program in machine.valid_programs(stage) {
        valid += 1;
        if prior.contains(&program) {
            continue;
        }
        if let RunOutcome::Halted { output, steps, .. } = machine.run(&program, &config) {
            newly.push(HaltedProgram {
                program,
                output,
                steps,
            });
        }
    }
    (newly, valid)
}

fn strings_up_to(stage: usize) -> u128 {
    // 2^(stage+1) - 2 without overflowing at stage 127.
    ((1u128 << stage) - 1) * 2
}

fn advance(
    machine: &Machine,
    stage: usize,
    halted: &mut HaltedSet,
) -> Result<StageReport, EnumerateError> {
    check_stage(machine, stage)?;
    let (newly_halted, valid_programs) = discover(machine, stage, halted);
    for h in &newly_halted {
        halted.insert(h.program.clone());
    }
    Ok(StageReport {
        stage,
        newly_halted,
        omega_lower: halted.omega().clone(),
        cumulative_halted_count: halted.len(),
        state_digest: halted.digest(),
        valid_programs,
        invalid_strings: strings_up_to(stage) - valid_programs as u128,
    })
}

/// One dovetailing stage: every valid program of at most `stage` bits not
/// already in `prior` runs with `stage` steps of fuel.
pub fn stage_run(
    machine: &Machine,
    stage: usize,
    prior: &HaltedSet,
) -> Result<StageReport, EnumerateError> {
    let mut halted = prior.clone();
    advance(machine, stage, &mut halted)
}

/// Iterates stages `K = 1, 2, …`, keeping the cumulative halted set.
#[derive(Debug, Clone)]
pub struct Dovetailer<'m> {
    machine: &'m Machine,
    halted: HaltedSet,
    last_stage: usize,
}

impl<'m> Dovetailer<'m> {
    pub fn new(machine: &'m Machine) -> Self {
        Self {
            machine,
            halted: HaltedSet::new(),
            last_stage: 0,
        }
    }

    pub fn resume(machine: &'m Machine, checkpoint: &Checkpoint) -> Result<Self, EnumerateError> {
        let halted = checkpoint.restore(machine)?;
        Ok(Self {
            machine,
            halted,
            last_stage: checkpoint.last_stage,
        })
    }

    pub fn machine(&self) -> &'m Machine {
        self.machine
    }

    pub fn last_stage(&self) -> usize {
        self.last_stage
    }

    pub fn halted(&self) -> &HaltedSet {
        &self.halted
    }

    pub fn omega_lower(&self) -> &DyadicRational {
        self.halted.omega()
    }

    pub fn next_stage(&mut self) -> Result<StageReport, EnumerateError> {
        let report = advance(self.machine, self.last_stage + 1, &mut self.halted)?;
        self.last_stage = report.stage;
        Ok(report)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint::capture(self.machine, self.last_stage, &self.halted)
    }
}

/// Stage reports for `K = 1..=k_max`, or from just after `checkpoint`.
pub fn omega_stages(
    machine: &Machine,
    k_max: usize,
    checkpoint: Option<&Checkpoint>,
) -> Result<Vec<StageReport>, EnumerateError> {
    let mut reports = Vec::new();
    omega_stages_with(machine, k_max, checkpoint, |report, _| {
        reports.push(report.clone());
        Ok(())
    })?;
    Ok(reports)
}

/// Like [`omega_stages`], handing each report to `on_stage` as it completes.
pub fn omega_stages_with<F>(
    machine: &Machine,
    k_max: usize,
    checkpoint: Option<&Checkpoint>,
    mut on_stage: F,
) -> Result<(), EnumerateError>
where
    F: FnMut(&StageReport, &Dovetailer<'_>) -> Result<(), EnumerateError>,
{
    check_stage(machine, k_max)?;
    let mut dovetailer = match checkpoint {
        Some(c) => Dovetailer::resume(machine, c)?,
        None => Dovetailer::new(machine),
    };
    while dovetailer.last_stage() < k_max {
        let report = dovetailer.next_stage()?;
        on_stage(&report, &dovetailer)?;
    }
    Ok(())
}

/// Exact halting probability of a table machine.
pub fn exact_omega(machine: &Machine) -> Result<DyadicRational, EnumerateError> {
    match machine.as_table() {
        Some(t) => Ok(t.omega().clone()),
        None => Err(EnumerateError::Uncomputable(machine.kind())),
    }
}
