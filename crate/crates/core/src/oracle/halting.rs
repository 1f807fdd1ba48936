use serde::Serialize;

use super::OracleError;
use crate::bits::{BitString, DyadicRational};
use crate::enumerate::Dovetailer;
use crate::machine::{HaltingModel, Machine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Halts,
    NeverHalts,
    /// The stage ceiling was reached before the lower bound caught up.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgramVerdict {
    pub program: BitString,
    pub verdict: Verdict,
}

/// Halting verdicts for every program of at most `n` bits.
///
/// `verdicts` lists the machine's valid programs of at most `n` bits in
/// length-lex order. Any other string of at most `n` bits is not a program
/// and never halts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub n: usize,
    pub omega_bits: BitString,
    /// `0.b1 … bn` as an exact rational.
    pub omega_prefix_value: DyadicRational,
    /// First stage whose lower bound reached the prefix value.
    pub threshold_stage: Option<usize>,
    pub stage_ceiling: usize,
    pub final_omega_lower: DyadicRational,
    pub verdicts: Vec<ProgramVerdict>,
    pub diagnostic: Option<String>,
}

impl OracleVerdict {
    /// Verdict for any string; `None` when it is longer than `n` bits.
    pub fn classify(&self, program: &BitString) -> Option<Verdict> {
        if program.len() > self.n {
            return None;
        }
        let found = self
            .verdicts
            .binary_search_by(|v| v.program.cmp(program))
            .ok()
            .map(|i| self.verdicts[i].verdict);
        Some(found.unwrap_or(Verdict::NeverHalts))
    }

    pub fn halting(&self) -> impl Iterator<Item = &BitString> {
        self.verdicts
            .iter()
            .filter(|v| v.verdict == Verdict::Halts)
            .map(|v| &v.program)
    }
}

/// Decides halting for every program of at most `N = omega_bits.len()` bits
/// from the first `N` bits of the machine's halting probability.
///
/// Runs dovetailing stages until `Ω_K` reaches `0.b1 … bN`. Any program of
/// at most `N` bits not yet seen halting would add at least `2^-N` once it
/// halted, pushing `Ω` past `0.b1 … bN + 2^-N`; so it never halts. If a stage
/// ever overshoots that limit, the supplied bits cannot be a prefix of `Ω`.
///
/// A machine with `Ω = 1` has no prefix accepted here: every `N`-bit
/// candidate is eventually overshot.
pub fn halting_from_omega_prefix(
    machine: &Machine,
    omega_bits: &BitString,
    stage_ceiling: usize,
) -> Result<OracleVerdict, OracleError> {
    let n = omega_bits.len();
    if n == 0 {
        return Err(OracleError::EmptyBits);
    }
    machine.bound().check(omega_bits)?;
    if stage_ceiling == 0 {
        return Err(OracleError::BadParameter(
            "stage ceiling must be at least 1".into(),
        ));
    }
    if stage_ceiling > machine.bound().get() {
        return Err(OracleError::SizeBeyondBound {
            size: stage_ceiling,
            bound: machine.bound().get(),
        });
    }
    let value = DyadicRational::from_bits(omega_bits);
    let limit = &value + &DyadicRational::unit(n as u64);

    let mut dovetailer = Dovetailer::new(machine);
    let mut threshold_stage = None;
    while dovetailer.last_stage() < stage_ceiling {
        let report = dovetailer.next_stage()?;
        if report.omega_lower >= limit {
            return Err(OracleError::Inconsistent {
                stage: report.stage,
                omega_lower: report.omega_lower,
                limit,
            });
        }
        if report.omega_lower >= value {
            threshold_stage = Some(report.stage);
            break;
        }
    }
    let halted = dovetailer.halted();
    let unresolved = if threshold_stage.is_some() {
        Verdict::NeverHalts
    } else {
        Verdict::Undetermined
    };
    let verdicts = machine
        .valid_programs(n)
        .map(|program| {
            let verdict = if halted.contains(&program) {
                Verdict::Halts
            } else {
                unresolved
            };
            ProgramVerdict { program, verdict }
        })
        .collect();
    let final_omega_lower = dovetailer.omega_lower().clone();
    let diagnostic = threshold_stage.is_none().then(|| {
        format!(
            "stage ceiling {stage_ceiling} reached with Ω_K = {final_omega_lower} below the prefix value {value}; \
             either more stages are needed or the supplied bits overstate Ω"
        )
    });
    Ok(OracleVerdict {
        n,
        omega_bits: omega_bits.clone(),
        omega_prefix_value: value,
        threshold_stage,
        stage_ceiling,
        final_omega_lower,
        verdicts,
        diagnostic,
    })
}
