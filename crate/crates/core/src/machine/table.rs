use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExecConfig, HaltingModel, MachineError, RunOutcome};
use crate::bits::{is_prefix_free, kraft_sum_unchecked, BitString, DyadicRational};

/// One row of a table machine file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramEntry {
    pub bits: BitString,
    #[serde(default)]
    pub output: BitString,
}

impl ProgramEntry {
    pub fn new(bits: BitString, output: BitString) -> Self {
        Self { bits, output }
    }
}

/// Result of [`validate_table`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub kraft: DyadicRational,
    /// The Kraft sum is exactly 1: the programs exhaust every coin-flip
    /// sequence and no further program can be added.
    pub boundary: bool,
}

/// Checks that the keys form a nonempty prefix-free set and reports their
/// Kraft sum.
pub fn validate_table(entries: &[ProgramEntry]) -> Result<TableReport, MachineError> {
    if entries.is_empty() {
        return Err(MachineError::EmptyTable);
    }
    let keys: Vec<BitString> = entries.iter().map(|e| e.bits.clone()).collect();
    is_prefix_free(&keys)?;
    let kraft = kraft_sum_unchecked(&keys);
    let boundary = kraft == DyadicRational::one();
    Ok(TableReport { kraft, boundary })
}

/// A finite machine that halts in one step on exactly its listed programs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMachine {
    programs: BTreeMap<BitString, BitString>,
    report: TableReport,
}

impl TableMachine {
    pub fn new(entries: Vec<ProgramEntry>) -> Result<Self, MachineError> {
        let report = validate_table(&entries)?;
        let programs = entries.into_iter().map(|e| (e.bits, e.output)).collect();
        Ok(Self { programs, report })
    }

    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, MachineError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let entries = pairs
            .into_iter()
            .map(|(p, o)| Ok(ProgramEntry::new(p.parse()?, o.parse()?)))
            .collect::<Result<Vec<_>, crate::bits::BitsError>>()?;
        Self::new(entries)
    }

    /// Programs in length-lex order with their outputs.
    pub fn programs(&self) -> impl Iterator<Item = (&BitString, &BitString)> {
        self.programs.iter()
    }

    pub fn entries(&self) -> Vec<ProgramEntry> {
        self.programs()
            .map(|(p, o)| ProgramEntry::new(p.clone(), o.clone()))
            .collect()
    }

    pub fn output_of(&self, program: &BitString) -> Option<&BitString> {
        self.programs.get(program)
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    pub fn max_program_len(&self) -> usize {
        self.programs.keys().map(BitString::len).max().unwrap_or(0)
    }

    pub fn report(&self) -> &TableReport {
        &self.report
    }

    /// Exact halting probability: the Kraft sum of the keys.
    pub fn omega(&self) -> &DyadicRational {
        &self.report.kraft
    }
}

impl HaltingModel for TableMachine {
    fn run(&self, program: &BitString, _config: &ExecConfig) -> RunOutcome {
        match self.programs.get(program) {
            Some(output) => RunOutcome::Halted {
                output: output.clone(),
                steps: 1,
                bits_consumed: program.len(),
            },
            None => RunOutcome::Invalid {
                reason: format!("{program} is not a program of this table"),
            },
        }
    }

    fn is_valid(&self, program: &BitString) -> bool {
        self.programs.contains_key(program)
    }

    fn valid_programs(&self, max_len: usize) -> Box<dyn Iterator<Item = BitString> + '_> {
        Box::new(
            self.programs
                .keys()
                .take_while(move |p| p.len() <= max_len)
                .cloned(),
        )
    }
}
