//! Halting models: the shared contract, table machines and `bitbf-v1`.

pub mod bitbf;
mod table;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::{BitString, BitsError, LengthBound, PrefixError};

pub use bitbf::{decode_program, BitbfV1, DecodeError, DecodedProgram, Opcode};
pub use table::{validate_table, ProgramEntry, TableMachine, TableReport};

/// Current machine file format version.
pub const MACHINE_FORMAT: u32 = 1;

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("cannot read machine file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed machine file: {0}")]
    Parse(String),
    #[error("unsupported machine file format {0} (expected {MACHINE_FORMAT})")]
    UnsupportedFormat(u32),
    #[error("unknown instruction set {0:?} (only \"{isa}\" is supported)", isa = bitbf::ISA_ID)]
    UnknownIsa(String),
    #[error("table machine has no programs")]
    EmptyTable,
    #[error(transparent)]
    Prefix(#[from] PrefixError),
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("{0} is only defined for the universal machine")]
    NotUniversal(&'static str),
}

/// What a fuel-bounded run produced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    /// The program halted after reading exactly its own bits.
    Halted {
        output: BitString,
        steps: u64,
        bits_consumed: usize,
    },
    /// Fuel ran out. Says nothing about whether the program halts.
    Exhausted { fuel: u64 },
    /// Not a program of this machine.
    Invalid { reason: String },
}

impl RunOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }

    pub fn output(&self) -> Option<&BitString> {
        match self {
            RunOutcome::Halted { output, .. } => Some(output),
            _ => None,
        }
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted {
                output,
                steps,
                bits_consumed,
            } => write!(
                f,
                "halted output={output:?} steps={steps} bits_consumed={bits_consumed}"
            ),
            RunOutcome::Exhausted { fuel } => write!(f, "exhausted fuel={fuel}"),
            RunOutcome::Invalid { reason } => write!(f, "invalid: {reason}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExecConfig {
    fuel: u64,
}

impl ExecConfig {
    pub fn new(fuel: u64) -> Result<Self, MachineError> {
        if fuel == 0 {
            return Err(MachineError::ZeroFuel);
        }
        Ok(Self { fuel })
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }
}

/// The contract every halting model satisfies.
///
/// `run` must be a pure function of its arguments, and the valid programs
/// must form a prefix-free set.
pub trait HaltingModel {
    fn run(&self, program: &BitString, config: &ExecConfig) -> RunOutcome;

    fn is_valid(&self, program: &BitString) -> bool;

    /// Valid programs of at most `max_len` bits in length-lex order.
    fn valid_programs(&self, max_len: usize) -> Box<dyn Iterator<Item = BitString> + '_>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Isa {
    BitbfV1,
}

impl Isa {
    pub fn id(self) -> &'static str {
        match self {
            Isa::BitbfV1 => bitbf::ISA_ID,
        }
    }

    pub fn from_id(id: &str) -> Result<Self, MachineError> {
        match id {
            bitbf::ISA_ID => Ok(Isa::BitbfV1),
            other => Err(MachineError::UnknownIsa(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineSpec {
    Table(TableMachine),
    Universal(Isa),
}

/// On-disk machine description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MachineFile {
    Table {
        format: u32,
        programs: Vec<ProgramEntry>,
    },
    Universal {
        format: u32,
        isa: String,
    },
}

/// A validated machine together with the length bound that limits every
/// program and output it deals with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    spec: MachineSpec,
    bound: LengthBound,
}

impl Machine {
    pub fn universal() -> Self {
        Self {
            spec: MachineSpec::Universal(Isa::BitbfV1),
            bound: LengthBound::DEFAULT,
        }
    }

    pub fn table(table: TableMachine) -> Result<Self, MachineError> {
        Self::new(MachineSpec::Table(table), LengthBound::DEFAULT)
    }

    pub fn new(spec: MachineSpec, bound: LengthBound) -> Result<Self, MachineError> {
        if let MachineSpec::Table(t) = &spec {
            for (p, o) in t.programs() {
                bound.check(p)?;
                bound.check(o)?;
            }
        }
        Ok(Self { spec, bound })
    }

    pub fn with_bound(self, bound: LengthBound) -> Result<Self, MachineError> {
        Self::new(self.spec, bound)
    }

    pub fn from_file(file: MachineFile) -> Result<Self, MachineError> {
        let spec = match file {
            MachineFile::Table { format, programs } => {
                check_format(format)?;
                MachineSpec::Table(TableMachine::new(programs)?)
            }
            MachineFile::Universal { format, isa } => {
                check_format(format)?;
                MachineSpec::Universal(Isa::from_id(&isa)?)
            }
        };
        Self::new(spec, LengthBound::DEFAULT)
    }

    pub fn from_json(text: &str) -> Result<Self, MachineError> {
        let file: MachineFile =
            serde_json::from_str(text).map_err(|e| MachineError::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MachineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MachineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> MachineFile {
        match &self.spec {
            MachineSpec::Table(t) => MachineFile::Table {
                format: MACHINE_FORMAT,
                programs: t.entries(),
            },
            MachineSpec::Universal(isa) => MachineFile::Universal {
                format: MACHINE_FORMAT,
                isa: isa.id().to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("machine files always serialize")
    }

    /// `sha256:<hex>` over the canonical JSON form (table rows in length-lex
    /// order). Identifies the machine in checkpoints.
    pub fn digest(&self) -> String {
        format!("sha256:{}", hex::encode(Sha256::digest(self.to_json())))
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn bound(&self) -> LengthBound {
        self.bound
    }

    pub fn as_table(&self) -> Option<&TableMachine> {
        match &self.spec {
            MachineSpec::Table(t) => Some(t),
            MachineSpec::Universal(_) => None,
        }
    }

    pub fn is_universal(&self) -> bool {
        matches!(self.spec, MachineSpec::Universal(_))
    }

    pub fn kind(&self) -> &'static str {
        match &self.spec {
            MachineSpec::Table(_) => "table",
            MachineSpec::Universal(isa) => isa.id(),
        }
    }

    fn model(&self) -> &dyn HaltingModel {
        match &self.spec {
            MachineSpec::Table(t) => t,
            MachineSpec::Universal(Isa::BitbfV1) => &BitbfV1,
        }
    }

    /// Static decode of a `bitbf-v1` program.
    pub fn decode_program(&self, program: &BitString) -> Result<DecodedProgram, MachineError> {
        match self.spec {
            MachineSpec::Universal(Isa::BitbfV1) => Ok(decode_program(program)?),
            MachineSpec::Table(_) => Err(MachineError::NotUniversal("decode_program")),
        }
    }
}

fn check_format(format: u32) -> Result<(), MachineError> {
    if format == MACHINE_FORMAT {
        Ok(())
    } else {
        Err(MachineError::UnsupportedFormat(format))
    }
}

impl HaltingModel for Machine {
    fn run(&self, program: &BitString, config: &ExecConfig) -> RunOutcome {
        if let Err(e) = self.bound.check(program) {
            return RunOutcome::Invalid {
                reason: e.to_string(),
            };
        }
        self.model().run(program, config)
    }

    fn is_valid(&self, program: &BitString) -> bool {
        self.bound.admits(program) && self.model().is_valid(program)
    }

    fn valid_programs(&self, max_len: usize) -> Box<dyn Iterator<Item = BitString> + '_> {
        self.model().valid_programs(max_len.min(self.bound.get()))
    }
}

/// Runs `program` on `machine` with the given fuel.
pub fn run(machine: &Machine, program: &BitString, config: &ExecConfig) -> RunOutcome {
    machine.run(program, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE_TABLE: &str = r#"{"type":"table","format":1,"programs":[
        {"bits":"0001","output":"1"},{"bits":"000001","output":"10"},{"bits":"000011","output":"11"}]}"#;

    #[test]
    fn loads_table_file() {
        let m = Machine::from_json(SAMPLE_TABLE).unwrap();
        assert_eq!(m.as_table().unwrap().len(), 3);
        assert_eq!(m.kind(), "table");
    }

    #[test]
    fn loads_universal_file() {
        let m = Machine::from_json(r#"{"type":"universal","format":1,"isa":"bitbf-v1"}"#).unwrap();
        assert!(m.is_universal());
        assert_eq!(m, Machine::universal());
    }

    #[test]
    fn outputs_default_to_empty() {
        let m =
            Machine::from_json(r#"{"type":"table","format":1,"programs":[{"bits":"0"}]}"#).unwrap();
        let out = m.run(&"0".parse().unwrap(), &ExecConfig::new(1).unwrap());
        assert_eq!(out.output(), Some(&BitString::new()));
    }

    #[test]
    fn loader_rejections() {
        let cases = [
            r#"{"type":"universal","format":1,"isa":"bitbf-v2"}"#,
            r#"{"type":"universal","format":2,"isa":"bitbf-v1"}"#,
            r#"{"type":"universal","format":1,"isa":"bitbf-v1","extra":true}"#,
            r#"{"type":"table","format":1,"programs":[{"bits":"0","out":"1"}]}"#,
            r#"{"type":"table","format":1,"programs":[{"bits":"0"},{"bits":"01"}]}"#,
            r#"{"type":"table","format":1,"programs":[]}"#,
            r#"{"type":"table","format":1,"programs":[{"bits":"0x"}]}"#,
            r#"{"type":"stack","format":1}"#,
            r#"{"type":"universal","isa":"bitbf-v1"}"#,
        ];
        for c in cases {
            assert!(Machine::from_json(c).is_err(), "{c}");
        }
        assert!(matches!(
            Machine::from_json(cases[0]),
            Err(MachineError::UnknownIsa(_))
        ));
        assert!(matches!(
            Machine::from_json(cases[1]),
            Err(MachineError::UnsupportedFormat(2))
        ));
    }

    #[test]
    fn bound_applies_to_keys_and_runs() {
        let m = Machine::from_json(SAMPLE_TABLE).unwrap();
        assert!(m.clone().with_bound(LengthBound::new(5).unwrap()).is_err());
        let u = Machine::universal()
            .with_bound(LengthBound::new(8).unwrap())
            .unwrap();
        let nine: BitString = "010111000".parse().unwrap();
        assert!(!u.is_valid(&nine));
        assert!(matches!(
            u.run(&nine, &ExecConfig::new(5).unwrap()),
            RunOutcome::Invalid { .. }
        ));
        assert!(u.valid_programs(64).all(|p| p.len() <= 8));
    }

    #[test]
    fn digest_is_canonical() {
        let reordered = r#"{"type":"table","format":1,"programs":[
            {"bits":"000011","output":"11"},{"bits":"0001","output":"1"},{"bits":"000001","output":"10"}]}"#;
        let a = Machine::from_json(SAMPLE_TABLE).unwrap();
        let b = Machine::from_json(reordered).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), Machine::universal().digest());
        assert!(a.digest().starts_with("sha256:"));
    }

    #[test]
    fn zero_fuel_rejected() {
        assert!(matches!(ExecConfig::new(0), Err(MachineError::ZeroFuel)));
    }

    #[test]
    fn decode_only_for_universal() {
        let m = Machine::from_json(SAMPLE_TABLE).unwrap();
        assert!(m.decode_program(&"1000".parse().unwrap()).is_err());
        assert!(Machine::universal()
            .decode_program(&"1000".parse().unwrap())
            .is_ok());
    }
}
