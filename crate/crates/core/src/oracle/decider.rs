//! Halting deciders for the Berry construction.
//!
//! A decider claims, for any program, whether it halts. Real ones cannot
//! exist; the point of plugging one in is to watch its claims fail.
//!
//! Two external forms are supported:
//!
//! * A verdict file, one `<bits> YES|NO` per line, an optional `* YES|NO`
//!   default, blank lines and `#` comments ignored.
//! * A subprocess speaking a line protocol on stdin/stdout: the request is
//!   `HALTS? <bits>` and the response is `YES` or `NO`.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::machine::{ExecConfig, HaltingModel, Machine, RunOutcome, TableMachine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Halts,
    NeverHalts,
}

impl Claim {
    fn parse(word: &str) -> Option<Claim> {
        match word {
            "YES" => Some(Claim::Halts),
            "NO" => Some(Claim::NeverHalts),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum DeciderError {
    #[error("decider gave no verdict for {0}")]
    NoAnswer(BitString),
    #[error("verdict file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("decider protocol error: {0}")]
    Protocol(String),
    #[error("decider i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub trait HaltingDecider {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError>;
}

impl<D: HaltingDecider + ?Sized> HaltingDecider for &mut D {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        (**self).decide(program)
    }
}

impl<D: HaltingDecider + ?Sized> HaltingDecider for Box<D> {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        (**self).decide(program)
    }
}

/// Gives the same answer for every program.
#[derive(Debug, Clone, Copy)]
pub struct ConstantDecider(pub Claim);

impl HaltingDecider for ConstantDecider {
    fn decide(&mut self, _program: &BitString) -> Result<Claim, DeciderError> {
        Ok(self.0)
    }
}

/// The correct decider for a table machine: halts iff the program is a key.
#[derive(Debug, Clone)]
pub struct TableDecider<'t> {
    table: &'t TableMachine,
}

impl<'t> TableDecider<'t> {
    pub fn new(table: &'t TableMachine) -> Self {
        Self { table }
    }
}

impl HaltingDecider for TableDecider<'_> {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        Ok(if self.table.output_of(program).is_some() {
            Claim::Halts
        } else {
            Claim::NeverHalts
        })
    }
}

/// Claims "halts" exactly when the program halts within a fixed step budget.
#[derive(Debug, Clone)]
pub struct StepBoundedDecider<'m> {
    machine: &'m Machine,
    budget: ExecConfig,
}

impl<'m> StepBoundedDecider<'m> {
    pub fn new(machine: &'m Machine, budget: ExecConfig) -> Self {
        Self { machine, budget }
    }
}

impl HaltingDecider for StepBoundedDecider<'_> {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        Ok(match self.machine.run(program, &self.budget) {
            RunOutcome::Halted { .. } => Claim::Halts,
            _ => Claim::NeverHalts,
        })
    }
}

/// Verdicts read from a static file.
#[derive(Debug, Clone, Default)]
pub struct VerdictFile {
    verdicts: HashMap<BitString, Claim>,
    default: Option<Claim>,
}

impl VerdictFile {
    pub fn parse(text: &str) -> Result<Self, DeciderError> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| DeciderError::Parse {
                line: i + 1,
                message,
            };
            let mut words = line.split_whitespace();
            let (Some(key), Some(answer), None) = (words.next(), words.next(), words.next()) else {
                return Err(err(format!("expected `<bits> YES|NO`, got {line:?}")));
            };
            let claim =
                Claim::parse(answer).ok_or_else(|| err(format!("unknown verdict {answer:?}")))?;
            if key == "*" {
                if out.default.replace(claim).is_some() {
                    return Err(err("second default line".into()));
                }
                continue;
            }
            let bits: BitString = key.parse().map_err(|e| err(format!("{e}")))?;
            if out.verdicts.insert(bits, claim).is_some() {
                return Err(err(format!("duplicate verdict for {key}")));
            }
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DeciderError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl HaltingDecider for VerdictFile {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        self.verdicts
            .get(program)
            .copied()
            .or(self.default)
            .ok_or_else(|| DeciderError::NoAnswer(program.clone()))
    }
}

/// An external process answering `HALTS? <bits>` queries.
#[derive(Debug)]
pub struct SubprocessDecider {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

impl SubprocessDecider {
    /// Starts `command` through `sh -c`.
    pub fn spawn(command: &str) -> Result<Self, DeciderError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()?;
        let stdin = child.stdin.take();
        let stdout = child.stdout.take().map(BufReader::new);
        let Some(stdout) = stdout else {
            return Err(DeciderError::Protocol("decider has no stdout".into()));
        };
        Ok(Self {
            child,
            stdin,
            stdout,
        })
    }
}

impl HaltingDecider for SubprocessDecider {
    fn decide(&mut self, program: &BitString) -> Result<Claim, DeciderError> {
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| DeciderError::Protocol("decider stdin closed".into()))?;
        writeln!(stdin, "HALTS? {program}")
            .and_then(|_| stdin.flush())
            .map_err(|e| DeciderError::Protocol(format!("cannot send query for {program}: {e}")))?;
        let mut line = String::new();
        if self.stdout.read_line(&mut line)? == 0 {
            return Err(DeciderError::Protocol(format!(
                "decider closed its output before answering {program}"
            )));
        }
        Claim::parse(line.trim()).ok_or_else(|| {
            DeciderError::Protocol(format!("unexpected answer {:?} for {program}", line.trim()))
        })
    }
}

impl Drop for SubprocessDecider {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
