use serde::Serialize;

use super::OracleError;
use crate::bits::BitString;
use crate::enumerate::HaltedProgram;
use crate::machine::bitbf::{encode_program, Opcode};
use crate::machine::{ExecConfig, HaltingModel, Machine, RunOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// No smaller program can produce the target.
    Exact,
    /// A smaller program ran out of fuel and might still produce the target.
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityBound {
    pub target: BitString,
    pub size_bound: usize,
    pub fuel: u64,
    pub kind: BoundKind,
    /// Size in bits of the smallest producer found; `None` means no
    /// producer within `size_bound`.
    pub size: Option<usize>,
    pub witness: Option<HaltedProgram>,
    /// Programs shorter than the witness (or within the bound, if there is
    /// no witness) that exhausted their fuel.
    pub exhausted_below: usize,
    pub explanation: String,
}

/// Smallest program of at most `size_bound` bits whose output is `target`,
/// searched in length-lex order with fixed fuel.
pub fn complexity_upper(
    machine: &Machine,
    target: &BitString,
    size_bound: usize,
    fuel: ExecConfig,
) -> Result<ComplexityBound, OracleError> {
    let bound = machine.bound().get();
    if size_bound > bound {
        return Err(OracleError::SizeBeyondBound {
            size: size_bound,
            bound,
        });
    }
    // exhausted[len] = programs of that length that ran out of fuel.
    let mut exhausted = vec![0usize; size_bound + 1];
    let mut witness = None;
    for program in machine.valid_programs(size_bound) {
        match machine.run(&program, &fuel) {
            RunOutcome::Halted { output, steps, .. } if &output == target => {
                witness = Some(HaltedProgram {
                    program,
                    output,
                    steps,
                });
                break;
            }
            RunOutcome::Exhausted { .. } => exhausted[program.len()] += 1,
            _ => {}
        }
    }

    let result = match witness {
        Some(w) => {
            let size = w.program.len();
            let exhausted_below: usize = exhausted[..size].iter().sum();
            let (kind, explanation) = if exhausted_below == 0 {
                (
                    BoundKind::Exact,
                    format!(
                        "every program shorter than {size} bits halted within fuel or is invalid"
                    ),
                )
            } else {
                (
                    BoundKind::Upper,
                    format!(
                        "{exhausted_below} shorter programs ran out of fuel {}; one of them might still produce the target",
                        fuel.fuel()
                    ),
                )
            };
            ComplexityBound {
                target: target.clone(),
                size_bound,
                fuel: fuel.fuel(),
                kind,
                size: Some(size),
                witness: Some(w),
                exhausted_below,
                explanation,
            }
        }
        None => {
            let exhausted_below: usize = exhausted.iter().sum();
            let (kind, explanation) = if exhausted_below == 0 {
                (
                    BoundKind::Exact,
                    format!("no program of at most {size_bound} bits produces the target"),
                )
            } else {
                (
                    BoundKind::Upper,
                    format!(
                        "no producer of at most {size_bound} bits found, but {exhausted_below} programs ran out of fuel {}",
                        fuel.fuel()
                    ),
                )
            };
            ComplexityBound {
                target: target.clone(),
                size_bound,
                fuel: fuel.fuel(),
                kind,
                size: None,
                witness: None,
                exhausted_below,
                explanation,
            }
        }
    };
    Ok(result)
}

/// Straight-line `bitbf-v1` opcodes that print `target`.
///
/// Each bit costs an OUT, plus an INC or DEC whenever the cell's parity has
/// to change: at most `2·|target|` opcodes. The empty target is a lone HALT.
pub fn print_program_ops(target: &BitString) -> Vec<Opcode> {
    let mut ops = Vec::with_capacity(2 * target.len());
    let mut cell_odd = false;
    for bit in target.iter() {
        if bit != cell_odd {
            ops.push(if bit { Opcode::Inc } else { Opcode::Dec });
            cell_odd = bit;
        }
        ops.push(Opcode::Out);
    }
    if ops.is_empty() {
        ops.push(Opcode::Halt);
    }
    ops
}

/// [`print_program_ops`] encoded as a program.
pub fn print_program(target: &BitString) -> BitString {
    encode_program(&print_program_ops(target)).expect("print programs are never empty")
}
