//! The `bitbf-v1` reference machine.
//!
//! A program is `gamma(n)` followed by exactly `n` three-bit opcodes with
//! balanced loop brackets. The header makes the set of valid programs
//! prefix-free: the machine knows where its program ends before reading it.
//!
//! | code | op         | effect                                                 |
//! |------|------------|--------------------------------------------------------|
//! | 000  | HALT       | stop                                                   |
//! | 001  | INC        | current cell += 1                                      |
//! | 010  | DEC        | current cell -= 1, saturating at 0                     |
//! | 011  | LEFT       | head moves left                                        |
//! | 100  | RIGHT      | head moves right                                       |
//! | 101  | LOOP-BEGIN | if cell = 0, continue after the matching LOOP-END      |
//! | 110  | LOOP-END   | if cell ≠ 0, jump to the matching LOOP-BEGIN           |
//! | 111  | OUT        | append (cell mod 2) to the output                      |
//!
//! The tape is unbounded both ways with unbounded nonnegative cells. One
//! step is one opcode execution. Running past the last opcode halts without
//! consuming a step.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ExecConfig, HaltingModel, RunOutcome};
use crate::bits::{gamma_decode, gamma_encode, gamma_len, BitString, GammaError};

pub const ISA_ID: &str = "bitbf-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Opcode {
    Halt,
    Inc,
    Dec,
    Left,
    Right,
    LoopBegin,
    LoopEnd,
    Out,
}

impl Opcode {
    pub const ALL: [Opcode; 8] = [
        Opcode::Halt,
        Opcode::Inc,
        Opcode::Dec,
        Opcode::Left,
        Opcode::Right,
        Opcode::LoopBegin,
        Opcode::LoopEnd,
        Opcode::Out,
    ];

    pub fn from_code(code: u8) -> Opcode {
        Self::ALL[(code & 0b111) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    fn depth_delta(code: u8) -> i32 {
        match code {
            5 => 1,
            6 => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Opcode::Halt => "HALT",
            Opcode::Inc => "INC",
            Opcode::Dec => "DEC",
            Opcode::Left => "LEFT",
            Opcode::Right => "RIGHT",
            Opcode::LoopBegin => "LOOP-BEGIN",
            Opcode::LoopEnd => "LOOP-END",
            Opcode::Out => "OUT",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("truncated header: program ends after {consumed} bits of the length code")]
    TruncatedHeader { consumed: usize },
    #[error("length header does not fit in 64 bits")]
    HeaderOverflow,
    #[error("truncated body: header announces {count} opcodes, only {available} body bits follow")]
    TruncatedBody { count: u64, available: usize },
    #[error("trailing bits: {extra} bits follow a complete {consumed}-bit program")]
    TrailingBits { consumed: usize, extra: usize },
    #[error("unbalanced loop bracket at opcode {position}")]
    UnbalancedLoop { position: usize },
}

/// A statically valid `bitbf-v1` program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedProgram {
    ops: Vec<Opcode>,
    partner: Vec<usize>,
    bits_consumed: usize,
}

impl DecodedProgram {
    pub fn ops(&self) -> &[Opcode] {
        &self.ops
    }

    pub fn bits_consumed(&self) -> usize {
        self.bits_consumed
    }
}

pub fn decode_program(program: &BitString) -> Result<DecodedProgram, DecodeError> {
    let mut source = program.iter();
    let (count, header_len) = gamma_decode(&mut source).map_err(|e| match e {
        GammaError::Truncated { consumed } => DecodeError::TruncatedHeader { consumed },
        GammaError::Overflow { .. } | GammaError::Zero => DecodeError::HeaderOverflow,
    })?;
    let available = program.len() - header_len;
    let needed = count.checked_mul(3).filter(|&b| b <= available as u64);
    let Some(needed) = needed.map(|b| b as usize) else {
        return Err(DecodeError::TruncatedBody { count, available });
    };
    if available > needed {
        return Err(DecodeError::TrailingBits {
            consumed: header_len + needed,
            extra: available - needed,
        });
    }

    let body = &program.as_slice()[header_len..];
    let ops: Vec<Opcode> = body
        .chunks_exact(3)
        .map(|c| Opcode::from_code((c[0] as u8) << 2 | (c[1] as u8) << 1 | c[2] as u8))
        .collect();

    let mut partner = vec![usize::MAX; ops.len()];
    let mut open = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match op {
            Opcode::LoopBegin => open.push(i),
            Opcode::LoopEnd => {
                let j = open
                    .pop()
                    .ok_or(DecodeError::UnbalancedLoop { position: i })?;
                partner[i] = j;
                partner[j] = i;
            }
            _ => {}
        }
    }
    if let Some(&position) = open.first() {
        return Err(DecodeError::UnbalancedLoop { position });
    }

    Ok(DecodedProgram {
        ops,
        partner,
        bits_consumed: program.len(),
    })
}

/// Serializes an opcode list as `gamma(n)` followed by the opcodes.
///
/// Fails only for an empty list. Bracket balance is not checked here.
pub fn encode_program(ops: &[Opcode]) -> Result<BitString, GammaError> {
    let mut out = gamma_encode(ops.len() as u64)?;
    for op in ops {
        out.extend_from(&BitString::from_uint(op.code() as u128, 3));
    }
    Ok(out)
}

/// Total length in bits of a valid program with `count` opcodes.
pub fn program_len(count: u64) -> usize {
    gamma_len(count) + 3 * count as usize
}

#[derive(Default)]
struct Tape {
    right: Vec<u64>,
    left: Vec<u64>,
    head: i64,
}

impl Tape {
    fn cell(&mut self) -> &mut u64 {
        let (side, idx) = if self.head >= 0 {
            (&mut self.right, self.head as usize)
        } else {
            (&mut self.left, (-self.head - 1) as usize)
        };
        if side.len() <= idx {
            side.resize(idx + 1, 0);
        }
        &mut side[idx]
    }
}

/// Interprets a decoded program for at most `fuel` steps.
pub fn execute(program: &DecodedProgram, fuel: u64) -> RunOutcome {
    let ops = &program.ops;
    let mut tape = Tape::default();
    let mut output = BitString::new();
    let mut pc = 0usize;
    let mut steps = 0u64;
    let halted = |output, steps| RunOutcome::Halted {
        output,
        steps,
        bits_consumed: program.bits_consumed,
    };

    while pc < ops.len() {
        if steps == fuel {
            return RunOutcome::Exhausted { fuel };
        }
        steps += 1;
        match ops[pc] {
            Opcode::Halt => return halted(output, steps),
            Opcode::Inc => *tape.cell() += 1,
            Opcode::Dec => {
                let c = tape.cell();
                *c = c.saturating_sub(1);
            }
            Opcode::Left => tape.head -= 1,
            Opcode::Right => tape.head += 1,
            Opcode::LoopBegin => {
                if *tape.cell() == 0 {
                    pc = program.partner[pc];
                }
            }
            Opcode::LoopEnd => {
                if *tape.cell() != 0 {
                    pc = program.partner[pc];
                    continue;
                }
            }
            Opcode::Out => {
                let bit = *tape.cell() % 2 == 1;
                output.push(bit);
            }
        }
        pc += 1;
    }
    halted(output, steps)
}

/// The frozen `bitbf-v1` instruction set as a halting model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BitbfV1;

impl HaltingModel for BitbfV1 {
    fn run(&self, program: &BitString, config: &ExecConfig) -> RunOutcome {
        match decode_program(program) {
            Ok(decoded) => execute(&decoded, config.fuel()),
            Err(e) => RunOutcome::Invalid {
                reason: e.to_string(),
            },
        }
    }

    fn is_valid(&self, program: &BitString) -> bool {
        decode_program(program).is_ok()
    }

    fn valid_programs(&self, max_len: usize) -> Box<dyn Iterator<Item = BitString> + '_> {
        Box::new(ValidPrograms::new(max_len))
    }
}

/// All valid programs of at most `max_len` bits, in length-lex order.
///
/// Program length is strictly increasing in the opcode count, so each
/// length holds programs of a single count and lexicographic order of the
/// fixed-width body is lexicographic order of the whole string.
pub struct ValidPrograms {
    max_len: usize,
    count: u64,
    header: BitString,
    body: Option<BalancedBodies>,
}

impl ValidPrograms {
    pub fn new(max_len: usize) -> Self {
        Self {
            max_len,
            count: 0,
            header: BitString::new(),
            body: None,
        }
    }
}

impl Iterator for ValidPrograms {
    type Item = BitString;

    fn next(&mut self) -> Option<BitString> {
        loop {
            if let Some(digits) = self.body.as_mut().and_then(BalancedBodies::advance) {
                let mut out = self.header.clone();
                for &d in digits {
                    out.extend_from(&BitString::from_uint(d as u128, 3));
                }
                return Some(out);
            }
            let next = self.count + 1;
            if program_len(next) > self.max_len {
                self.body = None;
                return None;
            }
            self.count = next;
            self.header = gamma_encode(next).expect("count is positive");
            self.body = Some(BalancedBodies::new(next as usize));
        }
    }
}

/// Odometer over opcode sequences of fixed length with balanced brackets,
/// in lexicographic order.
struct BalancedBodies {
    digits: Vec<u8>,
    // depth[i] = open brackets after position i
    depth: Vec<i32>,
    started: bool,
    done: bool,
}

impl BalancedBodies {
    fn new(n: usize) -> Self {
        let mut b = Self {
            digits: vec![0; n],
            depth: vec![0; n],
            started: false,
            done: false,
        };
        b.fill_min(0);
        b
    }

    fn depth_before(&self, i: usize) -> i32 {
        if i == 0 {
            0
        } else {
            self.depth[i - 1]
        }
    }

    /// Least completion of positions `from..`: HALTs, then the closers needed.
    fn fill_min(&mut self, from: usize) {
        let n = self.digits.len();
        let mut d = self.depth_before(from);
        for i in from..n {
            let remaining = (n - i) as i32;
            if d >= remaining {
                self.digits[i] = 6;
                d -= 1;
            } else {
                self.digits[i] = 0;
            }
            self.depth[i] = d;
        }
    }

    fn advance(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        let n = self.digits.len();
        for i in (0..n).rev() {
            let before = self.depth_before(i);
            let slots_after = (n - 1 - i) as i32;
            for code in self.digits[i] + 1..8 {
                let d = before + Opcode::depth_delta(code);
                if d >= 0 && d <= slots_after {
                    self.digits[i] = code;
                    self.depth[i] = d;
                    self.fill_min(i + 1);
                    return Some(&self.digits);
                }
            }
        }
        self.done = true;
        None
    }
}
