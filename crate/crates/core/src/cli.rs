//! The `omega` command line.
//!
//! Results go to stdout, diagnostics and timing to stderr. Exit status is 0
//! on success, 2 when an input fails validation (a machine file that is not
//! prefix-free, Ω bits that contradict the machine, a checkpoint for a
//! different machine) and 1 for every other failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bits::{bitstring_of_integer, BitString, DyadicRational, LengthBound};
use crate::enumerate::{exact_omega, omega_stages_with, Checkpoint, EnumerateError, StageReport};
use crate::machine::{ExecConfig, HaltingModel, Machine, MachineError};
use crate::oracle::decider::{SubprocessDecider, VerdictFile};
use crate::oracle::{
    berry_demo, complexity_upper, first_complex_integer, halting_from_omega_prefix, BerryOutcome,
    DeciderError, HaltingDecider, OracleError, Verdict, DEFAULT_MULTIPLIER,
};

#[derive(Debug, Parser)]
#[command(
    name = "omega",
    version,
    about = "Exact halting probabilities and program-size search for small prefix-free machines"
)]
pub struct Cli {
    /// Output format for results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Structured,
}

#[derive(Debug, Args)]
pub struct MachineArg {
    /// Machine description file.
    #[arg(long)]
    pub machine: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one program with a fuel budget.
    Run {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        program: BitString,
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
    /// Check a machine file; for tables, report the Kraft sum.
    Validate {
        #[command(flatten)]
        machine: MachineArg,
    },
    /// Kraft sum of the table's programs, or of the universal machine's
    /// valid programs up to --max-size bits.
    Kraft {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Exact halting probability of a table machine.
    OmegaExact {
        #[command(flatten)]
        machine: MachineArg,
    },
    /// Lower bounds Ω_1 … Ω_K by staged dovetailing.
    OmegaStages {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        stages: usize,
        /// Resume from and save progress to this file after every stage.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Halting verdicts for all programs of at most N bits from N bits of Ω.
    Oracle {
        #[command(flatten)]
        machine: MachineArg,
        /// The first N bits of Ω after the binary point.
        #[arg(long)]
        bits: BitString,
        /// Last stage to run before giving up (stage K runs with K steps of fuel).
        #[arg(long, default_value_t = 24)]
        fuel: usize,
    },
    /// Smallest program that outputs --target.
    Complexity {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        target: BitString,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
    /// Least positive integer not output by any small program.
    ///
    /// With --decider, follows the paradoxical program: trust the decider
    /// about every program up to n·multiplier bits and audit its claims.
    /// Without it, search all programs up to --max-size bits directly.
    Berry {
        #[command(flatten)]
        machine: MachineArg,
        /// Verdict file path, or `cmd:<shell command>` for a subprocess.
        #[arg(long, conflicts_with = "max_size")]
        decider: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_MULTIPLIER)]
        multiplier: usize,
        #[arg(long, required_unless_present = "decider")]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
}

/// A failed command, split by exit status.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Operational(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Operational(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Operational(m) => m,
        }
    }
}

impl From<MachineError> for CliError {
    fn from(e: MachineError) -> Self {
        match e {
            MachineError::Io { .. } | MachineError::ZeroFuel | MachineError::NotUniversal(_) => {
                CliError::Operational(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::DigestMismatch { .. } | EnumerateError::BadCheckpoint(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Operational(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Inconsistent { .. } => CliError::Validation(e.to_string()),
            OracleError::Enumerate(inner) => inner.into(),
            OracleError::Machine(inner) => inner.into(),
            _ => CliError::Operational(e.to_string()),
        }
    }
}

impl From<DeciderError> for CliError {
    fn from(e: DeciderError) -> Self {
        CliError::Operational(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Operational(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let format = cli.format;
    match &cli.command {
        Command::Run {
            machine,
            program,
            fuel,
        } => {
            let m = Machine::load(&machine.machine)?;
            let outcome = m.run(program, &ExecConfig::new(*fuel)?);
            match format {
                Format::Text => writeln!(out, "{program}: {outcome}")?,
                Format::Structured => emit(out, &json!({ "program": program, "result": outcome }))?,
            }
        }
        Command::Validate { machine } => {
            let m = Machine::load(&machine.machine)?;
            validate(&m, format, out, err)?;
        }
        Command::Kraft { machine, max_size } => {
            let m = Machine::load(&machine.machine)?;
            kraft(&m, *max_size, format, out)?;
        }
        Command::OmegaExact { machine } => {
            let m = Machine::load(&machine.machine)?;
            let omega = exact_omega(&m)?;
            let table = m.as_table().expect("exact_omega accepted a table");
            if table.report().boundary {
                warn_boundary(err)?;
            }
            let digits = table.max_program_len();
            match format {
                Format::Text => writeln!(out, "{}", render(&omega, digits))?,
                Format::Structured => emit(
                    out,
                    &json!({
                        "omega": omega,
                        "binary": omega.to_binary_string(digits),
                        "boundary": table.report().boundary,
                    }),
                )?,
            }
        }
        Command::OmegaStages {
            machine,
            stages,
            checkpoint,
        } => {
            let m = Machine::load(&machine.machine)?;
            omega_stages_cmd(&m, *stages, checkpoint.as_ref(), format, out, err)?;
        }
        Command::Oracle {
            machine,
            bits,
            fuel,
        } => {
            let m = Machine::load(&machine.machine)?;
            let verdict = halting_from_omega_prefix(&m, bits, *fuel)?;
            match format {
                Format::Structured => emit(out, &verdict)?,
                Format::Text => {
                    match verdict.threshold_stage {
                        Some(k) => writeln!(
                            out,
                            "threshold reached at stage {k}: Ω_{k} = {} >= {}",
                            render(&verdict.final_omega_lower, k),
                            render(&verdict.omega_prefix_value, verdict.n)
                        )?,
                        None => writeln!(
                            out,
                            "undetermined: {}",
                            verdict.diagnostic.as_deref().unwrap_or_default()
                        )?,
                    }
                    for pv in &verdict.verdicts {
                        writeln!(out, "{} {}", pv.program, verdict_word(pv.verdict))?;
                    }
                    writeln!(
                        out,
                        "every other string of at most {} bits: not a program, never_halts",
                        verdict.n
                    )?;
                }
            }
        }
        Command::Complexity {
            machine,
            target,
            max_size,
            fuel,
        } => {
            let m = Machine::load(&machine.machine)?;
            let bound = complexity_upper(&m, target, *max_size, ExecConfig::new(*fuel)?)?;
            match format {
                Format::Structured => emit(out, &bound)?,
                Format::Text => {
                    let kind = match bound.kind {
                        crate::oracle::BoundKind::Exact => "exact",
                        crate::oracle::BoundKind::Upper => "upper",
                    };
                    match &bound.witness {
                        Some(w) => writeln!(
                            out,
                            "{kind} {} bits, witness {} ({} steps)",
                            w.program.len(),
                            w.program,
                            w.steps
                        )?,
                        None => writeln!(out, "{kind} infinite within {} bits", bound.size_bound)?,
                    }
                    writeln!(out, "{}", bound.explanation)?;
                }
            }
        }
        Command::Berry {
            machine,
            decider,
            n,
            multiplier,
            max_size,
            fuel,
        } => {
            let m = Machine::load(&machine.machine)?;
            let fuel = ExecConfig::new(*fuel)?;
            let outcome = match (decider, max_size) {
                (Some(spec), _) => {
                    let mut d = open_decider(spec)?;
                    berry_demo(&m, &mut d, *n, *multiplier, fuel)?
                }
                (None, Some(size)) => first_complex_integer(&m, *size, fuel)?,
                (None, None) => unreachable!("clap requires --max-size without --decider"),
            };
            berry_report(&outcome, m.bound(), format, out)?;
        }
    }
    Ok(())
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let line = serde_json::to_string(value).expect("reports always serialize");
    writeln!(out, "{line}")
}

fn render(d: &DyadicRational, digits: usize) -> String {
    format!("{d} = {}", d.to_binary_string(digits))
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Halts => "halts",
        Verdict::NeverHalts => "never_halts",
        Verdict::Undetermined => "undetermined",
    }
}

fn warn_boundary(err: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        err,
        "warning: Kraft sum is exactly 1; these programs exhaust every coin-flip sequence, \
         so no other program can ever be added"
    )
}

fn validate(m: &Machine, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match m.as_table() {
        Some(t) => {
            let report = t.report();
            if report.boundary {
                warn_boundary(err)?;
            }
            match format {
                Format::Text => writeln!(
                    out,
                    "ok: table machine, {} programs, Kraft sum {}{}",
                    t.len(),
                    render(&report.kraft, t.max_program_len()),
                    if report.boundary { " (boundary)" } else { "" }
                )?,
                Format::Structured => emit(
                    out,
                    &json!({
                        "valid": true,
                        "type": "table",
                        "programs": t.len(),
                        "kraft": report.kraft,
                        "boundary": report.boundary,
                    }),
                )?,
            }
        }
        None => match format {
            Format::Text => writeln!(out, "ok: universal machine {}", m.kind())?,
            Format::Structured => emit(
                out,
                &json!({ "valid": true, "type": "universal", "isa": m.kind() }),
            )?,
        },
    }
    Ok(())
}

fn kraft(m: &Machine, max_size: Option<usize>, format: Format, out: &mut dyn Write) -> CliResult {
    let (sum, digits, count) = match (m.as_table(), max_size) {
        (Some(t), None) => (t.report().kraft.clone(), t.max_program_len(), t.len()),
        (_, Some(size)) => {
            if size > m.bound().get() {
                return Err(CliError::Operational(format!(
                    "--max-size {size} exceeds the length bound {}",
                    m.bound().get()
                )));
            }
            let programs: Vec<BitString> = m.valid_programs(size).collect();
            let sum = crate::bits::kraft_sum_of(&programs)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            (sum, size, programs.len())
        }
        (None, None) => {
            return Err(CliError::Operational(
                "the universal machine has infinitely many programs; pass --max-size".into(),
            ))
        }
    };
    match format {
        Format::Text => writeln!(out, "{}", render(&sum, digits))?,
        Format::Structured => emit(
            out,
            &json!({ "kraft": sum, "binary": sum.to_binary_string(digits), "programs": count }),
        )?,
    }
    Ok(())
}

fn stage_line(r: &StageReport) -> String {
    let new: Vec<String> = r
        .newly_halted
        .iter()
        .map(|h| h.program.to_string())
        .collect();
    format!(
        "K={} omega={} new=[{}] halted={} valid={} invalid={} digest={}",
        r.stage,
        render(&r.omega_lower, r.stage),
        new.join(","),
        r.cumulative_halted_count,
        r.valid_programs,
        r.invalid_strings,
        r.state_digest
    )
}

fn omega_stages_cmd(
    m: &Machine,
    stages: usize,
    checkpoint: Option<&PathBuf>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let resume = match checkpoint {
        Some(path) if path.exists() => Some(Checkpoint::load(path)?),
        _ => None,
    };
    if let Some(c) = &resume {
        writeln!(err, "resuming after stage {}", c.last_stage)?;
    }
    let started = Instant::now();
    let mut io_error = None;
    omega_stages_with(m, stages, resume.as_ref(), |report, dovetailer| {
        let written = match format {
            Format::Text => writeln!(out, "{}", stage_line(report)),
            Format::Structured => {
                let mut value = serde_json::to_value(report).expect("reports serialize");
                value["omega_binary"] = json!(report.omega_lower.to_binary_string(report.stage));
                emit(out, &value)
            }
        };
        if let Err(e) = written {
            io_error = Some(e);
        }
        if let Some(path) = checkpoint {
            dovetailer.checkpoint().save(path)?;
        }
        Ok(())
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    writeln!(
        err,
        "stages completed in {} ms",
        started.elapsed().as_millis()
    )?;
    Ok(())
}

fn open_decider(spec: &str) -> Result<Box<dyn HaltingDecider>, CliError> {
    if let Some(command) = spec.strip_prefix("cmd:") {
        Ok(Box::new(SubprocessDecider::spawn(command)?))
    } else {
        Ok(Box::new(VerdictFile::load(spec)?))
    }
}

fn berry_report(
    outcome: &BerryOutcome,
    bound: LengthBound,
    format: Format,
    out: &mut dyn Write,
) -> CliResult {
    match format {
        Format::Structured => emit(out, outcome)?,
        Format::Text => {
            let as_bits = bitstring_of_integer(outcome.integer_found, bound)
                .map(|b| b.to_string())
                .unwrap_or_default();
            writeln!(
                out,
                "integer {} (output {as_bits:?}) not produced by any program of at most {} bits; {} distinct outputs seen",
                outcome.integer_found, outcome.size_bound, outcome.produced_set_size
            )?;
            for a in &outcome.audit {
                let claim = match a.claimed {
                    Some(crate::oracle::Claim::Halts) => "claimed halts",
                    Some(crate::oracle::Claim::NeverHalts) => "claimed never_halts",
                    None => "no claim",
                };
                match a.contradiction {
                    Some(_) => writeln!(
                        out,
                        "contradiction {}: {claim}, observed {}",
                        a.program, a.outcome
                    )?,
                    None if a.claimed.is_none() => {
                        writeln!(out, "unresolved {}: {}", a.program, a.outcome)?
                    }
                    None => {}
                }
            }
            let contradictions = outcome.contradictions().count();
            if outcome.audit.iter().any(|a| a.claimed.is_some()) {
                writeln!(
                    out,
                    "{contradictions} decider claims contradicted by execution"
                )?;
            }
        }
    }
    Ok(())
}
