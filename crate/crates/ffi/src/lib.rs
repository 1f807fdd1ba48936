//! C ABI for `omega-core`.
//!
//! Machines and dovetailers are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! `OmegaStatus`; on failure `omega_last_error_message` describes the
//! problem. Strings handed out by the library are NUL-terminated UTF-8 and
//! must be released with `omega_string_free`.
//!
//! Rationals cross the boundary as exact text, `"n/2^s"`, never as floats.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::mem::ManuallyDrop;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use omega_core::enumerate::{exact_omega, Checkpoint, Dovetailer, EnumerateError};
use omega_core::machine::{HaltingModel, MachineError};
use omega_core::{BitString, ExecConfig, Machine, RunOutcome};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// A bit string argument contained something other than 0 and 1.
    InvalidBits = 3,
    /// A machine description failed to parse or is not prefix-free.
    InvalidMachine = 4,
    /// A file could not be read or written.
    Io = 5,
    /// The operation needs a table machine.
    NotTable = 6,
    /// A checkpoint is malformed or belongs to another machine.
    InvalidCheckpoint = 7,
    /// A numeric argument is out of range: zero fuel, a stage past the bound.
    InvalidArgument = 8,
    /// The library panicked. This is a bug.
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaOutcome {
    Halted = 0,
    Exhausted = 1,
    Invalid = 2,
}

/// Result of `omega_run`.
#[repr(C)]
#[derive(Debug)]
pub struct OmegaRunResult {
    pub outcome: OmegaOutcome,
    /// Steps taken when halted, the fuel spent when exhausted, else 0.
    pub steps: u64,
    /// Program bits read when halted, else 0.
    pub bits_consumed: u64,
    /// Output bits as a `0`/`1` string when halted, else null.
    pub output: *mut c_char,
}

/// A loaded machine.
pub struct OmegaMachine {
    machine: Machine,
}

/// Staged enumeration over a machine. Owns its own copy of the machine.
pub struct OmegaDovetailer {
    inner: ManuallyDrop<Dovetailer<'static>>,
    machine: *mut Machine,
}

impl Drop for OmegaDovetailer {
    fn drop(&mut self) {
        // SAFETY: `inner` is the only borrower of `machine`, which came from
        // Box::into_raw in omega_dovetailer_new; drop the borrower first.
        unsafe {
            ManuallyDrop::drop(&mut self.inner);
            drop(Box::from_raw(self.machine));
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: OmegaStatus, message: impl ToString) -> OmegaStatus {
    set_error(message.to_string());
    status
}

fn machine_status(e: &MachineError) -> OmegaStatus {
    match e {
        MachineError::Io { .. } => OmegaStatus::Io,
        MachineError::ZeroFuel => OmegaStatus::InvalidArgument,
        _ => OmegaStatus::InvalidMachine,
    }
}

fn enumerate_status(e: &EnumerateError) -> OmegaStatus {
    match e {
        EnumerateError::Io { .. } => OmegaStatus::Io,
        EnumerateError::Uncomputable(_) => OmegaStatus::NotTable,
        EnumerateError::DigestMismatch { .. } | EnumerateError::BadCheckpoint(_) => {
            OmegaStatus::InvalidCheckpoint
        }
        EnumerateError::ZeroStage | EnumerateError::StageBeyondBound { .. } => {
            OmegaStatus::InvalidArgument
        }
    }
}

/// Runs `f`, turning panics into `OmegaStatus::Internal`.
fn guard(f: impl FnOnce() -> Result<(), OmegaStatus>) -> OmegaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OmegaStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(OmegaStatus::Internal, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, OmegaStatus> {
    if p.is_null() {
        return Err(fail(OmegaStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(OmegaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, OmegaStatus> {
    p.as_mut()
        .ok_or_else(|| fail(OmegaStatus::NullArgument, format!("{what} is null")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library strings contain no NUL")
        .into_raw()
}

fn store_machine(machine: Machine, out: &mut *mut OmegaMachine) {
    *out = Box::into_raw(Box::new(OmegaMachine { machine }));
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn omega_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn omega_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a machine description from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn omega_machine_from_json(
    json: *const c_char,
    out: *mut *mut OmegaMachine,
) -> OmegaStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(json, "json")?;
        let m = Machine::from_json(text).map_err(|e| fail(machine_status(&e), e))?;
        store_machine(m, out);
        Ok(())
    })
}

/// Loads a machine description file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn omega_machine_load(
    path: *const c_char,
    out: *mut *mut OmegaMachine,
) -> OmegaStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        let m = Machine::load(path).map_err(|e| fail(machine_status(&e), e))?;
        store_machine(m, out);
        Ok(())
    })
}

/// The `bitbf-v1` reference machine. Never null.
#[no_mangle]
pub extern "C" fn omega_machine_universal() -> *mut OmegaMachine {
    Box::into_raw(Box::new(OmegaMachine {
        machine: Machine::universal(),
    }))
}

/// # Safety
/// `machine` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn omega_machine_free(machine: *mut OmegaMachine) {
    if !machine.is_null() {
        drop(Box::from_raw(machine));
    }
}

/// `"sha256:<hex>"` digest of the machine's canonical description.
///
/// # Safety
/// `machine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn omega_machine_digest(
    machine: *const OmegaMachine,
    out: *mut *mut c_char,
) -> OmegaStatus {
    guard(|| {
        let m = machine
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "machine is null"))?;
        *out_arg(out, "out")? = to_c(m.machine.digest());
        Ok(())
    })
}

/// Exact halting probability of a table machine.
///
/// `out_fraction` receives `"n/2^s"`. `out_binary`, if not null, receives
/// the binary expansion with at least as many digits as the longest program.
///
/// # Safety
/// `machine` must be a live handle; `out_fraction` must be writable;
/// `out_binary` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn omega_exact(
    machine: *const OmegaMachine,
    out_fraction: *mut *mut c_char,
    out_binary: *mut *mut c_char,
) -> OmegaStatus {
    guard(|| {
        let m = machine
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "machine is null"))?;
        let fraction = out_arg(out_fraction, "out_fraction")?;
        let omega = exact_omega(&m.machine).map_err(|e| fail(enumerate_status(&e), e))?;
        if let Some(binary) = out_binary.as_mut() {
            let digits = m.machine.as_table().map_or(0, |t| t.max_program_len());
            *binary = to_c(omega.to_binary_string(digits));
        }
        *fraction = to_c(omega.to_string());
        Ok(())
    })
}

/// Runs `program` (a `0`/`1` string) with `fuel` steps.
///
/// On success `out->output` is owned by the caller when non-null.
///
/// # Safety
/// `machine` must be a live handle, `program` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn omega_run(
    machine: *const OmegaMachine,
    program: *const c_char,
    fuel: u64,
    out: *mut OmegaRunResult,
) -> OmegaStatus {
    guard(|| {
        let m = machine
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "machine is null"))?;
        let out = out_arg(out, "out")?;
        let program: BitString = str_arg(program, "program")?
            .parse()
            .map_err(|e| fail(OmegaStatus::InvalidBits, e))?;
        let config = ExecConfig::new(fuel).map_err(|e| fail(machine_status(&e), e))?;
        *out = match m.machine.run(&program, &config) {
            RunOutcome::Halted {
                output,
                steps,
                bits_consumed,
            } => OmegaRunResult {
                outcome: OmegaOutcome::Halted,
                steps,
                bits_consumed: bits_consumed as u64,
                output: to_c(output.to_string()),
            },
            RunOutcome::Exhausted { fuel } => OmegaRunResult {
                outcome: OmegaOutcome::Exhausted,
                steps: fuel,
                bits_consumed: 0,
                output: ptr::null_mut(),
            },
            RunOutcome::Invalid { reason } => {
                set_error(reason);
                OmegaRunResult {
                    outcome: OmegaOutcome::Invalid,
                    steps: 0,
                    bits_consumed: 0,
                    output: ptr::null_mut(),
                }
            }
        };
        Ok(())
    })
}

/// Starts staged enumeration over a copy of `machine`, resuming from
/// `checkpoint_json` when it is not null.
///
/// # Safety
/// `machine` must be a live handle; `checkpoint_json` null or a
/// NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_new(
    machine: *const OmegaMachine,
    checkpoint_json: *const c_char,
    out: *mut *mut OmegaDovetailer,
) -> OmegaStatus {
    guard(|| {
        let m = machine
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "machine is null"))?;
        let out = out_arg(out, "out")?;
        let checkpoint = if checkpoint_json.is_null() {
            None
        } else {
            let text = str_arg(checkpoint_json, "checkpoint_json")?;
            Some(Checkpoint::from_json(text).map_err(|e| fail(enumerate_status(&e), e))?)
        };
        let owned = Box::into_raw(Box::new(m.machine.clone()));
        // SAFETY: the box is freed only in OmegaDovetailer::drop, after the
        // dovetailer borrowing it.
        let borrowed: &'static Machine = &*owned;
        let inner = match &checkpoint {
            None => Dovetailer::new(borrowed),
            Some(c) => match Dovetailer::resume(borrowed, c) {
                Ok(d) => d,
                Err(e) => {
                    drop(Box::from_raw(owned));
                    return Err(fail(enumerate_status(&e), e));
                }
            },
        };
        *out = Box::into_raw(Box::new(OmegaDovetailer {
            inner: ManuallyDrop::new(inner),
            machine: owned,
        }));
        Ok(())
    })
}

/// Runs the next stage. `out_report`, if not null, receives the stage
/// report as one line of JSON.
///
/// # Safety
/// `dovetailer` must be a live handle; `out_report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_next(
    dovetailer: *mut OmegaDovetailer,
    out_report: *mut *mut c_char,
) -> OmegaStatus {
    guard(|| {
        let d = dovetailer
            .as_mut()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "dovetailer is null"))?;
        let report = d
            .inner
            .next_stage()
            .map_err(|e| fail(enumerate_status(&e), e))?;
        if let Some(out) = out_report.as_mut() {
            *out = to_c(serde_json::to_string(&report).expect("reports serialize"));
        }
        Ok(())
    })
}

/// Last completed stage, 0 before the first.
///
/// # Safety
/// `dovetailer` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_stage(dovetailer: *const OmegaDovetailer) -> u64 {
    dovetailer
        .as_ref()
        .map_or(0, |d| d.inner.last_stage() as u64)
}

/// Current lower bound as `"n/2^s"`.
///
/// # Safety
/// `dovetailer` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_omega(
    dovetailer: *const OmegaDovetailer,
    out: *mut *mut c_char,
) -> OmegaStatus {
    guard(|| {
        let d = dovetailer
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "dovetailer is null"))?;
        *out_arg(out, "out")? = to_c(d.inner.omega_lower().to_string());
        Ok(())
    })
}

/// Checkpoint JSON for the current state, suitable for
/// `omega_dovetailer_new`.
///
/// # Safety
/// `dovetailer` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_checkpoint(
    dovetailer: *const OmegaDovetailer,
    out: *mut *mut c_char,
) -> OmegaStatus {
    guard(|| {
        let d = dovetailer
            .as_ref()
            .ok_or_else(|| fail(OmegaStatus::NullArgument, "dovetailer is null"))?;
        *out_arg(out, "out")? = to_c(d.inner.checkpoint().to_json());
        Ok(())
    })
}

/// # Safety
/// `dovetailer` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn omega_dovetailer_free(dovetailer: *mut OmegaDovetailer) {
    if !dovetailer.is_null() {
        drop(Box::from_raw(dovetailer));
    }
}
