#ifndef OMEGA_H
#define OMEGA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum OmegaStatus {
  OMEGA_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  OMEGA_STATUS_NULL_ARGUMENT = 1,
  /*
   A string argument was not UTF-8.
   */
  OMEGA_STATUS_INVALID_UTF8 = 2,
  /*
   A bit string argument contained something other than 0 and 1.
   */
  OMEGA_STATUS_INVALID_BITS = 3,
  /*
   A machine description failed to parse or is not prefix-free.
   */
  OMEGA_STATUS_INVALID_MACHINE = 4,
  /*
   A file could not be read or written.
   */
  OMEGA_STATUS_IO = 5,
  /*
   The operation needs a table machine.
   */
  OMEGA_STATUS_NOT_TABLE = 6,
  /*
   A checkpoint is malformed or belongs to another machine.
   */
  OMEGA_STATUS_INVALID_CHECKPOINT = 7,
  /*
   A numeric argument is out of range: zero fuel, a stage past the bound.
   */
  OMEGA_STATUS_INVALID_ARGUMENT = 8,
  /*
   The library panicked. This is a bug.
   */
  OMEGA_STATUS_INTERNAL = 99,
} OmegaStatus;

typedef enum OmegaOutcome {
  OMEGA_OUTCOME_HALTED = 0,
  OMEGA_OUTCOME_EXHAUSTED = 1,
  OMEGA_OUTCOME_INVALID = 2,
} OmegaOutcome;

/*
 Staged enumeration over a machine. Owns its own copy of the machine.
 */
typedef struct OmegaDovetailer OmegaDovetailer;

/*
 A loaded machine.
 */
typedef struct OmegaMachine OmegaMachine;

/*
 Result of `omega_run`.
 */
typedef struct OmegaRunResult {
  enum OmegaOutcome outcome;
  /*
   Steps taken when halted, the fuel spent when exhausted, else 0.
   */
  uint64_t steps;
  /*
   Program bits read when halted, else 0.
   */
  uint64_t bits_consumed;
  /*
   Output bits as a `0`/`1` string when halted, else null.
   */
  char *output;
} OmegaRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until
 the next failing call on the same thread.
 */
const char *omega_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void omega_string_free(char *s);

/*
 Parses a machine description from JSON text.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OmegaStatus omega_machine_from_json(const char *json, struct OmegaMachine **out);

/*
 Loads a machine description file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum OmegaStatus omega_machine_load(const char *path, struct OmegaMachine **out);

/*
 The `bitbf-v1` reference machine. Never null.
 */
struct OmegaMachine *omega_machine_universal(void);

/*
 # Safety
 `machine` must be null or a handle from this library not yet freed.
 */
void omega_machine_free(struct OmegaMachine *machine);

/*
 `"sha256:<hex>"` digest of the machine's canonical description.

 # Safety
 `machine` must be a live handle; `out` must be writable.
 */
enum OmegaStatus omega_machine_digest(const struct OmegaMachine *machine, char **out);

/*
 Exact halting probability of a table machine.

 `out_fraction` receives `"n/2^s"`. `out_binary`, if not null, receives
 the binary expansion with at least as many digits as the longest program.

 # Safety
 `machine` must be a live handle; `out_fraction` must be writable;
 `out_binary` must be null or writable.
 */
enum OmegaStatus omega_exact(const struct OmegaMachine *machine,
                             char **out_fraction,
                             char **out_binary);

/*
 Runs `program` (a `0`/`1` string) with `fuel` steps.

 On success `out->output` is owned by the caller when non-null.

 # Safety
 `machine` must be a live handle, `program` a NUL-terminated string and
 `out` writable.
 */
enum OmegaStatus omega_run(const struct OmegaMachine *machine,
                           const char *program,
                           uint64_t fuel,
                           struct OmegaRunResult *out);

/*
 Starts staged enumeration over a copy of `machine`, resuming from
 `checkpoint_json` when it is not null.

 # Safety
 `machine` must be a live handle; `checkpoint_json` null or a
 NUL-terminated string; `out` writable.
 */
enum OmegaStatus omega_dovetailer_new(const struct OmegaMachine *machine,
                                      const char *checkpoint_json,
                                      struct OmegaDovetailer **out);

/*
 Runs the next stage. `out_report`, if not null, receives the stage
 report as one line of JSON.

 # Safety
 `dovetailer` must be a live handle; `out_report` null or writable.
 */
enum OmegaStatus omega_dovetailer_next(struct OmegaDovetailer *dovetailer, char **out_report);

/*
 Last completed stage, 0 before the first.

 # Safety
 `dovetailer` must be null or a live handle.
 */
uint64_t omega_dovetailer_stage(const struct OmegaDovetailer *dovetailer);

/*
 Current lower bound as `"n/2^s"`.

 # Safety
 `dovetailer` must be a live handle; `out` writable.
 */
enum OmegaStatus omega_dovetailer_omega(const struct OmegaDovetailer *dovetailer, char **out);

/*
 Checkpoint JSON for the current state, suitable for
 `omega_dovetailer_new`.

 # Safety
 `dovetailer` must be a live handle; `out` writable.
 */
enum OmegaStatus omega_dovetailer_checkpoint(const struct OmegaDovetailer *dovetailer, char **out);

/*
 # Safety
 `dovetailer` must be null or a handle from this library not yet freed.
 */
void omega_dovetailer_free(struct OmegaDovetailer *dovetailer);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMEGA_H */
