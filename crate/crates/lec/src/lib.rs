//! File formats and the checking flow behind the `mcid-lec` command.
//!
//! - [`bench`]: bench-style netlist reader and writer, MCID dumps.
//! - [`formats`]: profile, arrival-schedule and wave files.
//! - [`report`]: text and tab-separated run reports.
//! - [`pipeline`]: the staged flow and its exit codes.

pub mod bench;
pub mod formats;
pub mod pipeline;
pub mod report;

pub use pipeline::{run, verify_netlists, Command, LecError, RunConfig, RunResult, VerifyRun, VerifySettings};
pub use report::{Report, Status};
