//! Commands behind the `ksection` binary, usable as a library.

pub mod canonical;
pub mod error;
pub mod report;
pub mod verify;

pub use canonical::{canonicalize, cmd_canonicalize, cmd_slice_rep, Canonical};
pub use error::CliError;
pub use report::{cmd_report, Ranges, Report};
pub use verify::{cmd_verify, Certificate, Check, TOOL_VERSION};
