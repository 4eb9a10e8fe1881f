//! Workbench for answer set programs: command line, HTTP API, and the
//! on-disk workspace they share.

pub mod cli;
pub mod error;
pub mod launch;
pub mod ops;
pub mod server;
pub mod workspace;

pub use error::{ErrorKind, WbError};
pub use workspace::Workspace;
