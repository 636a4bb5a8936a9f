//! Structure files, the task runner and its reports behind the `sectional` binary.

pub mod build;
pub mod materialize;
pub mod report;
pub mod runner;
pub mod workspace;

pub use report::{Report, Status, TaskReport};
pub use runner::{load, run, RunOptions, Selection, Source};
pub use workspace::{parse_workspace, ParseError, WorkspaceFile};
