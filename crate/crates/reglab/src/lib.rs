//! File formats, verification suites and the command line for `reglab`.

pub mod cli;
pub mod error;
pub mod format;
pub mod report;
pub mod suites;

/// Default bound on matrix widths, overridable with `REGLAB_LIMIT_COLS`.
pub const DEFAULT_LIMIT_COLS: usize = 4000;
