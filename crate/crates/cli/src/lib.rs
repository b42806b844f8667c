//! Command line front end: window spec parsing, analysis runs and reports.

pub mod report;
pub mod run;
pub mod spec;

pub use report::{emit, AnalysisReport, Format};
pub use run::{run, AnalysisRequest, OracleSizes, RunError, WindowSource};
pub use spec::{parse_window_spec, SpecError};
