//! File formats and report rendering for the `f64` pipeline.

pub mod formats;
pub mod report;
pub mod svg;

pub use formats::{read_acd_csv, read_job_json, read_responses_csv, read_tree_json};
pub use report::fmt_fixed;
