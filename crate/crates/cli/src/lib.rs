//! IO companion to `regimefit-core`: canonical CSV, JSON fit reports,
//! plot-data emission, and the pieces the `regimefit` binary is built from.

// Validation uses `!(x > 0.0)` so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod error;
pub mod plot;
pub mod report;

pub use csv::{format_bef, format_csv, load_csv, parse_csv, write_atomic, write_csv};
pub use error::{CliError, EXIT_DATA, EXIT_NONCONVERGED, EXIT_USAGE};
pub use plot::{emit_plot_data, PlotData};
pub use report::{FitReport, SegmentReport};
