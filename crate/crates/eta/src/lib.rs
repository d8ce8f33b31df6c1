//! File formats, the pair-analysis pipeline and report emission around
//! [`eta_core`]. The `eta` binary is a thin command-line layer over this
//! library.

// `!(x > 0.0)` is used on purpose: NaN must fail every range check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acf;
mod error;
pub mod pipeline;
pub mod report;
pub mod returns;
pub mod simulate;
pub mod table;

pub use acf::{acf, AcfReport};
pub use error::{Error, Result};
pub use pipeline::{default_kgrid, run_pair_analysis, AnalysisConfig, KRange, Report, TieHandling};
pub use report::{emit_report, from_json, render, Format};
pub use returns::{log_returns, tail_view, Tail};
pub use simulate::{parse_model, simulate_to_file, write_simulation};
pub use table::{load_csv, read_csv, SeriesTable};
