//! File formats: model documents, LP export and result reports.

pub mod document;
pub mod lp_export;
pub mod report;

pub use document::{load_model, model_to_json, parse_model, LoadError, ModelDocument, ValueRecord};
pub use lp_export::export_lp;
pub use report::{render_solve, render_sweep, Format};
