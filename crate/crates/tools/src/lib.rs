//! File formats and run manifests for the `fcm` command-line tool.
//!
//! Everything here is thin plumbing around `fcm-core`: reading surveys, term
//! sets, matrices, states and data series from CSV or JSON, and writing
//! results next to a [`manifest::RunManifest`].

mod error;
pub mod formats;
pub mod manifest;
pub mod survey_io;
pub mod terms;

pub use error::{Result, ToolError};
