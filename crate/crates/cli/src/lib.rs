//! Command-line front end, phantom evaluation harness and HTTP service for `uscut_core`.

pub mod eval;
pub mod overlay;
pub mod service;
pub mod stats;
