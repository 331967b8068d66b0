//! Command-line companion to `groundcov-core`: scenario/preset file loading,
//! CSV and SVG emission, and the `groundcov` binary's command dispatch.

pub mod app;
pub mod config;
pub mod preset_file;
pub mod records;
pub mod svg;
