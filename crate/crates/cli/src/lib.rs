//! Command-line front end: run configurations, named presets, mapping
//! profiles and checks, and experiment suites.

pub mod commands;
pub mod config;
pub mod presets;
pub mod suites;
