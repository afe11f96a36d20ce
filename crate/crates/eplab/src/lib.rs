//! Command-line front end for the `epcore` resonance models: TOML run configs,
//! CSV/JSON emission, figure presets, and a parallel sweep runner.
//!
//! The library half exists so integration tests can drive the exact same code
//! paths as the `eplab` binary; see [`runner`] for the four actions.

pub mod config;
pub mod emit;
pub mod presets;
pub mod runner;
