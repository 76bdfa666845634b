//! Routing-overhead analysis on top of `qroute-core`: OpenQASM files,
//! trace rasters, the end-to-end pipeline, size sweeps and charts.

pub mod pipeline;
pub mod qasm;
pub mod report;
pub mod sweep;
pub mod trace;

pub use qroute_core as core;
