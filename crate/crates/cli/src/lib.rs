//! Experiment runner for `banditgv`: configuration files, seed sweeps, CSV output
//! and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
