//! Command-line front end and file formats for [`dft_hermite_core`].
//!
//! The binary `dft-hermite` exposes four subcommands (`generate`, `verify`, `convergence`,
//! `seeds`); this library holds their implementation so that they can be driven from tests.

pub mod commands;
pub mod config;
pub mod export;

pub use dft_hermite_core as core;
