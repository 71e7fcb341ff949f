//! Std companion to `rpig-core`: model and game files, Monte Carlo
//! experiments, CSV output with run manifests, and the command-line tool.

pub mod cli;
pub mod csv_out;
pub mod error;
pub mod game_file;
pub mod manifest;
pub mod mc;
pub mod model_file;

pub use error::{AppError, Result};
pub use rpig_core as core;
