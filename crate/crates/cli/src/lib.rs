//! Command-line front end for the `zmcrot-core` analysis of rotational
//! surfaces: verification reports, the example gallery, profile
//! integration and mesh export.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;

pub use commands::{cmd_export, cmd_gallery, cmd_integrate, cmd_verify};
pub use config::RunConfig;
pub use error::{CliError, Result};
