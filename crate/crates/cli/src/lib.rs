// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runner: configuration, the named experiments, and CSV/JSON
//! output with checksummed manifests.

pub mod cli;
pub mod config;
pub mod output;
pub mod scenarios;

use thiserror::Error;

pub use config::{ScenarioConfig, ScenarioName};
pub use output::{RunManifest, Table};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SQLASER_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] sqlaser::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    /// Wraps a core error raised while checking parameters.
    pub fn config(e: sqlaser::Error) -> Self {
        Self::Config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) | Self::Verify(_) => 1,
        }
    }
}
