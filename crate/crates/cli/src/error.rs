// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Where a bad assignment came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Line(usize),
    Override(usize),
    File(PathBuf, usize),
    Whole(PathBuf),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override(n) => write!(f, "--set #{n}"),
            Origin::File(p, n) => write!(f, "{}: line {n}", p.display()),
            Origin::Whole(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {origin}: {msg}")]
    Parse { origin: Origin, msg: String },
    #[error("{0}")]
    Numerical(#[from] kitten_core::Error),
    #[error("{0}")]
    Validation(String),
    #[error("fit did not converge; report written to {}", .0.display())]
    NotConverged(PathBuf),
}

impl CliError {
    pub fn parse(origin: Origin, msg: impl Into<String>) -> Self {
        CliError::Parse { origin, msg: msg.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Numerical(_) | CliError::NotConverged(_) => 4,
        }
    }
}
