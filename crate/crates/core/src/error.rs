// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {order} exceeds cache capacity {capacity}")]
    Capacity { order: usize, capacity: usize },
    #[error("series did not converge within {terms} terms")]
    Series { terms: usize },
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("numerical validity: {0}")]
    NumericalValidity(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("linear algebra: {0}")]
    LinearAlgebra(String),
    #[error("grid extent: {0}")]
    GridExtent(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("support: {0}")]
    Support(String),
    #[error("degenerate alignment: {0}")]
    DegenerateAlignment(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
