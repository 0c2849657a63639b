// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, ensemble files and subcommands behind the `kitten` binary.

pub mod commands;
pub mod config;
pub mod ensemble;
pub mod error;
