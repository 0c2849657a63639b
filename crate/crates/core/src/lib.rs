// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit–oscillator dynamics in the adiabatic regime: reduced density
//! matrices, phase-space quasiprobabilities, quadrature moments and the
//! reconstruction of transient squeezed kitten states.

pub mod error;
pub mod scalar;
pub mod specfun;
pub mod model;
pub mod density;
pub mod grid;
pub mod phase_space;
pub mod moments;
pub mod reference;
pub mod fit;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SystemParams64 = model::SystemParams<f64>;
pub type InitialState64 = model::InitialState<f64>;
pub type ModeData64 = model::ModeData<f64>;
pub type OscillatorDM64 = density::OscillatorDM<f64>;
pub type QubitDM64 = density::QubitDM<f64>;
pub type PhaseGrid64 = grid::PhaseGrid<f64>;
pub type LinearApproxParams64 = phase_space::LinearApproxParams<f64>;
pub type CovarianceSummary64 = moments::CovarianceSummary<f64>;
pub type KittenEnsemble64 = reference::KittenEnsemble<f64>;
pub type ThermalKittenMixture64 = reference::ThermalKittenMixture<f64>;
