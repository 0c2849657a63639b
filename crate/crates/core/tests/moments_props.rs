// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use kitten_core::density::oscillator_dm;
use kitten_core::grid::PhaseGrid;
use kitten_core::moments::*;
use kitten_core::phase_space::husimi;
use kitten_core::{CovarianceSummary64, InitialState64, ModeData64, SystemParams64};
use proptest::prelude::*;
use std::sync::OnceLock;

// (⟨q⟩, ⟨p⟩, σ11, σ12, σ22) of the reference kitten at ωt = 3371
const MOMENTS_3371: [f64; 5] = [-0.00062, 0.0, 11.0959, -0.10136, 9.67142];
const BIASED_VMIN: f64 = 0.22968;
const BIASED_PHI_DEG: f64 = 76.155;

fn kitten() -> &'static ModeData64 {
    static M: OnceLock<ModeData64> = OnceLock::new();
    M.get_or_init(|| {
        let p = SystemParams64::new(0.15, 0.0, 1.0, 0.05).unwrap();
        let i = InitialState64::new(c(3.0, 0.0), 0.7, 0.0, c(0.0, 1.0)).unwrap();
        ModeData64::new(p, i).unwrap()
    })
}

fn biased() -> &'static ModeData64 {
    static M: OnceLock<ModeData64> = OnceLock::new();
    M.get_or_init(|| {
        let p = SystemParams64::new(0.15, 1.3, 1.0, 0.04).unwrap();
        let i = InitialState64::new(c(2.0, 0.0), 0.7, 0.0, c(1.0, 0.0)).unwrap();
        ModeData64::new(p, i).unwrap()
    })
}

fn as_array(s: &CovarianceSummary64) -> [f64; 5] {
    [s.mean_q, s.mean_p, s.sigma11, s.sigma12, s.sigma22]
}

#[test]
fn reference_moments_at_3371() {
    let s = covariance_summary(kitten(), 3371.0);
    for (got, want) in as_array(&s).iter().zip(MOMENTS_3371) {
        assert!((got - want).abs() < 5e-5 * want.abs().max(1.0), "{:?}", as_array(&s));
    }
}

#[test]
fn biased_state_squeezing_angle() {
    let s = covariance_summary(biased(), 30414.0);
    assert!((s.v_min - BIASED_VMIN).abs() < 5e-5, "V_min = {}", s.v_min);
    let deg = s.phi_min.unwrap().to_degrees();
    assert!((deg - BIASED_PHI_DEG).abs() < 5e-3, "φ_min = {deg}°");
    assert!(s.v_min < 0.5);
}

// operator-matrix moments of the two-branch initial mixture
#[test]
fn initial_moments_against_operator_matrices() {
    let p = SystemParams64::new(0.2, 0.3, 1.0, 0.08).unwrap();
    let (alpha, r, th, cc) = (c(1.5, -0.7), 0.4, 1.1, c(0.6, -0.3));
    let mode = ModeData64::with_tail_tol(p, InitialState64::new(alpha, r, th, cc).unwrap(), 1e-16).unwrap();
    let xi = c(r * th.cos(), r * th.sin());
    let dim = 120;
    let up = squeezed_coherent_vector(dim, alpha, xi);
    let down = squeezed_coherent_vector(dim, -alpha, xi);
    let a = annihilation(dim);
    let a2 = a.mul(&a);
    let n = creation(dim).mul(&a);
    let w = cc.norm_sqr();
    let ev = |m: &Mat| (inner(&up, &m.apply(&up)) + inner(&down, &m.apply(&down)) * w) / (1.0 + w);
    let got = ladder_moments(&mode, 0.0);
    assert!((got.a - ev(&a)).norm() < 1e-10, "{} vs {}", got.a, ev(&a));
    assert!((got.a2 - ev(&a2)).norm() < 1e-10);
    assert!((got.n - ev(&n).re).abs() < 1e-10);
}

#[test]
fn fock_and_branch_paths_agree() {
    for t in [0.0, 512.0, 3371.0] {
        let m = ladder_moments(kitten(), t);
        let d = dm_ladder_moments(&oscillator_dm(kitten(), t).unwrap());
        assert!((m.a - d.a).norm() < 1e-8 && (m.a2 - d.a2).norm() < 1e-8 && (m.n - d.n).abs() < 1e-8, "t = {t}: {m:?} vs {d:?}");
    }
}

#[test]
fn husimi_grid_moments_match() {
    let m = kitten();
    let q = husimi(m, 2205.0, &PhaseGrid::default_for(&m.params, &m.init)).unwrap();
    let g = grid_quadrature_moments(&q);
    let s = covariance_summary(m, 2205.0);
    for (x, y) in as_array(&g).iter().zip(as_array(&s)) {
        assert!((x - y).abs() < 1e-3, "{:?} vs {:?}", as_array(&g), as_array(&s));
    }
}

#[test]
fn coherent_vacuum_is_degenerate() {
    let p = SystemParams64::new(0.0, 0.0, 1.0, 0.0).unwrap();
    let mode = ModeData64::new(p, InitialState64::new(c(1.0, 2.0), 0.0, 0.0, c(0.0, 0.0)).unwrap()).unwrap();
    let s = covariance_summary(&mode, 7.0);
    assert!(s.phi_min.is_none(), "{s:?}");
    assert!((s.v_min - 0.5).abs() < 1e-9);
    let mean = c(1.0, 2.0) * c(0.0, -7.0).exp() * 2f64.sqrt();
    assert!((s.mean_q - mean.re).abs() < 1e-10 && (s.mean_p - mean.im).abs() < 1e-10, "{s:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotated_quadratures_consistent(t in 0.0..5000.0f64, phi in 0.0..std::f64::consts::PI) {
        let m = ladder_moments(kitten(), t);
        let s = covariance_summary(kitten(), t);
        let mean = m.mean_quadrature(phi);
        let direct = m.second_quadrature(phi) - mean * mean;
        prop_assert!((direct - s.variance_at(phi)).abs() < 1e-9 * direct.abs().max(1.0));
        prop_assert!(s.v_min <= s.variance_at(phi) + 1e-9);
    }

    #[test]
    fn uncertainty_relation(t in 0.0..40000.0f64) {
        let s = covariance_summary(biased(), t);
        prop_assert!(s.determinant() >= 0.25 - 1e-9, "det = {}", s.determinant());
        prop_assert!(s.sigma11 > 0.0 && s.sigma22 > 0.0);
    }
}
