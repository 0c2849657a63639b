// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use kitten_core::density::{hs_distance, oscillator_dm};
use kitten_core::grid::PhaseGrid;
use kitten_core::moments::grid_quadrature_moments;
use kitten_core::phase_space::*;
use kitten_core::reference::*;
use kitten_core::{Error, Real, InitialState64, KittenEnsemble64, ModeData64, PhaseGrid64, SystemParams64, ThermalKittenMixture64};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

// truncated-Fock inner product of D(α)S(ξ)|0⟩ vectors on 120 levels
const INNER_01: (f64, f64) = (-2.578186109145064e-06, -5.791720630476949e-06);
// Fock-path values at the fixed ensemble parameters
const DHS_KITTEN_2205: f64 = 0.064750;
const RATIO_KITTEN_2205: f64 = 0.064852;
const DHS_MIX_3371: f64 = 0.517877;
const KL_MIX_3371: f64 = 0.026645;
const MIX_SIGMA_3371: [f64; 3] = [10.3787, -0.10315, 10.3772];

fn kitten() -> &'static ModeData64 {
    static M: OnceLock<ModeData64> = OnceLock::new();
    M.get_or_init(|| {
        let p = SystemParams64::new(0.15, 0.0, 1.0, 0.05).unwrap();
        let i = InitialState64::new(c(3.0, 0.0), 0.7, 0.0, c(0.0, 1.0)).unwrap();
        ModeData64::new(p, i).unwrap()
    })
}

fn grid() -> PhaseGrid64 {
    PhaseGrid::default_for(&kitten().params, &kitten().init)
}

fn polar(m: f64, arg_pi: f64) -> C {
    C::from_polar(m, PI * arg_pi)
}

fn ensemble(f: Vec<C>, g: Vec<f64>, tau: f64, theta_deg: f64) -> KittenEnsemble64 {
    KittenEnsemble64::new(f, g, tau, theta_deg.to_radians(), c(3.05, 0.0), c(0.7, 0.0)).unwrap()
}

fn kitten_2205() -> KittenEnsemble64 {
    ensemble(vec![c(1.0, 0.0), polar(1.0, 1.677)], vec![1.0, 1.0], 0.996, 112.82)
}

fn mixture_3371() -> ThermalKittenMixture64 {
    ThermalKittenMixture64::new(vec![1.04081, 1.01542, 1.0404, 1.015], 135.22f64.to_radians(), 0.0, c(3.05, 0.0), c(0.7, 0.0))
        .unwrap()
}

fn max_diff(a: &PhaseGrid64, b: &PhaseGrid64) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn inner_products_against_fock_vectors() {
    let e = KittenEnsemble64::new(vec![c(1.0, 0.0); 3], vec![1.0; 3], 1.0, 0.4, c(3.05, 0.0), c(0.7, 0.0)).unwrap();
    let v01 = squeezed_inner_product(0, 1, &e).unwrap();
    assert!((v01 - c(INNER_01.0, INNER_01.1)).norm() < 1e-15, "{v01}");

    // tilted squeeze phase and a smaller amplitude so the overlaps are O(1)
    let e = KittenEnsemble64::new(vec![c(1.0, 0.0); 4], vec![1.0; 4], 1.0, -0.3, c(0.9, 0.4), c(0.5, 0.35)).unwrap();
    let vecs: Vec<Vec<C>> = (0..4)
        .map(|k| {
            let comp = e.component(k);
            squeezed_coherent_vector(100, comp.alpha, C::from_polar(comp.r, comp.vartheta))
        })
        .collect();
    for k in 0..4 {
        for l in 0..4 {
            let want = inner(&vecs[l], &vecs[k]);
            let got = squeezed_inner_product(k, l, &e).unwrap();
            assert!((got - want).norm() < 1e-12, "({k},{l}): {got} vs {want}");
        }
    }
}

#[test]
fn coherent_limit_overlap() {
    let e = KittenEnsemble64::new(vec![c(1.0, 0.0); 5], vec![1.0; 5], 1.0, 0.2, c(1.3, -0.6), c(0.0, 0.0)).unwrap();
    for (k, l) in [(0, 1), (1, 3), (4, 2)] {
        let (a, b) = (e.component(k).alpha, e.component(l).alpha);
        let got = squeezed_inner_product(k, l, &e).unwrap().norm();
        assert!((got - (-(a - b).norm_sqr() / 2.0).exp()).abs() < 1e-14);
    }
}

#[test]
fn closed_form_wigner_matches_fock_series() {
    let cases = [
        ensemble(vec![c(1.0, 0.0)], vec![1.0], 1.0, 0.0),
        ensemble(vec![c(1.0, 0.0), polar(0.8, 0.3)], vec![1.0, 0.4], 0.7, 20.0),
        ensemble(vec![c(1.0, 0.0), polar(0.97, 1.315), polar(0.625, 1.415)], vec![0.0, 0.095, 1.275], 0.783, 40.1),
        ensemble(vec![c(1.0, 0.0), polar(0.96, 0.11), polar(1.0, 1.005), polar(0.96, 1.895)], vec![1.0, 1.54, 1.14, 1.5], 0.81, 0.0),
    ];
    let g = PhaseGrid64::new(c(0.0, 0.0), 8.0, 61).unwrap();
    for e in &cases {
        let w = reference_wigner(e, &g).unwrap();
        let series = wigner_from_dm(&reference_fock_dm(e, 90).unwrap(), &g).unwrap();
        assert!(max_diff(&w, &series) < 1e-6, "p = {}: {:e}", e.p, max_diff(&w, &series));
    }
}

#[test]
fn single_component_is_one_squeezed_gaussian() {
    let e = ensemble(vec![c(1.0, 0.0)], vec![1.0], 1.0, 0.0);
    let rho = reference_fock_dm(&e, 80).unwrap();
    assert!((rho.purity() - 1.0).abs() < 1e-10);
    let init = InitialState64::new(c(3.05, 0.0), 0.7, 0.0, c(0.0, 0.0)).unwrap();
    let g = grid();
    let w = reference_wigner(&e, &g).unwrap();
    let closed = wigner_t0_closed_form(&init, &g);
    assert!(max_diff(&w, &closed) < 1e-14);
    assert!((w.integral() - 1.0).abs() < 1e-3);
}

#[test]
fn fixed_ensemble_distance_at_2205() {
    let rho = oscillator_dm(kitten(), 2205.0).unwrap();
    let reference = reference_fock_dm(&kitten_2205(), kitten().n_max).unwrap();
    let d = hs_distance(&rho, &reference).unwrap();
    assert!((d - DHS_KITTEN_2205).abs() < 1e-5, "d_HS = {d}");
    assert!((d / rho.purity().sqrt() - RATIO_KITTEN_2205).abs() < 1e-5);

    let w_ref = reference_wigner(&kitten_2205(), &grid()).unwrap();
    let w = wigner(kitten(), 2205.0, &grid()).unwrap();
    let dw = hs_distance_wigner(&w, &w_ref).unwrap();
    assert!((dw - d).abs() < 1e-2, "{dw} vs {d}");
}

#[test]
fn rotation_by_one_step_permutes_components() {
    let e = ensemble(vec![c(1.0, 0.0), polar(0.97, 1.315), polar(0.625, 1.415)], vec![0.3, 0.095, 1.275], 0.783, 40.1);
    let mut f = e.f.clone();
    let mut gw = e.g.clone();
    f.rotate_left(1);
    gw.rotate_left(1);
    let turned = KittenEnsemble64::new(f, gw, e.tau, e.theta_tilde + 2.0 * PI / 3.0, e.base_alpha, e.base_xi).unwrap();
    let g = grid();
    let d = max_diff(&reference_wigner(&e, &g).unwrap(), &reference_wigner(&turned, &g).unwrap());
    assert!(d < 1e-10, "{d:e}");
}

#[test]
fn thermal_distributions() {
    let g = PhaseGrid64::new(c(0.0, 0.0), 9.0, 181).unwrap();
    let single = ThermalKittenMixture64::new(vec![1.0], 0.0, 0.0, c(0.0, 0.0), c(0.6, 0.0)).unwrap();
    let w = thermal_wigner(&single, &g);
    assert!((w.max_value() - 2.0 / PI).abs() < 1e-12);

    for nbar in [0.0, 0.4] {
        let mix = ThermalKittenMixture64::new(vec![1.0, 0.5, 2.0, 0.7], 0.3, nbar, c(2.5, 0.0), c(0.5, 0.0)).unwrap();
        let w = thermal_wigner(&mix, &g);
        let q = thermal_husimi(&mix, &g);
        assert!(w.min_value() >= 0.0 && q.min_value() >= 0.0);
        assert!(negativity(&w) < 1e-3);
        assert!((w.integral() - 1.0).abs() < 1e-3 && (q.integral() - 1.0).abs() < 1e-3);
        let conv = gaussian_convolve(&w, 0.5).unwrap();
        assert!(max_diff(&q, &conv) < 1e-3, "n̄ = {nbar}: {:e}", max_diff(&q, &conv));

        let closed = thermal_moments(&mix);
        let grid_m = grid_quadrature_moments(&q);
        for (a, b) in [
            (closed.mean_q, grid_m.mean_q),
            (closed.mean_p, grid_m.mean_p),
            (closed.sigma11, grid_m.sigma11),
            (closed.sigma12, grid_m.sigma12),
            (closed.sigma22, grid_m.sigma22),
        ] {
            assert!((a - b).abs() < 1e-3, "n̄ = {nbar}: {closed:?} vs {grid_m:?}");
        }
    }
}

#[test]
fn thermal_husimi_matches_fock_states_at_zero_temperature() {
    let mix = mixture_3371();
    let vecs: Vec<(f64, Vec<C>)> = (0..4)
        .map(|k| {
            let comp = mix.component(k);
            (mix.g[k], squeezed_coherent_vector(110, comp.alpha, C::from_polar(comp.r, comp.vartheta)))
        })
        .collect();
    let rho = kitten_core::OscillatorDM64::from_mixture(110, &vecs, 0.0).unwrap();
    let g = PhaseGrid64::new(c(0.0, 0.0), 9.0, 45).unwrap();
    let d = max_diff(&husimi_from_dm(&rho, &g).unwrap(), &thermal_husimi(&mix, &g));
    assert!(d < 1e-10, "{d:e}");
}

#[test]
fn vacuum_moments() {
    let vac = ThermalKittenMixture64::new(vec![1.0], 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
    let s = thermal_moments(&vac);
    assert!((s.sigma11 - 0.5).abs() < 1e-15 && (s.sigma22 - 0.5).abs() < 1e-15 && s.sigma12.abs() < 1e-15);
    assert!(s.phi_min.is_none());
}

#[test]
fn fixed_mixture_at_3371() {
    let mix = mixture_3371();
    let s = thermal_moments(&mix);
    for (got, want) in [s.sigma11, s.sigma12, s.sigma22].iter().zip(MIX_SIGMA_3371) {
        assert!((got - want).abs() < 1e-4, "{s:?}");
    }
    let g = grid();
    let q = husimi(kitten(), 3371.0, &g).unwrap();
    let kl = kl_divergence_q(&q, &thermal_husimi(&mix, &g)).unwrap();
    assert!((kl - KL_MIX_3371).abs() < 1e-5, "KL = {kl}");
    let w = wigner(kitten(), 3371.0, &g).unwrap();
    let d = hs_distance_wigner(&w, &thermal_wigner(&mix, &g)).unwrap();
    assert!((d - DHS_MIX_3371).abs() < 1e-4, "d_HS = {d}");
}

#[test]
fn kl_edge_cases() {
    let g = PhaseGrid64::new(c(0.0, 0.0), 6.0, 61).unwrap();
    let q = g.fill(|b| (-b.norm_sqr()).exp() / PI);
    assert_eq!(kl_divergence_q(&q, &q).unwrap(), 0.0);
    let hole = g.fill(|b| if b.re > 1.0 { 0.0 } else { (-b.norm_sqr()).exp() / PI });
    assert!(matches!(kl_divergence_q(&q, &hole), Err(Error::Support(_))));
    let other = PhaseGrid64::new(c(0.0, 0.0), 5.0, 61).unwrap();
    assert!(matches!(kl_divergence_q(&q, &other), Err(Error::Shape(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gram_matrix_is_positive(p in 1usize..6, theta in -3.2..3.2f64, a in 0.0..3.5f64, r in 0.0..1.2f64, phase in -3.2..3.2f64) {
        let e = KittenEnsemble64::new(vec![c(1.0, 0.0); p], vec![1.0; p], 1.0, theta, C::from_polar(a, phase), c(r, 0.0)).unwrap();
        let gram = e.gram_matrix().unwrap();
        for l in 0..p {
            for k in 0..p {
                prop_assert!((gram[l * p + k] - gram[k * p + l].conj()).norm() < 1e-12);
            }
        }
        let eig = <f64 as Real>::hermitian_eigenvalues(p, &gram).unwrap();
        prop_assert!(eig[0] >= -1e-10, "{eig:?}");
    }

    #[test]
    fn kl_is_nonnegative(w0 in 0.1..2.0f64, w1 in 0.1..2.0f64, theta in 0.0..6.3f64, nbar in 0.0..0.5f64) {
        let g = PhaseGrid64::new(c(0.0, 0.0), 8.0, 61).unwrap();
        let m1 = ThermalKittenMixture64::new(vec![w0, w1], theta, nbar, c(2.0, 0.0), c(0.3, 0.0)).unwrap();
        let m2 = ThermalKittenMixture64::new(vec![1.0, 1.0], 0.0, 0.0, c(2.0, 0.0), c(0.3, 0.0)).unwrap();
        let kl = kl_divergence_q(&thermal_husimi(&m1, &g), &thermal_husimi(&m2, &g)).unwrap();
        prop_assert!(kl >= 0.0);
    }
}
