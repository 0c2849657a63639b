// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Variational reconstruction of near-pure kitten states and moment-matched
//! thermal mixtures, driven by a multi-start Nelder–Mead simplex.

use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;

use crate::density::{hs_distance, OscillatorDM};
use crate::error::{Error, Result};
use crate::grid::PhaseGrid;
use crate::model::ModeData;
use crate::moments::{covariance_summary, dm_covariance_summary, CovarianceSummary};
use crate::phase_space::{
    hs_distance_wigner, husimi, husimi_from_dm, phase_profile, phase_profile_dm, wigner, wigner_from_dm,
};
use crate::reference::{
    kl_divergence_q, reference_fock_dm, thermal_husimi, thermal_moments, thermal_wigner, KittenEnsemble, KittenGeometry,
    ThermalKittenMixture,
};
use crate::scalar::{cis, from_usize, lit, Real};

/// 0.05° resolution of the alignment scan.
pub const ALIGN_SAMPLES: usize = 7200;
const FLAT_REL: f64 = 1e-12;
const TAU_SEEDS: [f64; 3] = [0.8, 0.95, 1.0];
const NBAR_SEEDS: [f64; 2] = [0.0, 0.3];
// τ seeds of exactly 1 sit at this logit
const TAU_CAP: f64 = 1.0 - 1e-6;

/// Simplex coefficients and stopping rule.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead<T> {
    pub reflect: T,
    pub expand: T,
    pub contract: T,
    pub shrink: T,
    /// Stop once max f − min f over the simplex falls below this.
    pub ftol: T,
    pub max_evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value after each iteration.
    pub history: Vec<T>,
}

impl<T: Real> NelderMead<T> {
    pub fn new(max_evaluations: usize) -> Self {
        Self {
            reflect: T::one(),
            expand: lit(2.0),
            contract: lit(0.5),
            shrink: lit(0.5),
            ftol: lit(1e-6),
            max_evaluations,
        }
    }

    /// Minimizes `f` from the axis-aligned simplex x0 + steps_i e_i.
    pub fn minimize<F: FnMut(&[T]) -> T>(&self, mut f: F, x0: &[T], steps: &[T]) -> SimplexOutcome<T> {
        let dim = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[T], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                T::infinity()
            } else {
                v
            }
        };
        let mut pts: Vec<(Vec<T>, T)> = Vec::with_capacity(dim + 1);
        let v0 = eval(x0, &mut evals);
        pts.push((x0.to_vec(), v0));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += steps[i];
            let v = eval(&x, &mut evals);
            pts.push((x, v));
        }
        let mut history = Vec::new();
        let mut converged = false;
        loop {
            // stable sort keeps the earlier vertex first on ties
            pts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            history.push(pts[0].1);
            if pts[dim].1 - pts[0].1 < self.ftol {
                converged = true;
                break;
            }
            if evals >= self.max_evaluations || dim == 0 {
                break;
            }
            let inv = from_usize::<T>(dim).recip();
            let centroid: Vec<T> =
                (0..dim).map(|j| pts[..dim].iter().map(|p| p.0[j]).fold(T::zero(), |a, b| a + b) * inv).collect();
            let along = |t: T, from: &[T]| -> Vec<T> {
                centroid.iter().zip(from).map(|(c, x)| *c + t * (*x - *c)).collect()
            };
            let worst = pts[dim].0.clone();
            let xr = along(-self.reflect, &worst);
            let fr = eval(&xr, &mut evals);
            if fr < pts[0].1 {
                let xe = along(-self.reflect * self.expand, &worst);
                let fe = eval(&xe, &mut evals);
                pts[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < pts[dim - 1].1 {
                pts[dim] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < pts[dim].1 {
                let xc = along(-self.reflect * self.contract, &worst);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(self.contract, &worst);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(pts[dim].1) {
                pts[dim] = (xc, fc);
                continue;
            }
            let best = pts[0].0.clone();
            for p in pts.iter_mut().skip(1) {
                let x: Vec<T> = best.iter().zip(&p.0).map(|(b, x)| *b + self.shrink * (*x - *b)).collect();
                let v = eval(&x, &mut evals);
                *p = (x, v);
            }
        }
        let (x, value) = pts.swap_remove(0);
        SimplexOutcome { x, value, evaluations: evals, converged, history }
    }
}

/// Evaluations per restart and number of restarts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_evaluations: usize,
    pub restarts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_evaluations: 4000, restarts: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult<P, T> {
    pub best_params: P,
    pub objective: T,
    pub evaluations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub history: Vec<T>,
}

/// Runs every seed and keeps the lowest objective, earliest seed on ties.
fn multi_start<T, F>(seeds: &[(Vec<T>, Vec<T>)], budget: Budget, objective: F) -> (SimplexOutcome<T>, usize, usize)
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    let nm = NelderMead::<T>::new(budget.max_evaluations);
    let runs: Vec<SimplexOutcome<T>> =
        seeds.par_iter().map(|(x0, steps)| nm.minimize(|x| objective(x), x0, steps)).collect();
    let total = runs.iter().map(|r| r.evaluations).sum();
    let used = runs.len();
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one seed");
    (best, total, used)
}

/// Rotation θ̃ that best maps `candidate` onto `target`; both are 𝒫(θ)
/// sampled on the same uniform periodic grid. Peak of the circular
/// cross-correlation, refined by a parabola through its neighbours.
pub fn align_theta<T: Real>(target: &[T], candidate: &[T]) -> Result<T> {
    let n = target.len();
    if n < 3 || candidate.len() != n {
        return Err(Error::Shape(format!("profiles of length {} and {}", n, candidate.len())));
    }
    let spread = |v: &[T]| {
        let hi = v.iter().copied().fold(T::neg_infinity(), T::max);
        let lo = v.iter().copied().fold(T::infinity(), T::min);
        (hi - lo, hi.abs())
    };
    for (name, v) in [("target", target), ("candidate", candidate)] {
        let (s, scale) = spread(v);
        if !(s > lit::<T>(FLAT_REL) * scale) {
            return Err(Error::DegenerateAlignment(format!("{name} profile is flat")));
        }
    }
    // rotating a state by δ maps 𝒫(θ) to 𝒫(θ − δ)
    let corr: Vec<T> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut acc = T::zero();
            for j in 0..n {
                acc += target[j] * candidate[(j + n - s) % n];
            }
            acc
        })
        .collect();
    let (s, _) = corr
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    let (c_lo, c_hi) = spread(&corr);
    if !(c_lo > lit::<T>(FLAT_REL) * c_hi) {
        return Err(Error::DegenerateAlignment("cross-correlation is flat".into()));
    }
    let (ym, y0, yp) = (corr[(s + n - 1) % n], corr[s], corr[(s + 1) % n]);
    let curv = ym - lit::<T>(2.0) * y0 + yp;
    let offset = if curv < T::zero() { lit::<T>(0.5) * (ym - yp) / curv } else { T::zero() };
    let theta = (from_usize::<T>(s) + offset) * T::TAU() / from_usize::<T>(n);
    Ok(theta - T::TAU() * (theta / T::TAU()).floor())
}

/// d_HS(ρ, ρ̃) on the Fock-trace path.
pub fn kitten_objective<T: Real>(rho: &OscillatorDM<T>, ens: &KittenEnsemble<T>) -> Result<T> {
    hs_distance(rho, &reference_fock_dm(ens, rho.n_max)?)
}

fn sigmoid<T: Real>(s: T) -> T {
    (T::one() + (-s).exp()).recip()
}

fn logit<T: Real>(tau: T) -> T {
    let t = tau.min(lit(TAU_CAP));
    (t / (T::one() - t)).ln()
}

// g_k = u_k², rescaled to mean 1
fn squared_weights<T: Real>(u: &[T]) -> Vec<T> {
    let g: Vec<T> = u.iter().map(|v| *v * *v).collect();
    let s: T = g.iter().copied().sum();
    if s > T::zero() {
        let k = from_usize::<T>(g.len()) / s;
        g.into_iter().map(|v| v * k).collect()
    } else {
        g
    }
}

// [θ̃, (|f_k|, arg f_k/π) for k ≥ 1, u_0..u_{p−1}, logit τ]
fn decode_kitten<T: Real>(v: &[T], p: usize, geo: &KittenGeometry<T>) -> Result<KittenEnsemble<T>> {
    let mut f = vec![Complex::new(T::one(), T::zero())];
    for k in 1..p {
        let (m, a) = (v[2 * k - 1], v[2 * k]);
        f.push(cis(a * T::PI()) * m.abs());
    }
    let g = squared_weights(&v[2 * p - 1..3 * p - 1]);
    KittenEnsemble::new(f, g, sigmoid(v[3 * p - 1]), v[0], geo.base_alpha, geo.base_xi)
}

fn kitten_seeds<T: Real>(
    rho: &OscillatorDM<T>,
    p: usize,
    geo: &KittenGeometry<T>,
    budget: Budget,
) -> Result<Vec<(Vec<T>, Vec<T>)>> {
    let target = phase_profile_dm(rho, ALIGN_SAMPLES);
    let patterns = p.min(4);
    let mut seeds = Vec::new();
    'outer: for &tau in &TAU_SEEDS {
        for m in 0..patterns {
            if seeds.len() >= budget.restarts.max(1) {
                break 'outer;
            }
            let mut x = vec![T::zero()];
            let mut steps = vec![lit::<T>(0.05)];
            for k in 1..p {
                // discrete Fourier phase patterns e^{2πikm/p}
                let arg = lit::<T>(2.0) * from_usize::<T>((k * m) % p) / from_usize::<T>(p);
                x.extend([T::one(), arg]);
                steps.extend([lit::<T>(0.1), lit::<T>(0.1)]);
            }
            x.extend(std::iter::repeat(T::one()).take(p));
            steps.extend(std::iter::repeat(lit::<T>(0.1)).take(p));
            x.push(logit(lit::<T>(tau)));
            steps.push(lit(0.5));
            let ens = decode_kitten(&x, p, geo)?;
            let candidate = phase_profile(&ens.fock_mixture(rho.n_max)?, ALIGN_SAMPLES);
            x[0] = align_theta(&target, &candidate)?;
            seeds.push((x, steps));
        }
    }
    Ok(seeds)
}

/// Best p-kitten ensemble ρ̃(f, g, τ, θ̃) in Hilbert–Schmidt distance to ρ.
pub fn reconstruct_pure_neighborhood<T: Real>(
    rho: &OscillatorDM<T>,
    p: usize,
    geo: &KittenGeometry<T>,
    budget: Budget,
) -> Result<FitResult<KittenEnsemble<T>, T>> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let seeds = kitten_seeds(rho, p, geo, budget)?;
    let objective = |v: &[T]| match decode_kitten(v, p, geo).and_then(|e| kitten_objective(rho, &e)) {
        Ok(d) => d,
        Err(_) => T::infinity(),
    };
    let (best, evaluations, restarts_used) = multi_start(&seeds, budget, objective);
    let mut ens = decode_kitten(&best.x, p, geo)?.gauge_fixed();
    ens.theta_tilde = ens.theta_tilde - T::TAU() * (ens.theta_tilde / T::TAU()).floor();
    Ok(FitResult {
        best_params: ens,
        objective: best.value,
        evaluations,
        restarts_used,
        converged: best.converged,
        history: best.history,
    })
}

/// ρ with its moments, Wigner and Husimi grids, as compared against a mixture.
#[derive(Debug, Clone)]
pub struct ThermalTarget<T> {
    pub rho: OscillatorDM<T>,
    pub moments: CovarianceSummary<T>,
    pub wigner: PhaseGrid<T>,
    pub husimi: PhaseGrid<T>,
}

impl<T: Real> ThermalTarget<T> {
    pub fn from_mode(mode: &ModeData<T>, t: T, grid: &PhaseGrid<T>) -> Result<Self> {
        Ok(Self {
            rho: crate::density::oscillator_dm(mode, t)?,
            moments: covariance_summary(mode, t),
            wigner: wigner(mode, t, grid)?,
            husimi: husimi(mode, t, grid)?,
        })
    }

    pub fn from_dm(rho: OscillatorDM<T>, grid: &PhaseGrid<T>) -> Result<Self> {
        Ok(Self {
            moments: dm_covariance_summary(&rho),
            wigner: wigner_from_dm(&rho, grid)?,
            husimi: husimi_from_dm(&rho, grid)?,
            rho,
        })
    }
}

fn moment_vector<T: Real>(s: &CovarianceSummary<T>) -> [T; 5] {
    [s.mean_q, s.mean_p, s.sigma11, s.sigma12, s.sigma22]
}

/// Σ ((m_i − t_i)/(1 + |t_i|))² over (⟨q⟩, ⟨p⟩, σ11, σ12, σ22).
pub fn moment_residual<T: Real>(mixture: &CovarianceSummary<T>, target: &CovarianceSummary<T>) -> T {
    moment_vector(mixture)
        .iter()
        .zip(moment_vector(target))
        .map(|(m, t)| {
            let d = (*m - t) / (T::one() + t.abs());
            d * d
        })
        .sum()
}

fn decode_thermal<T: Real>(v: &[T], count: usize, theta: T, geo: &KittenGeometry<T>) -> Result<ThermalKittenMixture<T>> {
    ThermalKittenMixture::new(squared_weights(&v[..count]), theta, v[count] * v[count], geo.base_alpha, geo.base_xi)
}

/// Moment-matched thermal mixture, with d_HS and the Q divergence at the optimum.
#[derive(Debug, Clone)]
pub struct ThermalFit<T> {
    pub fit: FitResult<ThermalKittenMixture<T>, T>,
    pub mixture_moments: CovarianceSummary<T>,
    pub d_hs: T,
    pub kl: T,
}

/// A fixed mixture measured against the target.
#[derive(Debug, Clone)]
pub struct MixtureComparison<T> {
    pub mixture_moments: CovarianceSummary<T>,
    pub d_hs: T,
    pub kl: T,
}

/// d_HS on the target's Wigner grid and KL on its Husimi grid.
pub fn compare_mixture<T: Real>(target: &ThermalTarget<T>, mix: &ThermalKittenMixture<T>) -> Result<MixtureComparison<T>> {
    Ok(MixtureComparison {
        mixture_moments: thermal_moments(mix),
        d_hs: hs_distance_wigner(&target.wigner, &thermal_wigner(mix, &target.wigner))?,
        kl: kl_divergence_q(&target.husimi, &thermal_husimi(mix, &target.husimi))?,
    })
}

pub fn fit_thermal_mixture<T: Real>(
    target: &ThermalTarget<T>,
    count: usize,
    geo: &KittenGeometry<T>,
    budget: Budget,
) -> Result<ThermalFit<T>> {
    if count == 0 || count % 2 != 0 {
        return Err(Error::InvalidParameter(format!("count {count} must be even and positive")));
    }
    let n = target.rho.n_max;
    let mut flat = vec![T::one(); count];
    flat.push(T::zero());
    let seed_mix = decode_thermal(&flat, count, T::zero(), geo)?;
    let candidate_vecs: Vec<(T, Vec<Complex<T>>)> = (0..count)
        .map(|k| {
            let c = seed_mix.component(k);
            (from_usize::<T>(count).recip(), crate::model::squeezed_amplitudes(n, c.alpha, c.r, c.vartheta))
        })
        .collect();
    let theta = align_theta(
        &phase_profile_dm(&target.rho, ALIGN_SAMPLES),
        &phase_profile(&candidate_vecs, ALIGN_SAMPLES),
    )?;
    let seeds: Vec<(Vec<T>, Vec<T>)> = NBAR_SEEDS
        .iter()
        .take(budget.restarts.max(1))
        .map(|&nb| {
            let mut x = vec![T::one(); count];
            x.push(lit::<T>(nb).sqrt());
            (x, vec![lit::<T>(0.1); count + 1])
        })
        .collect();
    let objective = |v: &[T]| match decode_thermal(v, count, theta, geo) {
        Ok(m) => moment_residual(&thermal_moments(&m), &target.moments),
        Err(_) => T::infinity(),
    };
    let (best, evaluations, restarts_used) = multi_start(&seeds, budget, objective);
    let mix = decode_thermal(&best.x, count, theta, geo)?;
    let cmp = compare_mixture(target, &mix)?;
    Ok(ThermalFit {
        mixture_moments: cmp.mixture_moments,
        d_hs: cmp.d_hs,
        kl: cmp.kl,
        fit: FitResult {
            best_params: mix,
            objective: best.value,
            evaluations,
            restarts_used,
            converged: best.converged,
            history: best.history,
        },
    })
}

/// Flat `key=value` lines, numbers in 17 significant digits.
#[derive(Debug, Default, Clone)]
pub struct Report {
    lines: String,
}

impl Report {
    pub fn num<T: Real>(&mut self, key: &str, v: T) -> &mut Self {
        let _ = writeln!(self.lines, "{key}={v:.16e}");
        self
    }

    pub fn int(&mut self, key: &str, v: usize) -> &mut Self {
        let _ = writeln!(self.lines, "{key}={v}");
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        let _ = writeln!(self.lines, "{key}={v}");
        self
    }

    pub fn text(&mut self, key: &str, v: &str) -> &mut Self {
        let _ = writeln!(self.lines, "{key}={v}");
        self
    }

    pub fn as_str(&self) -> &str {
        &self.lines
    }
}

/// Ensemble keys `p`, `tau`, `theta_tilde_deg`, `f_k_mod`, `f_k_arg_pi`, `g_k`.
pub fn report_ensemble<T: Real>(r: &mut Report, ens: &KittenEnsemble<T>) {
    r.int("p", ens.p).num("tau", ens.tau).num("theta_tilde_deg", ens.theta_tilde.to_degrees());
    for (k, f) in ens.f.iter().enumerate() {
        let arg = f.arg() / T::PI();
        let arg = arg - lit::<T>(2.0) * (arg / lit::<T>(2.0)).floor();
        r.num(&format!("f_{k}_mod"), f.norm()).num(&format!("f_{k}_arg_pi"), arg);
    }
    for (k, g) in ens.g.iter().enumerate() {
        r.num(&format!("g_{k}"), *g);
    }
}

pub fn report_mixture<T: Real>(r: &mut Report, mix: &ThermalKittenMixture<T>) {
    r.int("count", mix.count()).num("theta_tilde_deg", mix.theta_tilde.to_degrees()).num("nbar", mix.nbar);
    for (k, g) in mix.g.iter().enumerate() {
        r.num(&format!("g_{k}"), *g);
    }
}

pub fn report_moments<T: Real>(r: &mut Report, prefix: &str, s: &CovarianceSummary<T>) {
    r.num(&format!("{prefix}mean_q"), s.mean_q)
        .num(&format!("{prefix}mean_p"), s.mean_p)
        .num(&format!("{prefix}sigma11"), s.sigma11)
        .num(&format!("{prefix}sigma12"), s.sigma12)
        .num(&format!("{prefix}sigma22"), s.sigma22);
}

pub fn report_fit<P, T: Real>(r: &mut Report, fit: &FitResult<P, T>) {
    r.num("objective", fit.objective)
        .int("evaluations", fit.evaluations)
        .int("restarts", fit.restarts_used)
        .flag("converged", fit.converged);
}

/// Flat report of a kitten reconstruction: ensemble, d_HS, Tr ρ² and d_HS/√(Tr ρ²).
pub fn reconstruction_report<T: Real>(rho: &OscillatorDM<T>, fit: &FitResult<KittenEnsemble<T>, T>) -> Report {
    let mut r = ensemble_report(rho, &fit.best_params, fit.objective);
    report_fit(&mut r, fit);
    r
}

/// Same layout for an ensemble given rather than fitted.
pub fn ensemble_report<T: Real>(rho: &OscillatorDM<T>, ens: &KittenEnsemble<T>, d_hs: T) -> Report {
    let mut r = Report::default();
    r.num("t", rho.time);
    report_ensemble(&mut r, ens);
    let purity = rho.purity();
    r.num("d_hs", d_hs).num("purity", purity).num("ratio", d_hs / purity.sqrt());
    r
}

/// Flat report of a thermal comparison.
pub fn thermal_report<T: Real>(target: &ThermalTarget<T>, fit: &ThermalFit<T>) -> Report {
    let cmp = MixtureComparison { mixture_moments: fit.mixture_moments, d_hs: fit.d_hs, kl: fit.kl };
    let mut r = mixture_report(target, &fit.fit.best_params, &cmp);
    report_fit(&mut r, &fit.fit);
    r
}

pub fn mixture_report<T: Real>(target: &ThermalTarget<T>, mix: &ThermalKittenMixture<T>, cmp: &MixtureComparison<T>) -> Report {
    let mut r = Report::default();
    r.num("t", target.rho.time);
    report_mixture(&mut r, mix);
    report_moments(&mut r, "target_", &target.moments);
    report_moments(&mut r, "mixture_", &cmp.mixture_moments);
    let purity = target.rho.purity();
    r.num("d_hs", cmp.d_hs).num("purity", purity).num("ratio", cmp.d_hs / purity.sqrt()).num("kl", cmp.kl);
    r
}
