// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reference kitten ensembles built from p rotated squeezed coherent states,
//! thermal squeezed mixtures, and the Kullback–Leibler divergence of Q grids.

use num_complex::Complex;

use crate::density::OscillatorDM;
use crate::error::{Error, Result};
use crate::grid::{PhaseGrid, DEFAULT_BOUNDARY_TOL};
use crate::model::{squeezed_amplitudes, InitialState, SystemParams};
use crate::moments::{CovarianceSummary, LadderMoments};
use crate::phase_space::phase_profile;
use crate::scalar::{cis, from_usize, lit, Real};

const FOCK_TAIL_TOL: f64 = 1e-10;
const DEN_FLOOR: f64 = 1e-300;
const KL_FLOOR: f64 = 1e-300;

/// τ|ψ⟩⟨ψ| + (1 − τ)Σ g_k|k⟩⟨k|/Σg with |ψ⟩ ∝ Σ f_k|α_k, ξ_k⟩,
/// α_k = α₊e^{iφ_k}, ξ_k = ξe^{2iφ_k}, φ_k = θ̃ + 2πk/p.
#[derive(Debug, Clone, PartialEq)]
pub struct KittenEnsemble<T> {
    pub p: usize,
    pub f: Vec<Complex<T>>,
    pub g: Vec<T>,
    pub tau: T,
    pub theta_tilde: T,
    pub base_alpha: Complex<T>,
    pub base_xi: Complex<T>,
}

/// Σ g_k ρ_k/Σg where ρ_k is a squeezed thermal state with n̄ photons
/// displaced to α_k on the same rotated geometry as [`KittenEnsemble`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalKittenMixture<T> {
    pub g: Vec<T>,
    pub theta_tilde: T,
    pub nbar: T,
    pub base_alpha: Complex<T>,
    pub base_xi: Complex<T>,
}

/// Unrotated amplitude α₊ and squeeze parameter ξ shared by all components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KittenGeometry<T> {
    pub base_alpha: Complex<T>,
    pub base_xi: Complex<T>,
}

impl<T: Real> KittenGeometry<T> {
    pub fn from_state(params: &SystemParams<T>, init: &InitialState<T>) -> Self {
        Self { base_alpha: init.alpha_plus(params), base_xi: cis(init.vartheta) * init.r }
    }
}

/// One rotated component: amplitude, squeeze magnitude, squeeze phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component<T> {
    pub alpha: Complex<T>,
    pub r: T,
    pub vartheta: T,
}

impl<T: Real> Component<T> {
    pub fn mu(&self) -> T {
        self.r.cosh()
    }

    pub fn nu(&self) -> Complex<T> {
        cis(self.vartheta) * self.r.sinh()
    }
}

fn rotated<T: Real>(base_alpha: Complex<T>, base_xi: Complex<T>, theta_tilde: T, k: usize, count: usize) -> Component<T> {
    let phi = theta_tilde + T::TAU() * from_usize::<T>(k) / from_usize::<T>(count);
    let two = lit::<T>(2.0);
    Component { alpha: base_alpha * cis(phi), r: base_xi.norm(), vartheta: base_xi.arg() + two * phi }
}

fn check_weights<T: Real>(g: &[T], what: &str) -> Result<T> {
    if g.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} weights must be finite and nonnegative")));
    }
    Ok(g.iter().copied().sum())
}

impl<T: Real> KittenEnsemble<T> {
    pub fn new(
        f: Vec<Complex<T>>,
        g: Vec<T>,
        tau: T,
        theta_tilde: T,
        base_alpha: Complex<T>,
        base_xi: Complex<T>,
    ) -> Result<Self> {
        let p = f.len();
        if p == 0 || g.len() != p {
            return Err(Error::InvalidParameter(format!("need p ≥ 1 with |f| = |g|, got {} and {}", p, g.len())));
        }
        if !(tau >= T::zero() && tau <= T::one()) {
            return Err(Error::InvalidParameter(format!("tau {tau} outside [0, 1]")));
        }
        let mixed = check_weights(&g, "mixed")?;
        if tau < T::one() && !(mixed > T::zero()) {
            return Err(Error::InvalidParameter("mixed weights vanish while tau < 1".into()));
        }
        let ens = Self { p, f, g, tau, theta_tilde, base_alpha, base_xi };
        if tau > T::zero() && !(ens.pure_norm()? > T::zero()) {
            return Err(Error::InvalidParameter("pure component has zero norm".into()));
        }
        Ok(ens)
    }

    pub fn component(&self, k: usize) -> Component<T> {
        rotated(self.base_alpha, self.base_xi, self.theta_tilde, k, self.p)
    }

    /// Global phase removed so that f₀ is real and nonnegative.
    pub fn gauge_fixed(&self) -> Self {
        let mut out = self.clone();
        if let Some(f0) = self.f.first() {
            if f0.norm() > T::zero() {
                let u = f0.conj() / f0.norm();
                out.f.iter_mut().for_each(|v| *v = *v * u);
            }
        }
        out
    }

    /// G_{lk} = ⟨α_l, ξ_l|α_k, ξ_k⟩, row-major in l.
    pub fn gram_matrix(&self) -> Result<Vec<Complex<T>>> {
        let p = self.p;
        let mut g = Vec::with_capacity(p * p);
        for l in 0..p {
            for k in 0..p {
                g.push(squeezed_inner_product(k, l, self)?);
            }
        }
        Ok(g)
    }

    /// 𝒩_pure = Σ f_l* f_k ⟨l|k⟩.
    pub fn pure_norm(&self) -> Result<T> {
        let gram = self.gram_matrix()?;
        let p = self.p;
        let mut acc = Complex::new(T::zero(), T::zero());
        for l in 0..p {
            for k in 0..p {
                acc += self.f[l].conj() * self.f[k] * gram[l * p + k];
            }
        }
        Ok(acc.re)
    }

    pub fn mixed_norm(&self) -> T {
        self.g.iter().copied().sum()
    }

    /// Whole ensemble rotated by `delta`.
    pub fn rotated_by(&self, delta: T) -> Self {
        Self { theta_tilde: self.theta_tilde + delta, ..self.clone() }
    }

    /// (weight, Fock vector) pairs of the ensemble; weights sum to 1.
    pub fn fock_mixture(&self, n_max: usize) -> Result<Vec<(T, Vec<Complex<T>>)>> {
        let vecs: Vec<Vec<Complex<T>>> = (0..self.p)
            .map(|k| {
                let c = self.component(k);
                let v = squeezed_amplitudes(n_max, c.alpha, c.r, c.vartheta);
                let tail = T::one() - v.iter().map(|a| a.norm_sqr()).sum::<T>();
                if tail > lit(FOCK_TAIL_TOL) {
                    return Err(Error::Truncation(format!("component {k} loses {tail:e} beyond N = {n_max}")));
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(self.p + 1);
        if self.tau > T::zero() {
            let mut psi = vec![Complex::new(T::zero(), T::zero()); n_max];
            for (fk, v) in self.f.iter().zip(&vecs) {
                for (s, a) in psi.iter_mut().zip(v) {
                    *s += *fk * *a;
                }
            }
            let norm = psi.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
            psi.iter_mut().for_each(|a| *a = *a / norm);
            out.push((self.tau, psi));
        }
        if self.tau < T::one() {
            let gs = self.mixed_norm();
            for (gk, v) in self.g.iter().zip(vecs) {
                if *gk > T::zero() {
                    out.push(((T::one() - self.tau) * *gk / gs, v));
                }
            }
        }
        Ok(out)
    }
}

// μ² − ν_k ν_l* and the exponent 𝖭_{kl}
fn pair_exponent<T: Real>(ck: &Component<T>, cl: &Component<T>) -> Result<(Complex<T>, Complex<T>)> {
    let mu = ck.mu();
    let (nk, nl) = (ck.nu(), cl.nu().conj());
    let mu2 = Complex::new(mu * mu, T::zero());
    let den = mu2 - nk * nl;
    if den.norm() < lit(DEN_FLOOR) {
        return Err(Error::Domain("μ² − ν_k ν_l* vanishes".into()));
    }
    let half = lit::<T>(0.5);
    let (ak, al) = (ck.alpha, cl.alpha);
    let a2 = half * (ak.norm_sqr() + al.norm_sqr());
    let dc = ak.conj() - al.conj();
    let d = ak - al;
    let n = (mu2 + nk * nl) * a2 - ak * al.conj() * (mu * mu + ck.nu().norm_sqr())
        + nk * dc * dc * (half * mu)
        + nl * d * d * (half * mu);
    Ok((den, n))
}

/// ⟨α_l, ξ_l|α_k, ξ_k⟩ = exp(−𝖭_{kl}/(μ² − ν_kν_l*))/√(μ² − ν_kν_l*), principal root.
pub fn squeezed_inner_product<T: Real>(k: usize, l: usize, ens: &KittenEnsemble<T>) -> Result<Complex<T>> {
    if k >= ens.p || l >= ens.p {
        return Err(Error::InvalidParameter(format!("indices ({k}, {l}) out of range for p = {}", ens.p)));
    }
    if k == l {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let (den, n) = pair_exponent(&ens.component(k), &ens.component(l))?;
    Ok((-n / den).exp() / den.sqrt())
}

// Wigner transform of |k⟩⟨l| at β
fn cross_wigner<T: Real>(ck: &Component<T>, cl: &Component<T>, den: Complex<T>, n: Complex<T>, beta: Complex<T>) -> Complex<T> {
    let mu = ck.mu();
    let (nk, nl) = (ck.nu(), cl.nu().conj());
    let u = ck.alpha - beta;
    let w = cl.alpha - beta;
    let g = u * w.conj() * (mu * mu) + nk * nl * u.conj() * w + nk * u.conj() * w.conj() * mu + nl * u * w * mu;
    let two = lit::<T>(2.0);
    (-(n + g * two) / den).exp() / den.sqrt() * T::FRAC_2_PI()
}

/// Closed-form Wigner function of the ensemble.
pub fn reference_wigner<T: Real>(ens: &KittenEnsemble<T>, grid: &PhaseGrid<T>) -> Result<PhaseGrid<T>> {
    let p = ens.p;
    let comps: Vec<Component<T>> = (0..p).map(|k| ens.component(k)).collect();
    let mut pairs = Vec::with_capacity(p * p);
    for l in 0..p {
        for k in 0..p {
            let (den, n) = if k == l {
                (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
            } else {
                pair_exponent(&comps[k], &comps[l])?
            };
            pairs.push((k, l, den, n));
        }
    }
    let pure = if ens.tau > T::zero() { ens.tau / ens.pure_norm()? } else { T::zero() };
    let mixed = if ens.tau < T::one() { (T::one() - ens.tau) / ens.mixed_norm() } else { T::zero() };
    let w = grid.fill(|b| {
        let mut acc = T::zero();
        for k in 0..p {
            let c = &comps[k];
            let diag = gaussian_wigner(b, c.alpha, c.mu(), c.nu(), T::zero());
            acc += (pure * ens.f[k].norm_sqr() + mixed * ens.g[k]) * diag;
        }
        if pure > T::zero() {
            for &(k, l, den, n) in pairs.iter().filter(|q| q.0 != q.1) {
                let coef = ens.f[k] * ens.f[l].conj();
                if coef.norm() > T::zero() {
                    acc += pure * (coef * cross_wigner(&comps[k], &comps[l], den, n, b)).re;
                }
            }
        }
        acc
    });
    w.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    Ok(w)
}

/// Fock-basis density matrix of the ensemble on `n_max` levels.
pub fn reference_fock_dm<T: Real>(ens: &KittenEnsemble<T>, n_max: usize) -> Result<OscillatorDM<T>> {
    OscillatorDM::from_mixture(n_max, &ens.fock_mixture(n_max)?, T::zero())
}

/// 𝒫(θ) of the ensemble from its Fock vectors.
pub fn reference_angular_profile<T: Real>(ens: &KittenEnsemble<T>, n_max: usize, samples: usize) -> Result<Vec<T>> {
    Ok(phase_profile(&ens.fock_mixture(n_max)?, samples))
}

// W of a displaced squeezed thermal state
fn gaussian_wigner<T: Real>(beta: Complex<T>, alpha: Complex<T>, mu: T, nu: Complex<T>, nbar: T) -> T {
    let g = alpha - beta;
    let u = g * mu + nu * g.conj();
    let s = nbar + lit(0.5);
    (-u.norm_sqr() / s).exp() / (T::PI() * s)
}

impl<T: Real> ThermalKittenMixture<T> {
    pub fn new(g: Vec<T>, theta_tilde: T, nbar: T, base_alpha: Complex<T>, base_xi: Complex<T>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidParameter("mixture needs at least one component".into()));
        }
        if !(check_weights(&g, "mixture")? > T::zero()) {
            return Err(Error::InvalidParameter("mixture weights vanish".into()));
        }
        if !(nbar >= T::zero()) || !nbar.is_finite() {
            return Err(Error::InvalidParameter(format!("nbar {nbar}")));
        }
        Ok(Self { g, theta_tilde, nbar, base_alpha, base_xi })
    }

    /// n̄ = 1/(e^{β_B ω} − 1).
    pub fn nbar_at(inverse_temperature: T, omega: T) -> Result<T> {
        let x = inverse_temperature * omega;
        if !(x > T::zero()) {
            return Err(Error::InvalidParameter(format!("β_B ω = {x} must be positive")));
        }
        Ok(x.exp_m1().recip())
    }

    pub fn count(&self) -> usize {
        self.g.len()
    }

    pub fn component(&self, k: usize) -> Component<T> {
        rotated(self.base_alpha, self.base_xi, self.theta_tilde, k, self.count())
    }

    /// 𝔑 = √(n̄² + μ²(2n̄ + 1)).
    pub fn frak_n(&self) -> T {
        let mu = self.base_xi.norm().cosh();
        let n = self.nbar;
        (n * n + mu * mu * (lit::<T>(2.0) * n + T::one())).sqrt()
    }

    fn weights(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        let s: T = self.g.iter().copied().sum();
        self.g.iter().enumerate().map(move |(k, w)| (k, *w / s))
    }
}

pub fn thermal_wigner<T: Real>(mix: &ThermalKittenMixture<T>, grid: &PhaseGrid<T>) -> PhaseGrid<T> {
    let comps: Vec<(T, Component<T>)> = mix.weights().map(|(k, w)| (w, mix.component(k))).collect();
    grid.fill(|b| comps.iter().map(|(w, c)| *w * gaussian_wigner(b, c.alpha, c.mu(), c.nu(), mix.nbar)).sum())
}

pub fn thermal_husimi<T: Real>(mix: &ThermalKittenMixture<T>, grid: &PhaseGrid<T>) -> PhaseGrid<T> {
    let comps: Vec<(T, Component<T>)> = mix.weights().map(|(k, w)| (w, mix.component(k))).collect();
    let nn = mix.frak_n();
    let n = mix.nbar;
    let half = lit::<T>(0.5);
    let two_n1 = lit::<T>(2.0) * n + T::one();
    grid.fill(|b| {
        let mut acc = T::zero();
        for (w, c) in &comps {
            let (mu, nu) = (c.mu(), c.nu());
            let d = b - c.alpha;
            let e = (mu * mu * (T::one() + n) + nu.norm_sqr() * n) * d.norm_sqr()
                + half * mu * two_n1 * (nu.conj() * d * d + nu * d.conj() * d.conj()).re;
            acc += *w * (-e / (nn * nn)).exp();
        }
        acc / (T::PI() * nn)
    })
}

/// Closed-form means and covariances of the mixture.
pub fn thermal_moments<T: Real>(mix: &ThermalKittenMixture<T>) -> CovarianceSummary<T> {
    let two_n1 = lit::<T>(2.0) * mix.nbar + T::one();
    let zero = Complex::new(T::zero(), T::zero());
    let mut m = LadderMoments { a: zero, a2: zero, n: T::zero() };
    for (k, w) in mix.weights() {
        let c = mix.component(k);
        let (mu, nu) = (c.mu(), c.nu());
        // S†aS = μa − νa† on a thermal state
        m.a += c.alpha * w;
        m.a2 += (c.alpha * c.alpha - nu * (mu * two_n1)) * w;
        m.n += w * (c.alpha.norm_sqr() + mu * mu * mix.nbar + nu.norm_sqr() * (mix.nbar + T::one()));
    }
    m.summary()
}

/// S(Q₁‖Q₂) = ∫Q₁ ln(Q₁/Q₂) d²β.
pub fn kl_divergence_q<T: Real>(q1: &PhaseGrid<T>, q2: &PhaseGrid<T>) -> Result<T> {
    q1.check_same_shape(q2)?;
    let floor = lit::<T>(KL_FLOOR);
    let mut acc = T::zero();
    for (i, (&a, &b)) in q1.values.iter().zip(&q2.values).enumerate() {
        if a < floor {
            continue;
        }
        if !(b > T::zero()) {
            return Err(Error::Support(format!("Q₂ vanishes at cell {i} where Q₁ = {a:e}")));
        }
        acc += a * (a / b).ln();
    }
    Ok((acc * q1.cell_area()).max(T::zero()))
}
