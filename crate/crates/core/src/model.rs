// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! System and initial-state parameters and the per-mode adiabatic data.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, from_usize, lit, reduce_phase, Real};
use crate::specfun::{assoc_laguerre, ln_factorial, PolynomialCache};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const MAX_AUTO_N: usize = 256;
const ADIABATIC_RATIO_LIMIT: f64 = 0.25;
const COHERENT_BRANCH_R: f64 = 1e-12;

/// Qubit splitting Δ, bias ε, oscillator frequency ω and coupling λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub delta: T,
    pub epsilon: T,
    pub omega: T,
    pub lambda: T,
    x: T,
    delta_tilde: T,
    eps_tilde: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(delta: T, epsilon: T, omega: T, lambda: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        if !(delta >= T::zero()) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
        }
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter("epsilon must be finite".into()));
        }
        let two = lit::<T>(2.0);
        let ratio = two * lambda / omega;
        let x = ratio * ratio;
        Ok(Self {
            delta,
            epsilon,
            omega,
            lambda,
            x,
            delta_tilde: delta * (-x / two).exp(),
            eps_tilde: epsilon / two,
        })
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn delta_tilde(&self) -> T {
        self.delta_tilde
    }

    pub fn eps_tilde(&self) -> T {
        self.eps_tilde
    }

    /// λ/ω, the displacement of the conditional oscillator bases.
    pub fn displacement(&self) -> T {
        self.lambda / self.omega
    }

    /// True when the renormalized splitting is no longer small against ω.
    pub fn adiabatic_warning(&self) -> bool {
        self.delta_tilde / self.omega > lit(ADIABATIC_RATIO_LIMIT)
    }
}

/// Hybrid entangled squeezed initial state (|1⟩|α,ξ⟩ + c|−1⟩|−α,ξ⟩)/√(1+|c|²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState<T> {
    pub alpha: Complex<T>,
    pub r: T,
    pub vartheta: T,
    pub c: Complex<T>,
}

impl<T: Real> InitialState<T> {
    pub fn new(alpha: Complex<T>, r: T, vartheta: T, c: Complex<T>) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("squeeze magnitude must be >= 0, got {r}")));
        }
        Ok(Self { alpha, r, vartheta, c })
    }

    pub fn mu(&self) -> T {
        self.r.cosh()
    }

    pub fn nu(&self) -> Complex<T> {
        cis(self.vartheta) * self.r.sinh()
    }

    pub fn alpha_plus(&self, params: &SystemParams<T>) -> Complex<T> {
        self.alpha + params.displacement()
    }

    pub fn c_norm(&self) -> T {
        T::one() + self.c.norm_sqr()
    }
}

/// S_n(α, ξ) for n < len, by the normalized Hermite recurrence.
pub fn squeezed_amplitudes<T: Real>(len: usize, alpha: Complex<T>, r: T, vartheta: T) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mu = r.cosh();
    let nu = if r < lit(COHERENT_BRANCH_R) { Complex::new(T::zero(), T::zero()) } else { cis(vartheta) * r.sinh() };
    let ratio = nu / mu;
    let half = lit::<T>(0.5);
    let pref = (Complex::new(-half * alpha.norm_sqr(), T::zero()) - ratio * half * alpha.conj() * alpha.conj()).exp()
        / mu.sqrt();
    // h_n = H_n(w) qⁿ/√n! with q² = ν/2μ; the recurrence needs only q² and 2wq
    let drive = alpha + ratio * alpha.conj();
    let mut h_prev = Complex::new(T::zero(), T::zero());
    let mut h = Complex::new(T::one(), T::zero());
    out.push(pref);
    for n in 0..len - 1 {
        let nn = from_usize::<T>(n);
        let next = (drive * h - ratio * h_prev * nn.sqrt()) / (nn + T::one()).sqrt();
        h_prev = h;
        h = next;
        out.push(pref * h);
    }
    out
}

/// Single amplitude S_n(α, ξ), ξ = r e^{iϑ}.
pub fn squeezed_amplitude<T: Real>(n: usize, alpha: Complex<T>, r: T, vartheta: T) -> Complex<T> {
    squeezed_amplitudes(n + 1, alpha, r, vartheta)[n]
}

/// ⟨m₋|n₊⟩ = ⟨m|D(−√x)|n⟩ with |n_±⟩ = D†(±λ/ω)|n⟩.
pub fn displaced_overlap<T: Real>(m: usize, n: usize, x: T) -> T {
    let half = lit::<T>(0.5);
    let (hi, lo) = if m >= n { (m, n) } else { (n, m) };
    let d = hi - lo;
    let lf = half * (ln_factorial::<T>(lo) - ln_factorial::<T>(hi));
    let mag = if d == 0 {
        (lf - half * x).exp()
    } else if x == T::zero() {
        T::zero()
    } else {
        (lf - half * x + from_usize::<T>(d) * half * x.ln()).exp()
    };
    let sign = if m >= n && d % 2 == 1 { -T::one() } else { T::one() };
    sign * mag * assoc_laguerre(lo, d, x)
}

/// Per-mode quantities of the adiabatic solution for one (params, state) pair.
#[derive(Debug, Clone)]
pub struct ModeData<T> {
    pub params: SystemParams<T>,
    pub init: InitialState<T>,
    pub n_max: usize,
    pub s_amp: Vec<Complex<T>>,
    pub laguerre: Vec<T>,
    pub delta_n: Vec<T>,
    pub chi_n: Vec<T>,
    pub tail: T,
    pub(crate) cache: PolynomialCache<T>,
}

impl<T: Real> ModeData<T> {
    /// Smallest truncation N ≤ 256 whose amplitude tail is below 1e-12.
    pub fn new(params: SystemParams<T>, init: InitialState<T>) -> Result<Self> {
        Self::with_tail_tol(params, init, lit(DEFAULT_TAIL_TOL))
    }

    /// Smallest N ≤ 256 with tail below `tail_tol`. Pointwise Wigner values
    /// feel the amplitude tail (its square root), so 1e-16 buys about 1e-8 there.
    pub fn with_tail_tol(params: SystemParams<T>, init: InitialState<T>, tail_tol: T) -> Result<Self> {
        let tails = amplitude_tails(&init.alpha_plus(&params), &init, MAX_AUTO_N);
        let n = (1..=MAX_AUTO_N).find(|&n| tails[n] < tail_tol).ok_or_else(|| {
            Error::Truncation(format!("amplitude tail {:e} at N = {MAX_AUTO_N}", tails[MAX_AUTO_N]))
        })?;
        Self::build(params, init, n, tails[n])
    }

    /// Fixed truncation; fails when the tail exceeds 1e-12.
    pub fn with_n_max(params: SystemParams<T>, init: InitialState<T>, n_max: usize) -> Result<Self> {
        Self::with_n_max_tol(params, init, n_max, lit(DEFAULT_TAIL_TOL))
    }

    pub fn with_n_max_tol(params: SystemParams<T>, init: InitialState<T>, n_max: usize, tail_tol: T) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be positive".into()));
        }
        let tails = amplitude_tails(&init.alpha_plus(&params), &init, n_max);
        if !(tails[n_max] < tail_tol) {
            return Err(Error::Truncation(format!(
                "amplitude tail {:e} beyond N = {n_max} exceeds {:e}",
                tails[n_max], tail_tol
            )));
        }
        Self::build(params, init, n_max, tails[n_max])
    }

    fn build(params: SystemParams<T>, init: InitialState<T>, n_max: usize, tail: T) -> Result<Self> {
        let s_amp = squeezed_amplitudes(n_max, init.alpha_plus(&params), init.r, init.vartheta);
        let x = params.x();
        let laguerre: Vec<T> = (0..n_max).map(|n| assoc_laguerre(n, 0, x)).collect();
        let scale = params.delta_tilde() / (lit::<T>(2.0) * params.omega);
        let et = params.eps_tilde() / params.omega;
        let delta_n: Vec<T> = laguerre.iter().map(|&l| -scale * l).collect();
        let chi_n = delta_n.iter().map(|&d| (d * d + et * et).sqrt()).collect();
        Ok(Self {
            params,
            init,
            n_max,
            s_amp,
            laguerre,
            delta_n,
            chi_n,
            tail,
            cache: PolynomialCache::new(n_max.max(16) * 2 + 8),
        })
    }

    pub fn cache(&self) -> &PolynomialCache<T> {
        &self.cache
    }

    /// ε̃ in units of ω.
    pub fn eps_scaled(&self) -> T {
        self.params.eps_tilde() / self.params.omega
    }

    pub fn displacement(&self) -> T {
        self.params.displacement()
    }

    /// Coefficient vectors a_n = S_n C_n e^{−inωt}, b_n = (−1)ⁿ S_n D_n e^{−inωt}.
    pub fn branch_vectors(&self, t: T) -> BranchVectors<T> {
        let c = self.init.c;
        let phase = reduce_phase(t);
        let mut a = Vec::with_capacity(self.n_max);
        let mut b = Vec::with_capacity(self.n_max);
        for n in 0..self.n_max {
            let (cn, dn) = self.cd_unchecked(n, t, c);
            let rot = cis(-from_usize::<T>(n) * phase) * self.s_amp[n];
            a.push(rot * cn);
            b.push(if n % 2 == 0 { rot * dn } else { -(rot * dn) });
        }
        BranchVectors { a, b, norm: self.init.c_norm(), displacement: self.displacement() }
    }

    fn cd_unchecked(&self, n: usize, t: T, c: Complex<T>) -> (Complex<T>, Complex<T>) {
        let chi = self.chi_n[n];
        let d = self.delta_n[n];
        let et = self.eps_scaled();
        let arg = chi * t;
        let co = arg.cos();
        let sinc = if chi == T::zero() { t } else { arg.sin() / chi };
        let sg = if n % 2 == 0 { T::one() } else { -T::one() };
        let i = Complex::new(T::zero(), T::one());
        let cn = Complex::new(co, T::zero()) + i * (Complex::new(et, T::zero()) - c * (sg * d)) * sinc;
        let dn = c * co - i * (c * et + sg * d) * sinc;
        (cn, dn)
    }
}

/// (C_n(t), D_n(t)) of the mode-wise 2×2 evolution.
pub fn cd_coefficients<T: Real>(mode: &ModeData<T>, n: usize, t: T, c: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    if n >= mode.n_max {
        return Err(Error::InvalidParameter(format!("mode {n} beyond truncation {}", mode.n_max)));
    }
    Ok(mode.cd_unchecked(n, t, c))
}

/// The two conditional oscillator vectors in their displaced bases.
#[derive(Debug, Clone)]
pub struct BranchVectors<T> {
    pub a: Vec<Complex<T>>,
    pub b: Vec<Complex<T>>,
    /// 1 + |c|²
    pub norm: T,
    pub displacement: T,
}

// tails[n] = Σ_{k ≥ n} |S_k|², summed from the far end
fn amplitude_tails<T: Real>(alpha_plus: &Complex<T>, init: &InitialState<T>, upto: usize) -> Vec<T> {
    let len = upto * 2 + 64;
    let s = squeezed_amplitudes(len, *alpha_plus, init.r, init.vartheta);
    let mut tails = vec![T::zero(); len + 1];
    for k in (0..len).rev() {
        tails[k] = tails[k + 1] + s[k].norm_sqr();
    }
    tails.truncate(upto + 1);
    tails
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_state() -> (SystemParams<f64>, InitialState<f64>) {
        (
            SystemParams::new(0.15, 0.0, 1.0, 0.05).unwrap(),
            InitialState::new(Complex::new(3.0, 0.0), 0.7, 0.0, Complex::new(0.0, 1.0)).unwrap(),
        )
    }

    #[test]
    fn coherent_branch() {
        let s = squeezed_amplitude(0, Complex::new(2.0, 0.0), 0.0, 0.0);
        assert!((s.re - (-2.0f64).exp()).abs() < 1e-15 && s.im == 0.0);
    }

    #[test]
    fn reflection_property_for_squeezed_vacuum() {
        let s = squeezed_amplitudes(40, Complex::new(0.0, 0.0), 0.7f64, 0.0);
        for n in (1..40).step_by(2) {
            assert_eq!(s[n].norm(), 0.0);
        }
    }

    #[test]
    fn derived_quantities() {
        let (p, i) = reference_state();
        assert_eq!(p.x(), (2.0f64 * 0.05).powi(2));
        assert!(p.delta_tilde() <= p.delta);
        assert!(!p.adiabatic_warning());
        assert!(SystemParams::new(0.6, 0.0, 1.0, 0.0).unwrap().adiabatic_warning());
        assert!((i.mu().powi(2) - i.nu().norm_sqr() - 1.0).abs() < 1e-12);
        assert!(SystemParams::new(0.1, 0.0, 1.0, -0.05f64).is_err());
    }

    #[test]
    fn auto_truncation_for_reference_state() {
        let (p, i) = reference_state();
        let m = ModeData::new(p, i).unwrap();
        assert!(m.n_max > 50 && m.n_max <= 64, "n_max = {}", m.n_max);
        assert!(m.tail < 1e-12);
        for (chi, _) in m.chi_n.iter().zip(0..) {
            assert!(*chi >= m.eps_scaled().abs());
        }
        // doubling the truncation barely changes the captured weight
        let w1: f64 = m.s_amp.iter().map(|s| s.norm_sqr()).sum();
        let m2 = ModeData::with_n_max(p, i, 2 * m.n_max).unwrap();
        let w2: f64 = m2.s_amp.iter().map(|s| s.norm_sqr()).sum();
        assert!((w2 - w1).abs() < 1e-12);
    }

    #[test]
    fn under_truncation_is_rejected() {
        let (p, i) = reference_state();
        assert!(matches!(ModeData::with_n_max(p, i, 8), Err(Error::Truncation(_))));
    }

    #[test]
    fn overlap_limits() {
        assert_eq!(displaced_overlap(2, 2, 0.0f64), 1.0);
        assert_eq!(displaced_overlap(3, 1, 0.0f64), 0.0);
        assert!((displaced_overlap(0, 0, 0.01f64) - (-0.005f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cd_initial_values() {
        let (p, i) = reference_state();
        let m = ModeData::new(p, i).unwrap();
        for n in [0, 5, 17] {
            let (cn, dn) = cd_coefficients(&m, n, 0.0, i.c).unwrap();
            assert_eq!(cn, Complex::new(1.0, 0.0));
            assert_eq!(dn, i.c);
        }
        assert!(cd_coefficients(&m, m.n_max, 1.0, i.c).is_err());
    }

    #[test]
    fn cd_zero_frequency_limit() {
        // ε = 0 and Δ = 0 leaves χ_n = 0; sin(χt)/χ → t
        let p = SystemParams::new(0.0, 0.0, 1.0, 0.05).unwrap();
        let i = InitialState::new(Complex::new(1.0, 0.0), 0.2, 0.0, Complex::new(1.0, 0.0)).unwrap();
        let m = ModeData::new(p, i).unwrap();
        let (cn, dn) = cd_coefficients(&m, 3, 10.0, i.c).unwrap();
        assert!((cn - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((dn - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }
}
