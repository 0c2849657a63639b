// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! First and second quadrature moments, covariance matrix and squeezing angle.

use num_complex::Complex;

use crate::density::OscillatorDM;
use crate::grid::PhaseGrid;
use crate::model::ModeData;
use crate::scalar::{cis, from_usize, lit, Real};

// anisotropy below this is Fock-truncation noise at the default tail
const DEGENERATE_REL: f64 = 1e-9;

/// ⟨a⟩, ⟨a²⟩ and ⟨a†a⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderMoments<T> {
    pub a: Complex<T>,
    pub a2: Complex<T>,
    pub n: T,
}

/// Means and covariance of q = (a + a†)/√2, p = (a − a†)/(i√2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSummary<T> {
    pub mean_q: T,
    pub mean_p: T,
    pub sigma11: T,
    pub sigma12: T,
    pub sigma22: T,
    pub v_min: T,
    /// Angle of least variance in [0, π); `None` when the variance is isotropic.
    pub phi_min: Option<T>,
}

impl<T: Real> LadderMoments<T> {
    /// ⟨X_φ⟩ with X_φ = (a e^{−iφ} + a† e^{iφ})/√2.
    pub fn mean_quadrature(&self, phi: T) -> T {
        T::SQRT_2() * (self.a * cis(-phi)).re
    }

    pub fn second_quadrature(&self, phi: T) -> T {
        (self.a2 * cis(-lit::<T>(2.0) * phi)).re + self.n + lit(0.5)
    }

    /// Covariance summary assembled from the quadratures at φ = 0, π/4, π/2.
    pub fn summary(&self) -> CovarianceSummary<T> {
        let var = |phi: T| {
            let mean = self.mean_quadrature(phi);
            (mean, self.second_quadrature(phi) - mean * mean)
        };
        let (q, s11) = var(T::zero());
        let (p, s22) = var(T::FRAC_PI_2());
        let (_, diag) = var(T::FRAC_PI_4());
        let s12 = diag - lit::<T>(0.5) * (s11 + s22);
        CovarianceSummary::from_moments(q, p, s11, s12, s22)
    }
}

// ⟨v|(a + s)^k|v⟩ pieces for one displaced branch
fn branch_sums<T: Real>(v: &[Complex<T>], s: T) -> (T, Complex<T>, Complex<T>, T) {
    let mut w = T::zero();
    let mut a1 = Complex::new(T::zero(), T::zero());
    let mut a2 = Complex::new(T::zero(), T::zero());
    let mut nn = T::zero();
    for k in 0..v.len() {
        let p = v[k].norm_sqr();
        w += p;
        nn += from_usize::<T>(k) * p;
        if k + 1 < v.len() {
            a1 += v[k].conj() * v[k + 1] * from_usize::<T>(k + 1).sqrt();
        }
        if k + 2 < v.len() {
            a2 += v[k].conj() * v[k + 2] * from_usize::<T>((k + 1) * (k + 2)).sqrt();
        }
    }
    let two = lit::<T>(2.0);
    let mean = a1 + s * w;
    let sq = a2 + a1 * (two * s) + s * s * w;
    let num = nn + two * s * a1.re + s * s * w;
    (w, mean, sq, num)
}

/// Ladder moments of ρ_O(t) from the mode sums of both branches.
pub fn ladder_moments<T: Real>(mode: &ModeData<T>, t: T) -> LadderMoments<T> {
    let bv = mode.branch_vectors(t);
    let l = bv.displacement;
    // the a branch lives in D(−l), the b branch in D(l)
    let (wa, ma, sa, na) = branch_sums(&bv.a, -l);
    let (wb, mb, sb, nb) = branch_sums(&bv.b, l);
    let tot = wa + wb;
    LadderMoments { a: (ma + mb) / tot, a2: (sa + sb) / tot, n: (na + nb) / tot }
}

/// (⟨X_φ⟩, ⟨X_φ²⟩).
pub fn quadrature_moments<T: Real>(mode: &ModeData<T>, t: T, phi: T) -> (T, T) {
    let m = ladder_moments(mode, t);
    (m.mean_quadrature(phi), m.second_quadrature(phi))
}

pub fn covariance_summary<T: Real>(mode: &ModeData<T>, t: T) -> CovarianceSummary<T> {
    ladder_moments(mode, t).summary()
}

impl<T: Real> CovarianceSummary<T> {
    pub fn from_moments(mean_q: T, mean_p: T, sigma11: T, sigma12: T, sigma22: T) -> Self {
        let mut s = Self { mean_q, mean_p, sigma11, sigma12, sigma22, v_min: T::zero(), phi_min: None };
        let half = lit::<T>(0.5);
        let amp = Complex::new(half * (sigma11 - sigma22), sigma12).norm();
        if amp <= lit::<T>(DEGENERATE_REL) * (sigma11 + sigma22).abs() {
            s.v_min = half * (sigma11 + sigma22);
            return s;
        }
        // stationary points of V_φ: tan 2φ = 2σ12/(σ11 − σ22); keep the smaller of the two
        let base = half * (lit::<T>(2.0) * sigma12).atan2(sigma11 - sigma22);
        let (a, b) = (base, base + T::FRAC_PI_2());
        let phi = if s.variance_at(a) <= s.variance_at(b) { a } else { b };
        let wrapped = phi - T::PI() * (phi / T::PI()).floor();
        s.phi_min = Some(if wrapped >= T::PI() { T::zero() } else { wrapped });
        s.v_min = s.variance_at(phi);
        s
    }

    /// V_φ = σ11 cos²φ + σ22 sin²φ + 2σ12 sinφ cosφ.
    pub fn variance_at(&self, phi: T) -> T {
        let half = lit::<T>(0.5);
        let two = lit::<T>(2.0);
        half * (self.sigma11 + self.sigma22)
            + half * (self.sigma11 - self.sigma22) * (two * phi).cos()
            + self.sigma12 * (two * phi).sin()
    }

    pub fn determinant(&self) -> T {
        self.sigma11 * self.sigma22 - self.sigma12 * self.sigma12
    }
}

/// Moments of a Fock-basis density matrix.
pub fn dm_ladder_moments<T: Real>(rho: &OscillatorDM<T>) -> LadderMoments<T> {
    let n = rho.n_max;
    let mut a = Complex::new(T::zero(), T::zero());
    let mut a2 = Complex::new(T::zero(), T::zero());
    let mut num = T::zero();
    for k in 0..n {
        num += from_usize::<T>(k) * rho.at(k, k).re;
        // Tr(ρ a) = Σ_k ρ_{k+1,k} √(k+1)
        if k + 1 < n {
            a += rho.at(k + 1, k) * from_usize::<T>(k + 1).sqrt();
        }
        if k + 2 < n {
            a2 += rho.at(k + 2, k) * from_usize::<T>((k + 1) * (k + 2)).sqrt();
        }
    }
    let tr = rho.trace();
    LadderMoments { a: a / tr, a2: a2 / tr, n: num / tr }
}

pub fn dm_covariance_summary<T: Real>(rho: &OscillatorDM<T>) -> CovarianceSummary<T> {
    dm_ladder_moments(rho).summary()
}

/// Anti-normally ordered moments from a Husimi grid; ⟨|β|²⟩_Q = ⟨a†a⟩ + 1.
pub fn grid_ladder_moments<T: Real>(q: &PhaseGrid<T>) -> LadderMoments<T> {
    let n = q.points_per_axis;
    let mut w = T::zero();
    let mut m1 = Complex::new(T::zero(), T::zero());
    let mut m2 = Complex::new(T::zero(), T::zero());
    let mut r2 = T::zero();
    for row in 0..n {
        for col in 0..n {
            let v = q.at(row, col);
            let b = q.point(row, col);
            w += v;
            m1 += b * v;
            m2 += b * b * v;
            r2 += b.norm_sqr() * v;
        }
    }
    LadderMoments { a: m1 / w, a2: m2 / w, n: r2 / w - T::one() }
}

pub fn grid_quadrature_moments<T: Real>(q: &PhaseGrid<T>) -> CovarianceSummary<T> {
    grid_ladder_moments(q).summary()
}
