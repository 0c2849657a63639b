// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Wigner and Husimi distributions of the oscillator, their grid
//! functionals, and the angular densities.

use num_complex::Complex;
use rayon::prelude::*;

use crate::density::OscillatorDM;
use crate::error::{Error, Result};
use crate::grid::{PhaseGrid, DEFAULT_BOUNDARY_TOL};
use crate::model::{BranchVectors, InitialState, ModeData};
use crate::scalar::{cis, from_usize, lit, reduce_phase, Real};
use crate::specfun::{displacement_lower_into, displacement_matrix, kummer_truncated, PolynomialCache};

const IMAG_RESIDUE_TOL: f64 = 1e-10;
const ANGULAR_TAIL_TOL: f64 = 1e-10;
const KUMMER_TOL: f64 = 1e-16;
const KERNEL_SIGMAS: f64 = 8.0;
// ln Q below this counts as 0·ln 0
const WEHRL_FLOOR: f64 = 1e-300;

/// (2/π)⟨v|D(2γ)P|v⟩ from the lower triangle of D(2γ); `buf` holds N² entries.
fn parity_form<T: Real>(v: &[Complex<T>], z: Complex<T>, buf: &mut [Complex<T>]) -> T {
    let n = v.len();
    displacement_lower_into(n, z, buf);
    let mut diag = T::zero();
    let mut off = Complex::new(T::zero(), T::zero());
    for col in 0..n {
        let vc = if col % 2 == 0 { v[col] } else { -v[col] };
        diag += (v[col].conj() * vc).re * buf[col * n + col].re;
        let mut acc = Complex::new(T::zero(), T::zero());
        for row in col + 1..n {
            acc += v[row].conj() * buf[row * n + col];
        }
        off += acc * vc;
    }
    T::FRAC_2_PI() * (diag + lit::<T>(2.0) * off.re)
}

/// W(β) of ρ_O(t) on the grid.
pub fn wigner<T: Real>(mode: &ModeData<T>, t: T, grid: &PhaseGrid<T>) -> Result<PhaseGrid<T>> {
    let w = wigner_unchecked(&mode.branch_vectors(t), grid);
    w.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    Ok(w)
}

fn wigner_unchecked<T: Real>(bv: &BranchVectors<T>, grid: &PhaseGrid<T>) -> PhaseGrid<T> {
    let n = bv.a.len();
    let l = bv.displacement;
    let inv = bv.norm.recip();
    let two = lit::<T>(2.0);
    grid.fill_rows(|row, out| {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n * n];
        for (col, v) in out.iter_mut().enumerate() {
            let beta = grid.point(row, col);
            let wx = parity_form(&bv.a, (beta + l) * two, &mut buf);
            let wy = parity_form(&bv.b, (beta - l) * two, &mut buf);
            *v = (wx + wy) * inv;
        }
    })
}

/// Wigner function of an arbitrary Fock-basis density matrix.
pub fn wigner_from_dm<T: Real>(rho: &OscillatorDM<T>, grid: &PhaseGrid<T>) -> Result<PhaseGrid<T>> {
    let n = rho.n_max;
    let residue = std::sync::Mutex::new(T::zero());
    let w = grid.fill_rows(|row, out| {
        let mut worst = T::zero();
        for (col, v) in out.iter_mut().enumerate() {
            let m = displacement_matrix(n, grid.point(row, col) * lit::<T>(2.0));
            // full double sum Σ ρ_{kj} ⟨j|D|k⟩ (−1)^k, imaginary part kept for the check
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                let mut s = Complex::new(T::zero(), T::zero());
                for j in 0..n {
                    s += rho.elements[k * n + j] * m[j * n + k];
                }
                acc += if k % 2 == 0 { s } else { -s };
            }
            worst = worst.max(acc.im.abs());
            *v = T::FRAC_2_PI() * acc.re;
        }
        let mut r = residue.lock().expect("residue lock");
        *r = r.max(worst);
    });
    let r = residue.into_inner().expect("residue lock");
    if r > lit(IMAG_RESIDUE_TOL) {
        return Err(Error::NumericalValidity(format!("Wigner imaginary residue {r:e}")));
    }
    w.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    Ok(w)
}

/// (2/π) exp(−2|μγ + νγ*|²) with γ = β − α: Wigner function of D(α)S(ξ)|0⟩.
pub fn squeezed_gaussian_wigner<T: Real>(beta: Complex<T>, alpha: Complex<T>, mu: T, nu: Complex<T>) -> T {
    let g = beta - alpha;
    let u = g * mu + nu * g.conj();
    T::FRAC_2_PI() * (-lit::<T>(2.0) * u.norm_sqr()).exp()
}

/// The two squeezed Gaussians of the initial oscillator state, weights 1 and |c|².
pub fn wigner_t0_closed_form<T: Real>(init: &InitialState<T>, grid: &PhaseGrid<T>) -> PhaseGrid<T> {
    let (mu, nu) = (init.mu(), init.nu());
    let c2 = init.c.norm_sqr();
    let inv = init.c_norm().recip();
    grid.fill(|b| {
        (squeezed_gaussian_wigner(b, init.alpha, mu, nu) + c2 * squeezed_gaussian_wigner(b, -init.alpha, mu, nu)) * inv
    })
}

// e^{−|w|²/2} Σ v_n w*ⁿ/√n!, the weights built by running products
fn bargmann<T: Real>(v: &[Complex<T>], w: Complex<T>) -> Complex<T> {
    let wc = w.conj();
    let mut weight = Complex::new((-lit::<T>(0.5) * w.norm_sqr()).exp(), T::zero());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, c) in v.iter().enumerate() {
        if k > 0 {
            weight = weight * wc / from_usize::<T>(k).sqrt();
        }
        acc += *c * weight;
    }
    acc
}

fn husimi_point<T: Real>(bv: &BranchVectors<T>, beta: Complex<T>) -> T {
    let l = bv.displacement;
    let x = bargmann(&bv.a, beta + l);
    let y = bargmann(&bv.b, beta - l);
    (x.norm_sqr() + y.norm_sqr()) / (T::PI() * bv.norm)
}

/// Q(β) = ⟨β|ρ_O|β⟩/π.
pub fn husimi<T: Real>(mode: &ModeData<T>, t: T, grid: &PhaseGrid<T>) -> Result<PhaseGrid<T>> {
    let bv = mode.branch_vectors(t);
    let q = grid.fill(|b| husimi_point(&bv, b));
    if q.min_value() < -lit::<T>(1e-12) {
        return Err(Error::NumericalValidity(format!("negative Husimi value {:e}", q.min_value())));
    }
    q.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    Ok(q)
}

/// Husimi function of a Fock-basis density matrix.
pub fn husimi_from_dm<T: Real>(rho: &OscillatorDM<T>, grid: &PhaseGrid<T>) -> Result<PhaseGrid<T>> {
    let n = rho.n_max;
    let q = grid.fill(|b| {
        let mut e = vec![Complex::new(T::zero(), T::zero()); n];
        let mut w = Complex::new((-lit::<T>(0.5) * b.norm_sqr()).exp(), T::zero());
        for (k, slot) in e.iter_mut().enumerate() {
            if k > 0 {
                w = w * b / from_usize::<T>(k).sqrt();
            }
            *slot = w;
        }
        // |β⟩ has coefficients e^{−|β|²/2} βⁿ/√n!
        rho.expectation(&e).re / T::PI()
    });
    q.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    Ok(q)
}

/// Coefficients of the weak-coupling closed form for Q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearApproxParams<T> {
    /// ε̃ + Δ̃²/(8ε̃), units of ω
    pub varepsilon: T,
    pub omega_plus: T,
    pub omega_minus: T,
    /// α₊ + (ν/μ)α₊*
    pub alpha_hat: Complex<T>,
}

impl<T: Real> LinearApproxParams<T> {
    pub fn new(mode: &ModeData<T>) -> Result<Self> {
        let et = mode.eps_scaled();
        if et == T::zero() {
            return Err(Error::Domain("the linear approximation divides by ε̃; ε = 0 is outside its domain".into()));
        }
        let dt = mode.params.delta_tilde() / mode.params.omega;
        let x = mode.params.x();
        let shift = dt * dt * x / (lit::<T>(4.0) * et);
        let (mu, nu) = (mode.init.mu(), mode.init.nu());
        let ap = mode.init.alpha_plus(&mode.params);
        Ok(Self {
            varepsilon: et + dt * dt / (lit::<T>(8.0) * et),
            omega_plus: T::one() + shift,
            omega_minus: T::one() - shift,
            alpha_hat: ap + nu / mu * ap.conj(),
        })
    }
}

struct LinearTerms<T> {
    dt: T,
    et: T,
    x: T,
    ratio: Complex<T>,
    alpha_hat: Complex<T>,
    t: T,
}

impl<T: Real> LinearTerms<T> {
    fn rot(&self, om: T, w: Complex<T>) -> Complex<T> {
        w * cis(-reduce_phase(om * self.t))
    }

    fn a(&self, w: Complex<T>, om: T) -> Complex<T> {
        let e = self.rot(om, w);
        let d2 = self.dt * self.dt;
        let c0 = d2 / (lit::<T>(16.0) * self.et * self.et);
        let c1 = d2 * self.x / (lit::<T>(8.0) * self.et * self.et);
        Complex::new(c0, T::zero()) - e * (self.alpha_hat + self.ratio * e) * c1
    }

    fn b(&self, w: Complex<T>, om: T) -> Complex<T> {
        let e = self.rot(om, w);
        let c0 = self.dt / (lit::<T>(4.0) * self.et);
        let c1 = self.dt * self.x / (lit::<T>(4.0) * self.et);
        Complex::new(c0, T::zero()) + e * (self.alpha_hat + self.ratio * e) * c1
    }

    fn phi(&self, w: Complex<T>, om: T) -> Complex<T> {
        let e = self.rot(om, w);
        (self.alpha_hat * e - self.ratio * e * e * lit::<T>(0.5)).exp()
    }
}

/// Q from the closed form that keeps only the linear part of L_n(x).
pub fn husimi_linear<T: Real>(
    mode: &ModeData<T>,
    lin: &LinearApproxParams<T>,
    t: T,
    grid: &PhaseGrid<T>,
) -> Result<PhaseGrid<T>> {
    if mode.eps_scaled() == T::zero() {
        return Err(Error::Domain("the linear approximation divides by ε̃; ε = 0 is outside its domain".into()));
    }
    let init = &mode.init;
    let (mu, nu) = (init.mu(), init.nu());
    let ap = init.alpha_plus(&mode.params);
    let terms = LinearTerms {
        dt: mode.params.delta_tilde() / mode.params.omega,
        et: mode.eps_scaled(),
        x: mode.params.x(),
        ratio: nu / mu,
        alpha_hat: lin.alpha_hat,
        t,
    };
    let c = init.c;
    let l = mode.displacement();
    let one = Complex::new(T::one(), T::zero());
    let pre = (-lin.alpha_hat * ap.conj() * lit::<T>(0.5)).exp() / mu.sqrt();
    let e_fwd = cis(reduce_phase(lin.varepsilon * t));
    let e_bwd = e_fwd.conj();
    let (wp, wm) = (lin.omega_plus, lin.omega_minus);
    let norm = T::PI() * init.c_norm();
    let q = grid.fill(|beta| {
        let bp = beta + l;
        let bm = beta - l;
        let u = bp.conj();
        let v = bm.conj();
        let xs = (one - terms.a(u, wp)) * terms.phi(u, wp) * e_fwd
            + terms.a(u, wm) * terms.phi(u, wm) * e_bwd
            + c * terms.b(u, wp) * terms.phi(-u, wp) * e_fwd
            - c * terms.b(u, wm) * terms.phi(-u, wm) * e_bwd;
        let ys = c * terms.a(-v, wp) * terms.phi(-v, wp) * e_fwd
            + c * (one - terms.a(-v, wm)) * terms.phi(-v, wm) * e_bwd
            + terms.b(-v, wp) * terms.phi(v, wp) * e_fwd
            - terms.b(-v, wm) * terms.phi(v, wm) * e_bwd;
        ((-bp.norm_sqr()).exp() * (pre * xs).norm_sqr() + (-bm.norm_sqr()).exp() * (pre * ys).norm_sqr()) / norm
    });
    Ok(q)
}

/// ‖δQ‖ = ∫|Q − Q_linear| d²β.
pub fn q_deviation<T: Real>(q_full: &PhaseGrid<T>, q_lin: &PhaseGrid<T>) -> Result<T> {
    q_full.check_same_shape(q_lin)?;
    let s: T = q_full.values.iter().zip(&q_lin.values).map(|(a, b)| (*a - *b).abs()).sum();
    Ok(s * q_full.cell_area())
}

fn theta_grid<T: Real>(samples: usize) -> Vec<T> {
    let step = T::TAU() / from_usize::<T>(samples);
    (0..samples).map(|k| from_usize::<T>(k) * step).collect()
}

// ũ_j = Σ_{n ≥ j} v_n sⁿ⁻ʲ √(n!/j!)/(n−j)!, the coefficients of v in powers of (β − s)*
fn shifted_coefficients<T: Real>(v: &[Complex<T>], s: T, cache: &PolynomialCache<T>) -> Vec<Complex<T>> {
    let n = v.len();
    let half = lit::<T>(0.5);
    (0..n)
        .map(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, vk) in v.iter().enumerate().skip(j) {
                let d = k - j;
                let mag = if d == 0 {
                    T::one()
                } else if s == T::zero() {
                    continue;
                } else {
                    (from_usize::<T>(d) * s.abs().ln() + half * (cache.log_factorial(k) - cache.log_factorial(j))
                        - cache.log_factorial(d))
                    .exp()
                };
                let sign = if s < T::zero() && d % 2 == 1 { -T::one() } else { T::one() };
                acc += *vk * (mag * sign);
            }
            acc
        })
        .collect()
}

/// Q(θ) = ∫₀^∞ Q(ρe^{iθ}) ρ dρ from the radial Gaussian moments, on `theta_samples` uniform angles.
pub fn angular_husimi<T: Real>(mode: &ModeData<T>, t: T, theta_samples: usize) -> Result<Vec<T>> {
    if theta_samples == 0 {
        return Err(Error::InvalidParameter("theta_samples must be positive".into()));
    }
    let bv = mode.branch_vectors(t);
    let n = bv.a.len();
    let l = bv.displacement;
    let cache = PolynomialCache::<T>::new(2 * n + 8);
    // 𝒳 is a series in (β + l)*, 𝒴 in (β − l)*
    let u = shifted_coefficients(&bv.a, l, &cache);
    let w = shifted_coefficients(&bv.b, -l, &cache);
    let norm = T::PI() * bv.norm;
    let half = lit::<T>(0.5);
    let smax = 2 * n - 1;
    let thetas = theta_grid::<T>(theta_samples);
    thetas
        .par_iter()
        .map(|&th| {
            let (s_th, c_th) = th.sin_cos();
            let y = l * l * c_th * c_th;
            let damp = (-l * l * s_th * s_th).exp();
            // radial moments K_s for the two branches; 1/√(j!k!) goes into the coefficients
            let mut k_minus = Vec::with_capacity(smax);
            let mut k_plus = Vec::with_capacity(smax);
            for s in 0..smax {
                let ss = from_usize::<T>(s);
                let f_even = kummer_truncated(-(ss + T::one()) * half, half, -y, lit(KUMMER_TOL))?;
                let f_odd = kummer_truncated(-ss * half, lit(1.5), -y, lit(KUMMER_TOL))?;
                let g_even = half * cache.ln_gamma_half(s + 2).exp();
                let g_odd = l * c_th * cache.ln_gamma_half(s + 3).exp();
                k_minus.push(damp * (g_even * f_even - g_odd * f_odd));
                k_plus.push(damp * (g_even * f_even + g_odd * f_odd));
            }
            let mut total = T::zero();
            for (coef, kern) in [(&u, &k_minus), (&w, &k_plus)] {
                // Σ_{j,k} ũ_j ũ_k* e^{−i(j−k)θ} K_{j+k}/√(j!k!)
                let rot: Vec<Complex<T>> = coef
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        *c * cis(-from_usize::<T>(j) * th) * (-half * cache.log_factorial(j)).exp()
                    })
                    .collect();
                let mut acc = T::zero();
                for j in 0..n {
                    acc += rot[j].norm_sqr() * kern[2 * j];
                    let mut off = Complex::new(T::zero(), T::zero());
                    for k in j + 1..n {
                        off += rot[k].conj() * kern[j + k];
                    }
                    acc += lit::<T>(2.0) * (rot[j] * off).re;
                }
                total += acc;
            }
            Ok(total / norm)
        })
        .collect()
}

/// Q(θ) by midpoint quadrature of Q along rays; the reference for [`angular_husimi`].
pub fn angular_husimi_quadrature<T: Real>(
    mode: &ModeData<T>,
    t: T,
    theta_samples: usize,
    radius: T,
    radial_points: usize,
) -> Vec<T> {
    let bv = mode.branch_vectors(t);
    let dr = radius / from_usize::<T>(radial_points);
    let half = lit::<T>(0.5);
    theta_grid::<T>(theta_samples)
        .par_iter()
        .map(|&th| {
            let dir = cis(th);
            let mut acc = T::zero();
            for k in 0..radial_points {
                let rho = (from_usize::<T>(k) + half) * dr;
                acc += husimi_point(&bv, dir * rho) * rho;
            }
            acc * dr
        })
        .collect()
}

/// Fock coefficients of the two bare-basis branches up to k_max, normalized jointly.
fn bare_branches<T: Real>(mode: &ModeData<T>, t: T, k_max: usize) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let bv = mode.branch_vectors(t);
    let n = bv.a.len();
    let dim = k_max.max(n);
    let l = bv.displacement;
    let apply = |z: T, v: &[Complex<T>]| -> Vec<Complex<T>> {
        let d = displacement_matrix(dim, Complex::new(z, T::zero()));
        (0..k_max)
            .map(|k| (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + d[k * dim + j] * v[j]))
            .collect()
    };
    let x = apply(-l, &bv.a);
    let y = apply(l, &bv.b);
    let total: T = bv.a.iter().chain(&bv.b).map(|v| v.norm_sqr()).sum();
    let kept: T = x.iter().chain(&y).map(|v| v.norm_sqr()).sum();
    if total - kept > lit::<T>(ANGULAR_TAIL_TOL) * bv.norm {
        return Err(Error::Truncation(format!("angular tail {:e} at k_max = {k_max}", total - kept)));
    }
    let s = bv.norm.sqrt().recip();
    Ok((x.into_iter().map(|v| v * s).collect(), y.into_iter().map(|v| v * s).collect()))
}

/// 𝒫(θ) = Σ_branch |Σ_k v_k e^{−ikθ}|²/2π on `theta_samples` uniform angles.
pub fn angular_distribution<T: Real>(mode: &ModeData<T>, t: T, theta_samples: usize, k_max: usize) -> Result<Vec<T>> {
    if theta_samples == 0 {
        return Err(Error::InvalidParameter("theta_samples must be positive".into()));
    }
    let (x, y) = bare_branches(mode, t, k_max)?;
    Ok(phase_profile(&[(T::one(), x), (T::one(), y)], theta_samples))
}

/// Σ_v w_v |Σ_k v_k e^{−ikθ}|²/2π, weights normalized to 1 by the caller.
pub fn phase_profile<T: Real>(vectors: &[(T, Vec<Complex<T>>)], theta_samples: usize) -> Vec<T> {
    theta_grid::<T>(theta_samples)
        .par_iter()
        .map(|&th| {
            let mut total = T::zero();
            for (w, v) in vectors {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (k, c) in v.iter().enumerate() {
                    acc += *c * cis(-from_usize::<T>(k) * th);
                }
                total += *w * acc.norm_sqr();
            }
            total / T::TAU()
        })
        .collect()
}

/// 𝒫(θ) = Σ_{m,n} ρ_{mn} e^{−i(m−n)θ}/2π, summed along the diagonals of ρ.
pub fn phase_profile_dm<T: Real>(rho: &OscillatorDM<T>, theta_samples: usize) -> Vec<T> {
    let n = rho.n_max;
    let tr = rho.trace();
    let diag: Vec<Complex<T>> = (1..n)
        .map(|k| (0..n - k).fold(Complex::new(T::zero(), T::zero()), |acc, m| acc + rho.at(m + k, m)))
        .collect();
    let two = lit::<T>(2.0);
    theta_grid::<T>(theta_samples)
        .par_iter()
        .map(|&th| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, d) in diag.iter().enumerate() {
                acc += *d * cis(-from_usize::<T>(k + 1) * th);
            }
            (tr + two * acc.re) / (T::TAU() * tr)
        })
        .collect()
}

/// ∫f dθ over a uniform periodic sampling.
pub fn periodic_integral<T: Real>(profile: &[T]) -> T {
    let s: T = profile.iter().copied().sum();
    s * T::TAU() / from_usize::<T>(profile.len())
}

/// Indices of local maxima of a periodic profile whose prominence is at least
/// `rel_prominence` times the global maximum.
pub fn count_peaks<T: Real>(profile: &[T], rel_prominence: T) -> Vec<usize> {
    let n = profile.len();
    if n < 3 {
        return Vec::new();
    }
    let top = profile.iter().copied().fold(T::neg_infinity(), T::max);
    let bottom = profile.iter().copied().fold(T::infinity(), T::min);
    let mut peaks = Vec::new();
    for i in 0..n {
        let v = profile[i];
        let prev = profile[(i + n - 1) % n];
        let next = profile[(i + 1) % n];
        if !(v > prev && v >= next) {
            continue;
        }
        // walk each way until something higher; the deeper of the two minima sets the base
        let walk = |dir: isize| -> Option<T> {
            let mut lo = v;
            for s in 1..n {
                let j = ((i as isize + dir * s as isize).rem_euclid(n as isize)) as usize;
                if profile[j] > v {
                    return Some(lo);
                }
                lo = lo.min(profile[j]);
            }
            None
        };
        let base = match (walk(-1), walk(1)) {
            (Some(a), Some(b)) => a.max(b),
            _ => bottom,
        };
        if v - base >= rel_prominence * top {
            peaks.push(i);
        }
    }
    peaks
}

/// S_Q = −∫Q ln Q d²β.
pub fn wehrl_entropy<T: Real>(q: &PhaseGrid<T>) -> T {
    q.integrate_with(|v| if v > lit(WEHRL_FLOOR) { -v * v.ln() } else { T::zero() })
}

/// δ_W = ∫|W| d²β − 1, clamped at 0.
pub fn negativity<T: Real>(w: &PhaseGrid<T>) -> T {
    (w.integrate_with(|v| v.abs()) - T::one()).max(T::zero())
}

/// Convolution with the normalized isotropic Gaussian of complex variance
/// ⟨|z|²⟩ = `variance` (half of it per axis); Q = W ⊛ G at variance 1/2.
pub fn gaussian_convolve<T: Real>(src: &PhaseGrid<T>, variance: T) -> Result<PhaseGrid<T>> {
    if !(variance > T::zero()) {
        return Err(Error::InvalidParameter(format!("variance {variance}")));
    }
    let variance = variance * lit::<T>(0.5);
    src.check_boundary(lit(DEFAULT_BOUNDARY_TOL))?;
    let n = src.points_per_axis;
    let h = src.step();
    let sigma = variance.sqrt();
    let reach = (lit::<T>(KERNEL_SIGMAS) * sigma / h).ceil().to_usize().unwrap_or(usize::MAX);
    if reach >= n / 2 {
        return Err(Error::GridExtent(format!("kernel reach {reach} cells exceeds half the grid ({})", n / 2)));
    }
    let norm = h / (T::TAU() * variance).sqrt();
    let kernel: Vec<T> = (0..=reach)
        .map(|k| {
            let d = from_usize::<T>(k) * h;
            norm * (-d * d / (lit::<T>(2.0) * variance)).exp()
        })
        .collect();
    let pass = |input: &[T], along_rows: bool| -> Vec<T> {
        let mut out = vec![T::zero(); n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
            for (c, o) in row.iter_mut().enumerate() {
                let idx = |k: usize| if along_rows { r * n + k } else { k * n + c };
                let pos = if along_rows { c } else { r };
                let mut acc = kernel[0] * input[idx(pos)];
                for d in 1..=reach {
                    if pos >= d {
                        acc += kernel[d] * input[idx(pos - d)];
                    }
                    if pos + d < n {
                        acc += kernel[d] * input[idx(pos + d)];
                    }
                }
                *o = acc;
            }
        });
        out
    };
    let tmp = pass(&src.values, true);
    src.with_values(pass(&tmp, false))
}

/// d_HS = √(π∫(W₁ − W₂)² d²β).
pub fn hs_distance_wigner<T: Real>(w1: &PhaseGrid<T>, w2: &PhaseGrid<T>) -> Result<T> {
    w1.check_same_shape(w2)?;
    let s: T = w1.values.iter().zip(&w2.values).map(|(a, b)| (*a - *b) * (*a - *b)).sum();
    Ok((T::PI() * s * w1.cell_area()).sqrt())
}
