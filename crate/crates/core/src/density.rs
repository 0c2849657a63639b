// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reduced density matrices of the qubit and the oscillator, entropies and
//! trace functionals, plus a brute-force evolution used as an oracle.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{displaced_overlap, squeezed_amplitudes, BranchVectors, InitialState, ModeData, SystemParams};
use crate::scalar::{from_usize, lit, Real};
use crate::specfun::displacement_matrix;

const TRACE_TOL: f64 = 1e-10;
const EIGEN_CLIP: f64 = 1e-10;
const EIGEN_FLOOR: f64 = 1e-8;
const CROSS_CHECK_TOL: f64 = 1e-8;
// extra Fock levels used to measure how much of a displaced vector leaks past N
const LEAK_PAD: usize = 32;
pub const MAX_ORACLE_N: usize = 256;

/// Oscillator reduced density matrix in the bare Fock basis, row-major.
#[derive(Debug, Clone)]
pub struct OscillatorDM<T> {
    pub n_max: usize,
    pub elements: Vec<Complex<T>>,
    pub time: T,
    branches: Option<BranchVectors<T>>,
}

/// Qubit reduced density matrix [[rho11, zeta], [zeta*, rho_m1m1]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDM<T> {
    pub rho11: T,
    pub rho_m1m1: T,
    pub zeta: Complex<T>,
    pub time: T,
}

pub trait Entropy<T> {
    fn entropy(&self) -> Result<T>;
}

impl<T: Real> OscillatorDM<T> {
    /// Wraps a row-major matrix; the caller is responsible for its invariants.
    pub fn from_elements(n_max: usize, elements: Vec<Complex<T>>, time: T) -> Result<Self> {
        if elements.len() != n_max * n_max {
            return Err(Error::Shape(format!("{} elements for dimension {n_max}", elements.len())));
        }
        Ok(Self { n_max, elements, time, branches: None })
    }

    /// Σ_k w_k |v_k⟩⟨v_k| normalized to unit trace.
    pub fn from_mixture(n_max: usize, vectors: &[(T, Vec<Complex<T>>)], time: T) -> Result<Self> {
        if vectors.iter().any(|(_, v)| v.len() != n_max) {
            return Err(Error::Shape(format!("mixture vectors must have length {n_max}")));
        }
        let mut elements = vec![Complex::new(T::zero(), T::zero()); n_max * n_max];
        elements.par_chunks_mut(n_max.max(1)).enumerate().for_each(|(i, row)| {
            for (w, v) in vectors {
                let vi = v[i] * *w;
                for (j, e) in row.iter_mut().enumerate() {
                    *e += vi * v[j].conj();
                }
            }
        });
        let mut dm = Self { n_max, elements, time, branches: None };
        dm.normalize()?;
        Ok(dm)
    }

    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.elements[i * self.n_max + j]
    }

    pub fn trace(&self) -> T {
        (0..self.n_max).map(|i| self.at(i, i).re).sum()
    }

    pub fn purity(&self) -> T {
        self.elements.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> T {
        let n = self.n_max;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        T::hermitian_eigenvalues(self.n_max, &self.elements)
            .ok_or_else(|| Error::LinearAlgebra("Hermitian eigendecomposition did not converge".into()))
    }

    /// Largest eigenvalue and its eigenvector.
    pub fn dominant_eigenvector(&self) -> Result<(T, Vec<Complex<T>>)> {
        let n = self.n_max;
        let (vals, vecs) = T::hermitian_eigen(n, &self.elements)
            .ok_or_else(|| Error::LinearAlgebra("Hermitian eigendecomposition did not converge".into()))?;
        let (k, lam) = vals
            .iter()
            .copied()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        Ok((lam, vecs[k * n..(k + 1) * n].to_vec()))
    }

    /// ⟨ψ|ρ|ψ⟩ for a vector of length n_max.
    pub fn expectation(&self, psi: &[Complex<T>]) -> Complex<T> {
        let n = self.n_max;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let mut row = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                row += self.elements[i * n + j] * psi[j];
            }
            acc += psi[i].conj() * row;
        }
        acc
    }

    fn normalize(&mut self) -> Result<()> {
        let tr = self.trace();
        if !(tr > T::zero()) || !tr.is_finite() {
            return Err(Error::NumericalValidity(format!("density matrix trace {tr}")));
        }
        let inv = tr.recip();
        self.elements.iter_mut().for_each(|e| *e = *e * inv);
        Ok(())
    }
}

impl<T: Real> QubitDM<T> {
    /// 𝔭 = √(1/4 − det ρ_Q); eigenvalues are 1/2 ± 𝔭.
    pub fn polarization(&self) -> T {
        let det = self.rho11 * self.rho_m1m1 - self.zeta.norm_sqr();
        (lit::<T>(0.25) - det).max(T::zero()).sqrt()
    }

    pub fn eigenvalues(&self) -> (T, T) {
        let p = self.polarization();
        let h = lit::<T>(0.5);
        (h - p, h + p)
    }

    pub fn purity(&self) -> T {
        self.rho11 * self.rho11 + self.rho_m1m1 * self.rho_m1m1 + lit::<T>(2.0) * self.zeta.norm_sqr()
    }
}

fn entropy_of_spectrum<T: Real>(vals: &[T]) -> Result<T> {
    let mut s = T::zero();
    for &v in vals {
        if v < -lit::<T>(EIGEN_FLOOR) {
            return Err(Error::NumericalValidity(format!("eigenvalue {v:e} below the floor")));
        }
        if v > lit::<T>(EIGEN_CLIP) {
            s -= v * v.ln();
        }
    }
    Ok(s)
}

impl<T: Real> Entropy<T> for OscillatorDM<T> {
    fn entropy(&self) -> Result<T> {
        entropy_of_spectrum(&self.eigenvalues()?)
    }
}

impl<T: Real> Entropy<T> for QubitDM<T> {
    fn entropy(&self) -> Result<T> {
        let (lo, hi) = self.eigenvalues();
        entropy_of_spectrum(&[lo, hi])
    }
}

/// von Neumann entropy −Tr ρ ln ρ.
pub fn von_neumann_entropy<T: Real, D: Entropy<T>>(dm: &D) -> Result<T> {
    dm.entropy()
}

/// ρ_O(t) assembled in the bare Fock basis from the two displaced branches.
pub fn oscillator_dm<T: Real>(mode: &ModeData<T>, t: T) -> Result<OscillatorDM<T>> {
    let bv = mode.branch_vectors(t);
    let n = mode.n_max;
    let big = n + LEAK_PAD;
    let l = mode.displacement();
    let x = bare_vector(&displacement_matrix(big, Complex::new(-l, T::zero())), big, &bv.a);
    let y = bare_vector(&displacement_matrix(big, Complex::new(l, T::zero())), big, &bv.b);
    let leak: T = x[n..].iter().chain(&y[n..]).map(|v| v.norm_sqr()).sum::<T>() / bv.norm;
    if leak > lit(TRACE_TOL) {
        return Err(Error::Truncation(format!("displaced branches leak {leak:e} past N = {n}")));
    }
    let inv = bv.norm.recip();
    let mut elements = vec![Complex::new(T::zero(), T::zero()); n * n];
    elements.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let (xi, yi) = (x[i] * inv, y[i] * inv);
        for (j, e) in row.iter_mut().enumerate() {
            *e = xi * x[j].conj() + yi * y[j].conj();
        }
    });
    let mut dm = OscillatorDM { n_max: n, elements, time: t, branches: Some(bv) };
    let tr = dm.trace();
    if (tr - T::one()).abs() > lit::<T>(2.0) * lit::<T>(TRACE_TOL) + mode.tail {
        return Err(Error::Truncation(format!("trace {tr} before normalization")));
    }
    dm.normalize()?;
    Ok(dm)
}

fn bare_vector<T: Real>(d: &[Complex<T>], big: usize, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..big)
        .map(|i| {
            let row = &d[i * big..i * big + coeffs.len()];
            row.iter().zip(coeffs).fold(Complex::new(T::zero(), T::zero()), |acc, (m, c)| acc + *m * *c)
        })
        .collect()
}

/// ⟨m₋|n₊⟩ for m, n < N.
pub fn overlap_matrix<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut o = vec![T::zero(); n * n];
    o.par_chunks_mut(n.max(1)).enumerate().for_each(|(m, row)| {
        for (k, v) in row.iter_mut().enumerate() {
            *v = displaced_overlap(m, k, x);
        }
    });
    o
}

// Σ_{m,n} a_n(t₁) b_m(t₂)* ⟨m₋|n₊⟩
fn zeta_sum<T: Real>(a: &[Complex<T>], b: &[Complex<T>], overlap: &[T]) -> Complex<T> {
    let n = a.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for m in 0..n {
        let bm = b[m].conj();
        let mut row = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            row += a[k] * overlap[m * n + k];
        }
        acc += bm * row;
    }
    acc
}

/// ρ_Q(t); the coherence is ζ(t, t)/(1 + |c|²).
pub fn qubit_dm<T: Real>(mode: &ModeData<T>, t: T) -> QubitDM<T> {
    let bv = mode.branch_vectors(t);
    let o = overlap_matrix(mode.n_max, mode.params.x());
    let wa: T = bv.a.iter().map(|v| v.norm_sqr()).sum();
    let wb: T = bv.b.iter().map(|v| v.norm_sqr()).sum();
    let tr = wa + wb;
    QubitDM { rho11: wa / tr, rho_m1m1: wb / tr, zeta: zeta_sum(&bv.a, &bv.b, &o) / tr, time: t }
}

/// Tr(ρ₁ρ₂). When both matrices come from the adiabatic solution the
/// overlap-sum form is evaluated as well and must agree to 1e-8.
pub fn trace_product<T: Real>(rho1: &OscillatorDM<T>, rho2: &OscillatorDM<T>) -> Result<T> {
    let n = same_dim(rho1, rho2)?;
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            // Tr(AB) = Σ A_ij B_ji and B_ji = B_ij* for Hermitian B
            let p = rho1.elements[i * n + j] * rho2.elements[i * n + j].conj();
            acc += p.re;
        }
    }
    if let (Some(b1), Some(b2)) = (&rho1.branches, &rho2.branches) {
        if b1.displacement == b2.displacement && b1.a.len() == b2.a.len() {
            let closed = branch_trace_product(b1, b2);
            if (closed - acc).abs() > lit(CROSS_CHECK_TOL) {
                return Err(Error::CrossCheck(format!("Tr ρ₁ρ₂: matrix {acc:e} vs mode sum {closed:e}")));
            }
        }
    }
    Ok(acc)
}

/// |⟨a₁|a₂⟩|² + |⟨b₁|b₂⟩|² + |ζ(t₁,t₂)|² + |ζ(t₂,t₁)|² over the squared norms.
pub fn branch_trace_product<T: Real>(b1: &BranchVectors<T>, b2: &BranchVectors<T>) -> T {
    let n = b1.a.len();
    let l = b1.displacement;
    let x = lit::<T>(4.0) * l * l;
    let o = overlap_matrix(n, x);
    let dot = |u: &[Complex<T>], v: &[Complex<T>]| {
        u.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (p, q)| acc + p.conj() * q)
    };
    let w1: T = b1.a.iter().chain(&b1.b).map(|v| v.norm_sqr()).sum();
    let w2: T = b2.a.iter().chain(&b2.b).map(|v| v.norm_sqr()).sum();
    let s = dot(&b1.a, &b2.a).norm_sqr()
        + dot(&b1.b, &b2.b).norm_sqr()
        + zeta_sum(&b1.a, &b2.b, &o).norm_sqr()
        + zeta_sum(&b2.a, &b1.b, &o).norm_sqr();
    s / (w1 * w2)
}

fn same_dim<T>(a: &OscillatorDM<T>, b: &OscillatorDM<T>) -> Result<usize> {
    if a.n_max != b.n_max {
        return Err(Error::Shape(format!("dimensions {} and {}", a.n_max, b.n_max)));
    }
    Ok(a.n_max)
}

/// √(Tr ρ₁² + Tr ρ₂² − 2 Tr ρ₁ρ₂).
pub fn hs_distance<T: Real>(rho1: &OscillatorDM<T>, rho2: &OscillatorDM<T>) -> Result<T> {
    same_dim(rho1, rho2)?;
    // the elementwise form avoids the cancellation of the three-trace form
    let d2: T = rho1.elements.iter().zip(&rho2.elements).map(|(p, q)| (*p - *q).norm_sqr()).sum();
    let three = rho1.purity() + rho2.purity() - lit::<T>(2.0) * trace_product(rho1, rho2)?;
    if three < -lit::<T>(1e-12) {
        return Err(Error::NumericalValidity(format!("negative squared distance {three:e}")));
    }
    Ok(d2.max(T::zero()).sqrt())
}

/// Exact propagation under H = −(Δ/2)σx − (ε/2)σz + ω a†a + λσz(a + a†)
/// on N Fock levels, by eigendecomposition of the 2N × 2N matrix.
pub fn exact_evolve_oracle<T: Real>(
    params: &SystemParams<T>,
    init: &InitialState<T>,
    t: T,
    n_max: usize,
) -> Result<(OscillatorDM<T>, QubitDM<T>)> {
    if n_max == 0 || n_max > MAX_ORACLE_N {
        return Err(Error::InvalidParameter(format!("oracle dimension {n_max} outside 1..={MAX_ORACLE_N}")));
    }
    let n = n_max;
    let dim = 2 * n;
    let w = params.omega;
    let half = lit::<T>(0.5);
    let mut h = vec![T::zero(); dim * dim];
    for q in 0..2 {
        let sz = if q == 0 { T::one() } else { -T::one() };
        for k in 0..n {
            let i = q * n + k;
            h[i * dim + i] = w * from_usize::<T>(k) - half * params.epsilon * sz;
            if k + 1 < n {
                let off = params.lambda * sz * from_usize::<T>(k + 1).sqrt();
                h[i * dim + i + 1] = off;
                h[(i + 1) * dim + i] = off;
            }
            let j = (1 - q) * n + k;
            h[i * dim + j] = -half * params.delta;
        }
    }
    let (vals, vecs) =
        T::symmetric_eigen(dim, &h).ok_or_else(|| Error::LinearAlgebra("symmetric eigendecomposition failed".into()))?;
    let up = squeezed_amplitudes(n, init.alpha, init.r, init.vartheta);
    let down = squeezed_amplitudes(n, -init.alpha, init.r, init.vartheta);
    let scale = init.c_norm().sqrt().recip();
    let psi0: Vec<Complex<T>> = up.iter().map(|v| *v * scale).chain(down.iter().map(|v| init.c * *v * scale)).collect();
    // ψ(t) = V e^{−iEt} Vᵀ ψ₀, with V real column-major
    let coef: Vec<Complex<T>> = (0..dim)
        .into_par_iter()
        .map(|k| {
            let col = &vecs[k * dim..(k + 1) * dim];
            let proj = col.iter().zip(&psi0).fold(Complex::new(T::zero(), T::zero()), |acc, (v, p)| acc + *p * *v);
            let ph = vals[k] * t;
            proj * Complex::new(ph.cos(), -ph.sin())
        })
        .collect();
    let psi: Vec<Complex<T>> = (0..dim)
        .into_par_iter()
        .map(|i| (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + coef[k] * vecs[k * dim + i]))
        .collect();
    let (a, b) = psi.split_at(n);
    let rho = OscillatorDM::from_mixture(n, &[(T::one(), a.to_vec()), (T::one(), b.to_vec())], t)?;
    let wa: T = a.iter().map(|v| v.norm_sqr()).sum();
    let wb: T = b.iter().map(|v| v.norm_sqr()).sum();
    let zeta = b.iter().zip(a).fold(Complex::new(T::zero(), T::zero()), |acc, (p, q)| acc + p.conj() * q);
    let tr = wa + wb;
    Ok((rho, QubitDM { rho11: wa / tr, rho_m1m1: wb / tr, zeta: zeta / tr, time: t }))
}
