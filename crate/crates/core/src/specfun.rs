// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Hermite, Laguerre and terminating hypergeometric functions, plus the
//! phase-space kernel 𝒢_{k,ℓ}(z) built on them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, from_usize, lit, Real};

const KUMMER_TERM_CAP: usize = 500;

/// Log-factorials up to a fixed order.
#[derive(Debug, Clone)]
pub struct PolynomialCache<T> {
    max_order: usize,
    log_fact: Vec<T>,
}

impl<T: Real> PolynomialCache<T> {
    pub fn new(max_order: usize) -> Self {
        // twice the order so half-integer Gamma values stay in the table
        let len = 2 * max_order + 4;
        let mut log_fact = Vec::with_capacity(len);
        let mut acc = 0.0f64;
        log_fact.push(T::zero());
        for k in 1..len {
            acc += (k as f64).ln();
            log_fact.push(lit(acc));
        }
        Self { max_order, log_fact }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn log_factorial(&self, n: usize) -> T {
        match self.log_fact.get(n) {
            Some(v) => *v,
            None => ln_factorial(n),
        }
    }

    /// ln Γ(k/2) for k ≥ 1.
    pub fn ln_gamma_half(&self, k: usize) -> T {
        debug_assert!(k >= 1);
        if k % 2 == 0 {
            self.log_factorial(k / 2 - 1)
        } else {
            let j = (k - 1) / 2;
            self.log_factorial(2 * j) + lit::<T>(0.5) * T::PI().ln()
                - from_usize::<T>(j) * lit::<T>(4.0).ln()
                - self.log_factorial(j)
        }
    }

    fn check(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            Err(Error::Capacity { order, capacity: self.max_order })
        } else {
            Ok(())
        }
    }

    pub fn hermite(&self, n: usize, z: Complex<T>) -> Result<Complex<T>> {
        self.check(n)?;
        Ok(hermite_unchecked(n, z))
    }

    /// 𝒢_{k,ℓ}(z) = e^{−|z|²/2} z*^k z^ℓ/√(k!ℓ!) ₂F₀(−k,−ℓ;−1/|z|²).
    pub fn g_kernel(&self, k: usize, l: usize, z: Complex<T>) -> Result<Complex<T>> {
        self.check(k.max(l))?;
        let rho = z.norm();
        if rho == T::zero() {
            return Ok(if k == l {
                Complex::new(if k % 2 == 0 { T::one() } else { -T::one() }, T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            });
        }
        let ln_rho = rho.ln();
        let half = lit::<T>(0.5);
        let base = half * (self.log_factorial(k) + self.log_factorial(l)) - half * rho * rho;
        let rmin = k.min(l);
        let compensated = rho < lit(0.3) && k + l > 20;
        let mut acc = NeumaierSum::default();
        let mut plain = T::zero();
        // largest term first
        for r in (0..=rmin).rev() {
            let lg = base
                - self.log_factorial(r)
                - self.log_factorial(k - r)
                - self.log_factorial(l - r)
                + from_usize::<T>(k + l - 2 * r) * ln_rho;
            let mut term = lg.exp();
            if r % 2 == 1 {
                term = -term;
            }
            if compensated {
                acc.add(term);
            } else {
                plain += term;
            }
        }
        let sum = if compensated { acc.total() } else { plain };
        let phase = from_usize::<T>(l) * z.arg() - from_usize::<T>(k) * z.arg();
        Ok(cis(phase) * sum)
    }
}

pub fn ln_factorial<T: Real>(n: usize) -> T {
    let mut acc = 0.0f64;
    for k in 2..=n {
        acc += (k as f64).ln();
    }
    lit(acc)
}

fn hermite_unchecked<T: Real>(n: usize, z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let mut h0 = Complex::new(T::one(), T::zero());
    if n == 0 {
        return h0;
    }
    let mut h1 = z * two;
    for k in 1..n {
        let next = z * h1 * two - h0 * (two * from_usize::<T>(k));
        h0 = h1;
        h1 = next;
    }
    h1
}

/// L_n^j(x) by the three-term recurrence in n.
pub fn assoc_laguerre<T: Real>(n: usize, j: usize, x: T) -> T {
    let jj = from_usize::<T>(j);
    let mut l0 = T::one();
    if n == 0 {
        return l0;
    }
    let mut l1 = T::one() + jj - x;
    for k in 1..n {
        let kk = from_usize::<T>(k);
        let next = ((lit::<T>(2.0) * kk + T::one() + jj - x) * l1 - (kk + jj) * l0) / (kk + T::one());
        l0 = l1;
        l1 = next;
    }
    l1
}

/// L_n^j(x) = Σ_k (−1)^k C(n+j, n−k) x^k / k!.
pub fn assoc_laguerre_explicit<T: Real>(n: usize, j: usize, x: T) -> T {
    // C(n+j, n) as a running product
    let mut term = T::one();
    for i in 1..=n {
        term = term * from_usize::<T>(j + i) / from_usize::<T>(i);
    }
    let mut sum = term;
    for k in 0..n {
        term = -term * x * from_usize::<T>(n - k) / (from_usize::<T>(k + 1) * from_usize::<T>(j + k + 1));
        sum += term;
    }
    sum
}

/// ₂F₀(−n, −m; z), a polynomial of degree min(n, m).
pub fn hyp2f0_terminating<T: Real>(n: usize, m: usize, z: Complex<T>) -> Complex<T> {
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    for r in 0..n.min(m) {
        let f = from_usize::<T>(n - r) * from_usize::<T>(m - r) / from_usize::<T>(r + 1);
        term = term * z * f;
        sum += term;
    }
    sum
}

/// Largest violation of Charlier orthogonality for C_n(k; a) = ₂F₀(−n, −k; −1/a),
/// Σ_k a^k/k! C_n C_m = δ_nm n! e^a/a^n, over n, m ≤ `max_order`, relative to
/// √(h_n h_m). The k sum runs until the Poisson weight is negligible.
pub fn charlier_defect<T: Real>(max_order: usize, a: T) -> T {
    let k_max = max_order + 40 + (lit::<T>(20.0) * a).to_usize().unwrap_or(0);
    let z = Complex::new(-a.recip(), T::zero());
    let lnf: Vec<T> = (0..=k_max.max(max_order)).map(ln_factorial::<T>).collect();
    let h: Vec<T> = (0..=max_order).map(|n| (lnf[n] - from_usize::<T>(n) * a.ln() + a).exp()).collect();
    let poly: Vec<Vec<T>> = (0..=k_max).map(|k| (0..=max_order).map(|n| hyp2f0_terminating(n, k, z).re).collect()).collect();
    let mut worst = T::zero();
    for n in 0..=max_order {
        for m in 0..=max_order {
            let mut acc = T::zero();
            for (k, c) in poly.iter().enumerate() {
                acc += (from_usize::<T>(k) * a.ln() - lnf[k]).exp() * c[n] * c[m];
            }
            let want = if n == m { h[n] } else { T::zero() };
            worst = worst.max((acc - want).abs() / (h[n] * h[m]).sqrt());
        }
    }
    worst
}

/// ₁F₁(a; b; z) summed until the term drops below `tol` times the partial sum.
pub fn kummer_truncated<T: Real>(a: T, b: T, z: T, tol: T) -> Result<T> {
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..KUMMER_TERM_CAP {
        let kk = from_usize::<T>(k);
        term = term * (a + kk) * z / ((b + kk) * (kk + T::one()));
        if term == T::zero() {
            return Ok(sum);
        }
        sum += term;
        if term.abs() < tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Series { terms: KUMMER_TERM_CAP })
}

/// ⟨m|D(z)|n⟩ for m, n < dim, row-major; the upper triangle comes from ⟨m|D|n⟩ = (−1)^{n−m}⟨n|D|m⟩*.
pub fn displacement_matrix<T: Real>(dim: usize, z: Complex<T>) -> Vec<Complex<T>> {
    let mut m = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    displacement_lower_into(dim, z, &mut m);
    for r in 0..dim {
        for c in r + 1..dim {
            let v = m[c * dim + r].conj();
            m[r * dim + c] = if (c - r) % 2 == 1 { -v } else { v };
        }
    }
    m
}

/// Lower triangle (m >= n) of ⟨m|D(z)|n⟩ into a row-major buffer; the rest is untouched.
///
/// Each subdiagonal k = m − n is the normalised Laguerre sequence
/// √(n!/(n+k)!) L_n^k(|z|²), run forward in n with the Gaussian and |z|^k folded in.
/// Ladder-operator sweeps lose about a digit per few rows once |z| ≳ 3.
pub fn displacement_lower_into<T: Real>(dim: usize, z: Complex<T>, m: &mut [Complex<T>]) {
    assert!(m.len() >= dim * dim);
    let zero = Complex::new(T::zero(), T::zero());
    let x = z.norm_sqr();
    let rz = z.norm();
    let unit = if rz > T::zero() { z / rz } else { Complex::new(T::one(), T::zero()) };
    let half = lit::<T>(0.5);
    let mut phase = Complex::new(T::one(), T::zero());
    let mut lf = T::zero();
    for k in 0..dim {
        if k > 0 {
            lf += from_usize::<T>(k).ln();
            phase = phase * unit;
        }
        if rz == T::zero() && k > 0 {
            for n in 0..dim - k {
                m[(n + k) * dim + n] = zero;
            }
            continue;
        }
        let kk = from_usize::<T>(k);
        let lead = if k == 0 { T::zero() } else { kk * rz.ln() };
        let mut prev = T::zero();
        let mut cur = (lead - half * x - half * lf).exp();
        for n in 0..dim - k {
            m[(n + k) * dim + n] = phase * cur;
            let nn = from_usize::<T>(n);
            let next = ((lit::<T>(2.0) * nn + T::one() + kk - x) * cur - (nn * (nn + kk)).sqrt() * prev)
                / ((nn + T::one()) * (nn + T::one() + kk)).sqrt();
            prev = cur;
            cur = next;
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> NeumaierSum<T> {
    pub(crate) fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> T {
        self.sum + self.comp
    }
}
