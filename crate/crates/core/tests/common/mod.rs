// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_f64(v: &BigRational) -> f64 {
    // numerator and denominator may both overflow f64; scale by bit length
    let n = v.numer();
    let d = v.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
    let ns = n >> shift;
    let ds = d >> shift;
    ns.to_f64().unwrap() / ds.to_f64().unwrap()
}

#[derive(Clone, Debug)]
pub struct RatC {
    pub re: BigRational,
    pub im: BigRational,
}

impl RatC {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }
    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }
    pub fn to_c(&self) -> C {
        c(rat_f64(&self.re), rat_f64(&self.im))
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![c(0.0, 0.0); n * n] }
    }
    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = c(1.0, 0.0);
        }
        m
    }
    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.a[i * self.n + j] = v;
    }
    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        out
    }
    pub fn scaled(&self, s: C) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }
    pub fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }
    pub fn norm1(&self) -> f64 {
        (0..self.n).map(|j| (0..self.n).map(|i| self.at(i, j).norm()).sum::<f64>()).fold(0.0, f64::max)
    }
    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }
}

/// exp(M) by scaling and squaring with a 30-term Taylor polynomial.
pub fn expm(m: &Mat) -> Mat {
    let norm = m.norm1();
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let a = m.scaled(c(f64::powi(2.0, -s), 0.0));
    let mut term = Mat::eye(m.n);
    let mut sum = Mat::eye(m.n);
    for k in 1..30 {
        term = term.mul(&a).scaled(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum
}

/// Annihilation operator truncated to `n` levels.
pub fn annihilation(n: usize) -> Mat {
    let mut m = Mat::zeros(n);
    for k in 1..n {
        m.set(k - 1, k, c((k as f64).sqrt(), 0.0));
    }
    m
}

pub fn creation(n: usize) -> Mat {
    let a = annihilation(n);
    let mut m = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, a.at(j, i).conj());
        }
    }
    m
}

/// D(z) = exp(z a† − z* a) on `n` levels.
pub fn displacement(n: usize, z: C) -> Mat {
    let gen = creation(n).scaled(z).add(&annihilation(n).scaled(-z.conj()));
    expm(&gen)
}

/// S(ξ) = exp((ξ* a² − ξ a†²)/2) on `n` levels.
pub fn squeeze(n: usize, xi: C) -> Mat {
    let a = annihilation(n);
    let ad = creation(n);
    let gen = a.mul(&a).scaled(xi.conj() * 0.5).add(&ad.mul(&ad).scaled(-xi * 0.5));
    expm(&gen)
}

/// Fock coefficients of D(α)S(ξ)|0⟩ on `n` levels.
pub fn squeezed_coherent_vector(n: usize, alpha: C, xi: C) -> Vec<C> {
    let mut vac = vec![c(0.0, 0.0); n];
    vac[0] = c(1.0, 0.0);
    let s = squeeze(n, xi).apply(&vac);
    displacement(n, alpha).apply(&s)
}

pub fn inner(u: &[C], v: &[C]) -> C {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}
