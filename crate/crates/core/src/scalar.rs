// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the crate.
///
/// The eigen hooks exist so generic code never has to mix `num_traits::Float`
/// with nalgebra's `RealField`, whose method names collide.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Eigenvalues (ascending) of a Hermitian matrix given row-major.
    fn hermitian_eigenvalues(dim: usize, row_major: &[Complex<Self>]) -> Option<Vec<Self>>;

    /// Eigenvalues and column-major eigenvectors of a Hermitian matrix.
    fn hermitian_eigen(dim: usize, row_major: &[Complex<Self>]) -> Option<(Vec<Self>, Vec<Complex<Self>>)>;

    /// Eigenvalues and column-major eigenvectors of a real symmetric matrix.
    fn symmetric_eigen(dim: usize, row_major: &[Self]) -> Option<(Vec<Self>, Vec<Self>)>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn hermitian_eigenvalues(dim: usize, row_major: &[Complex<$t>]) -> Option<Vec<$t>> {
                let m = DMatrix::from_row_slice(dim, dim, row_major);
                let eig = SymmetricEigen::try_new(m, <$t>::EPSILON, 0)?;
                let mut vals: Vec<$t> = eig.eigenvalues.iter().copied().collect();
                vals.sort_by(|a, b| a.total_cmp(b));
                Some(vals)
            }

            fn hermitian_eigen(dim: usize, row_major: &[Complex<$t>]) -> Option<(Vec<$t>, Vec<Complex<$t>>)> {
                let m = DMatrix::from_row_slice(dim, dim, row_major);
                let eig = SymmetricEigen::try_new(m, <$t>::EPSILON, 0)?;
                Some((
                    eig.eigenvalues.iter().copied().collect(),
                    eig.eigenvectors.as_slice().to_vec(),
                ))
            }

            fn symmetric_eigen(dim: usize, row_major: &[$t]) -> Option<(Vec<$t>, Vec<$t>)> {
                let m = DMatrix::from_row_slice(dim, dim, row_major);
                let eig = SymmetricEigen::try_new(m, <$t>::EPSILON, 0)?;
                Some((
                    eig.eigenvalues.iter().copied().collect(),
                    eig.eigenvectors.as_slice().to_vec(),
                ))
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("representable constant")
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("representable index")
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}

/// Reduce a scaled time to [0, 2π) before forming mode phases.
#[inline]
pub(crate) fn reduce_phase<T: Real>(t: T) -> T {
    let two_pi = T::TAU();
    let r = t % two_pi;
    if r < T::zero() {
        r + two_pi
    } else {
        r
    }
}
