// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Uniform square grids over the complex β plane.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{InitialState, SystemParams};
use crate::scalar::{from_usize, lit, Real};

pub const DEFAULT_POINTS: usize = 301;
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-8;
const DEFAULT_MARGIN: f64 = 3.0;

/// Row i holds Im β = center.im − h + i·step, column j holds Re β = center.re − h + j·step.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid<T> {
    pub center: Complex<T>,
    pub half_extent: T,
    pub points_per_axis: usize,
    pub values: Vec<T>,
}

impl<T: Real> PhaseGrid<T> {
    /// Zero-filled grid; the point count must be odd so the center is a node.
    pub fn new(center: Complex<T>, half_extent: T, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 3 || points_per_axis % 2 == 0 {
            return Err(Error::InvalidParameter(format!("points per axis {points_per_axis} must be odd and ≥ 3")));
        }
        if !(half_extent > T::zero()) || !half_extent.is_finite() {
            return Err(Error::InvalidParameter(format!("half extent {half_extent}")));
        }
        Ok(Self { center, half_extent, points_per_axis, values: vec![T::zero(); points_per_axis * points_per_axis] })
    }

    /// Centered at 0 with half extent |α₊|e^r + 3 and 301 points per axis.
    pub fn default_for(params: &SystemParams<T>, init: &InitialState<T>) -> Self {
        let h = init.alpha_plus(params).norm() * init.r.exp() + lit::<T>(DEFAULT_MARGIN);
        Self::new(Complex::new(T::zero(), T::zero()), h, DEFAULT_POINTS).expect("valid default grid")
    }

    pub fn step(&self) -> T {
        lit::<T>(2.0) * self.half_extent / from_usize::<T>(self.points_per_axis - 1)
    }

    pub fn cell_area(&self) -> T {
        let s = self.step();
        s * s
    }

    pub fn coordinate(&self, k: usize) -> T {
        -self.half_extent + from_usize::<T>(k) * self.step()
    }

    pub fn point(&self, row: usize, col: usize) -> Complex<T> {
        self.center + Complex::new(self.coordinate(col), self.coordinate(row))
    }

    pub fn at(&self, row: usize, col: usize) -> T {
        self.values[row * self.points_per_axis + col]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.center == other.center
            && self.half_extent == other.half_extent
            && self.points_per_axis == other.points_per_axis
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape("grids differ in center, extent or resolution".into()))
        }
    }

    /// Same geometry, values from `f(β)`, rows evaluated in parallel.
    pub fn fill<F>(&self, f: F) -> Self
    where
        F: Fn(Complex<T>) -> T + Sync,
    {
        self.fill_rows(|row, out| {
            for (col, v) in out.iter_mut().enumerate() {
                *v = f(self.point(row, col));
            }
        })
    }

    /// Same geometry, each row written by `f(row, values)`.
    pub fn fill_rows<F>(&self, f: F) -> Self
    where
        F: Fn(usize, &mut [T]) + Sync,
    {
        let n = self.points_per_axis;
        let mut values = vec![T::zero(); n * n];
        values.par_chunks_mut(n).enumerate().for_each(|(row, out)| f(row, out));
        Self { center: self.center, half_extent: self.half_extent, points_per_axis: n, values }
    }

    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::Shape(format!("{} values for a {}² grid", values.len(), self.points_per_axis)));
        }
        Ok(Self { values, ..self.clone() })
    }

    /// Σ f(v)·dA in row-major order.
    pub fn integrate_with<F: Fn(T) -> T>(&self, f: F) -> T {
        let mut acc = T::zero();
        for &v in &self.values {
            acc += f(v);
        }
        acc * self.cell_area()
    }

    pub fn integral(&self) -> T {
        self.integrate_with(|v| v)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// Largest |value| on the outer ring.
    pub fn boundary_max(&self) -> T {
        let n = self.points_per_axis;
        let mut m = T::zero();
        for k in 0..n {
            for (r, c) in [(0, k), (n - 1, k), (k, 0), (k, n - 1)] {
                m = m.max(self.at(r, c).abs());
            }
        }
        m
    }

    pub fn check_boundary(&self, tol: T) -> Result<()> {
        let b = self.boundary_max();
        if b > tol {
            return Err(Error::GridExtent(format!("boundary value {b:e} exceeds {tol:e}; enlarge the grid")));
        }
        Ok(())
    }

    /// Header `# center_re center_im half_extent n`, then one grid row per line.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# {:.16e} {:.16e} {:.16e} {}",
            self.center.re, self.center.im, self.half_extent, self.points_per_axis
        )?;
        let n = self.points_per_axis;
        let mut line = String::new();
        for row in 0..n {
            line.clear();
            for col in 0..n {
                if col > 0 {
                    line.push(' ');
                }
                let _ = write!(line, "{:.16e}", self.at(row, col));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let bad = |msg: &str| Error::InvalidParameter(format!("grid dump: {msg}"));
        let header = lines.next().ok_or_else(|| bad("empty input"))?.map_err(|e| bad(&e.to_string()))?;
        let fields: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad("header needs four fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s}")));
        let n: usize = fields[3].parse().map_err(|_| bad("bad point count"))?;
        let mut g = Self::new(Complex::new(lit(num(fields[0])?), lit(num(fields[1])?)), lit(num(fields[2])?), n)?;
        let mut k = 0;
        for line in lines {
            let line = line.map_err(|e| bad(&e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            for tok in line.split_whitespace() {
                if k >= g.values.len() {
                    return Err(bad("too many values"));
                }
                g.values[k] = lit(num(tok)?);
                k += 1;
            }
        }
        if k != g.values.len() {
            return Err(bad(&format!("expected {} values, found {k}", g.values.len())));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let g = PhaseGrid::new(Complex::new(1.0, -1.0), 2.0, 5).unwrap();
        assert_eq!(g.step(), 1.0);
        assert_eq!(g.point(0, 0), Complex::new(-1.0, -3.0));
        assert_eq!(g.point(2, 2), Complex::new(1.0, -1.0));
        assert!(PhaseGrid::new(Complex::new(0.0, 0.0), 1.0, 4).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let g = PhaseGrid::<f64>::new(Complex::new(0.25, 0.0), 3.0, 7).unwrap().fill(|b| (-b.norm_sqr()).exp() / 3.0);
        let mut buf = Vec::new();
        g.write_dump(&mut buf).unwrap();
        let back = PhaseGrid::<f64>::read_dump(&buf[..]).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn gaussian_integral_and_boundary() {
        let g = PhaseGrid::<f64>::new(Complex::new(0.0, 0.0), 8.0, 201)
            .unwrap()
            .fill(|b| (-b.norm_sqr()).exp() / std::f64::consts::PI);
        assert!((g.integral() - 1.0).abs() < 1e-12);
        assert!(g.check_boundary(1e-8).is_ok());
        let tight = PhaseGrid::<f64>::new(Complex::new(0.0, 0.0), 2.0, 41).unwrap().fill(|b| (-b.norm_sqr()).exp());
        assert!(matches!(tight.check_boundary(1e-8), Err(Error::GridExtent(_))));
    }
}
