//! Uniform sampling lattices on ℝ and ℝ², and the sampled functions that live on them.
//!
//! A [`LineGrid`] with `n` points and spacing `h` carries the points
//! `v_j = (j - n/2)·h`. When `h = n^{-1/2}` the grid is *self-dual*: the
//! frequency lattice of its discrete Fourier transform (spacing `1/(n·h)`)
//! coincides with the grid itself, so one lattice serves time and frequency.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible sample count.
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    n: usize,
    h: f64,
}

/// How the spacing of a [`LineGrid`] is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridMode {
    SelfDual,
    Explicit(f64),
}

pub fn make_line_grid(n: usize, mode: GridMode) -> Result<LineGrid> {
    match mode {
        GridMode::SelfDual => LineGrid::self_dual(n),
        GridMode::Explicit(h) => LineGrid::explicit(n, h),
    }
}

impl LineGrid {
    pub fn self_dual(n: usize) -> Result<Self> {
        check_count(n)?;
        Ok(Self {
            n,
            h: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn explicit(n: usize, h: f64) -> Result<Self> {
        check_count(n)?;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        Ok(Self { n, h })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn is_self_dual(&self) -> bool {
        let target = 1.0 / (self.n as f64).sqrt();
        (self.h - target).abs() <= 1e-12 * target
    }

    pub fn require_self_dual(&self) -> Result<()> {
        if self.is_self_dual() {
            Ok(())
        } else {
            Err(Error::UnsupportedGrid(format!(
                "n = {} with h = {} is not self-dual (expected h = {})",
                self.n,
                self.h,
                1.0 / (self.n as f64).sqrt()
            )))
        }
    }

    /// The `j`-th sample point `(j - n/2)·h`.
    #[inline]
    pub fn point(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Index of the origin, `n/2`.
    #[inline]
    pub fn center(&self) -> usize {
        self.n / 2
    }

    /// Distance from the origin to the last sample point on the positive side.
    pub fn half_extent(&self) -> f64 {
        (self.n / 2) as f64 * self.h
    }

    /// Same sample count and spacing (bitwise).
    pub fn same_as(&self, other: &LineGrid) -> bool {
        self.n == other.n && self.h.to_bits() == other.h.to_bits()
    }

    pub(crate) fn require_same(&self, other: &LineGrid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(n = {}, h = {}) vs (n = {}, h = {})",
                self.n, self.h, other.n, other.h
            )))
        }
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < MIN_POINTS || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be even and at least {MIN_POINTS}, got {n}"
        )));
    }
    Ok(())
}

/// Samples of a complex function on a [`LineGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction1D {
    grid: LineGrid,
    values: Vec<Complex64>,
}

impl SampledFunction1D {
    pub fn new(grid: LineGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: LineGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn from_fn(grid: LineGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.point(j))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: LineGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    #[inline]
    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(h·Σ|f|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.h() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `⟨f, g⟩ = h·Σ f·conj(g)`, linear in the first slot.
    pub fn inner(&self, other: &SampledFunction1D) -> Result<Complex64> {
        self.grid.require_same(&other.grid)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.h())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &SampledFunction1D) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &SampledFunction1D) -> Result<f64> {
        self.grid.require_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Product lattice on ℝ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneGrid {
    pub x: LineGrid,
    pub y: LineGrid,
}

impl PlaneGrid {
    pub fn new(x: LineGrid, y: LineGrid) -> Self {
        Self { x, y }
    }

    /// Two equal self-dual axes, the default construction.
    pub fn self_dual(n: usize) -> Result<Self> {
        let g = LineGrid::self_dual(n)?;
        Ok(Self { x: g, y: g })
    }

    pub fn square(line: LineGrid) -> Self {
        Self { x: line, y: line }
    }

    pub fn is_self_dual(&self) -> bool {
        self.x.is_self_dual() && self.y.is_self_dual()
    }

    pub fn require_self_dual(&self) -> Result<()> {
        self.x.require_self_dual()?;
        self.y.require_self_dual()
    }

    pub fn same_as(&self, other: &PlaneGrid) -> bool {
        self.x.same_as(&other.x) && self.y.same_as(&other.y)
    }

    pub(crate) fn require_same(&self, other: &PlaneGrid) -> Result<()> {
        self.x.require_same(&other.x)?;
        self.y.require_same(&other.y)
    }

    /// Area element `h_x·h_y`.
    pub fn cell_area(&self) -> f64 {
        self.x.h() * self.y.h()
    }
}

/// Samples of a complex function on a [`PlaneGrid`]; entry `(i, j)` is the
/// value at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFunction {
    grid: PlaneGrid,
    values: DMatrix<Complex64>,
}

impl PlaneFunction {
    pub fn new(grid: PlaneGrid, values: DMatrix<Complex64>) -> Result<Self> {
        if values.nrows() != grid.x.n() || values.ncols() != grid.y.n() {
            return Err(Error::InvalidArgument(format!(
                "expected a {}×{} sample matrix, got {}×{}",
                grid.x.n(),
                grid.y.n(),
                values.nrows(),
                values.ncols()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: PlaneGrid) -> Self {
        Self {
            grid,
            values: DMatrix::zeros(grid.x.n(), grid.y.n()),
        }
    }

    pub fn from_fn(grid: PlaneGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = DMatrix::from_fn(grid.x.n(), grid.y.n(), |i, j| {
            f(grid.x.point(i), grid.y.point(j))
        });
        Self { grid, values }
    }

    pub fn from_real_fn(grid: PlaneGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |x, y| Complex64::new(f(x, y), 0.0))
    }

    #[inline]
    pub fn grid(&self) -> &PlaneGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> DMatrix<Complex64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[(i, j)]
    }

    /// `(h_x·h_y·Σ|f|^p)^{1/p}`; `p = ∞` gives the sup norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let peak = self.sup_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let s: f64 = self.values.iter().map(|z| (z.norm() / peak).powf(p)).sum();
        peak * (self.grid.cell_area() * s).powf(1.0 / p)
    }

    pub fn l1_norm(&self) -> f64 {
        self.grid.cell_area() * self.values.iter().map(|z| z.norm()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_area() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.map(|z| z * c),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PlaneFunction) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.component_mul(&other.values),
        })
    }

    pub fn add(&self, other: &PlaneFunction) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: &self.values + &other.values,
        })
    }

    pub fn sub(&self, other: &PlaneFunction) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: &self.values - &other.values,
        })
    }

    /// Multiply every sample by `w(x, y)`.
    pub fn weighted(&self, w: impl Fn(f64, f64) -> Complex64) -> Self {
        let g = self.grid;
        let values = DMatrix::from_fn(g.x.n(), g.y.n(), |i, j| {
            self.values[(i, j)] * w(g.x.point(i), g.y.point(j))
        });
        Self { grid: g, values }
    }

    pub fn max_abs_diff(&self, other: &PlaneFunction) -> Result<f64> {
        self.grid.require_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_dual_spacing() {
        let g = make_line_grid(16, GridMode::SelfDual).unwrap();
        assert_eq!(g.h(), 0.25);
        assert!(g.is_self_dual());
    }

    #[test]
    fn explicit_points() {
        let g = make_line_grid(8, GridMode::Explicit(0.5)).unwrap();
        assert_eq!(g.points(), vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]);
        assert!(!g.is_self_dual());
    }

    #[test]
    fn rejects_bad_counts_and_spacings() {
        assert!(matches!(
            make_line_grid(7, GridMode::SelfDual),
            Err(Error::InvalidArgument(_))
        ));
        assert!(make_line_grid(6, GridMode::SelfDual).is_err());
        assert!(make_line_grid(8, GridMode::Explicit(0.0)).is_err());
        assert!(make_line_grid(8, GridMode::Explicit(f64::NAN)).is_err());
    }

    #[test]
    fn plane_norms() {
        let g = PlaneGrid::self_dual(16).unwrap();
        let f = PlaneFunction::from_real_fn(g, |_, _| 2.0);
        // area of the lattice cell times the sample count is the window area n·h squared = 16
        assert!((f.l1_norm() - 32.0).abs() < 1e-12);
        assert!((f.l2_norm() - 8.0).abs() < 1e-12);
        assert!((f.lp_norm(1.5) - 2.0 * 16f64.powf(1.0 / 1.5)).abs() < 1e-12);
        assert_eq!(f.lp_norm(f64::INFINITY), 2.0);
        assert_eq!(PlaneFunction::zeros(g).lp_norm(1.25), 0.0);
    }
}
