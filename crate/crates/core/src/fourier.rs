//! Discrete approximation of the continuous Fourier transform on self-dual grids.
//!
//! With `v_j = (j - n/2)h` and `h² n = 1`, the Riemann sum
//! `g_k = h Σ_j f_j e^{2πi·s·v_k v_j}` factors into an ordinary DFT between two
//! alternating-sign ramps:
//!
//! ```text
//! g_k = h·(-1)^{n/2}·(-1)^k · DFT_s[(-1)^j f_j]_k
//! ```
//!
//! so the transform is exactly unitary in the `h`-weighted norm and the two signs
//! are exact inverses of each other.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::grid::{LineGrid, PlaneFunction, SampledFunction1D};

/// Sign of the exponent `e^{±2πi ξ t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `e^{-2πi ξ t}`: the hat transform.
    Negative,
    /// `e^{+2πi ξ t}`: the check transform.
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Positive => 1.0,
        }
    }
}

/// Planned centered transform for one grid. Cheap to share between threads;
/// every call allocates its own scratch.
#[derive(Clone)]
pub struct CenteredDft {
    grid: LineGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for CenteredDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CenteredDft").field("grid", &self.grid).finish()
    }
}

impl CenteredDft {
    pub fn new(grid: &LineGrid) -> Result<Self> {
        grid.require_self_dual()?;
        let mut planner = FftPlanner::new();
        let n = grid.n();
        let parity = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        Ok(Self {
            grid: *grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: parity * grid.h(),
        })
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    /// Transform `buf` in place. `buf.len()` must equal the grid size.
    pub fn apply(&self, buf: &mut [Complex64], sign: Sign) {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len()];
        self.apply_with_scratch(buf, &mut scratch, sign);
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    pub fn apply_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64], sign: Sign) {
        assert_eq!(buf.len(), self.grid.n(), "buffer length does not match grid");
        alternate(buf);
        match sign {
            Sign::Negative => self.forward.process_with_scratch(buf, scratch),
            Sign::Positive => self.inverse.process_with_scratch(buf, scratch),
        }
        alternate(buf);
        for z in buf.iter_mut() {
            *z *= self.scale;
        }
    }

    /// Multiply by `(2πiξ)^order` in frequency space. The unpaired Nyquist
    /// mode is discarded for every order so that derivatives compose exactly.
    pub fn differentiate(&self, buf: &mut [Complex64], order: u32) {
        if order == 0 {
            return;
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len()];
        self.differentiate_with_scratch(buf, &mut scratch, order);
    }

    pub fn differentiate_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64], order: u32) {
        if order == 0 {
            return;
        }
        self.apply_with_scratch(buf, scratch, Sign::Negative);
        buf[0] = Complex64::new(0.0, 0.0);
        for (k, z) in buf.iter_mut().enumerate().skip(1) {
            let w = Complex64::new(0.0, 2.0 * PI * self.grid.point(k));
            *z *= w.powu(order);
        }
        self.apply_with_scratch(buf, scratch, Sign::Positive);
    }
}

fn alternate(buf: &mut [Complex64]) {
    for z in buf.iter_mut().skip(1).step_by(2) {
        *z = -*z;
    }
}

pub fn fourier_1d(f: &SampledFunction1D, sign: Sign) -> Result<SampledFunction1D> {
    let plan = CenteredDft::new(f.grid())?;
    let mut values = f.values().to_vec();
    plan.apply(&mut values, sign);
    SampledFunction1D::new(*f.grid(), values)
}

/// Spectral derivative `d^order f / dt^order`.
pub fn derivative_1d(f: &SampledFunction1D, order: u32) -> Result<SampledFunction1D> {
    let plan = CenteredDft::new(f.grid())?;
    let mut values = f.values().to_vec();
    plan.differentiate(&mut values, order);
    SampledFunction1D::new(*f.grid(), values)
}

/// Plane axis selector: `X` runs along matrix rows' index (down a column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Apply `op` to every 1D line of `m` along `axis`.
pub(crate) fn for_each_line(m: &mut DMatrix<Complex64>, axis: Axis, mut op: impl FnMut(&mut [Complex64])) {
    let (rows, cols) = m.shape();
    match axis {
        Axis::X => {
            for col in m.as_mut_slice().chunks_exact_mut(rows) {
                op(col);
            }
        }
        Axis::Y => {
            let mut line = vec![Complex64::new(0.0, 0.0); cols];
            for i in 0..rows {
                for (j, z) in line.iter_mut().enumerate() {
                    *z = m[(i, j)];
                }
                op(&mut line);
                for (j, z) in line.iter().enumerate() {
                    m[(i, j)] = *z;
                }
            }
        }
    }
}

pub fn fourier_2d(f: &PlaneFunction, sign: Sign) -> Result<PlaneFunction> {
    let grid = *f.grid();
    let px = CenteredDft::new(&grid.x)?;
    let py = CenteredDft::new(&grid.y)?;
    let mut values = f.values().clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); px.scratch_len().max(py.scratch_len())];
    for_each_line(&mut values, Axis::X, |line| px.apply_with_scratch(line, &mut scratch, sign));
    for_each_line(&mut values, Axis::Y, |line| py.apply_with_scratch(line, &mut scratch, sign));
    PlaneFunction::new(grid, values)
}

/// Spectral partial derivative of order `order` along `axis`.
pub fn partial(u: &PlaneFunction, axis: Axis, order: u32) -> Result<PlaneFunction> {
    let grid = *u.grid();
    let plan = CenteredDft::new(match axis {
        Axis::X => &grid.x,
        Axis::Y => &grid.y,
    })?;
    let mut values = u.values().clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    for_each_line(&mut values, axis, |line| plan.differentiate_with_scratch(line, &mut scratch, order));
    PlaneFunction::new(grid, values)
}
