//! Hermite functions scaled to the oscillator `H = d²/dt² - 4π²t²`, so that
//! `H φ_k = -2π(2k+1) φ_k` and `φ_0(t) = 2^{1/4} e^{-πt²}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{LineGrid, SampledFunction1D};

/// Safety factor between the classical turning point and the grid half-width.
pub const EXTENT_FACTOR: f64 = 2.0;

/// Largest `k` whose turning point `√(2k+1)/√(2π)` fits `EXTENT_FACTOR` times
/// inside the grid half-width.
pub fn max_resolvable_index(grid: &LineGrid) -> usize {
    let reach = grid.half_extent() * (2.0 * PI).sqrt() / EXTENT_FACTOR;
    let k = ((reach * reach - 1.0) / 2.0).floor();
    if k < 0.0 {
        0
    } else {
        k as usize
    }
}

pub fn is_resolvable(grid: &LineGrid, k: usize) -> bool {
    grid.half_extent() >= EXTENT_FACTOR * ((2 * k + 1) as f64).sqrt() / (2.0 * PI).sqrt()
}

fn check(grid: &LineGrid, k: usize) -> Result<()> {
    if is_resolvable(grid, k) {
        Ok(())
    } else {
        Err(Error::ResolutionExceeded(format!(
            "Hermite index {k} needs a half-width of at least {:.4}, grid has {:.4} (largest index {})",
            EXTENT_FACTOR * ((2 * k + 1) as f64).sqrt() / (2.0 * PI).sqrt(),
            grid.half_extent(),
            max_resolvable_index(grid)
        )))
    }
}

/// Raw recurrence values `(2π)^{1/4} h_j(√(2π)t)` for `j = 0..count` at one point.
fn recurrence(t: f64, count: usize, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    let x = (2.0 * PI).sqrt() * t;
    let scale = (2.0 * PI).powf(0.25);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(scale * cur);
    for j in 0..count - 1 {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(scale * cur);
    }
}

/// The `k`-th Hermite function sampled on `grid`, normalized to unit `h`-norm.
pub fn hermite_fn(grid: &LineGrid, k: usize) -> Result<SampledFunction1D> {
    check(grid, k)?;
    let mut buf = Vec::with_capacity(k + 1);
    let values: Vec<Complex64> = (0..grid.n())
        .map(|j| {
            recurrence(grid.point(j), k + 1, &mut buf);
            Complex64::new(buf[k], 0.0)
        })
        .collect();
    let f = SampledFunction1D::new(*grid, values)?;
    let norm = f.l2_norm();
    Ok(f.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// The first `m` Hermite functions on one grid.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    grid: LineGrid,
    functions: Vec<SampledFunction1D>,
}

impl HermiteBasis {
    pub fn new(grid: &LineGrid, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("basis needs at least one function".into()));
        }
        check(grid, m - 1)?;
        let n = grid.n();
        let mut columns = vec![vec![Complex64::new(0.0, 0.0); n]; m];
        let mut buf = Vec::with_capacity(m);
        for j in 0..n {
            recurrence(grid.point(j), m, &mut buf);
            for (col, &v) in columns.iter_mut().zip(&buf) {
                col[j] = Complex64::new(v, 0.0);
            }
        }
        let functions = columns
            .into_iter()
            .map(|c| {
                let f = SampledFunction1D::new(*grid, c)?;
                let norm = f.l2_norm();
                Ok(f.scaled(Complex64::new(1.0 / norm, 0.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid: *grid, functions })
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn get(&self, k: usize) -> &SampledFunction1D {
        &self.functions[k]
    }

    pub fn functions(&self) -> &[SampledFunction1D] {
        &self.functions
    }

    /// `n × m` matrix whose column `k` holds the samples of `φ_k`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.grid.n(), self.functions.len(), |j, k| self.functions[k].values()[j])
    }

    /// Gram matrix of `h`-weighted inner products.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let b = self.matrix();
        b.adjoint() * &b * Complex64::new(self.grid.h(), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_is_gaussian() {
        let g = LineGrid::self_dual(64).unwrap();
        let f = hermite_fn(&g, 0).unwrap();
        let exact = SampledFunction1D::from_real_fn(g, |t| 2f64.powf(0.25) * (-PI * t * t).exp());
        assert!(f.max_abs_diff(&exact).unwrap() < 1e-12);
        assert!((f.l2_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_index_is_odd() {
        let g = LineGrid::self_dual(64).unwrap();
        let f = hermite_fn(&g, 1).unwrap();
        let v = f.values();
        for j in 1..64 {
            assert_eq!(v[64 - j], -v[j]);
        }
    }

    #[test]
    fn resolution_limits() {
        let g = LineGrid::self_dual(256).unwrap();
        assert_eq!(max_resolvable_index(&g), 49);
        assert!(hermite_fn(&g, 49).is_ok());
        assert!(matches!(hermite_fn(&g, 50), Err(Error::ResolutionExceeded(_))));
        assert_eq!(max_resolvable_index(&LineGrid::self_dual(64).unwrap()), 12);
    }

    #[test]
    fn basis_matches_single_functions() {
        let g = LineGrid::self_dual(128).unwrap();
        let b = HermiteBasis::new(&g, 8).unwrap();
        for k in 0..8 {
            assert!(b.get(k).max_abs_diff(&hermite_fn(&g, k).unwrap()).unwrap() < 1e-13);
        }
    }
}
