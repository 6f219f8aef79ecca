//! The mollifier family `τ_δ = τ(·/δ)` and its check transforms `τ̌_δ`.
//!
//! `τ̌_δ(ξ) = δ² τ̌(δξ)`, so `‖τ̌_δ‖₁ = ‖τ̌‖₁ = V` for every `δ`. On a single grid
//! the sampled `τ_δ` gets coarser as `δ` shrinks and the discrete L¹ norm drifts
//! away from `V`. [`versal_sample`] avoids this by evaluating each `δ` on the
//! grid with `n₀/δ²` points, whose samples of `τ_δ` are exactly the base samples
//! of `τ`; the transform is streamed over the compact support so the large grid
//! is never stored.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bump::{bump_tau, bump_tau_scaled, psi};
use crate::error::{Error, Result};
use crate::fourier::{fourier_2d, CenteredDft, Sign};
use crate::grid::{LineGrid, PlaneFunction, PlaneGrid};

/// Minimum number of grid points per axis inside the closed ball `B̄_{δ/2}`.
pub const PLATEAU_POINTS: usize = 5;

#[derive(Debug, Clone)]
pub struct MollifierFamily {
    pub tau: PlaneFunction,
    pub tau_check: PlaneFunction,
    pub versal: f64,
}

impl MollifierFamily {
    pub fn grid(&self) -> &PlaneGrid {
        self.tau.grid()
    }
}

pub fn make_mollifier(grid: &PlaneGrid) -> Result<MollifierFamily> {
    grid.require_self_dual()?;
    let tau = bump_tau(grid)?;
    let tau_check = fourier_2d(&tau, Sign::Positive)?;
    let versal = tau_check.l1_norm();
    Ok(MollifierFamily { tau, tau_check, versal })
}

/// Smallest `δ` whose plateau ball holds [`PLATEAU_POINTS`] samples per axis.
pub fn delta_floor(grid: &LineGrid) -> f64 {
    (PLATEAU_POINTS - 1) as f64 * grid.h()
}

pub fn is_resolvable(grid: &LineGrid, delta: f64) -> bool {
    delta > 0.0 && delta <= 1.0 && delta >= delta_floor(grid) * (1.0 - 1e-12)
}

/// `δ_i = 2^{-i}` for the resolvable levels among the first `levels`.
pub fn dyadic_ladder(grid: &LineGrid, levels: usize) -> Vec<f64> {
    (0..levels)
        .map(|i| 0.5f64.powi(i as i32))
        .take_while(|&d| is_resolvable(grid, d))
        .collect()
}

/// `τ_δ`, its check transform, and the sup distance between the transform and
/// the rescaled base transform `δ² τ̌(δ·)`.
#[derive(Debug, Clone)]
pub struct TauDelta {
    pub delta: f64,
    pub tau: PlaneFunction,
    pub tau_check: PlaneFunction,
    pub scaling_error: f64,
}

pub fn tau_delta(fam: &MollifierFamily, delta: f64) -> Result<TauDelta> {
    let grid = *fam.grid();
    let floor = delta_floor(&grid.x).max(delta_floor(&grid.y));
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    if !is_resolvable(&grid.x, delta) || !is_resolvable(&grid.y, delta) {
        return Err(Error::DeltaTooSmall { delta, floor });
    }
    let tau = bump_tau_scaled(&grid, delta);
    let tau_check = fourier_2d(&tau, Sign::Positive)?;
    let analytic = rescaled_check(&fam.tau, delta)?;
    let scaling_error = tau_check.max_abs_diff(&analytic)?;
    Ok(TauDelta {
        delta,
        tau,
        tau_check,
        scaling_error,
    })
}

/// `δ² τ̌(δξ)` at every grid point, with `τ̌` the band-limited (trigonometric)
/// interpolant of the sampled base transform.
pub fn rescaled_check(tau: &PlaneFunction, delta: f64) -> Result<PlaneFunction> {
    let grid = *tau.grid();
    let ex = phase_matrix(&grid.x, delta);
    let ey = phase_matrix(&grid.y, delta);
    let scale = Complex64::new(delta * delta * grid.cell_area(), 0.0);
    let values = ex.transpose() * tau.values() * ey * scale;
    PlaneFunction::new(grid, values)
}

/// `E[j, a] = e^{2πiδ t_j t_a}`.
fn phase_matrix(g: &LineGrid, delta: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(g.n(), g.n(), |j, a| {
        Complex64::from_polar(1.0, 2.0 * PI * delta * g.point(j) * g.point(a))
    })
}

/// One `δ` of the scale-matched versal computation.
#[derive(Debug, Clone, PartialEq)]
pub struct VersalSample {
    pub delta: f64,
    /// Points per axis of the grid used for this `δ`.
    pub n: usize,
    pub l1_norm: f64,
    /// Sup distance at the probe points between the transform and `δ² τ̌(δ·)`.
    pub scaling_error: f64,
    pub probes: usize,
}

/// `‖τ̌_δ‖₁` on the self-dual grid with `n₀/δ²` points per axis.
pub fn versal_sample(n0: usize, delta: f64) -> Result<VersalSample> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    let nf = n0 as f64 / (delta * delta);
    let n = nf.round() as usize;
    if (nf - n as f64).abs() > 1e-9 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "n0/delta² = {nf} is not an even integer"
        )));
    }
    let base = LineGrid::self_dual(n0)?;
    let g = LineGrid::self_dual(n)?;
    let plan = CenteredDft::new(&g)?;
    let c = g.center();
    // support of τ_δ on the fine grid is the support of τ on the base grid
    let reach = n0 / 2;
    let lo = c.saturating_sub(reach);
    let hi = (c + reach).min(n - 1);
    let support: Vec<usize> = (lo..=hi).collect();

    // stage 1: transform each support row along y
    let rows: Vec<Vec<Complex64>> = support
        .par_iter()
        .map(|&i| {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            for &j in &support {
                line[j] = Complex64::new(psi(g.point(i).hypot(g.point(j)) / delta), 0.0);
            }
            plan.apply(&mut line, Sign::Positive);
            line
        })
        .collect();

    // stage 2: transform each output column along x, keeping only sums and probes
    let probe_stride = (n / 64).max(1);
    let column_results: Vec<(f64, Vec<(usize, usize, Complex64)>)> = (0..n)
        .into_par_iter()
        .map(|k2| {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            for (r, &i) in support.iter().enumerate() {
                line[i] = rows[r][k2];
            }
            plan.apply(&mut line, Sign::Positive);
            let sum: f64 = line.iter().map(|z| z.norm()).sum();
            let mut probes = Vec::new();
            if k2 % probe_stride == 0 {
                for k1 in (0..n).step_by(probe_stride * 4) {
                    probes.push((k1, k2, line[k1]));
                }
            }
            (sum, probes)
        })
        .collect();
    let l1_norm = column_results.iter().map(|(s, _)| s).sum::<f64>() * g.h() * g.h();

    // analytic route: δ² τ̌(δξ) from the base samples
    let bh = base.h();
    let base_support: Vec<(f64, f64, f64)> = (0..n0)
        .flat_map(|i| (0..n0).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let (x, y) = (base.point(i), base.point(j));
            let v = psi(x.hypot(y));
            (v != 0.0).then_some((x, y, v))
        })
        .collect();
    let mut scaling_error = 0.0f64;
    let mut probes = 0;
    for (_, list) in &column_results {
        for &(k1, k2, got) in list {
            let (u, v) = (delta * g.point(k1), delta * g.point(k2));
            let s: Complex64 = base_support
                .iter()
                .map(|&(x, y, w)| Complex64::from_polar(w, 2.0 * PI * (x * u + y * v)))
                .sum();
            let expected = s * (delta * delta * bh * bh);
            scaling_error = scaling_error.max((got - expected).norm());
            probes += 1;
        }
    }
    Ok(VersalSample {
        delta,
        n,
        l1_norm,
        scaling_error,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_basics() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let c = fam.grid().x.center();
        let z = fam.tau_check.at(c, c);
        assert!(z.re > 0.0 && z.im.abs() < 1e-12);
        assert!((z.re - fam.tau.l1_norm()).abs() < 1e-12);
        let back = fourier_2d(&fam.tau_check, Sign::Negative).unwrap();
        assert!(back.max_abs_diff(&fam.tau).unwrap() < 1e-8);
    }

    #[test]
    fn unit_delta_is_identity() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let t = tau_delta(&fam, 1.0).unwrap();
        assert_eq!(t.tau, fam.tau);
        assert!(t.tau_check.max_abs_diff(&fam.tau_check).unwrap() < 1e-12);
        assert!(t.scaling_error < 1e-10);
    }

    #[test]
    fn floor_is_enforced() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        assert!(tau_delta(&fam, 0.5).is_ok());
        assert!(matches!(tau_delta(&fam, 0.25), Err(Error::DeltaTooSmall { .. })));
        assert_eq!(dyadic_ladder(&LineGrid::self_dual(256).unwrap(), 6), vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn scale_matched_unit_delta_matches_family() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let s = versal_sample(64, 1.0).unwrap();
        assert_eq!(s.n, 64);
        assert!((s.l1_norm - fam.versal).abs() < 1e-10 * fam.versal);
        assert!(s.scaling_error < 1e-10);
        let half = versal_sample(64, 0.5).unwrap();
        assert_eq!(half.n, 256);
        assert!(half.scaling_error < 1e-10);
    }
}
