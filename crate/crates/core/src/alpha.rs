//! The Alpha transform `α(X)(x, y) = tr(T_{-x} M_{-y} X)` and its inverse `Θ`.
//!
//! On the self-dual grid, `α(X)(x, y) = ∫ e^{2πiyv} K(v, v - x) dv`: for the
//! offset `x = m·h` the slice `y ↦ α(X)(mh, y)` is the `+` transform of the
//! wrapped diagonal `v_j ↦ K(v_j, v_{j-m})`. `Θ` runs the same steps backwards,
//! assembling `K(v, w) = ∫ f(v - w, y) e^{-2πiyv} dy` diagonal by diagonal, so
//! the two maps are exact inverses on the grid.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{CenteredDft, Sign};
use crate::grid::{LineGrid, PlaneFunction, PlaneGrid};
use crate::operator::{KernelOperator, SchattenExponent};
use crate::report::Report;
use crate::shifts::{modulate_op, translate_op};

#[inline]
fn wrap(j: usize, offset: isize, n: usize) -> usize {
    (j as isize - offset).rem_euclid(n as isize) as usize
}

/// `α(X)` on the product of the operator's grid with itself.
pub fn alpha(x: &KernelOperator) -> Result<PlaneFunction> {
    let g = *x.grid();
    let plan = CenteredDft::new(&g)?;
    let n = g.n();
    let k = x.kernel();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let offset = i as isize - (n / 2) as isize;
            let mut line: Vec<Complex64> = (0..n).map(|j| k[(j, wrap(j, offset, n))]).collect();
            plan.apply(&mut line, Sign::Positive);
            line
        })
        .collect();
    let values = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    PlaneFunction::new(PlaneGrid::square(g), values)
}

/// `tr(T_{-x} M_{-y} X)` from explicit translation and modulation matrices, at
/// any real `(x, y)`.
pub fn alpha_direct(x: &KernelOperator, px: f64, py: f64) -> Result<Complex64> {
    let g = *x.grid();
    let t = translate_op(&g, -px)?;
    let m = modulate_op(&g, -py);
    let a = m * x.matrix();
    Ok(t.transpose().component_mul(&a).iter().sum())
}

fn require_operator_plane(f: &PlaneFunction) -> Result<LineGrid> {
    let grid = f.grid();
    grid.require_self_dual()?;
    if !grid.x.same_as(&grid.y) {
        return Err(Error::GridMismatch("Θ needs equal x and y grids".into()));
    }
    Ok(grid.x)
}

/// `Θ(f) = ∬ f(x, y) M_{-y} T_{-x} dx dy`.
pub fn theta(f: &PlaneFunction) -> Result<KernelOperator> {
    let g = require_operator_plane(f)?;
    let plan = CenteredDft::new(&g)?;
    let n = g.n();
    let vals = f.values();
    let diagonals: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut line: Vec<Complex64> = (0..n).map(|j| vals[(i, j)]).collect();
            plan.apply(&mut line, Sign::Negative);
            line
        })
        .collect();
    let mut k = DMatrix::zeros(n, n);
    for (i, d) in diagonals.iter().enumerate() {
        let offset = i as isize - (n / 2) as isize;
        for (j, z) in d.iter().enumerate() {
            k[(j, wrap(j, offset, n))] = *z;
        }
    }
    KernelOperator::new(g, k)
}

/// Relative sup error of `α(Θ(f))` against `f`.
pub fn verify_inversion(f: &PlaneFunction) -> Result<Report> {
    let g = require_operator_plane(f)?;
    let back = alpha(&theta(f)?)?;
    let scale = f.sup_norm();
    let err = back.max_abs_diff(f)?;
    let rel = if scale > 0.0 { err / scale } else { err };
    let mut r = Report::new("inversion", &g);
    r.quantity("sup_norm", scale).quantity("sup_error", err);
    r.check_le("alpha_theta_relative_error", rel, 0.0, 1e-8);
    Ok(r)
}

/// Relative S¹ error of `Θ(α(X))` against `X`.
pub fn verify_operator_inversion(x: &KernelOperator) -> Result<Report> {
    let back = theta(&alpha(x)?)?;
    let scale = x.trace_norm();
    let err = back.sub(x)?.trace_norm();
    let rel = if scale > 0.0 { err / scale } else { err };
    let mut r = Report::new("operator-inversion", x.grid());
    r.quantity("s1_norm", scale).quantity("s1_error", err);
    r.warn_opt(x.decay_warning("input"));
    r.check_le("theta_alpha_relative_error", rel, 0.0, 1e-8);
    Ok(r)
}

/// `‖Θ(f)‖_{S^{p'}} ≤ ‖f‖_p` for `1 ≤ p ≤ 2`; at `p = 2` also the equality.
pub fn verify_hausdorff_young(f: &PlaneFunction, p: f64) -> Result<Report> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p must lie in [1, 2], got {p}")));
    }
    let g = require_operator_plane(f)?;
    let q = SchattenExponent::new(p)?.conjugate();
    let lhs = theta(f)?.schatten_norm(q);
    let rhs = f.lp_norm(p);
    let mut r = Report::new("hausdorff-young", &g);
    r.quantity("p", p).quantity("p_conjugate", q.p());
    r.quantity("theta_schatten_norm", lhs).quantity("lp_norm", rhs);
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    r.quantity("ratio", ratio);
    r.check_le(format!("theta_S{}_le_L{}", q.p(), p), lhs, rhs, 1e-9 * rhs);
    if p == 2.0 && rhs > 0.0 {
        r.check_approx("plancherel_ratio", ratio, 1.0, 1e-8);
    }
    Ok(r)
}
