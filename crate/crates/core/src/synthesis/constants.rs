//! Constants controlling `D(τ_δ α(X))` near the origin, and the pointwise bound
//! `|D(τ_δ α(X))| ≤ A₁δ⁻²r + A₂δ⁻¹ + A₃` on `B_δ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::alpha::alpha;
use crate::bump::{tau_jet, tau_sup_constants};
use crate::error::{Error, Result};
use crate::fourier::{partial, Axis};
use crate::grid::PlaneFunction;
use crate::operator::KernelOperator;
use crate::report::Report;
use crate::synthesis::d_operator::d_operator;
use crate::synthesis::mollifier::{is_resolvable, MollifierFamily};

/// Radial samples used for the closed-form `τ` sups.
pub const TAU_SUP_SAMPLES: usize = 200_000;

/// Trace magnitude, relative to `max(1, ‖X‖_{S¹})`, accepted as zero.
pub const TRACE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    /// `sup_{B₁} |∇α(X)|`
    pub c1: f64,
    /// `sup_{B₁} |Δα(X)|`
    pub c2: f64,
    /// `sup_{B₁} |τ|`
    pub d1: f64,
    /// `sup_{B₁} |∇τ|`
    pub d2: f64,
    /// `sup_{B₁} |Δτ|`
    pub d3: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// The same three `τ` sups read off the grid by spectral differentiation.
    pub d_grid: [f64; 3],
}

impl ConstantsLedger {
    pub fn from_parts(c1: f64, c2: f64, d: (f64, f64, f64), d_grid: [f64; 3]) -> Self {
        let (d1, d2, d3) = d;
        Self {
            c1,
            c2,
            d1,
            d2,
            d3,
            a1: d3 * c1,
            a2: (2.0 + 4.0 * PI) * d2 * c1,
            a3: d1 * c2 + (4.0 * PI + 4.0 * PI * PI) * d1 * c1,
            d_grid,
        }
    }

    /// `A₁δ⁻²r + A₂δ⁻¹ + A₃`.
    pub fn pointwise_bound(&self, delta: f64, r: f64) -> f64 {
        self.a1 * r / (delta * delta) + self.a2 / delta + self.a3
    }

    /// `(2π)^{1/p}((A₁(p+2)^{-1/p} + A₂2^{-1/p})δ^{2/p-1} + A₃2^{-1/p}δ^{2/p})`.
    pub fn lp_bound(&self, delta: f64, p: f64) -> f64 {
        let ip = 1.0 / p;
        (2.0 * PI).powf(ip)
            * ((self.a1 * (p + 2.0).powf(-ip) + self.a2 * 2f64.powf(-ip)) * delta.powf(2.0 * ip - 1.0)
                + self.a3 * 2f64.powf(-ip) * delta.powf(2.0 * ip))
    }

    pub fn record(&self, r: &mut Report) {
        for (name, v) in [
            ("C1", self.c1),
            ("C2", self.c2),
            ("D1", self.d1),
            ("D2", self.d2),
            ("D3", self.d3),
            ("A1", self.a1),
            ("A2", self.a2),
            ("A3", self.a3),
            ("D1_grid", self.d_grid[0]),
            ("D2_grid", self.d_grid[1]),
            ("D3_grid", self.d_grid[2]),
        ] {
            r.quantity(name, v);
        }
    }
}

pub(crate) fn require_trace_zero(x: &KernelOperator) -> Result<()> {
    let t = x.trace().norm();
    let tolerance = TRACE_TOLERANCE * x.trace_norm().max(1.0);
    if t > tolerance {
        return Err(Error::NonzeroTrace { trace: t, tolerance });
    }
    Ok(())
}

/// `α(X)` with its first and second spectral derivatives.
pub(crate) struct AlphaJet {
    pub a: PlaneFunction,
    pub ax: PlaneFunction,
    pub ay: PlaneFunction,
    pub lap: PlaneFunction,
}

impl AlphaJet {
    pub fn new(x: &KernelOperator) -> Result<Self> {
        let a = alpha(x)?;
        let ax = partial(&a, Axis::X, 1)?;
        let ay = partial(&a, Axis::Y, 1)?;
        let lap = partial(&a, Axis::X, 2)?.add(&partial(&a, Axis::Y, 2)?)?;
        Ok(Self { a, ax, ay, lap })
    }

    /// Sup over grid points with `r ≤ 1` of `|∇α|` and `|Δα|`.
    fn sups_on_unit_ball(&self) -> (f64, f64) {
        let g = *self.a.grid();
        let mut c = (0.0f64, 0.0f64);
        for i in 0..g.x.n() {
            for j in 0..g.y.n() {
                if g.x.point(i).hypot(g.y.point(j)) <= 1.0 {
                    let grad = (self.ax.at(i, j).norm_sqr() + self.ay.at(i, j).norm_sqr()).sqrt();
                    c.0 = c.0.max(grad);
                    c.1 = c.1.max(self.lap.at(i, j).norm());
                }
            }
        }
        c
    }

    /// `D(τ_δ α)` by the product rule, with the closed-form jet of `τ_δ`.
    pub fn d_of_product(&self, delta: f64) -> PlaneFunction {
        let g = *self.a.grid();
        let values = nalgebra::DMatrix::from_fn(g.x.n(), g.y.n(), |i, j| {
            let (x, y) = (g.x.point(i), g.y.point(j));
            let t = tau_jet(x, y, delta);
            if t.value == 0.0 && t.dx == 0.0 && t.dy == 0.0 && t.laplacian == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let a = self.a.at(i, j);
            let ax = self.ax.at(i, j);
            let ay = self.ay.at(i, j);
            let lap = self.lap.at(i, j);
            let drift = Complex64::new(0.0, -4.0 * PI * y);
            a * t.laplacian + (ax * t.dx + ay * t.dy) * 2.0 + lap * t.value
                + drift * (a * t.dx + ax * t.value)
                - a * (4.0 * PI * PI * y * y * t.value)
        });
        PlaneFunction::new(g, values).expect("shape preserved")
    }
}

/// Grid sups of `|τ|`, `|∇τ|`, `|Δτ|` from spectral derivatives of the sampled bump.
fn grid_tau_sups(fam: &MollifierFamily) -> Result<[f64; 3]> {
    let t = &fam.tau;
    let tx = partial(t, Axis::X, 1)?;
    let ty = partial(t, Axis::Y, 1)?;
    let lap = partial(t, Axis::X, 2)?.add(&partial(t, Axis::Y, 2)?)?;
    let g = *t.grid();
    let mut d = [0.0f64; 3];
    for i in 0..g.x.n() {
        for j in 0..g.y.n() {
            if g.x.point(i).hypot(g.y.point(j)) <= 1.0 {
                d[0] = d[0].max(t.at(i, j).norm());
                d[1] = d[1].max((tx.at(i, j).norm_sqr() + ty.at(i, j).norm_sqr()).sqrt());
                d[2] = d[2].max(lap.at(i, j).norm());
            }
        }
    }
    Ok(d)
}

pub fn constants_ledger(x: &KernelOperator, fam: &MollifierFamily) -> Result<ConstantsLedger> {
    require_trace_zero(x)?;
    let jet = AlphaJet::new(x)?;
    let (c1, c2) = jet.sups_on_unit_ball();
    Ok(ConstantsLedger::from_parts(
        c1,
        c2,
        tau_sup_constants(TAU_SUP_SAMPLES),
        grid_tau_sups(fam)?,
    ))
}

/// Pointwise bound on `B_δ` and vanishing of `D(τ_δ α(X))` outside it.
pub fn verify_pointwise_bound(x: &KernelOperator, fam: &MollifierFamily, delta: f64) -> Result<Report> {
    let ledger = constants_ledger(x, fam)?;
    let grid = *fam.grid();
    if !is_resolvable(&grid.x, delta) {
        return Err(Error::DeltaTooSmall {
            delta,
            floor: crate::synthesis::mollifier::delta_floor(&grid.x),
        });
    }
    let jet = AlphaJet::new(x)?;
    let u = jet.d_of_product(delta);
    let mut r = Report::new("pointwise-bound", &grid.x);
    r.quantity("delta", delta);
    ledger.record(&mut r);

    let mut violations = 0usize;
    let mut worst_ratio = 0.0f64;
    let mut inside_peak = 0.0f64;
    let mut outside_peak = 0.0f64;
    let mut bound_at_worst = (0.0, 0.0);
    for i in 0..grid.x.n() {
        for j in 0..grid.y.n() {
            let rad = grid.x.point(i).hypot(grid.y.point(j));
            let v = u.at(i, j).norm();
            if rad < delta {
                let b = ledger.pointwise_bound(delta, rad);
                inside_peak = inside_peak.max(v);
                if v > b {
                    violations += 1;
                }
                if b > 0.0 && v / b > worst_ratio {
                    worst_ratio = v / b;
                    bound_at_worst = (v, b);
                }
            } else {
                outside_peak = outside_peak.max(v);
            }
        }
    }

    // cross-check the product expansion against plain spectral differentiation
    let spectral = d_operator(&scaled_by_tau(&jet.a, delta))?;
    r.quantity("spectral_route_sup_difference", spectral.max_abs_diff(&u)?);

    r.quantity("peak_inside", inside_peak).quantity("peak_outside", outside_peak);
    r.quantity("worst_ratio", worst_ratio);
    r.quantity("worst_value", bound_at_worst.0).quantity("worst_bound", bound_at_worst.1);
    r.check_approx("violations_on_ball", violations as f64, 0.0, 0.0);
    r.check_le("outside_support_residual", outside_peak, 0.0, 1e-8 * inside_peak);
    Ok(r)
}

fn scaled_by_tau(a: &PlaneFunction, delta: f64) -> PlaneFunction {
    a.weighted(|x, y| Complex64::new(crate::bump::psi(x.hypot(y) / delta), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{LineGrid, PlaneGrid};
    use crate::hermite::hermite_fn;
    use crate::operator::rank_one;
    use crate::synthesis::mollifier::make_mollifier;

    fn hermite01(n: usize) -> KernelOperator {
        let g = LineGrid::self_dual(n).unwrap();
        rank_one(&hermite_fn(&g, 0).unwrap(), &hermite_fn(&g, 1).unwrap()).unwrap()
    }

    #[test]
    fn constants_are_positive_and_homogeneous() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let x = hermite01(64);
        let l = constants_ledger(&x, &fam).unwrap();
        for v in [l.c1, l.c2, l.d1, l.d2, l.d3, l.a1, l.a2, l.a3] {
            assert!(v.is_finite() && v > 0.0);
        }
        let l2 = constants_ledger(&x.scaled(Complex64::new(2.0, 0.0)), &fam).unwrap();
        assert!((l2.c1 - 2.0 * l.c1).abs() < 1e-12 * l.c1);
        assert!((l2.c2 - 2.0 * l.c2).abs() < 1e-12 * l.c2);
        assert_eq!((l2.d1, l2.d2, l2.d3), (l.d1, l.d2, l.d3));
    }

    #[test]
    fn nonzero_trace_rejected() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let g = LineGrid::self_dual(64).unwrap();
        let phi = hermite_fn(&g, 0).unwrap();
        let w = rank_one(&phi, &phi).unwrap();
        assert!(matches!(constants_ledger(&w, &fam), Err(Error::NonzeroTrace { .. })));
    }

    #[test]
    fn bound_holds_at_half() {
        let fam = make_mollifier(&PlaneGrid::self_dual(64).unwrap()).unwrap();
        let r = verify_pointwise_bound(&hermite01(64), &fam, 0.5).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
    }
}
