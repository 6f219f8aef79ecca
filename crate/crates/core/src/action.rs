//! The `L¹(ℝ²)`-module action `q·X = ∬ q(x₁, y₁) (x₁, y₁)·X dx₁ dy₁`.
//!
//! [`act_direct`] evaluates the quadrature sum term by term. [`act_spectral`]
//! uses `α(q·X) = q̂·α(X)` and returns `Θ(q̂·α(X))`. The two routes are kept side
//! by side so that each can certify the other.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::alpha::{alpha, theta};
use crate::error::{Error, Result};
use crate::fourier::{fourier_2d, partial, Axis, Sign};
use crate::grid::{PlaneFunction, PlaneGrid};
use crate::operator::{Checked, KernelOperator};
use crate::oscillator::{apply_h, apply_p, apply_q};
use crate::report::Report;
use crate::synthesis::d_operator::{d_operator, l_operator};

/// Largest grid accepted by [`act_direct`] unless a cap is given explicitly.
pub const DEFAULT_QUADRATURE_CAP: usize = 64;

fn require_phase_space(q: &PlaneFunction, x: &KernelOperator) -> Result<PlaneGrid> {
    let plane = PlaneGrid::square(*x.grid());
    if !q.grid().same_as(&plane) {
        return Err(Error::GridMismatch(
            "the weight must live on the square of the operator grid".into(),
        ));
    }
    Ok(plane)
}

/// Quadrature sum `h² Σ q(x₁, y₁)·((x₁, y₁)·X)` with the default cap.
pub fn act_direct(q: &PlaneFunction, x: &KernelOperator) -> Result<KernelOperator> {
    act_direct_with_cap(q, x, DEFAULT_QUADRATURE_CAP)
}

/// Quadrature sum over all nodes `(x_d, y_m)` of the weight grid.
///
/// Translation by `y_m = m·h` is applied as a plain index shift in which
/// entries leaving the window are dropped (no periodic wrap), so this route
/// shares no approximation with the spectral one beyond the sampling itself.
/// Partial sums are combined pairwise in a fixed order, so the result does not
/// depend on the thread count.
pub fn act_direct_with_cap(q: &PlaneFunction, x: &KernelOperator, cap: usize) -> Result<KernelOperator> {
    let g = *x.grid();
    let n = g.n();
    if n > cap {
        return Err(Error::BudgetExceeded { n, cap });
    }
    require_phase_space(q, x)?;
    let h = g.h();
    let half = (n / 2) as isize;
    // phase[d][Δ + n] = e^{-2πi x_d Δ h}
    let phase: Vec<Vec<Complex64>> = (0..n)
        .map(|d| {
            let xd = g.point(d);
            (0..2 * n)
                .map(|t| Complex64::from_polar(1.0, -2.0 * PI * xd * (t as f64 - n as f64) * h))
                .collect()
        })
        .collect();
    let k = x.kernel();
    let qv = q.values();
    let partials: Vec<DMatrix<Complex64>> = (0..n)
        .into_par_iter()
        .map(|mi| {
            let m = mi as isize - half;
            let mut acc = DMatrix::<Complex64>::zeros(n, n);
            let lo = (-m).max(0) as usize;
            let hi = (n as isize - m).min(n as isize) as usize;
            for d in 0..n {
                let w = qv[(d, mi)];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ph = &phase[d];
                for l in lo..hi {
                    let ls = (l as isize + m) as usize;
                    for i in lo..hi {
                        let is = (i as isize + m) as usize;
                        acc[(i, l)] += w * ph[i + n - l] * k[(is, ls)];
                    }
                }
            }
            acc
        })
        .collect();
    let total = pairwise_sum(partials).unwrap_or_else(|| DMatrix::zeros(n, n));
    KernelOperator::new(g, total * Complex64::new(h * h, 0.0))
}

fn pairwise_sum(mut parts: Vec<DMatrix<Complex64>>) -> Option<DMatrix<Complex64>> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop()
}

/// `q·X = Θ(q̂·α(X))`.
pub fn act_spectral(q: &PlaneFunction, x: &KernelOperator) -> Result<Checked<KernelOperator>> {
    require_phase_space(q, x)?;
    let qhat = fourier_2d(q, Sign::Negative)?;
    let out = theta(&qhat.mul(&alpha(x)?)?)?;
    Ok(Checked {
        value: out,
        accuracy_warning: x.decay_warning("module action input"),
    })
}

/// Which implementation of the action a check should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionRoute {
    Direct,
    Spectral,
}

impl ActionRoute {
    fn name(self) -> &'static str {
        match self {
            ActionRoute::Direct => "direct",
            ActionRoute::Spectral => "spectral",
        }
    }

    pub fn act(self, q: &PlaneFunction, x: &KernelOperator) -> Result<KernelOperator> {
        match self {
            ActionRoute::Direct => act_direct(q, x),
            ActionRoute::Spectral => Ok(act_spectral(q, x)?.value),
        }
    }
}

fn relative(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// `α(q·X) = q̂·α(X)` pointwise, with the action computed by `route`.
pub fn verify_multiplier(q: &PlaneFunction, x: &KernelOperator, route: ActionRoute, tolerance: f64) -> Result<Report> {
    let acted = route.act(q, x)?;
    let lhs = alpha(&acted)?;
    let rhs = fourier_2d(q, Sign::Negative)?.mul(&alpha(x)?)?;
    let err = lhs.max_abs_diff(&rhs)?;
    let scale = rhs.sup_norm();
    let mut r = Report::new(format!("multiplier-{}", route.name()), x.grid());
    r.quantity("sup_error", err).quantity("sup_rhs", scale);
    r.quantity("trace_acted", acted.trace().norm());
    r.check_le("multiplier_relative_sup_error", relative(err, scale), 0.0, tolerance);
    let qhat0 = fourier_2d(q, Sign::Negative)?.at(x.grid().center(), x.grid().center());
    let trace_err = (acted.trace() - qhat0 * x.trace()).norm();
    r.check_le("trace_identity", trace_err, 0.0, tolerance.max(1e-6) * x.trace_norm().max(1.0));
    Ok(r)
}

/// `P(q·X) = (-2πix₁q)·X + q·(PX)` in S¹, and `α(P(q·X)) = (∂x - 2πiy)α(q·X)`.
pub fn verify_product_rule_p(q: &PlaneFunction, x: &KernelOperator, route: ActionRoute) -> Result<Report> {
    let qx = route.act(q, x)?;
    let left = apply_p(&qx)?;
    let weighted = q.weighted(|x1, _| Complex64::new(0.0, -2.0 * PI * x1));
    let px = apply_p(x)?;
    let right = route.act(&weighted, x)?.add(&route.act(q, &px.value)?)?;
    product_report("product-rule-p", x, left, right, l_operator(&alpha(&qx)?)?, alpha(&apply_p(&qx)?.value)?)
}

/// `Q(q·X) = (-2πiy₁q)·X + q·(QX)` in S¹, and `α(Q(q·X)) = ∂y α(q·X)`.
pub fn verify_product_rule_q(q: &PlaneFunction, x: &KernelOperator, route: ActionRoute) -> Result<Report> {
    let qx = route.act(q, x)?;
    let left = apply_q(&qx);
    let weighted = q.weighted(|_, y1| Complex64::new(0.0, -2.0 * PI * y1));
    let qxx = apply_q(x);
    let right = route.act(&weighted, x)?.add(&route.act(q, &qxx.value)?)?;
    product_report(
        "product-rule-q",
        x,
        left,
        right,
        partial(&alpha(&qx)?, Axis::Y, 1)?,
        alpha(&apply_q(&qx).value)?,
    )
}

fn product_report(
    suite: &str,
    x: &KernelOperator,
    left: Checked<KernelOperator>,
    right: KernelOperator,
    alpha_expected: PlaneFunction,
    alpha_got: PlaneFunction,
) -> Result<Report> {
    let mut r = Report::new(suite, x.grid());
    let scale = left.value.trace_norm();
    let dist = left.value.sub(&right)?.trace_norm();
    r.quantity("s1_left", scale).quantity("s1_distance", dist);
    r.warn_opt(left.accuracy_warning);
    r.check_le("operator_identity_relative_s1", relative(dist, scale), 0.0, 1e-3);
    let err = alpha_got.max_abs_diff(&alpha_expected)?;
    let ascale = alpha_expected.sup_norm();
    r.quantity("alpha_sup_error", err);
    r.check_le("alpha_identity_relative_sup", relative(err, ascale), 0.0, 1e-3);
    Ok(r)
}

/// `α(PX) = (∂x - 2πiy)α(X)` and `α(QX) = ∂y α(X)`.
pub fn verify_alpha_derivatives(x: &KernelOperator, tolerance: f64) -> Result<Report> {
    let ax = alpha(x)?;
    let p = apply_p(x)?;
    let q = apply_q(x);
    let ap = alpha(&p.value)?;
    let aq = alpha(&q.value)?;
    let ep = ap.max_abs_diff(&l_operator(&ax)?)?;
    let eq = aq.max_abs_diff(&partial(&ax, Axis::Y, 1)?)?;
    let mut r = Report::new("derivatives", x.grid());
    r.warn_opt(p.accuracy_warning);
    r.quantity("sup_alpha", ax.sup_norm());
    r.quantity("sup_error_p", ep).quantity("sup_error_q", eq);
    r.check_le("alpha_p_identity", ep, 0.0, tolerance);
    r.check_le("alpha_q_identity", eq, 0.0, tolerance);
    Ok(r)
}

/// `α(H(q·X)) = D α(q·X)` with the spectral action.
pub fn verify_oscillator_intertwine(q: &PlaneFunction, x: &KernelOperator, tolerance: f64) -> Result<Report> {
    let qx = act_spectral(q, x)?;
    let hq = apply_h(&qx.value)?;
    let lhs = alpha(&hq.value)?;
    let rhs = d_operator(&alpha(&qx.value)?)?;
    let err = lhs.max_abs_diff(&rhs)?;
    let scale = rhs.sup_norm();
    let mut r = Report::new("oscillator-intertwine", x.grid());
    r.warn_opt(qx.accuracy_warning);
    r.quantity("sup_error", err).quantity("sup_rhs", scale);
    r.check_le("intertwine_relative_sup", relative(err, scale), 0.0, tolerance);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LineGrid;
    use crate::hermite::hermite_fn;
    use crate::operator::rank_one;

    fn gaussian_weight(plane: PlaneGrid) -> PlaneFunction {
        PlaneFunction::from_real_fn(plane, |x, y| 2.0 * (-2.0 * PI * (x * x + y * y)).exp())
    }

    fn ground(n: usize) -> KernelOperator {
        let g = LineGrid::self_dual(n).unwrap();
        let phi = hermite_fn(&g, 0).unwrap();
        rank_one(&phi, &phi).unwrap()
    }

    #[test]
    fn zero_weight_gives_zero() {
        let x = ground(16);
        let q = PlaneFunction::zeros(PlaneGrid::square(*x.grid()));
        assert_eq!(act_direct(&q, &x).unwrap().kernel().iter().map(|z| z.norm()).sum::<f64>(), 0.0);
    }

    #[test]
    fn budget_cap() {
        let x = ground(16);
        let q = gaussian_weight(PlaneGrid::square(*x.grid()));
        assert!(matches!(
            act_direct_with_cap(&q, &x, 8),
            Err(Error::BudgetExceeded { n: 16, cap: 8 })
        ));
    }

    #[test]
    fn single_node_is_heisenberg_action() {
        let g = LineGrid::self_dual(16).unwrap();
        let x = KernelOperator::from_fn(g, |v, w| Complex64::new((-(v * v) - w * w).exp(), 0.1 * v));
        let plane = PlaneGrid::square(g);
        let (d, m) = (10, 11);
        let mut q = PlaneFunction::zeros(plane);
        q.values_mut()[(d, m)] = Complex64::new(1.0 / (g.h() * g.h()), 0.0);
        let direct = act_direct(&q, &x).unwrap();
        let shifted = crate::shifts::heisenberg_action(g.point(d), g.point(m), &x).unwrap();
        // rows and columns shifted in from outside the window are dropped by the direct route
        let shift = (m as isize - 8) as usize;
        for i in 0..16 - shift {
            for l in 0..16 - shift {
                assert!((direct.kernel()[(i, l)] - shifted.kernel()[(i, l)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn routes_agree_on_gaussian_data() {
        let x = ground(32);
        let q = gaussian_weight(PlaneGrid::square(*x.grid()));
        let d = act_direct(&q, &x).unwrap();
        let s = act_spectral(&q, &x).unwrap();
        assert!(s.accuracy_warning.is_none());
        assert!(d.sub(&s.value).unwrap().trace_norm() < 1e-3);
    }

    #[test]
    fn multiplier_identity_both_routes() {
        let x = ground(32);
        let q = gaussian_weight(PlaneGrid::square(*x.grid()));
        assert!(verify_multiplier(&q, &x, ActionRoute::Direct, 1e-3).unwrap().pass);
        assert!(verify_multiplier(&q, &x, ActionRoute::Spectral, 1e-10).unwrap().pass);
    }
}
