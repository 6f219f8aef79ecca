//! The synthesis pipeline: given a trace-zero `X` and `ε > 0`, find
//! `ρ = τ̌_{δ₀}` with `ρ̂ ≡ 1` near the origin and `‖ρ·X‖_{S¹} < ε`.

use num_complex::Complex64;

use crate::action::act_spectral;
use crate::error::{Error, Result};
use crate::fourier::{fourier_2d, Sign};
use crate::grid::PlaneFunction;
use crate::operator::KernelOperator;
use crate::report::Report;
use crate::synthesis::approx::approximate_schwartz_detailed;
use crate::synthesis::constants::require_trace_zero;
use crate::synthesis::mollifier::{dyadic_ladder, tau_delta, MollifierFamily};

/// Largest accepted deviation of `ρ̂` from 1 on the plateau ball.
pub const PLATEAU_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RhoResult {
    pub rho: PlaneFunction,
    pub delta0: f64,
    /// `‖ρ·X‖_{S¹}`.
    pub final_norm: f64,
    pub report: Report,
}

/// Walk `δ = 1, 1/2, 1/4, …` over the resolvable scales of the family grid.
pub fn find_rho(x: &KernelOperator, eps: f64, fam: &MollifierFamily) -> Result<RhoResult> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    require_trace_zero(x)?;
    let grid = *fam.grid();
    let v = fam.versal;
    let approx_budget = eps / (2.0 * v);
    let approx = approximate_schwartz_detailed(x, approx_budget)?;
    let xp = approx.z;

    let mut report = Report::new("find-rho", &grid.x);
    report.quantity("epsilon", eps).quantity("versal", v);
    report.quantity("input_s1_norm", x.trace_norm());
    report.quantity("approximation_rank", approx.rank as f64);
    report.quantity("approximation_modes", approx.modes as f64);
    report.check_lt("approximation_error", approx.error, approx_budget);
    report.check_le("approximation_trace", xp.trace().norm(), 0.0, 1e-10 * xp.trace_norm().max(1e-300));

    let mut best = (f64::INFINITY, f64::NAN);
    for delta in dyadic_ladder(&grid.x, usize::MAX) {
        let td = tau_delta(fam, delta)?;
        let acted = act_spectral(&td.tau_check, &xp)?;
        report.warn_opt(acted.accuracy_warning);
        let norm = acted.value.trace_norm();
        report.quantity(format!("s1_norm_approx@{delta}"), norm);
        if norm < best.0 {
            best = (norm, delta);
        }
        if norm < eps / 2.0 {
            let rho = td.tau_check;
            let final_norm = act_spectral(&rho, x)?.value.trace_norm();
            let rho_l1 = rho.l1_norm();
            report.quantity("delta0", delta).quantity("rho_l1_norm", rho_l1);
            report.quantity("final_norm", final_norm);
            report.check_lt("mollified_approximation_below_half_eps", norm, eps / 2.0);
            report.check_le(
                "triangle_bound",
                final_norm,
                norm + rho_l1 * x.sub(&xp)?.trace_norm(),
                1e-9 * eps,
            );
            report.check_lt("final_norm_below_eps", final_norm, eps);
            let dev = plateau_deviation(&rho, delta)?;
            report.quantity("plateau_deviation", dev);
            report.check_le("rho_hat_is_one_on_plateau", dev, 0.0, PLATEAU_TOLERANCE);
            return Ok(RhoResult {
                rho,
                delta0: delta,
                final_norm,
                report,
            });
        }
    }
    report.quantity("best_norm", best.0).quantity("best_delta", best.1);
    report.check_lt("mollified_approximation_below_half_eps", best.0, eps / 2.0);
    Err(Error::SynthesisExhausted {
        best_norm: best.0,
        best_delta: best.1,
        report: Box::new(report),
    })
}

/// `max |ρ̂ - 1|` over grid points of the closed ball of radius `δ/2`.
pub fn plateau_deviation(rho: &PlaneFunction, delta: f64) -> Result<f64> {
    let hat = fourier_2d(rho, Sign::Negative)?;
    let g = *rho.grid();
    let mut dev = 0.0f64;
    for i in 0..g.x.n() {
        for j in 0..g.y.n() {
            if g.x.point(i).hypot(g.y.point(j)) <= delta / 2.0 {
                dev = dev.max((hat.at(i, j) - Complex64::new(1.0, 0.0)).norm());
            }
        }
    }
    Ok(dev)
}
