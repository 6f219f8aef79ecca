//! Approximation of a trace-zero operator by a trace-zero operator whose left
//! factors are finite Hermite expansions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SampledFunction1D;
use crate::hermite::{hermite_fn, max_resolvable_index, HermiteBasis};
use crate::linalg::svd;
use crate::operator::{rank_one, KernelOperator};

/// Outcome of [`approximate_schwartz_detailed`].
#[derive(Debug, Clone)]
pub struct SchwartzApproximation {
    pub z: KernelOperator,
    /// Rank kept after truncating the singular value expansion.
    pub rank: usize,
    /// Number of Hermite functions used for the left factors.
    pub modes: usize,
    /// `‖X - Z‖_{S¹}`.
    pub error: f64,
    /// Trace of `Z` before correction was `tr(X₂)`; this is what was removed.
    pub trace_correction: Complex64,
}

/// `Z` with `tr(Z) = 0` and `‖X - Z‖_{S¹} < ε`.
pub fn approximate_schwartz(x: &KernelOperator, eps: f64) -> Result<KernelOperator> {
    Ok(approximate_schwartz_detailed(x, eps)?.z)
}

pub fn approximate_schwartz_detailed(x: &KernelOperator, eps: f64) -> Result<SchwartzApproximation> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let g = *x.grid();
    let h = g.h();
    let m = x.matrix();
    let d = svd(&m)?;
    let sigma = &d.sigma;
    let total: f64 = sigma.iter().sum();
    let tr = x.trace().norm();
    if tr > 1e-8 * total.max(f64::MIN_POSITIVE) && tr > 0.0 {
        return Err(Error::NonzeroTrace {
            trace: tr,
            tolerance: 1e-8 * total,
        });
    }

    // (1) smallest rank with tail below ε/4
    let mut rank = 0;
    let mut tail = total;
    while rank < sigma.len() && tail >= eps / 4.0 {
        tail -= sigma[rank];
        rank += 1;
    }
    let root_h = h.sqrt();
    let mut phis = Vec::with_capacity(rank);
    let mut psis = Vec::with_capacity(rank);
    for k in 0..rank {
        let s = d.sigma[k];
        phis.push(SampledFunction1D::new(g, d.u.column(k).iter().map(|z| z * s / root_h).collect())?);
        psis.push(SampledFunction1D::new(g, d.v.column(k).iter().map(|z| z / root_h).collect())?);
    }

    // (2) Hermite projection of the left factors
    let target = if rank > 0 { eps / (4.0 * rank as f64) } else { f64::INFINITY };
    let max_modes = max_resolvable_index(&g) + 1;
    let mut projected = Vec::new();
    let mut modes = 0;
    if rank > 0 {
        let basis = HermiteBasis::new(&g, max_modes)?;
        let b = basis.matrix();
        let coeffs: Vec<Vec<Complex64>> = phis
            .iter()
            .map(|phi| {
                (0..max_modes)
                    .map(|m| phi.inner(basis.get(m)).expect("same grid"))
                    .collect()
            })
            .collect();
        let mut found = None;
        for m in 1..=max_modes {
            let candidate: Vec<SampledFunction1D> = coeffs
                .iter()
                .map(|c| {
                    let vals: Vec<Complex64> = (0..g.n())
                        .map(|j| (0..m).map(|k| c[k] * b[(j, k)]).sum())
                        .collect();
                    SampledFunction1D::new(g, vals).expect("length matches")
                })
                .collect();
            let ok = candidate
                .iter()
                .zip(&phis)
                .all(|(p, phi)| phi.sub(p).expect("same grid").l2_norm() < target);
            if ok {
                found = Some((m, candidate));
                break;
            }
        }
        match found {
            Some((m, c)) => {
                modes = m;
                projected = c;
            }
            None => {
                return Err(Error::ResolutionExceeded(format!(
                    "left factors need more than the {max_modes} Hermite functions this grid resolves"
                )))
            }
        }
    }

    // (3) trace correction with the ground-state projector
    let mut x2 = KernelOperator::zeros(g);
    for (p, psi) in projected.iter().zip(&psis) {
        x2 = x2.add(&rank_one(p, psi)?)?;
    }
    let tr2 = x2.trace();
    let phi0 = hermite_fn(&g, 0)?;
    let w = rank_one(&phi0, &phi0)?;
    let z = x2.sub(&w.scaled(tr2))?;
    let error = x.sub(&z)?.trace_norm();
    Ok(SchwartzApproximation {
        z,
        rank,
        modes,
        error,
        trace_correction: tr2,
    })
}
