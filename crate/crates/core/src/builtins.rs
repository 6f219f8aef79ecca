//! Named operators available without input files.

use crate::error::{Error, Result};
use crate::grid::LineGrid;
use crate::hermite::hermite_fn;
use crate::operator::{rank_one, KernelOperator};
use crate::random::random_tracezero;

pub const BUILTIN_NAMES: [&str; 4] = ["hermite01", "gauss-proj", "random-tracezero", "zero"];

/// `hermite01` is `φ₀ ⊗ φ̄₁`, `gauss-proj` is `φ₀ ⊗ φ̄₀`, `random-tracezero` is
/// drawn from `seed`, and `zero` is the zero operator.
pub fn builtin_operator(name: &str, grid: &LineGrid, seed: u64) -> Result<KernelOperator> {
    match name {
        "hermite01" => rank_one(&hermite_fn(grid, 0)?, &hermite_fn(grid, 1)?),
        "gauss-proj" => {
            let phi = hermite_fn(grid, 0)?;
            rank_one(&phi, &phi)
        }
        "random-tracezero" => random_tracezero(grid, seed),
        "zero" => Ok(KernelOperator::zeros(*grid)),
        other => Err(Error::InvalidArgument(format!(
            "unknown builtin operator '{other}' (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

pub fn describe_builtin(name: &str) -> &'static str {
    match name {
        "hermite01" => "rank one, phi_0 tensor conj(phi_1)",
        "gauss-proj" => "rank one, phi_0 tensor conj(phi_0)",
        "random-tracezero" => "four random Gaussian wave-packet rank-one terms, trace removed along phi_0 tensor conj(phi_0)",
        "zero" => "zero operator",
        _ => "unknown",
    }
}
