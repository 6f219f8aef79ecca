//! The radial bump `τ(x, y) = ψ(√(x²+y²))`, equal to 1 on the disc of radius 1/2
//! and vanishing outside the unit disc.
//!
//! The transition uses `g(t) = e^{-1/t}`: `ψ(r) = g(1-r) / (g(1-r) + g(r-1/2))`.
//! Its first two radial derivatives are available in closed form, which lets the
//! gradient and Laplacian of any rescaled copy `τ_δ = τ(·/δ)` be evaluated
//! without spectral differentiation.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{PlaneFunction, PlaneGrid};

/// Radius of the plateau where `τ ≡ 1`.
pub const PLATEAU: f64 = 0.5;

/// `(g, g', g'')` at `t`, all zero for `t ≤ 0`.
fn g_derivs(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let g = (-1.0 / t).exp();
    let t2 = t * t;
    (g, g / t2, g * (1.0 / (t2 * t2) - 2.0 / (t2 * t)))
}

/// Radial profile `ψ(r)`.
pub fn psi(r: f64) -> f64 {
    psi_derivs(r).0
}

/// `(ψ, ψ', ψ'')` at radius `r ≥ 0`.
pub fn psi_derivs(r: f64) -> (f64, f64, f64) {
    if r <= PLATEAU {
        return (1.0, 0.0, 0.0);
    }
    if r >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    // a(r) = g(1-r), b(r) = g(r-1/2)
    let (a, ga1, ga2) = g_derivs(1.0 - r);
    let (b, b1, b2) = g_derivs(r - PLATEAU);
    let a1 = -ga1;
    let a2 = ga2;
    let s = a + b;
    let s1 = a1 + b1;
    let num = a1 * b - a * b1;
    let num1 = a2 * b - a * b2;
    let d1 = num / (s * s);
    let d2 = (num1 * s - 2.0 * num * s1) / (s * s * s);
    (a / s, d1, d2)
}

/// Value, gradient and Laplacian of `τ_δ` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpJet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub laplacian: f64,
}

impl BumpJet {
    pub fn gradient_norm(&self) -> f64 {
        self.dx.hypot(self.dy)
    }
}

/// Closed-form jet of `τ_δ(x, y) = ψ(r/δ)`.
pub fn tau_jet(x: f64, y: f64, delta: f64) -> BumpJet {
    let r = x.hypot(y);
    let s = r / delta;
    let (v, d1, d2) = psi_derivs(s);
    if d1 == 0.0 && d2 == 0.0 {
        return BumpJet {
            value: v,
            dx: 0.0,
            dy: 0.0,
            laplacian: 0.0,
        };
    }
    let radial = d1 / delta;
    BumpJet {
        value: v,
        dx: radial * x / r,
        dy: radial * y / r,
        laplacian: (d2 + d1 / s) / (delta * delta),
    }
}

pub fn tau(x: f64, y: f64) -> f64 {
    psi(x.hypot(y))
}

/// `τ_δ` sampled on `grid`.
pub fn bump_tau_scaled(grid: &PlaneGrid, delta: f64) -> PlaneFunction {
    PlaneFunction::from_real_fn(*grid, |x, y| psi(x.hypot(y) / delta))
}

/// `τ` sampled on `grid`; the grid must reach radius 1 in each axis.
pub fn bump_tau(grid: &PlaneGrid) -> Result<PlaneFunction> {
    for (name, axis) in [("x", &grid.x), ("y", &grid.y)] {
        if axis.half_extent() < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "{name}-axis half-width {} does not contain the unit disc",
                axis.half_extent()
            )));
        }
    }
    Ok(bump_tau_scaled(grid, 1.0))
}

/// Identifier of the bump definition: SHA-256 over a canonical description and
/// 1025 samples of `ψ` on `[0, 1]`.
pub fn tau_hash() -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"psi(r)=g(1-r)/(g(1-r)+g(r-1/2)), g(t)=exp(-1/t) for t>0, plateau 1/2, support 1");
    for i in 0..=1024 {
        hasher.update(psi(i as f64 / 1024.0).to_le_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Sup of `|τ|`, `|∇τ|` and `|Δτ|` over the unit disc, by dense radial sampling
/// of the closed-form derivatives.
pub fn tau_sup_constants(samples: usize) -> (f64, f64, f64) {
    let mut d = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..=samples {
        let r = PLATEAU + (1.0 - PLATEAU) * i as f64 / samples as f64;
        let jet = tau_jet(r, 0.0, 1.0);
        d.0 = d.0.max(jet.value.abs());
        d.1 = d.1.max(jet.gradient_norm());
        d.2 = d.2.max(jet.laplacian.abs());
    }
    d
}
