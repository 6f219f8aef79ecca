//! Seeded random inputs for the property sweeps.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::grid::{LineGrid, PlaneFunction, PlaneGrid, SampledFunction1D};
use crate::hermite::hermite_fn;
use crate::operator::{rank_one, KernelOperator};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Kernel with independent complex Gaussian entries.
pub fn dense_kernel<R: Rng>(grid: &LineGrid, rng: &mut R) -> KernelOperator {
    let n = grid.n();
    let k = DMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    KernelOperator::new(*grid, k).expect("square kernel")
}

/// Plane function with independent complex Gaussian samples.
pub fn dense_plane<R: Rng>(grid: &PlaneGrid, rng: &mut R) -> PlaneFunction {
    let v = DMatrix::from_fn(grid.x.n(), grid.y.n(), |_, _| complex_normal(rng));
    PlaneFunction::new(*grid, v).expect("shape matches")
}

/// `e^{-πa(t-c)²} e^{2πiωt}` with random centre, width and frequency.
pub fn wave_packet<R: Rng>(grid: &LineGrid, rng: &mut R) -> SampledFunction1D {
    let c = rng.random_range(-1.0..1.0);
    let w = rng.random_range(-1.0..1.0);
    let a = rng.random_range(0.5..2.0);
    SampledFunction1D::from_fn(*grid, |t| Complex64::from_polar((-PI * a * (t - c) * (t - c)).exp(), 2.0 * PI * w * t))
}

/// Sum of `terms` smooth Gaussian packets in the plane with complex weights.
pub fn smooth_plane<R: Rng>(grid: &PlaneGrid, terms: usize, rng: &mut R) -> PlaneFunction {
    let mut out = PlaneFunction::zeros(*grid);
    for _ in 0..terms {
        let (cx, cy) = (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let (wx, wy) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let a = rng.random_range(0.5..2.0);
        let c = complex_normal(rng);
        let bump = PlaneFunction::from_fn(*grid, |x, y| {
            let r2 = (x - cx).powi(2) + (y - cy).powi(2);
            c * Complex64::from_polar((-PI * a * r2).exp(), 2.0 * PI * (wx * x + wy * y))
        });
        out = out.add(&bump).expect("same grid");
    }
    out
}

/// Random smooth operator of small rank, with its trace removed along the
/// ground-state projector.
pub fn random_tracezero(grid: &LineGrid, seed: u64) -> Result<KernelOperator> {
    let mut rng = seeded(seed);
    let mut x = KernelOperator::zeros(*grid);
    for _ in 0..4 {
        let a = wave_packet(grid, &mut rng);
        let b = wave_packet(grid, &mut rng);
        let c = complex_normal(&mut rng);
        x = x.add(&rank_one(&a, &b)?.scaled(c))?;
    }
    let phi0 = hermite_fn(grid, 0)?;
    let w = rank_one(&phi0, &phi0)?;
    x.sub(&w.scaled(x.trace()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let g = LineGrid::self_dual(32).unwrap();
        let a = random_tracezero(&g, 5).unwrap();
        let b = random_tracezero(&g, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_tracezero(&g, 6).unwrap());
        assert!(a.trace().norm() < 1e-12);
    }
}
