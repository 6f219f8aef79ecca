//! Translation and modulation unitaries, and the Heisenberg action on kernels.
//!
//! `(T_x s)(t) = s(t - x)` is realized band-limited, as a phase ramp
//! `e^{-2πiξx}` between the centered transforms; for `x = m·h` it reduces to a
//! cyclic shift by `m` samples. `(M_y s)(t) = e^{-2πiyt} s(t)` is diagonal.
//!
//! The action of `(x₁, y₁) ∈ ℝ²` on an operator is the conjugation
//! `X ↦ W X W*` with `W = T_{-y₁} M_{x₁}`; it satisfies
//! `α((x₁,y₁)·X)(x,y) = e^{-2πi(xx₁+yy₁)} α(X)(x,y)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fourier::{for_each_line, Axis, CenteredDft, Sign};
use crate::grid::{LineGrid, SampledFunction1D};
use crate::operator::KernelOperator;

fn translate_in_place(plan: &CenteredDft, buf: &mut [Complex64], scratch: &mut [Complex64], x: f64) {
    let g = *plan.grid();
    plan.apply_with_scratch(buf, scratch, Sign::Negative);
    for (k, z) in buf.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, -2.0 * PI * g.point(k) * x);
    }
    plan.apply_with_scratch(buf, scratch, Sign::Positive);
}

/// `T_x f`.
pub fn translate(f: &SampledFunction1D, x: f64) -> Result<SampledFunction1D> {
    let plan = CenteredDft::new(f.grid())?;
    let mut values = f.values().to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    translate_in_place(&plan, &mut values, &mut scratch, x);
    SampledFunction1D::new(*f.grid(), values)
}

/// `M_y f`.
pub fn modulate(f: &SampledFunction1D, y: f64) -> SampledFunction1D {
    let g = *f.grid();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, z)| z * Complex64::from_polar(1.0, -2.0 * PI * y * g.point(j)))
        .collect();
    SampledFunction1D::new(g, values).expect("length preserved")
}

/// The matrix of `T_x` on sample vectors. Requires a self-dual grid.
pub fn translate_op(grid: &LineGrid, x: f64) -> Result<DMatrix<Complex64>> {
    let plan = CenteredDft::new(grid)?;
    let mut m = DMatrix::<Complex64>::identity(grid.n(), grid.n());
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    for_each_line(&mut m, Axis::X, |col| translate_in_place(&plan, col, &mut scratch, x));
    Ok(m)
}

/// The diagonal matrix of `M_y` on sample vectors.
pub fn modulate_op(grid: &LineGrid, y: f64) -> DMatrix<Complex64> {
    let d = nalgebra::DVector::from_fn(grid.n(), |j, _| Complex64::from_polar(1.0, -2.0 * PI * y * grid.point(j)));
    DMatrix::from_diagonal(&d)
}

/// `W = T_{-y₁} M_{x₁}` as a matrix.
pub fn heisenberg_unitary(grid: &LineGrid, x1: f64, y1: f64) -> Result<DMatrix<Complex64>> {
    Ok(translate_op(grid, -y1)? * modulate_op(grid, x1))
}

/// `(x₁, y₁)·X = W X W*` with `W = T_{-y₁} M_{x₁}`.
pub fn heisenberg_action(x1: f64, y1: f64, x: &KernelOperator) -> Result<KernelOperator> {
    let grid = *x.grid();
    let plan = CenteredDft::new(&grid)?;
    let n = grid.n();
    let phase: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * x1 * grid.point(j)))
        .collect();
    let mut k = DMatrix::from_fn(n, n, |i, j| phase[i] * x.kernel()[(i, j)] * phase[j].conj());
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    for_each_line(&mut k, Axis::X, |col| translate_in_place(&plan, col, &mut scratch, -y1));
    let mut kt = k.adjoint();
    for_each_line(&mut kt, Axis::X, |col| translate_in_place(&plan, col, &mut scratch, -y1));
    KernelOperator::new(grid, kt.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(t: f64) -> Complex64 {
        Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0)
    }

    #[test]
    fn zero_shifts_are_identity() {
        let g = LineGrid::self_dual(32).unwrap();
        let id = DMatrix::<Complex64>::identity(32, 32);
        assert!((translate_op(&g, 0.0).unwrap() - &id).camax() < 1e-14);
        assert_eq!(modulate_op(&g, 0.0), id);
    }

    #[test]
    fn translated_gaussian() {
        let g = LineGrid::self_dual(256).unwrap();
        let f = SampledFunction1D::from_fn(g, gaussian);
        for shift in [g.h(), 0.37, -1.2] {
            let out = translate(&f, shift).unwrap();
            let exact = SampledFunction1D::from_fn(g, |t| gaussian(t - shift));
            assert!(out.max_abs_diff(&exact).unwrap() < 1e-10, "shift {shift}");
        }
    }

    #[test]
    fn on_grid_shift_is_cyclic() {
        let g = LineGrid::self_dual(16).unwrap();
        let f = SampledFunction1D::from_fn(g, |t| Complex64::new(t.sin(), t));
        let out = translate(&f, 3.0 * g.h()).unwrap();
        for j in 0..16 {
            assert!((out.values()[j] - f.values()[(j + 13) % 16]).norm() < 1e-13);
        }
    }

    #[test]
    fn unitary() {
        let g = LineGrid::self_dual(64).unwrap();
        let t = translate_op(&g, 0.123).unwrap();
        let id = DMatrix::<Complex64>::identity(64, 64);
        assert!((t.adjoint() * &t - &id).camax() < 1e-10);
        let m = modulate_op(&g, 0.77);
        assert!((m.adjoint() * &m - &id).camax() < 1e-12);
    }

    #[test]
    fn action_matches_explicit_conjugation() {
        let g = LineGrid::self_dual(32).unwrap();
        let x = KernelOperator::from_fn(g, |v, w| Complex64::new((-v * v - w * w).exp(), v * w));
        let w = heisenberg_unitary(&g, 0.4, -0.9).unwrap();
        let expected = &w * x.kernel() * w.adjoint();
        let got = heisenberg_action(0.4, -0.9, &x).unwrap();
        assert!((got.kernel() - expected).camax() < 1e-12);
    }
}
