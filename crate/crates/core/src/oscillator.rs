//! The operators `P = d/dt`, `Q = 2πit` and the oscillator `H = P² + Q²`
//! acting on kernels from the left.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fourier::{for_each_line, Axis, CenteredDft};
use crate::grid::{LineGrid, SampledFunction1D};
use crate::hermite::HermiteBasis;
use crate::linalg::hermitian_eigenvalues;
use crate::operator::{lp_of, Checked, KernelOperator};

/// Eigenvalue of `H` on the `k`-th Hermite function.
pub fn oscillator_eigenvalue(k: usize) -> f64 {
    -2.0 * PI * (2 * k + 1) as f64
}

fn differentiate_rows(x: &KernelOperator, order: u32) -> Result<KernelOperator> {
    let plan = CenteredDft::new(x.grid())?;
    let mut k = x.kernel().clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    for_each_line(&mut k, Axis::X, |col| plan.differentiate_with_scratch(col, &mut scratch, order));
    KernelOperator::new(*x.grid(), k)
}

fn multiply_rows(x: &KernelOperator, w: impl Fn(f64) -> Complex64) -> KernelOperator {
    let g = *x.grid();
    let weights: Vec<Complex64> = (0..g.n()).map(|i| w(g.point(i))).collect();
    let k = DMatrix::from_fn(g.n(), g.n(), |i, j| weights[i] * x.kernel()[(i, j)]);
    KernelOperator::new(g, k).expect("shape preserved")
}

/// `PX`: kernel `∂K/∂v`, by spectral differentiation in the first argument.
pub fn apply_p(x: &KernelOperator) -> Result<Checked<KernelOperator>> {
    let out = differentiate_rows(x, 1)?;
    Ok(Checked {
        value: out,
        accuracy_warning: x.decay_warning("P input"),
    })
}

/// `QX`: kernel `2πi·v·K(v, w)`.
pub fn apply_q(x: &KernelOperator) -> Checked<KernelOperator> {
    Checked {
        value: multiply_rows(x, |v| Complex64::new(0.0, 2.0 * PI * v)),
        accuracy_warning: x.decay_warning("Q input"),
    }
}

/// `HX = P²X + Q²X`.
pub fn apply_h(x: &KernelOperator) -> Result<Checked<KernelOperator>> {
    let p2 = differentiate_rows(x, 2)?;
    let q2 = multiply_rows(x, |v| Complex64::new(-4.0 * PI * PI * v * v, 0.0));
    Ok(Checked {
        value: p2.add(&q2)?,
        accuracy_warning: x.decay_warning("H input"),
    })
}

/// `H φ` for a sampled function.
pub fn apply_h_vector(f: &SampledFunction1D) -> Result<SampledFunction1D> {
    let plan = CenteredDft::new(f.grid())?;
    let g = *f.grid();
    let mut values = f.values().to_vec();
    plan.differentiate(&mut values, 2);
    for (j, z) in values.iter_mut().enumerate() {
        let v = g.point(j);
        *z -= f.values()[j] * (4.0 * PI * PI * v * v);
    }
    SampledFunction1D::new(g, values)
}

/// `H⁻¹X` restricted to the span of the first `m` Hermite functions: the
/// columns of the kernel are expanded in the basis and mode `k` is divided by
/// `-2π(2k+1)`. The warning reports how much of the kernel lies outside the span.
pub fn apply_h_inv(x: &KernelOperator, m: usize) -> Result<Checked<KernelOperator>> {
    let g = *x.grid();
    let basis = HermiteBasis::new(&g, m)?;
    let b = basis.matrix();
    let coeffs = b.adjoint() * x.kernel() * Complex64::new(g.h(), 0.0);
    let projected = &b * &coeffs;
    let mut scaled = coeffs;
    for k in 0..m {
        let inv = Complex64::new(1.0 / oscillator_eigenvalue(k), 0.0);
        scaled.row_mut(k).iter_mut().for_each(|z| *z *= inv);
    }
    let out = KernelOperator::new(g, &b * scaled)?;
    let total = x.kernel().norm();
    let residual = (x.kernel() - projected).norm();
    let warning = (total > 0.0 && residual > 1e-6 * total).then(|| {
        format!(
            "H inverse: {:.3e} of the kernel lies outside the first {m} Hermite modes",
            residual / total
        )
    });
    Ok(Checked {
        value: out,
        accuracy_warning: warning,
    })
}

/// `‖H⁻¹‖_{S^p}` from the first `terms` eigenvalues of the continuum oscillator.
pub fn h_inv_schatten_series(p: f64, terms: usize) -> f64 {
    let values: Vec<f64> = (0..terms).map(|k| 1.0 / oscillator_eigenvalue(k).abs()).collect();
    lp_of(&values, p)
}

/// Matrix of `H` acting on sample vectors.
pub fn oscillator_matrix(grid: &LineGrid) -> Result<DMatrix<Complex64>> {
    let plan = CenteredDft::new(grid)?;
    let n = grid.n();
    let mut m = DMatrix::<Complex64>::identity(n, n);
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
    for_each_line(&mut m, Axis::X, |col| plan.differentiate_with_scratch(col, &mut scratch, 2));
    for i in 0..n {
        let v = grid.point(i);
        m[(i, i)] -= Complex64::new(4.0 * PI * PI * v * v, 0.0);
    }
    Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Eigenvalues of the grid oscillator, in increasing order of magnitude.
pub fn oscillator_spectrum(grid: &LineGrid) -> Result<Vec<f64>> {
    let m = oscillator_matrix(grid)?;
    let mut ev = hermitian_eigenvalues(&m)?;
    ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    Ok(ev)
}

/// `‖H⁻¹‖_{S^p}` for the grid oscillator.
pub fn h_inv_schatten_grid(grid: &LineGrid, p: f64) -> Result<f64> {
    let inv: Vec<f64> = oscillator_spectrum(grid)?.iter().map(|l| 1.0 / l.abs()).collect();
    Ok(lp_of(&inv, p))
}

/// `‖Hφ_k + 2π(2k+1)φ_k‖ / (2π(2k+1))` for a sampled Hermite function.
pub fn eigen_residual(phi: &SampledFunction1D, k: usize) -> Result<f64> {
    let hphi = apply_h_vector(phi)?;
    let lambda = oscillator_eigenvalue(k);
    let r = hphi.sub(&phi.scaled(Complex64::new(lambda, 0.0)))?;
    Ok(r.l2_norm() / lambda.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_fn;
    use crate::operator::rank_one;

    #[test]
    fn hermite_eigen_residuals() {
        let g = LineGrid::self_dual(256).unwrap();
        for k in 0..=10 {
            let phi = hermite_fn(&g, k).unwrap();
            assert!(eigen_residual(&phi, k).unwrap() < 1e-6, "k = {k}");
        }
    }

    #[test]
    fn q_of_ground_projector() {
        let g = LineGrid::self_dual(64).unwrap();
        let phi = hermite_fn(&g, 0).unwrap();
        let w = rank_one(&phi, &phi).unwrap();
        let q = apply_q(&w);
        assert!(q.accuracy_warning.is_none());
        let v = phi.values();
        for i in 0..64 {
            for j in 0..64 {
                let expected = Complex64::new(0.0, 2.0 * PI * g.point(i)) * v[i] * v[j];
                assert!((q.value.kernel()[(i, j)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn inverse_undoes_h_on_low_modes() {
        let g = LineGrid::self_dual(128).unwrap();
        let a = hermite_fn(&g, 3).unwrap();
        let b = hermite_fn(&g, 5).unwrap();
        let x = rank_one(&a, &b).unwrap();
        let hx = apply_h(&x).unwrap().value;
        let back = apply_h_inv(&hx, 10).unwrap();
        assert!(back.value.max_abs_diff(&x).unwrap() < 1e-8);
        assert!(back.accuracy_warning.is_none());
    }

    #[test]
    fn series_norm_limit() {
        assert!((h_inv_schatten_series(2.0, 2000) - 1.0 / 32f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn grid_spectrum_starts_with_oscillator_levels() {
        let g = LineGrid::self_dual(128).unwrap();
        let ev = oscillator_spectrum(&g).unwrap();
        for k in 0..5 {
            assert!((ev[k] - oscillator_eigenvalue(k)).abs() < 1e-8 * ev[k].abs());
        }
    }
}
