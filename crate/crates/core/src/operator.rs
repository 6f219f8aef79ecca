//! Dense kernel representation of operators on `L²(ℝ)`.
//!
//! A [`KernelOperator`] stores samples `K(v_i, v_j)` of an integral kernel. The
//! operator acts by the quadrature rule `(Xg)(v_i) = h Σ_j K(v_i, v_j) g(v_j)`,
//! so the plain matrix representing it on sample vectors is `h·K`; trace and
//! singular values are read off that matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{LineGrid, SampledFunction1D};

/// Relative boundary magnitude below which a kernel counts as decayed.
pub const SURROGATE_THRESHOLD: f64 = 1e-8;

/// Number of outermost rows and columns inspected by the decay test.
pub const SURROGATE_BAND: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    grid: LineGrid,
    kernel: DMatrix<Complex64>,
}

/// A value paired with an optional accuracy warning.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked<T> {
    pub value: T,
    pub accuracy_warning: Option<String>,
}

impl<T> Checked<T> {
    pub fn clean(value: T) -> Self {
        Self {
            value,
            accuracy_warning: None,
        }
    }

    pub fn into_inner(self) -> T {
        self.value
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Checked<U> {
        Checked {
            value: f(self.value),
            accuracy_warning: self.accuracy_warning,
        }
    }
}

impl KernelOperator {
    pub fn new(grid: LineGrid, kernel: DMatrix<Complex64>) -> Result<Self> {
        if kernel.nrows() != grid.n() || kernel.ncols() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "kernel must be {0}×{0}, got {1}×{2}",
                grid.n(),
                kernel.nrows(),
                kernel.ncols()
            )));
        }
        Ok(Self { grid, kernel })
    }

    pub fn zeros(grid: LineGrid) -> Self {
        Self {
            grid,
            kernel: DMatrix::zeros(grid.n(), grid.n()),
        }
    }

    /// The identity, with kernel `δ_ij / h`.
    pub fn identity(grid: LineGrid) -> Self {
        Self {
            grid,
            kernel: DMatrix::identity(grid.n(), grid.n()) * Complex64::new(1.0 / grid.h(), 0.0),
        }
    }

    /// Operator whose action on sample vectors is the plain matrix `m`.
    pub fn from_matrix(grid: LineGrid, m: DMatrix<Complex64>) -> Result<Self> {
        let k = m * Complex64::new(1.0 / grid.h(), 0.0);
        Self::new(grid, k)
    }

    pub fn from_fn(grid: LineGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let kernel = DMatrix::from_fn(grid.n(), grid.n(), |i, j| f(grid.point(i), grid.point(j)));
        Self { grid, kernel }
    }

    #[inline]
    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    #[inline]
    pub fn kernel(&self) -> &DMatrix<Complex64> {
        &self.kernel
    }

    pub fn kernel_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.kernel
    }

    pub fn into_kernel(self) -> DMatrix<Complex64> {
        self.kernel
    }

    /// `h·K`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        &self.kernel * Complex64::new(self.grid.h(), 0.0)
    }

    pub fn apply(&self, g: &SampledFunction1D) -> Result<SampledFunction1D> {
        self.grid.require_same(g.grid())?;
        let v = nalgebra::DVector::from_column_slice(g.values());
        let out = &self.kernel * v * Complex64::new(self.grid.h(), 0.0);
        SampledFunction1D::new(self.grid, out.as_slice().to_vec())
    }

    /// `h Σ K(v_i, v_i)`.
    pub fn trace(&self) -> Complex64 {
        self.kernel.diagonal().iter().sum::<Complex64>() * self.grid.h()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            grid: self.grid,
            kernel: self.kernel.adjoint(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            kernel: &self.kernel * c,
        }
    }

    pub fn add(&self, other: &KernelOperator) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            kernel: &self.kernel + &other.kernel,
        })
    }

    pub fn sub(&self, other: &KernelOperator) -> Result<Self> {
        self.grid.require_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            kernel: &self.kernel - &other.kernel,
        })
    }

    /// # Panics
    /// If the decomposition fails to converge, which only happens for non-finite kernels.
    pub fn singular_values(&self) -> SingularValues {
        SingularValues::from_unsorted(crate::linalg::singular_values(&self.matrix()).expect("finite kernel"))
    }

    pub fn schatten_norm(&self, p: SchattenExponent) -> f64 {
        self.singular_values().norm(p)
    }

    /// `‖X‖_{S¹}`.
    pub fn trace_norm(&self) -> f64 {
        self.schatten_norm(SchattenExponent::ONE)
    }

    /// Largest entry magnitude in the outer band of rows and columns, relative to
    /// the largest entry overall. Zero for the zero kernel.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.grid.n();
        let peak = self.kernel.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let band = SURROGATE_BAND.min(n / 2);
        let mut edge = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let outer = i < band || i >= n - band || j < band || j >= n - band;
                if outer {
                    edge = edge.max(self.kernel[(i, j)].norm());
                }
            }
        }
        edge / peak
    }

    /// Grid-level stand-in for membership in the Schwartz operator class.
    pub fn is_schwartz_surrogate(&self) -> bool {
        self.boundary_ratio() < SURROGATE_THRESHOLD
    }

    /// A warning message when the decay test fails.
    pub fn decay_warning(&self, label: &str) -> Option<String> {
        let ratio = self.boundary_ratio();
        (ratio >= SURROGATE_THRESHOLD).then(|| {
            format!("{label}: kernel boundary magnitude {ratio:.3e} of peak exceeds {SURROGATE_THRESHOLD:e}")
        })
    }

    pub fn max_abs_diff(&self, other: &KernelOperator) -> Result<f64> {
        self.grid.require_same(&other.grid)?;
        Ok(self
            .kernel
            .iter()
            .zip(other.kernel.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `φ ⊗ ψ̄`, the kernel `φ(v)·conj(ψ(w))`.
pub fn rank_one(phi: &SampledFunction1D, psi: &SampledFunction1D) -> Result<KernelOperator> {
    phi.grid().require_same(psi.grid())?;
    let n = phi.grid().n();
    let a = phi.values();
    let b = psi.values();
    let kernel = DMatrix::from_fn(n, n, |i, j| a[i] * b[j].conj());
    KernelOperator::new(*phi.grid(), kernel)
}

/// Composition `AB`, kernel `h Σ_u A(v,u) B(u,w)`.
pub fn op_compose(a: &KernelOperator, b: &KernelOperator) -> Result<KernelOperator> {
    a.grid.require_same(&b.grid)?;
    KernelOperator::new(a.grid, &a.kernel * &b.kernel * Complex64::new(a.grid.h(), 0.0))
}

/// A Schatten exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenExponent(f64);

impl SchattenExponent {
    pub const ONE: SchattenExponent = SchattenExponent(1.0);
    pub const TWO: SchattenExponent = SchattenExponent(2.0);
    pub const INFINITY: SchattenExponent = SchattenExponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidArgument(format!("Schatten exponent must be at least 1, got {p}")))
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }

    /// `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        if self.0 == 1.0 {
            Self(f64::INFINITY)
        } else if self.0.is_infinite() {
            Self(1.0)
        } else {
            Self(self.0 / (self.0 - 1.0))
        }
    }
}

/// Singular values in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValues(Vec<f64>);

impl SingularValues {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    /// `(Σ σ^p)^{1/p}`, or `max σ` for `p = ∞`.
    pub fn norm(&self, p: SchattenExponent) -> f64 {
        lp_of(&self.0, p.0)
    }
}

/// `ℓ^p` norm of non-negative numbers, rescaled by the maximum for stability.
pub(crate) fn lp_of(values: &[f64], p: f64) -> f64 {
    let peak = values.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 || p.is_infinite() {
        return peak;
    }
    if p == 1.0 {
        return values.iter().sum();
    }
    let s: f64 = values.iter().map(|v| (v / peak).powf(p)).sum();
    peak * s.powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_fn;

    #[test]
    fn ground_projector_norms() {
        let g = LineGrid::self_dual(64).unwrap();
        let phi = hermite_fn(&g, 0).unwrap();
        let w = rank_one(&phi, &phi).unwrap();
        assert!((w.trace() - 1.0).norm() < 1e-12);
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert!((w.schatten_norm(SchattenExponent::new(p).unwrap()) - 1.0).abs() < 1e-12);
        }
        assert!(w.is_schwartz_surrogate());
    }

    #[test]
    fn orthogonal_rank_one_is_traceless() {
        let g = LineGrid::self_dual(64).unwrap();
        let a = hermite_fn(&g, 0).unwrap();
        let b = hermite_fn(&g, 1).unwrap();
        assert!(rank_one(&a, &b).unwrap().trace().norm() < 1e-14);
        let two = rank_one(&a.scaled(Complex64::new(2.0, 0.0)), &b).unwrap();
        let one = rank_one(&a, &b).unwrap().scaled(Complex64::new(2.0, 0.0));
        assert!(two.max_abs_diff(&one).unwrap() < 1e-15);
    }

    #[test]
    fn pythagorean_singular_values() {
        let g = LineGrid::self_dual(8).unwrap();
        let mut m = DMatrix::zeros(8, 8);
        m[(0, 0)] = Complex64::new(3.0, 0.0);
        m[(1, 1)] = Complex64::new(0.0, 4.0);
        let x = KernelOperator::from_matrix(g, m).unwrap();
        assert!((x.schatten_norm(SchattenExponent::TWO) - 5.0).abs() < 1e-12);
        assert!((x.trace_norm() - 7.0).abs() < 1e-12);
        assert!((x.schatten_norm(SchattenExponent::INFINITY) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_neutral() {
        let g = LineGrid::self_dual(16).unwrap();
        let a = KernelOperator::from_fn(g, |v, w| Complex64::new(v * w, v - w));
        let i = KernelOperator::identity(g);
        assert!(op_compose(&a, &i).unwrap().max_abs_diff(&a).unwrap() < 1e-12);
        assert!((i.trace() - 16.0).norm() < 1e-12);
    }

    #[test]
    fn conjugate_exponents() {
        assert!(SchattenExponent::ONE.conjugate().p().is_infinite());
        assert_eq!(SchattenExponent::INFINITY.conjugate().p(), 1.0);
        assert!((SchattenExponent::new(4.0 / 3.0).unwrap().conjugate().p() - 4.0).abs() < 1e-12);
        assert!(SchattenExponent::new(0.5).is_err());
    }
}
