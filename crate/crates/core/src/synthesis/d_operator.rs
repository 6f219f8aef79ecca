//! The phase-space operator `D = (∂x - 2πiy)² + ∂y²`, the image of the
//! oscillator under the Alpha transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fourier::{partial, Axis};
use crate::grid::PlaneFunction;

/// `L u = ∂u/∂x - 2πiy·u`.
pub fn l_operator(u: &PlaneFunction) -> Result<PlaneFunction> {
    let dx = partial(u, Axis::X, 1)?;
    dx.sub(&u.weighted(|_, y| Complex64::new(0.0, 2.0 * PI * y)))
}

/// `D u = L(L u) + ∂²u/∂y²`.
pub fn d_operator(u: &PlaneFunction) -> Result<PlaneFunction> {
    let ll = l_operator(&l_operator(u)?)?;
    ll.add(&partial(u, Axis::Y, 2)?)
}

/// `D u = Δu - 4πiy ∂u/∂x - 4π²y² u`.
pub fn d_operator_expanded(u: &PlaneFunction) -> Result<PlaneFunction> {
    let lap = partial(u, Axis::X, 2)?.add(&partial(u, Axis::Y, 2)?)?;
    let drift = partial(u, Axis::X, 1)?.weighted(|_, y| Complex64::new(0.0, -4.0 * PI * y));
    let potential = u.weighted(|_, y| Complex64::new(-4.0 * PI * PI * y * y, 0.0));
    lap.add(&drift)?.add(&potential)
}
