//! Alpha transform calculus on discretized trace-class operators.
//!
//! Operators on `L²(ℝ)` are stored as dense kernels sampled on a self-dual grid
//! (spacing `n^{-1/2}`), on which translation by a grid step is a cyclic shift
//! and the centered DFT is exactly unitary. On top of that the crate provides
//! the Alpha transform `α(X)(x, y) = tr(T_{-x} M_{-y} X)` and its inverse `Θ`,
//! the `L¹(ℝ²)`-module action on operators, Schatten norms, the harmonic
//! oscillator, and the mollifier synthesis pipeline.

pub mod action;
pub mod alpha;
pub mod builtins;
pub mod bump;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod hermite;
pub mod linalg;
pub mod ncfk;
pub mod operator;
pub mod oscillator;
pub mod random;
pub mod report;
pub mod shifts;
pub mod suites;
pub mod synthesis;

pub use error::{Error, Result};
pub use fourier::{fourier_1d, fourier_2d, Sign};
pub use grid::{make_line_grid, GridMode, LineGrid, PlaneFunction, PlaneGrid, SampledFunction1D};
pub use hermite::{hermite_fn, HermiteBasis};
pub use operator::{op_compose, rank_one, Checked, KernelOperator, SchattenExponent, SingularValues};
pub use ncfk::{read_ncfk, write_ncfk, NcfkData};
pub use report::Report;
