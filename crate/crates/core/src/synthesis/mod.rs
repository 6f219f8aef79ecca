//! Mollifiers, the phase-space operator `D`, the decay ladder and the
//! construction of a synthesizing kernel `ρ`.

pub mod approx;
pub mod constants;
pub mod d_operator;
pub mod decay;
pub mod mollifier;
pub mod rho;

pub use approx::{approximate_schwartz, approximate_schwartz_detailed, SchwartzApproximation};
pub use constants::{constants_ledger, verify_pointwise_bound, ConstantsLedger};
pub use d_operator::{d_operator, d_operator_expanded, l_operator};
pub use decay::{decay_ladder, DecayRow, DecayTable};
pub use mollifier::{make_mollifier, tau_delta, versal_sample, MollifierFamily, TauDelta, VersalSample};
pub use rho::{find_rho, RhoResult};
