//! Stationary-phase analysis of `phi(xi) = v . xi - xi_1 / |xi|^alpha` and
//! direct quadrature of the frequency-localized kernel.

mod kernel;
mod phase;
mod split;
mod stationary;

pub use kernel::{bump_line_mass, bump_mass, kernel_at, kernel_direct, rescaled_kernel, Quadrature};
pub use phase::{hessian_det, phase_gradient, phase_hessian, PhaseSpec};
pub use split::{minimizing_lambda, near_budget, split_bound, split_budget_sup, SplitBound};
pub use stationary::{find_stationary, Annulus, Continuum, StationarySet, GRADIENT_TOL};
