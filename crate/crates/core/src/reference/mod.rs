//! Independent ground truth: closed forms, adaptive quadrature, a micro-step
//! Runge-Kutta integrator, fixture formulas and slope fitting.

mod exact;
mod fixtures;
mod quadrature;
mod rk4;
mod slope;

pub use exact::{exact_exp_macro, exact_pure_oscillatory};
pub use fixtures::{
    cdi_linear_reference, cdi_nonlinear_reference, freqdep_reference, linear_step_reference,
    nonlinear_step_reference, taylor_poly,
};
pub use quadrature::{integrate, integrate_oscillatory, integrate_partitioned, QuadratureResult};
pub use rk4::{max_micro_step, rk4_micro_solve};
pub use slope::fit_slope;
