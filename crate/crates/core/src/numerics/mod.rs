//! Quadrature, ODE integration, finite differences and log-scale arithmetic.

mod config;
pub mod fd;
pub mod logspace;
pub mod ode;
pub mod quad;

pub use config::{GridSpec, NumericsConfig};
pub use fd::{central_diff, richardson_diff, FdEstimate};
pub use logspace::{
    format_f64, format_scaled, integrate_log, log_add, log_sum_exp, LogQuad, Scaled,
};
pub use ode::{ode_solve, rk_fixed, DenseSolution};
pub use quad::{gaussian_moment_tail, integrate, integrate_tail, QuadResult};
