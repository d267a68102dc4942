//! Frequency quantities `I`, `D`, `U = D/I`, `J` and `K = D − (2λ+δ/2) I`.

mod boundary;
mod curve;
mod solid;

pub use boundary::{
    d_boundary, d_d, dlog_i, frequency_of, gradient_energy_boundary, i_boundary, i_prime, ratio,
    s_boundary, Estimate, MIN_LN_I,
};
pub use curve::{curve, CurvePoint, CurveSummary, FrequencyCurve};
pub use solid::{
    d_solid, d_solid_with, i_solid, j_compute, j_prime, weighted_dirichlet_solid, DForm, Psi,
};
