//! Level-set (boundary) forms of I and D and their derivative formulas.
//!
//! On `{b = r}` every integrand is a sphere average times the level measure,
//! so these are closed-form evaluations carrying only rounding error.

use crate::error::{Error, Result};
use crate::fields::{Field, FieldSample};
use crate::models::{GeometrySample, SolitonModel};
use crate::numerics::Scaled;

const ROUND: f64 = 8.0 * f64::EPSILON;

/// A plain value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

pub(crate) struct Level {
    pub g: GeometrySample,
    pub s: FieldSample,
}

pub(crate) fn level(model: &SolitonModel, field: &Field, r: f64) -> Result<Level> {
    field.check_compatible(model)?;
    let g = model.eval_geometry(r)?;
    let s = field.eval_rho(g.rho)?;
    Ok(Level { g, s })
}

fn scaled(coef: f64, value: f64, err: f64, log_scale: f64) -> Scaled {
    let v = coef * value;
    Scaled {
        value: v,
        log_scale,
        err: coef.abs() * err + ROUND * v.abs(),
    }
}

/// `a / b` for two scaled quantities.
pub fn ratio(a: &Scaled, b: &Scaled) -> f64 {
    a.value / b.value * (a.log_scale - b.log_scale).exp()
}

/// `I(r) = r^{1−n} ∫_{b=r} |u|² |∇b|`.
pub fn i_boundary(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    Ok(i_from(model, &l))
}

pub(crate) fn i_from(model: &SolitonModel, l: &Level) -> Scaled {
    let c = l.g.r.powf(1.0 - model.nf()) * l.g.density * l.g.grad_b;
    scaled(c, l.s.value2, l.s.value2_err, l.s.log_scale)
}

/// `D(r) = (r^{2−n}/2) ∫_{b=r} ⟨∇|u|², ∇b/|∇b|⟩`.
pub fn d_boundary(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    Ok(d_from(model, &l))
}

pub(crate) fn d_from(model: &SolitonModel, l: &Level) -> Scaled {
    let c = 0.5 * l.g.r.powf(2.0 - model.nf()) * l.g.density;
    scaled(c, l.s.radial_deriv_u2, l.s.radial_err, l.s.log_scale)
}

/// `∫_{b=r} S |u|² / |∇b|`.
pub fn s_boundary(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    Ok(s_from(&l))
}

pub(crate) fn s_from(l: &Level) -> Scaled {
    let c = l.g.density * l.g.s / l.g.grad_b;
    scaled(c, l.s.value2, l.s.value2_err, l.s.log_scale)
}

/// `r^{3−n} ∫_{b=r} |∇u|² / |∇b|`, the Cauchy-Schwarz majorant of `U·D`.
pub fn gradient_energy_boundary(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    let c = l.g.r.powf(3.0 - model.nf()) * l.g.density / l.g.grad_b;
    Ok(scaled(c, l.s.grad_norm2, l.s.grad_err, l.s.log_scale))
}

/// `I'(r)` from the level-set derivative formula.
pub fn i_prime(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    Ok(i_prime_from(model, &l))
}

pub(crate) fn i_prime_from(model: &SolitonModel, l: &Level) -> Scaled {
    let r = l.g.r;
    let n = model.nf();
    let rn = r.powf(1.0 - n);
    let main = scaled(
        rn * l.g.density,
        l.s.radial_deriv_u2,
        l.s.radial_err,
        l.s.log_scale,
    );
    let corr = s_from(l).scale_by((2.0 * n / (r * r) - 1.0) * rn * 2.0 / r);
    main.add(&corr)
}

/// The S-correction `(2n r^{−2} − 1)(2 r^{1−n} / I) ∫_{b=r} S|u|²/|∇b|`
/// in `r (log I)' = 2U + correction`.
pub(crate) fn s_correction_from(model: &SolitonModel, l: &Level, i: &Scaled) -> Option<f64> {
    if !(i.value > 0.0) {
        return None;
    }
    let r = l.g.r;
    let n = model.nf();
    let s = s_from(l);
    Some((2.0 * n / (r * r) - 1.0) * 2.0 * r.powf(1.0 - n) * ratio(&s, i))
}

/// `(log I)'(r)`; undefined where `I ≤ 0`.
pub fn dlog_i(model: &SolitonModel, field: &Field, r: f64) -> Result<Estimate> {
    let l = level(model, field, r)?;
    let i = i_from(model, &l);
    dlog_i_from(model, &l, &i)
}

pub(crate) fn dlog_i_from(model: &SolitonModel, l: &Level, i: &Scaled) -> Result<Estimate> {
    if !(i.value > 0.0) {
        return Err(Error::UndefinedLog(format!(
            "I({}) = {} is not positive",
            l.g.r, i.value
        )));
    }
    let ip = i_prime_from(model, l);
    let v = ratio(&ip, i);
    Ok(Estimate {
        value: v,
        err: (ip.err / i.value.abs() + v.abs() * i.rel_err()) * (ip.log_scale - i.log_scale).exp()
            + ROUND * v.abs(),
    })
}

/// `D'(r) = ((2−n)/r + r/2) D + (r^{2−n}/2) ∫_{b=r} ℒ|u|² / |∇b|`.
pub fn d_d(model: &SolitonModel, field: &Field, r: f64) -> Result<Scaled> {
    let l = level(model, field, r)?;
    let d = d_from(model, &l);
    Ok(d_d_from(model, &l, &d))
}

pub(crate) fn d_d_from(model: &SolitonModel, l: &Level, d: &Scaled) -> Scaled {
    let r = l.g.r;
    let n = model.nf();
    let first = d.scale_by((2.0 - n) / r + r / 2.0);
    let c = 0.5 * r.powf(2.0 - n) * l.g.density * 2.0 / l.g.grad_b;
    let second = scaled(c, l.s.dirichlet(), l.s.dirichlet_err(), l.s.log_scale);
    first.add(&second)
}

/// `U = D / I` with its propagated error, when `I` is safely positive.
pub fn frequency_of(i: &Scaled, d: &Scaled) -> Option<Estimate> {
    if !(i.value > 0.0) || i.ln_abs() <= MIN_LN_I {
        return None;
    }
    let u = ratio(d, i);
    let rel_scale = (d.log_scale - i.log_scale).exp();
    let err = d.err / i.value * rel_scale + u.abs() * i.rel_err();
    Some(Estimate { value: u, err })
}

/// `ln(1e−300)`: smaller values of I leave U undefined.
pub const MIN_LN_I: f64 = -690.775_527_898_213_7;
