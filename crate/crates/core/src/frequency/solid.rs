//! Solid (volume) forms of I and D, and the Poisson quantity J.
//!
//! Volume integrals over `{b < r}` reduce to radial integrals in the
//! Euclidean radius with `dV = density(ρ) dρ`.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::boundary::{i_boundary, level};
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::models::SolitonModel;
use crate::numerics::quad::integrate_with;
use crate::numerics::{integrate_tail, NumericsConfig, Scaled};

const SCALE_SAMPLES: usize = 33;

/// Integrand sample: value and absolute rounding error, both times `e^{log_scale}`.
struct Point {
    value: f64,
    err: f64,
    log_scale: f64,
}

/// `∫_a^b f` for an integrand reported in log scale.
fn integrate_scaled<F>(f: F, a: f64, b: f64, cfg: &NumericsConfig) -> Result<Scaled>
where
    F: Fn(f64) -> Result<Point>,
{
    let mut reference = f64::NEG_INFINITY;
    for i in 0..SCALE_SAMPLES {
        let x = a + (b - a) * i as f64 / (SCALE_SAMPLES - 1) as f64;
        let p = f(x)?;
        if p.value != 0.0 {
            reference = reference.max(p.log_scale);
        }
    }
    if reference == f64::NEG_INFINITY {
        reference = 0.0;
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let eval = |x: f64| -> (f64, f64) {
        match f(x) {
            Ok(p) => {
                let w = (p.log_scale - reference).exp();
                (p.value * w, p.err * w)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                (f64::NAN, f64::NAN)
            }
        }
    };
    let main = integrate_with(
        &|x| eval(x).0,
        a,
        b,
        cfg.quad_abs_tol,
        cfg.quad_rel_tol,
        cfg.quad_max_intervals,
    );
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let main = main?;
    let floor = 1e-2 * f64::EPSILON * main.abs_integral;
    let rounding = match integrate_with(&|x| eval(x).1, a, b, floor, 1e-2, cfg.quad_max_intervals) {
        Ok(r) => r.value.abs() + r.error,
        Err(Error::QuadratureFailure {
            estimate, error, ..
        }) => estimate.abs() + error,
        Err(e) => return Err(e),
    };
    Ok(Scaled {
        value: main.value,
        log_scale: reference,
        err: main.error + rounding,
    })
}

/// Solid form of I relative to the inner level `r0`:
/// `I(r) = I(r0) + ∫_{r0<b<r} b^{1−n} {⟨∇|u|², ∇b⟩ + (2S|u|²/b³)(2n − b²)}`.
pub fn i_solid(
    model: &SolitonModel,
    field: &Field,
    r: f64,
    r0: f64,
    cfg: &NumericsConfig,
) -> Result<Scaled> {
    if !(r0 > model.b_min()) || !(r0 <= r) {
        return Err(Error::ParameterDomain(format!(
            "need b_min = {} < r0 = {r0} ≤ r = {r}",
            model.b_min()
        )));
    }
    level(model, field, r)?;
    let n = model.nf();
    let s_const = model.s_const();
    let two_n = 2.0 * n;
    let rho0 = model.rho_of(r0);
    let rho1 = model.rho_of(r);
    let integrand = |rho: f64| -> Result<Point> {
        let s = field.eval_rho(rho)?;
        let b = model.b_of_rho(rho);
        let w = b.powf(1.0 - n) * model.level_density(rho);
        let c_rad = w * rho / b;
        let c_s = w * 2.0 * s_const * (two_n - b * b) / (b * b * b);
        Ok(Point {
            value: c_rad * s.radial_deriv_u2 + c_s * s.value2,
            err: c_rad.abs() * s.radial_err + c_s.abs() * s.value2_err,
            log_scale: s.log_scale,
        })
    };
    let interior = integrate_scaled(integrand, rho0, rho1, cfg)?;
    Ok(interior.add(&i_boundary(model, field, r0)?))
}

/// Which side of `{b = r}` the solid Dirichlet integral is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DForm {
    /// `r^{2−n} e^{r²/4} ∫_{b<r} (|∇u|² + ⟨ℒu,u⟩) e^{−f}`.
    Interior,
    /// `−r^{2−n} e^{r²/4} ∫_{b>r} (|∇u|² + ⟨ℒu,u⟩) e^{−f}`, valid for L² fields
    /// where the integral over the whole space vanishes.
    Exterior,
}

/// Solid form of D: exterior for polynomial (L²) fields, interior otherwise.
pub fn d_solid(
    model: &SolitonModel,
    field: &Field,
    r: f64,
    cfg: &NumericsConfig,
) -> Result<Scaled> {
    let form = if field.profiles().is_some() {
        DForm::Exterior
    } else {
        DForm::Interior
    };
    d_solid_with(model, field, r, form, cfg)
}

pub fn d_solid_with(
    model: &SolitonModel,
    field: &Field,
    r: f64,
    form: DForm,
    cfg: &NumericsConfig,
) -> Result<Scaled> {
    level(model, field, r)?;
    let rho_r = model.rho_of(r);
    let pref = r.powf(2.0 - model.nf());
    // e^{r²/4} e^{−f} = e^{(ρ_r² − ρ²)/4}
    let weight_log = |rho: f64| -0.25 * (rho - rho_r) * (rho + rho_r);
    let integrand = |rho: f64| -> Result<Point> {
        let s = field.eval_rho(rho)?;
        let dens = model.level_density(rho);
        Ok(Point {
            value: dens * s.dirichlet(),
            err: dens * s.dirichlet_err(),
            log_scale: s.log_scale + weight_log(rho),
        })
    };
    match form {
        DForm::Interior => Ok(integrate_scaled(integrand, 0.0, rho_r, cfg)?.scale_by(pref)),
        DForm::Exterior => {
            let profiles = field.profiles().ok_or_else(|| {
                Error::Contract(format!(
                    "exterior form needs an L² polynomial field, got {}",
                    field.spec()
                ))
            })?;
            let dirichlet = (&profiles.grad2 + &profiles.luu).to_f64();
            let d = model.euclid_dim() as f64;
            let vol = model.level_density(1.0);
            // |P(ρ²)| ρ^{d−1} ≤ Σ |c_i| ρ^{2i+d−1}, integrated against the weight.
            let tail = |x: f64| -> f64 {
                dirichlet
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let p = 2.0 * i as f64 + d - 1.0;
                        let denom = 1.0 - 2.0 * (p - 1.0) / (x * x);
                        if denom <= 0.0 {
                            f64::INFINITY
                        } else {
                            c.abs() * 2.0 * x.powf(p - 1.0) * weight_log(x).exp() / denom
                        }
                    })
                    .sum::<f64>()
                    * vol
            };
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let f = |rho: f64| match integrand(rho) {
                Ok(p) => p.value * p.log_scale.exp(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            };
            let q = integrate_tail(f, rho_r, tail, cfg);
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            let q = q?;
            let gamma = 4.0 * (dirichlet.coeffs().len() as f64 + 2.0) * f64::EPSILON;
            let loose = NumericsConfig {
                quad_rel_tol: 1e-2,
                quad_abs_tol: (gamma * q.abs_integral).max(f64::MIN_POSITIVE),
                ..cfg.clone()
            };
            let err_f = |rho: f64| match integrand(rho) {
                Ok(p) => p.err * p.log_scale.exp(),
                Err(_) => f64::INFINITY,
            };
            let rounding = integrate_tail(err_f, rho_r, |x| gamma * tail(x), &loose)
                .map(|r| r.value + r.error)
                .unwrap_or(gamma * tail(rho_r));
            Ok(Scaled {
                value: -pref * q.value,
                log_scale: 0.0,
                err: pref * (q.error + rounding),
            })
        }
    }
}

/// `∫_{b≤t} (|∇u|² + ⟨ℒu,u⟩) e^{−f}` computed directly.
pub fn weighted_dirichlet_solid(
    model: &SolitonModel,
    field: &Field,
    t: f64,
    cfg: &NumericsConfig,
) -> Result<Scaled> {
    level(model, field, t)?;
    let k_half = model.s_const();
    let integrand = |rho: f64| -> Result<Point> {
        let s = field.eval_rho(rho)?;
        let dens = model.level_density(rho);
        Ok(Point {
            value: dens * s.dirichlet(),
            err: dens * s.dirichlet_err(),
            log_scale: s.log_scale - rho * rho / 4.0 - k_half,
        })
    };
    integrate_scaled(integrand, 0.0, model.rho_of(t), cfg)
}

/// Inhomogeneous term of the Poisson inequality `⟨ℒu,u⟩ ≥ −λ|u|² − ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Psi {
    Zero,
    Constant(f64),
    /// `ψ = e^{−f}`
    Gaussian,
    /// `ψ = max(0, −⟨ℒu,u⟩ − λ|u|²)` of the field itself.
    Deficit,
}

impl Psi {
    /// `ψ` on the sphere `|y| = ρ`.
    pub fn value(&self, model: &SolitonModel, field: &Field, rho: f64) -> Result<f64> {
        let v = match *self {
            Psi::Zero => 0.0,
            Psi::Constant(c) => c,
            Psi::Gaussian => (-rho * rho / 4.0 - model.s_const()).exp(),
            Psi::Deficit => field.deficit(rho)?,
        };
        if !(v >= 0.0) {
            return Err(Error::Contract(format!(
                "ψ must be non-negative, got {v} at ρ = {rho}"
            )));
        }
        Ok(v)
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::Zero => f.write_str("zero"),
            Psi::Constant(c) => write!(f, "const:{c}"),
            Psi::Gaussian => f.write_str("gauss"),
            Psi::Deficit => f.write_str("deficit"),
        }
    }
}

impl FromStr for Psi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Psi::Zero),
            "gauss" => Ok(Psi::Gaussian),
            "deficit" => Ok(Psi::Deficit),
            _ => {
                let c = s
                    .strip_prefix("const:")
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| Error::parse(s, "expected zero, gauss, deficit or const:<c>"))?;
                if !(c >= 0.0) {
                    return Err(Error::Contract(format!("ψ must be non-negative, got {c}")));
                }
                Ok(Psi::Constant(c))
            }
        }
    }
}

/// `J(r) = ∫_{b<r} b^{2−n} ψ`.
pub fn j_compute(
    model: &SolitonModel,
    field: &Field,
    psi: Psi,
    r: f64,
    cfg: &NumericsConfig,
) -> Result<Scaled> {
    level(model, field, r)?;
    if psi == Psi::Zero {
        return Ok(Scaled::zero());
    }
    let n = model.nf();
    let integrand = |rho: f64| -> Result<Point> {
        let v = psi.value(model, field, rho)?;
        let w = model.b_of_rho(rho).powf(2.0 - n) * model.level_density(rho);
        Ok(Point {
            value: w * v,
            err: 4.0 * f64::EPSILON * w * v,
            log_scale: 0.0,
        })
    };
    integrate_scaled(integrand, 0.0, model.rho_of(r), cfg)
}

/// `J'(r) = r^{2−n} ∫_{b=r} ψ / |∇b|`.
pub fn j_prime(model: &SolitonModel, field: &Field, psi: Psi, r: f64) -> Result<f64> {
    let l = level(model, field, r)?;
    let v = psi.value(model, field, l.g.rho)?;
    Ok(r.powf(2.0 - model.nf()) * l.g.density * v / l.g.grad_b)
}
