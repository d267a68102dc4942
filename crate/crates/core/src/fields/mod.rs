//! Test fields: exact polynomial eigenfunctions, their gradients, and
//! growing (non-L²) solutions, reduced to sphere-averaged radial profiles.

mod exact;
mod growing;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::models::SolitonModel;
use crate::numerics::NumericsConfig;

pub use exact::{eigen_residual, half_integer, hermite_poly, is_eigen, product_poly, radial_poly};
pub use growing::{
    default_parity, polynomial_parity, GrowingSolution, Parity, PrueferState, DEFAULT_X_MAX,
};
use poly::{q, q_frac, q_to_f64, F64Poly, MPoly, UPoly, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    HermitePoly,
    RadialPoly,
    ProductMode,
    GradientField,
    GrowingSolution,
    Custom,
}

/// Sphere-averaged level-set data of a field at Euclidean radius `ρ`.
///
/// True values are the stored ones times `e^{log_scale}`; the `*_err`
/// entries are absolute bounds in the same scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub value2: f64,
    pub radial_deriv_u2: f64,
    pub grad_norm2: f64,
    pub lu_dot_u: f64,
    pub log_scale: f64,
    pub value2_err: f64,
    pub radial_err: f64,
    pub grad_err: f64,
    pub luu_err: f64,
}

impl FieldSample {
    /// `|∇u|² + ⟨ℒu, u⟩`, the solid Dirichlet integrand.
    pub fn dirichlet(&self) -> f64 {
        self.grad_norm2 + self.lu_dot_u
    }

    pub fn dirichlet_err(&self) -> f64 {
        self.grad_err + self.luu_err
    }
}

/// Exact radial profiles in `t = ρ²`, sphere-averaged.
#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    pub u2: UPoly,
    pub grad2: UPoly,
    pub luu: UPoly,
}

#[derive(Debug, Clone)]
struct FloatProfiles {
    u2: F64Poly,
    grad2: F64Poly,
    luu: F64Poly,
}

#[derive(Debug, Clone)]
enum FieldData {
    Poly {
        components: Vec<MPoly>,
        profiles: Profiles,
        float: FloatProfiles,
    },
    Growing {
        solution: Arc<GrowingSolution>,
        log_amplitude: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Field {
    pub kind: FieldKind,
    pub lambda: f64,
    lambda_exact: Option<Q>,
    euclid_dim: u32,
    spec: String,
    data: FieldData,
}

impl Field {
    fn from_components(kind: FieldKind, lambda: Q, components: Vec<MPoly>, spec: String) -> Field {
        let d = components[0].nvars();
        let mut u2 = MPoly::zero(d);
        let mut grad2 = MPoly::zero(d);
        let mut luu = MPoly::zero(d);
        for c in &components {
            u2 = &u2 + &(c * c);
            for i in 0..d {
                let p = c.partial(i);
                grad2 = &grad2 + &(&p * &p);
            }
            luu = &luu + &(&c.drift_laplacian() * c);
        }
        let profiles = Profiles {
            u2: u2.sphere_average(),
            grad2: grad2.sphere_average(),
            luu: luu.sphere_average(),
        };
        let float = FloatProfiles {
            u2: profiles.u2.to_f64(),
            grad2: profiles.grad2.to_f64(),
            luu: profiles.luu.to_f64(),
        };
        Field {
            kind,
            lambda: q_to_f64(&lambda),
            lambda_exact: Some(lambda),
            euclid_dim: d as u32,
            spec,
            data: FieldData::Poly {
                components,
                profiles,
                float,
            },
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn lambda_exact(&self) -> Option<&Q> {
        self.lambda_exact.as_ref()
    }

    /// Dimension of the Euclidean factor the field lives on.
    pub fn euclid_dim(&self) -> u32 {
        self.euclid_dim
    }

    pub fn components(&self) -> Option<&[MPoly]> {
        match &self.data {
            FieldData::Poly { components, .. } => Some(components),
            FieldData::Growing { .. } => None,
        }
    }

    pub fn profiles(&self) -> Option<&Profiles> {
        match &self.data {
            FieldData::Poly { profiles, .. } => Some(profiles),
            FieldData::Growing { .. } => None,
        }
    }

    pub fn growing(&self) -> Option<&GrowingSolution> {
        match &self.data {
            FieldData::Growing { solution, .. } => Some(solution),
            FieldData::Poly { .. } => None,
        }
    }

    /// Exact polynomial kinds that satisfy `ℒu = −λu`.
    pub fn is_exact_eigen(&self) -> bool {
        match (self.components(), &self.lambda_exact) {
            (Some(c), Some(l)) if self.kind != FieldKind::Custom => exact::is_eigen(c, l),
            _ => false,
        }
    }

    /// True for the identically zero field.
    pub fn is_zero(&self) -> bool {
        self.components().is_some_and(exact::is_zero_field)
    }

    /// `|u|²` is constant, so `D ≡ 0` and `U ≡ 0`.
    pub fn is_constant(&self) -> bool {
        self.profiles()
            .is_some_and(|p| p.u2.degree().unwrap_or(0) == 0 && p.grad2.is_zero())
    }

    /// `ℒu + λu` per component (exact kinds only).
    pub fn eigen_residual(&self) -> Option<Vec<MPoly>> {
        Some(exact::eigen_residual(
            self.components()?,
            self.lambda_exact.as_ref()?,
        ))
    }

    pub fn check_compatible(&self, model: &SolitonModel) -> Result<()> {
        if model.euclid_dim() != self.euclid_dim {
            return Err(Error::Incompatible {
                field: self.spec.clone(),
                model: model.spec(),
                reason: format!(
                    "field lives on R^{} but the model's Euclidean factor is R^{}",
                    self.euclid_dim,
                    model.euclid_dim()
                ),
            });
        }
        Ok(())
    }

    /// Sphere-averaged sample at the level `b = r`.
    pub fn eval(&self, model: &SolitonModel, r: f64) -> Result<FieldSample> {
        self.check_compatible(model)?;
        let g = model.eval_geometry(r)?;
        self.eval_rho(g.rho)
    }

    /// Sample on the sphere `|y| = rho` (no model check).
    pub fn eval_rho(&self, rho: f64) -> Result<FieldSample> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "radius must be ≥ 0, got {rho}"
            )));
        }
        match &self.data {
            FieldData::Poly { float, .. } => {
                let t = rho * rho;
                let rad = 2.0 * rho * float.u2.eval_deriv(t);
                let gamma_rad = 2.0 * (float.u2.degree() as f64 + 2.0) * f64::EPSILON;
                Ok(FieldSample {
                    value2: float.u2.eval(t),
                    radial_deriv_u2: rad,
                    grad_norm2: float.grad2.eval(t),
                    lu_dot_u: float.luu.eval(t),
                    log_scale: 0.0,
                    value2_err: float.u2.rounding_bound(t),
                    radial_err: gamma_rad * 2.0 * rho * float.u2.eval_deriv_abs(t),
                    grad_err: float.grad2.rounding_bound(t),
                    luu_err: float.luu.rounding_bound(t),
                })
            }
            FieldData::Growing {
                solution,
                log_amplitude,
            } => {
                let s = solution.state(rho)?;
                let (sin, cos) = s.theta.sin_cos();
                // d/dσ and d/dθ of each quantity bound its propagated error.
                let e = 2.0 * s.sigma_err;
                let th = s.theta_err;
                let floor = 1e-15;
                Ok(FieldSample {
                    value2: cos * cos,
                    radial_deriv_u2: 2.0 * cos * sin,
                    grad_norm2: sin * sin,
                    lu_dot_u: -solution.lambda * cos * cos,
                    log_scale: 2.0 * s.sigma + 2.0 * log_amplitude,
                    value2_err: e * cos * cos + 2.0 * th * (cos * sin).abs() + floor,
                    radial_err: 2.0 * (e * (cos * sin).abs() + th) + floor,
                    grad_err: e * sin * sin + 2.0 * th * (cos * sin).abs() + floor,
                    luu_err: solution.lambda
                        * (e * cos * cos + 2.0 * th * (cos * sin).abs() + floor),
                })
            }
        }
    }

    /// Pointwise deficit `max(0, −⟨ℒu,u⟩ − λ|u|²)` of the sphere-averaged data.
    pub fn deficit(&self, rho: f64) -> Result<f64> {
        let s = self.eval_rho(rho)?;
        let v = -(s.lu_dot_u + self.lambda * s.value2);
        Ok(if s.log_scale == 0.0 {
            v.max(0.0)
        } else {
            (v * s.log_scale.exp()).max(0.0)
        })
    }

    /// The field `c·u`.
    pub fn scaled(&self, c: &Q) -> Field {
        let spec = format!("{}*{}", self.spec, c);
        match &self.data {
            FieldData::Poly { components, .. } => {
                let comps = components.iter().map(|p| p.scale(c)).collect();
                let mut f = Field::from_components(
                    self.kind,
                    self.lambda_exact.clone().unwrap_or_else(Q::zero),
                    comps,
                    spec,
                );
                f.lambda = self.lambda;
                f.lambda_exact = self.lambda_exact.clone();
                f
            }
            FieldData::Growing {
                solution,
                log_amplitude,
            } => Field {
                spec,
                data: FieldData::Growing {
                    solution: Arc::clone(solution),
                    log_amplitude: log_amplitude + c.abs().to_f64().unwrap_or(f64::NAN).ln(),
                },
                ..self.clone()
            },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

/// Monic Hermite polynomial on the line, `λ = m/2`.
pub fn hermite(m: u32) -> Field {
    let p = MPoly::from_univariate(&hermite_poly(m), 1, 0);
    Field::from_components(
        FieldKind::HermitePoly,
        half_integer(m),
        vec![p],
        format!("hermite:{m}"),
    )
}

/// Radial eigenfunction of degree `m` in `b²` on a flat model, `λ = m`.
pub fn radial_eigenfunction(model: &SolitonModel, m: u32) -> Result<Field> {
    if model.k != 0 {
        return Err(Error::Incompatible {
            field: format!("radial:{m}"),
            model: model.spec(),
            reason: "radial eigenfunctions need k = 0".into(),
        });
    }
    let d = model.euclid_dim();
    let p = MPoly::radial(&radial_poly(d, m), d as usize);
    Ok(Field::from_components(
        FieldKind::RadialPoly,
        q(m as i64),
        vec![p],
        format!("radial:{m}"),
    ))
}

/// Separated mode `Π h_{m_i}(y_i)` on the Euclidean factor, `λ = Σ m_i / 2`.
pub fn product_mode(model: &SolitonModel, degrees: &[u32]) -> Result<Field> {
    let spec = format!(
        "prod:{}",
        degrees
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    if degrees.len() != model.euclid_dim() as usize {
        return Err(Error::Incompatible {
            field: spec,
            model: model.spec(),
            reason: format!(
                "expected {} degrees (one per Euclidean coordinate; modes varying on the compact factor are not supported)",
                model.euclid_dim()
            ),
        });
    }
    let total: u32 = degrees.iter().sum();
    Ok(Field::from_components(
        FieldKind::ProductMode,
        q_frac(total as i64, 2),
        vec![product_poly(degrees)],
        spec,
    ))
}

/// `u = ∇v` for an exact scalar eigenfunction `v`, `λ = λ_v − 1/2`.
pub fn gradient_field(v: &Field) -> Result<Field> {
    let spec = format!("grad:{}", v.spec);
    let reject = |reason: &str| Error::Incompatible {
        field: spec.clone(),
        model: format!("R^{}", v.euclid_dim),
        reason: reason.into(),
    };
    let comps = match v.components() {
        Some(c) if c.len() == 1 && v.is_exact_eigen() => c,
        _ => {
            return Err(reject(
                "the inner field must be an exact scalar eigenfunction",
            ))
        }
    };
    let lambda_v = v.lambda_exact.clone().expect("exact eigen kinds carry λ");
    if lambda_v < q_frac(1, 2) {
        return Err(Error::ParameterDomain(format!(
            "gradient needs λ_v ≥ 1/2, got {lambda_v}"
        )));
    }
    let d = v.euclid_dim as usize;
    let grads = (0..d).map(|i| comps[0].partial(i)).collect();
    Ok(Field::from_components(
        FieldKind::GradientField,
        lambda_v - q_frac(1, 2),
        grads,
        spec,
    ))
}

/// Sum of Hermite polynomials on the line with `λ = max m_i / 2`; satisfies
/// `⟨ℒu,u⟩ ≥ −λ|u|² − ψ` with a compactly supported deficit `ψ`.
pub fn mix_field(degrees: &[u32]) -> Result<Field> {
    if degrees.is_empty() {
        return Err(Error::ParameterDomain(
            "mix needs at least one degree".into(),
        ));
    }
    let u = degrees
        .iter()
        .fold(UPoly::zero(), |acc, &m| &acc + &hermite_poly(m));
    if u.is_zero() {
        return Err(Error::ParameterDomain("mix degrees cancel to zero".into()));
    }
    let top = *degrees.iter().max().expect("non-empty");
    let spec = format!(
        "mix:{}",
        degrees
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(Field::from_components(
        FieldKind::Custom,
        q_frac(top as i64, 2),
        vec![MPoly::from_univariate(&u, 1, 0)],
        spec,
    ))
}

/// Non-polynomial solution of the line eigen-ODE, tabulated on `[0, x_max]`.
pub fn growing_solution(
    lambda: f64,
    parity: Parity,
    x_max: f64,
    cfg: &NumericsConfig,
) -> Result<Field> {
    if !(lambda > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "growing solutions need λ > 0, got {lambda}"
        )));
    }
    let sol = GrowingSolution::solve(lambda, parity, x_max, cfg)?;
    let spec = format!("grow:{lambda}:{}", sol.parity);
    Ok(Field {
        kind: FieldKind::GrowingSolution,
        lambda,
        lambda_exact: None,
        euclid_dim: 1,
        spec,
        data: FieldData::Growing {
            solution: Arc::new(sol),
            log_amplitude: 0.0,
        },
    })
}

fn parse_degrees(list: &str, spec: &str) -> Result<Vec<u32>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(spec, "degrees must be non-negative integers"))
        })
        .collect()
}

/// Build a field from a spec string such as `hermite:4`, `radial:2`,
/// `prod:1,0`, `grad:hermite:3`, `grow:0.75:odd` or `mix:2,4`.
pub fn parse_field(spec: &str, model: &SolitonModel, cfg: &NumericsConfig) -> Result<Field> {
    let spec = spec.trim();
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::parse(spec, "expected <kind>:<args>"))?;
    let degree = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| Error::parse(spec, "degree must be a non-negative integer"))
    };
    let field = match head {
        "hermite" => hermite(degree(rest)?),
        "radial" => radial_eigenfunction(model, degree(rest)?)?,
        "prod" => product_mode(model, &parse_degrees(rest, spec)?)?,
        "mix" => mix_field(&parse_degrees(rest, spec)?)?,
        "grad" => gradient_field(&parse_field(rest, model, cfg)?)?,
        "grow" => {
            let (l, parity) = match rest.split_once(':') {
                Some((l, p)) => (l, Some(p.parse::<Parity>()?)),
                None => (rest, None),
            };
            let lambda: f64 = l
                .parse()
                .map_err(|_| Error::parse(spec, "λ must be a number"))?;
            let parity = parity.unwrap_or_else(|| default_parity(lambda));
            let x_max = DEFAULT_X_MAX.max(cfg.r_grid.r_hi * 1.05);
            growing_solution(lambda, parity, x_max, cfg)?
        }
        _ => return Err(Error::parse(spec, "unknown field kind")),
    };
    field.check_compatible(model)?;
    Ok(field)
}

/// Free-function form of [`Field::eval`].
pub fn eval(field: &Field, model: &SolitonModel, r: f64) -> Result<FieldSample> {
    field.eval(model, r)
}
