//! Catalog of Gaussian-weighted model shrinkers and their radial profiles.
//!
//! The family GC(n, k) is `R^{n-k} × N^k` with `N` a compact factor carrying
//! constant scalar term. With `ρ` the Euclidean radius,
//!
//! ```text
//! f = ρ²/4 + k/2,   S = k/2,   b² = 4f = ρ² + 2k,   |∇b| = ρ/b.
//! ```
//!
//! Level sets `{b = r}` are `S^{n-k-1}(ρ) × N`, so every level-set integral
//! reduces to a sphere average times the sphere area.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    GaussianCylinder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonModel {
    pub family: Family,
    pub n: u32,
    pub k: u32,
    /// Constant weight of the compact factor in level-set integrals.
    pub sphere_volume_factor: f64,
}

/// Geometric data of the level set `{b = r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySample {
    pub r: f64,
    pub rho: f64,
    pub grad_b: f64,
    pub s: f64,
    /// Measure of the level set: area of `S^{n-k-1}(ρ)` times the volume factor.
    pub density: f64,
}

/// Worst residuals of the soliton identities over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// max |Δf + S − n/2|
    pub trace: f64,
    /// max ||∇f|² + S − f|
    pub gradient: f64,
    /// max |b Δb + |∇b|² + 2S − n|
    pub b_laplacian: f64,
    /// max ||∇b|² + 4S/b² − 1|
    pub grad_b: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.trace
            .max(self.gradient)
            .max(self.b_laplacian)
            .max(self.grad_b)
    }
}

/// Area of the unit sphere `S^{d-1} ⊂ R^d` (two points for d = 1).
pub fn unit_sphere_area(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d - 2) as f64 * unit_sphere_area(d - 2),
    }
}

pub fn make_model(n: i64, k: i64) -> Result<SolitonModel> {
    if n < 1 {
        return Err(Error::ParameterDomain(format!(
            "dimension n must be ≥ 1, got {n}"
        )));
    }
    if k < 0 || k >= n {
        return Err(Error::ParameterDomain(format!(
            "cylinder factor dimension must satisfy 0 ≤ k < n, got n = {n}, k = {k}"
        )));
    }
    Ok(SolitonModel {
        family: Family::GaussianCylinder,
        n: n as u32,
        k: k as u32,
        sphere_volume_factor: 1.0,
    })
}

impl SolitonModel {
    pub fn s_const(&self) -> f64 {
        self.k as f64 / 2.0
    }

    pub fn b_min(&self) -> f64 {
        (2.0 * self.k as f64).sqrt()
    }

    /// Dimension of the Euclidean factor.
    pub fn euclid_dim(&self) -> u32 {
        self.n - self.k
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Euclidean radius of the level `b = r` (no domain check).
    pub fn rho_of(&self, r: f64) -> f64 {
        (r * r - 2.0 * self.k as f64).max(0.0).sqrt()
    }

    pub fn b_of_rho(&self, rho: f64) -> f64 {
        (rho * rho + 2.0 * self.k as f64).sqrt()
    }

    /// The default inner level for solid forms of I.
    pub fn default_r0(&self) -> f64 {
        (self.b_min() * 1.05).max(1.0)
    }

    /// Level-set measure factor at Euclidean radius `rho`.
    pub fn level_density(&self, rho: f64) -> f64 {
        let d = self.euclid_dim();
        self.sphere_volume_factor * unit_sphere_area(d) * rho.powi(d as i32 - 1)
    }

    pub fn eval_geometry(&self, r: f64) -> Result<GeometrySample> {
        if !(r > self.b_min()) || !r.is_finite() {
            return Err(Error::BelowCriticalLevel {
                r,
                b_min: self.b_min(),
            });
        }
        let rho = self.rho_of(r);
        Ok(GeometrySample {
            r,
            rho,
            grad_b: rho / r,
            s: self.s_const(),
            density: self.level_density(rho),
        })
    }

    /// Residuals of the soliton identities on the closed-form radial profile.
    ///
    /// `f(ρ) = ρ²/4 + k/2` so `f' = ρ/2`, `f'' = 1/2`, and on the Euclidean
    /// factor `Δf = f'' + (d−1) f'/ρ`; the compact factor contributes nothing
    /// because `f` is constant there.
    pub fn verify_soliton_identities(&self, grid: &[f64]) -> Result<IdentityResiduals> {
        let n = self.nf();
        let d = self.euclid_dim() as f64;
        let s = self.s_const();
        let mut res = IdentityResiduals {
            trace: 0.0,
            gradient: 0.0,
            b_laplacian: 0.0,
            grad_b: 0.0,
        };
        for &r in grid {
            let g = self.eval_geometry(r)?;
            let rho = g.rho;
            let f = rho * rho / 4.0 + s;
            let fp = rho / 2.0;
            let fpp = 0.5;
            let lap_f = fpp + (d - 1.0) * fp / rho;
            res.trace = res.trace.max((lap_f + s - n / 2.0).abs());
            res.gradient = res.gradient.max((fp * fp + s - f).abs());

            // b = 2√f by the chain rule on the profile.
            let b = 2.0 * f.sqrt();
            let bp = fp / f.sqrt();
            let bpp = fpp / f.sqrt() - fp * fp / (2.0 * f.powf(1.5));
            let lap_b = bpp + (d - 1.0) * bp / rho;
            res.b_laplacian = res
                .b_laplacian
                .max((b * lap_b + bp * bp + 2.0 * s - n).abs());
            res.grad_b = res
                .grad_b
                .max((g.grad_b * g.grad_b + 4.0 * s / (r * r) - 1.0).abs());
        }
        Ok(res)
    }

    pub fn spec(&self) -> String {
        format!("gc:{}:{}", self.n, self.k)
    }
}

impl fmt::Display for SolitonModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl FromStr for SolitonModel {
    type Err = Error;

    /// `gc:<n>:<k>`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 || parts[0] != "gc" {
            return Err(Error::parse(s, "expected gc:<n>:<k>"));
        }
        let n: i64 = parts[1].parse().map_err(|_| Error::parse(s, "bad n"))?;
        let k: i64 = parts[2].parse().map_err(|_| Error::parse(s, "bad k"))?;
        make_model(n, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_gaussian() {
        let m = make_model(3, 0).unwrap();
        assert_eq!(m.s_const(), 0.0);
        assert_eq!(m.b_min(), 0.0);
        let g = m.eval_geometry(2.0).unwrap();
        assert_eq!(g.grad_b, 1.0);
        assert!((g.density - 4.0 * PI * 4.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_gc32() {
        let m = make_model(3, 2).unwrap();
        assert_eq!(m.s_const(), 1.0);
        assert_eq!(m.b_min(), 2.0);
        let g = m.eval_geometry(3.0).unwrap();
        assert!((g.rho - 5f64.sqrt()).abs() < 1e-15);
        assert!((g.grad_b - 5f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((g.grad_b * g.grad_b - 5.0 / 9.0).abs() < 1e-15);
        assert!(matches!(
            m.eval_geometry(2.0),
            Err(Error::BelowCriticalLevel { .. })
        ));
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_model(2, 2).is_err());
        assert!(make_model(0, 0).is_err());
        assert!(make_model(3, -1).is_err());
        assert!("gc:2:2".parse::<SolitonModel>().is_err());
        assert!("gx:2:0".parse::<SolitonModel>().is_err());
        assert_eq!("gc:5:1".parse::<SolitonModel>().unwrap().spec(), "gc:5:1");
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn identity_residuals_vanish() {
        let cases: [(i64, i64, &[f64]); 3] = [
            (4, 0, &[1.0, 2.0, 5.0]),
            (3, 2, &[2.1, 3.0, 10.0]),
            (5, 1, &[1.5, 4.0]),
        ];
        for (n, k, grid) in cases {
            let m = make_model(n, k).unwrap();
            let r = m.verify_soliton_identities(grid).unwrap();
            assert!(r.max() <= 1e-12, "gc:{n}:{k} residuals {r:?}");
        }
        let flat = make_model(4, 0).unwrap();
        let r = flat.verify_soliton_identities(&[1.0, 2.0, 5.0]).unwrap();
        assert_eq!(r.trace, 0.0);
        assert_eq!(r.gradient, 0.0);
    }
}
