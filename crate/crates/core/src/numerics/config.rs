use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric grid `{r_lo, r_hi, points}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_lo: f64,
    pub r_hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(r_lo: f64, r_hi: f64, points: usize) -> Result<Self> {
        if !(r_lo.is_finite() && r_hi.is_finite()) || r_lo <= 0.0 {
            return Err(Error::ParameterDomain(format!(
                "grid bounds must be finite and positive, got [{r_lo}, {r_hi}]"
            )));
        }
        if points == 0 || (points > 1 && r_hi <= r_lo) {
            return Err(Error::ParameterDomain(format!(
                "grid needs r_lo < r_hi and at least one point, got {r_lo}:{r_hi}:{points}"
            )));
        }
        Ok(GridSpec { r_lo, r_hi, points })
    }

    /// Geometrically spaced points, endpoints included exactly.
    pub fn points(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.r_lo];
        }
        let ratio = (self.r_hi / self.r_lo).ln() / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    self.r_lo
                } else if i + 1 == self.points {
                    self.r_hi
                } else {
                    self.r_lo * (ratio * i as f64).exp()
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:points`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(s, "expected lo:hi:points"));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, "bad lo"))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, "bad hi"))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, "bad point count"))?;
        GridSpec::new(lo, hi, n)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.r_lo, self.r_hi, self.points)
    }
}

/// Tolerances and step policies shared by every numerical kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    /// Maximum number of subintervals for adaptive quadrature.
    pub quad_max_intervals: usize,
    pub ode_tol: f64,
    /// Relative central-difference step: h = fd_step_scale * r.
    pub fd_step_scale: f64,
    pub r_grid: GridSpec,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            quad_rel_tol: 1e-8,
            quad_abs_tol: 1e-12,
            quad_max_intervals: 2000,
            ode_tol: 1e-10,
            fd_step_scale: 1e-4,
            r_grid: GridSpec {
                r_lo: 1.0,
                r_hi: 50.0,
                points: 200,
            },
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quad_rtol", self.quad_rel_tol),
            ("quad_atol", self.quad_abs_tol),
            ("ode_tol", self.ode_tol),
            ("fd_step", self.fd_step_scale),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::ParameterDomain(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        if self.quad_max_intervals == 0 {
            return Err(Error::ParameterDomain(
                "quad_max_intervals must be > 0".into(),
            ));
        }
        Ok(())
    }

    /// Apply a single `key=value` setting. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(v, format!("`{key}` expects a number")))
        };
        match key.trim() {
            "quad_rtol" | "quad_rel_tol" => self.quad_rel_tol = num(value)?,
            "quad_atol" | "quad_abs_tol" => self.quad_abs_tol = num(value)?,
            "quad_max_intervals" => {
                self.quad_max_intervals = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(value, "expects an integer"))?
            }
            "ode_tol" => self.ode_tol = num(value)?,
            "fd_step" | "fd_step_scale" => self.fd_step_scale = num(value)?,
            "grid" | "r_grid" => self.r_grid = value.trim().parse()?,
            other => {
                return Err(Error::parse(other, "unknown configuration key"));
            }
        }
        self.validate()
    }

    /// Parse `key=value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "expected key=value"))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}
