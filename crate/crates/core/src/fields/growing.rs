//! Non-polynomial solutions of `u'' − (x/2) u' + λ u = 0` on the line.
//!
//! These grow like `e^{x²/4}`, so they are integrated in Prüfer form
//! `u = e^σ cos θ`, `u' = e^σ sin θ`, which keeps everything in range:
//!
//! ```text
//! σ' = sin θ cos θ + g sin θ,   θ' = g cos θ − sin² θ,   g = (x/2) sin θ − λ cos θ.
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{ode_solve, DenseSolution, NumericsConfig};

/// Default right end of the solution table.
pub const DEFAULT_X_MAX: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn other(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::parse(s, "parity must be even or odd")),
        }
    }
}

/// Parity of the Hermite polynomial with eigenvalue `lambda`, if any.
pub fn polynomial_parity(lambda: f64) -> Option<Parity> {
    let m = 2.0 * lambda;
    if m >= 0.0 && m.fract() == 0.0 {
        Some(if (m as u64).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        })
    } else {
        None
    }
}

/// Parity that never coincides with a polynomial solution.
pub fn default_parity(lambda: f64) -> Parity {
    match polynomial_parity(lambda) {
        Some(p) => p.other(),
        None => Parity::Even,
    }
}

/// `(σ, θ)` together with the same quantities from a tenfold looser solve,
/// whose difference serves as the error estimate.
#[derive(Debug, Clone, Copy)]
pub struct PrueferState {
    pub sigma: f64,
    pub theta: f64,
    pub sigma_err: f64,
    pub theta_err: f64,
}

#[derive(Debug, Clone)]
pub struct GrowingSolution {
    pub lambda: f64,
    pub parity: Parity,
    pub x_max: f64,
    fine: DenseSolution<2>,
    coarse: DenseSolution<2>,
}

fn rhs(lambda: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |x, y| {
        let (s, c) = y[1].sin_cos();
        let g = 0.5 * x * s - lambda * c;
        [s * c + g * s, g * c - s * s]
    }
}

impl GrowingSolution {
    /// Solve on `[0, x_max]`. A parity that would reproduce the Hermite
    /// polynomial is switched to the independent solution.
    pub fn solve(lambda: f64, parity: Parity, x_max: f64, cfg: &NumericsConfig) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "λ must be ≥ 0, got {lambda}"
            )));
        }
        if !(x_max > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "x_max must be positive, got {x_max}"
            )));
        }
        let parity = if polynomial_parity(lambda) == Some(parity) {
            parity.other()
        } else {
            parity
        };
        let y0 = match parity {
            Parity::Even => [0.0, 0.0],
            Parity::Odd => [0.0, std::f64::consts::FRAC_PI_2],
        };
        let fine_cfg = NumericsConfig {
            ode_tol: cfg.ode_tol / 100.0,
            ..cfg.clone()
        };
        let fine = ode_solve(rhs(lambda), y0, (0.0, x_max), &fine_cfg)?;
        let coarse = ode_solve(rhs(lambda), y0, (0.0, x_max), cfg)?;
        Ok(GrowingSolution {
            lambda,
            parity,
            x_max,
            fine,
            coarse,
        })
    }

    /// Prüfer state at `|x|` (the field's square and radial data are even).
    pub fn state(&self, x: f64) -> Result<PrueferState> {
        let x = x.abs();
        if x > self.x_max {
            return Err(Error::ParameterDomain(format!(
                "x = {x} beyond growing-solution table end {}",
                self.x_max
            )));
        }
        let f = self.fine.eval(x)?;
        let c = self.coarse.eval(x)?;
        Ok(PrueferState {
            sigma: f[0],
            theta: f[1],
            sigma_err: (f[0] - c[0]).abs() + 1e-15 * f[0].abs(),
            theta_err: (f[1] - c[1]).abs(),
        })
    }

    /// `(ln |u(x)|, sign u(x))` for `x ≥ 0`.
    pub fn log_abs_u(&self, x: f64) -> Result<(f64, f64)> {
        let s = self.state(x)?;
        let c = s.theta.cos();
        Ok((s.sigma + c.abs().ln(), c.signum()))
    }

    /// `(u, u')` in linear scale; errors if the values overflow.
    pub fn value_and_derivative(&self, x: f64) -> Result<(f64, f64)> {
        let s = self.state(x)?;
        let scale = s.sigma.exp();
        if !scale.is_finite() {
            return Err(Error::NumericRange(format!(
                "growing solution overflows linear scale at x = {x}"
            )));
        }
        let sign = if x < 0.0 && self.parity == Parity::Odd {
            -1.0
        } else {
            1.0
        };
        let dsign = if x < 0.0 && self.parity == Parity::Even {
            -1.0
        } else {
            1.0
        };
        Ok((sign * scale * s.theta.cos(), dsign * scale * s.theta.sin()))
    }
}
