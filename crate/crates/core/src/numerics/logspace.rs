//! Log-scale arithmetic for quantities that overflow double precision.

use super::quad::integrate_with;
use super::NumericsConfig;
use crate::error::Result;

/// A real number `value * e^{log_scale}` with an absolute error in the same scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub value: f64,
    pub log_scale: f64,
    pub err: f64,
}

impl Scaled {
    pub fn linear(value: f64, err: f64) -> Self {
        Scaled {
            value,
            log_scale: 0.0,
            err,
        }
    }

    pub fn zero() -> Self {
        Scaled::linear(0.0, 0.0)
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.log_scale
    }

    pub fn signum(&self) -> f64 {
        if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Linear value; may overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.log_scale == 0.0 {
            self.value
        } else {
            self.value * self.log_scale.exp()
        }
    }

    pub fn err_f64(&self) -> f64 {
        if self.log_scale == 0.0 {
            self.err
        } else {
            self.err * self.log_scale.exp()
        }
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.err / self.value.abs()
        }
    }

    /// Re-express in scale `log_scale` (values far below it underflow to 0).
    pub fn rescaled(&self, log_scale: f64) -> Self {
        let factor = (self.log_scale - log_scale).exp();
        Scaled {
            value: self.value * factor,
            log_scale,
            err: self.err * factor,
        }
    }

    pub fn scale_by(&self, c: f64) -> Self {
        Scaled {
            value: self.value * c,
            log_scale: self.log_scale,
            err: self.err * c.abs(),
        }
    }

    /// Sum, expressed in the larger of the two scales.
    pub fn add(&self, other: &Scaled) -> Scaled {
        let ls = self.log_scale.max(other.log_scale);
        let a = self.rescaled(ls);
        let b = other.rescaled(ls);
        Scaled {
            value: a.value + b.value,
            log_scale: ls,
            err: a.err + b.err,
        }
    }

    pub fn sub(&self, other: &Scaled) -> Scaled {
        self.add(&other.scale_by(-1.0))
    }
}

/// `ln(e^a + e^b)`.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Stable `ln Σ e^{x_i}`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Result of a log-space integral: `sign * e^{ln_abs}` with relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogQuad {
    pub ln_abs: f64,
    pub sign: f64,
    pub rel_err: f64,
}

impl LogQuad {
    pub fn to_scaled(&self) -> Scaled {
        if self.sign == 0.0 || self.ln_abs == f64::NEG_INFINITY {
            return Scaled::zero();
        }
        Scaled {
            value: self.sign,
            log_scale: self.ln_abs,
            err: self.rel_err,
        }
    }
}

const SHIFT_SAMPLES: usize = 257;

/// Integrate `f` given as `(ln |f|, sign f)` over `[a, b]`.
///
/// The integrand is shifted by the maximum sampled log-magnitude before
/// exponentiation so the kernel never overflows.
pub fn integrate_log<F>(f: F, a: f64, b: f64, cfg: &NumericsConfig) -> Result<LogQuad>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut shift = f64::NEG_INFINITY;
    for i in 0..SHIFT_SAMPLES {
        let x = a + (b - a) * i as f64 / (SHIFT_SAMPLES - 1) as f64;
        let (l, _) = f(x);
        if l.is_finite() || l == f64::INFINITY {
            shift = shift.max(l);
        }
    }
    if shift == f64::NEG_INFINITY {
        return Ok(LogQuad {
            ln_abs: f64::NEG_INFINITY,
            sign: 0.0,
            rel_err: 0.0,
        });
    }
    let g = |x: f64| {
        let (l, s) = f(x);
        if s == 0.0 || l == f64::NEG_INFINITY {
            0.0
        } else {
            s * (l - shift).exp()
        }
    };
    let r = integrate_with(
        &g,
        a,
        b,
        cfg.quad_abs_tol,
        cfg.quad_rel_tol,
        cfg.quad_max_intervals,
    )?;
    if r.value == 0.0 {
        return Ok(LogQuad {
            ln_abs: f64::NEG_INFINITY,
            sign: 0.0,
            rel_err: 0.0,
        });
    }
    Ok(LogQuad {
        ln_abs: shift + r.value.abs().ln(),
        sign: r.value.signum(),
        rel_err: r.error / r.value.abs(),
    })
}

/// Decimal scientific rendering of `value * e^{log_scale}` with 17
/// significant digits, valid far outside the `f64` range.
pub fn format_scaled(value: f64, log_scale: f64) -> String {
    if log_scale == 0.0 || value == 0.0 || !value.is_finite() {
        return format_f64(value);
    }
    let linear = value * log_scale.exp();
    if linear.is_finite() && linear != 0.0 && linear.abs() > 1e-300 {
        return format_f64(linear);
    }
    let log10 = value.abs().log10() + log_scale / std::f64::consts::LN_10;
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    let sign = if value < 0.0 { "-" } else { "" };
    format!("{sign}{mantissa:.16}e{}", exponent as i64)
}

/// 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_log_integrand() {
        let cfg = NumericsConfig::default();
        let r = integrate_log(|_| (0.0, 1.0), 0.0, 1.0, &cfg).unwrap();
        assert!(r.ln_abs.abs() < 1e-14);
        assert_eq!(r.sign, 1.0);
    }

    #[test]
    fn log_add_matches_direct() {
        let a: f64 = 3.0;
        let b: f64 = -2.0;
        assert!((log_add(a, b) - (a.exp() + b.exp()).ln()).abs() < 1e-14);
        assert_eq!(log_add(f64::NEG_INFINITY, 1.5), 1.5);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn scaled_roundtrip_and_format() {
        let x = Scaled {
            value: 2.5,
            log_scale: 2000.0,
            err: 0.0,
        };
        let s = format_scaled(x.value, x.log_scale);
        // 2.5 e^{2000} = 10^{868.98...}
        assert!(s.ends_with("e868"), "{s}");
        let y = Scaled::linear(3.0, 0.0).add(&Scaled {
            value: 1.0,
            log_scale: 2f64.ln(),
            err: 0.0,
        });
        assert!((y.to_f64() - 5.0).abs() < 1e-14);
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
    }
}
