//! Central finite differences with a relative step.

use crate::error::Result;

/// Derivative estimate with a truncation-error estimate from step doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub value: f64,
    pub truncation: f64,
}

/// Central difference of `f` at `x` with step `h = step_scale * |x|`.
pub fn central_diff<F>(f: F, x: f64, step_scale: f64) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = step_scale * x.abs().max(f64::MIN_POSITIVE);
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d2 = (f(x + 2.0 * h)? - f(x - 2.0 * h)?) / (4.0 * h);
    Ok(FdEstimate {
        value: d1,
        // d1 - true ≈ (d2 - d1) / 3 for an O(h²) rule
        truncation: (d2 - d1).abs() / 3.0,
    })
}

/// Richardson-extrapolated central difference, `(4 d(h) − d(2h)) / 3`,
/// accurate to `O(h⁴)`. The truncation field holds the size of the correction.
pub fn richardson_diff<F>(f: F, x: f64, step_scale: f64) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = step_scale * x.abs().max(f64::MIN_POSITIVE);
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d2 = (f(x + 2.0 * h)? - f(x - 2.0 * h)?) / (4.0 * h);
    Ok(FdEstimate {
        value: d1 + (d1 - d2) / 3.0,
        truncation: (d2 - d1).abs() / 3.0,
    })
}
