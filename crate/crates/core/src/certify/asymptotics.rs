//! Least-squares recovery of the `r^{−2}` coefficient of the frequency,
//! `U = 2λ(1 + c/r² + O(r^{−4}))`.

use super::{Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldKind};
use crate::frequency::FrequencyCurve;

pub const FIT_WINDOW: (f64, f64) = (20.0, 40.0);
pub const FIT_REL_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFit {
    /// Leading constant `c`.
    pub c_fit: f64,
    /// Next coefficient in `(U/(2λ) − 1) r² ≈ c + c₂ / r²`.
    pub c2: f64,
    pub points: usize,
    pub rms_residual: f64,
}

/// `4λ + 2n − 4`, the constant attained by Hermite and radial eigenfunctions.
pub fn expected_coefficient(n: u32, lambda: f64) -> f64 {
    4.0 * lambda + 2.0 * n as f64 - 4.0
}

/// Fields whose frequency attains the constant exactly: Hermite
/// polynomials, radial eigenfunctions and separated modes on a line factor.
pub fn sharp_asymptotics(field: &Field) -> bool {
    match field.kind {
        FieldKind::HermitePoly | FieldKind::RadialPoly => true,
        FieldKind::ProductMode => field.euclid_dim() == 1,
        _ => false,
    }
}

/// Fit over the default window `r ∈ [20, 40]`.
pub fn fit_asymptotics(curve: &FrequencyCurve, lambda: f64) -> Result<AsymptoticFit> {
    fit_asymptotics_window(curve, lambda, FIT_WINDOW.0, FIT_WINDOW.1)
}

pub fn fit_asymptotics_window(
    curve: &FrequencyCurve,
    lambda: f64,
    lo: f64,
    hi: f64,
) -> Result<AsymptoticFit> {
    if !(lambda > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "fit needs λ > 0, got {lambda}"
        )));
    }
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.r >= lo && p.r <= hi)
        .filter_map(|p| {
            p.u.map(|u| {
                (
                    1.0 / (p.r * p.r),
                    (u.value / (2.0 * lambda) - 1.0) * p.r * p.r,
                )
            })
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::ParameterDomain(format!(
            "need at least 3 grid points with U defined in [{lo}, {hi}], found {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let c2 = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let c = my - c2 * mx;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - c - c2 * p.0).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(AsymptoticFit {
        c_fit: c,
        c2,
        points: pts.len(),
        rms_residual: rms,
    })
}

/// Sharp fields must reproduce `4λ+2n−4` within 5%; others must not exceed it.
pub fn certify_asymptotics(curve: &FrequencyCurve, lambda: f64, sharp: bool) -> Certificate {
    let mut cert = Certificate::new(TheoremId::S41Asymptotics, curve);
    cert.params.lambda = lambda;
    if lambda <= 0.0 {
        return cert.vacuous("λ = 0: no r^{-2} coefficient to fit");
    }
    let fit = match fit_asymptotics(curve, lambda) {
        Ok(f) => f,
        Err(e) => return cert.inconclusive(e.to_string()),
    };
    let expected = expected_coefficient(curve.n, lambda);
    let tol = if expected != 0.0 {
        FIT_REL_TOL * expected.abs()
    } else {
        1e-6
    };
    let margin = if sharp {
        tol - (fit.c_fit - expected).abs()
    } else {
        expected + tol - fit.c_fit
    };
    cert.r_empirical = Some(FIT_WINDOW.0);
    cert.min_margin = Some(margin);
    cert.passed = margin >= 0.0;
    cert.note(format!(
        "c_fit = {:.8}, expected {} {expected:.8}, c2 = {:.6}, {} points",
        fit.c_fit,
        if sharp { "=" } else { "≤" },
        fit.c2,
        fit.points
    ));
    cert
}
