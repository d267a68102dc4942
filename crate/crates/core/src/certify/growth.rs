//! Frequency bounds, growth bounds, positivity and the dichotomy.

use super::{
    min_margin, scan_threshold, threshold_verdict, Certificate, Check, TheoremId, REL_SLACK,
};
use crate::error::{Error, Result};
use crate::frequency::{CurvePoint, FrequencyCurve};
use crate::numerics::log_add;

fn constant_curve(curve: &FrequencyCurve) -> bool {
    !curve.is_empty()
        && curve
            .points
            .iter()
            .all(|p| p.flag.is_none() && p.d.value == 0.0)
}

fn no_frequency(curve: &FrequencyCurve) -> bool {
    curve.points.iter().all(|p| p.u.is_none())
}

fn ln_i_rel_err(p: &CurvePoint) -> f64 {
    if p.i.value > 0.0 {
        p.i.err / p.i.value
    } else {
        f64::INFINITY
    }
}

/// For each `i`, `a_i − max_{j>i} b_j`: the worst pair starting at `i`.
fn pair_checks(curve_r: &[f64], a: &[Option<f64>], b: &[Option<f64>], slack: &[f64]) -> Vec<Check> {
    let m = a.len();
    let mut checks = Vec::with_capacity(m.saturating_sub(1));
    let mut suffix_max: Option<f64> = None;
    let mut suffix_slack = 0.0_f64;
    let mut suffix_bad = false;
    let mut out = vec![None; m];
    for i in (0..m).rev() {
        if i + 1 < m {
            let margin = match (a[i], suffix_max, suffix_bad) {
                (Some(ai), Some(bj), false) => Some(ai - bj),
                (Some(_), None, false) => Some(f64::INFINITY),
                _ => None,
            };
            out[i] = Some(Check {
                r: curve_r[i],
                margin,
                slack: REL_SLACK + slack[i] + suffix_slack,
            });
        }
        match b[i] {
            Some(bi) => {
                if suffix_max.is_none_or(|s| bi > s) {
                    suffix_max = Some(bi);
                }
            }
            None => suffix_bad = true,
        }
        suffix_slack = suffix_slack.max(slack[i]);
    }
    checks.extend(out.into_iter().flatten());
    checks
}

/// Frequency bound `U ≤ 2λ(1 + (4λ+2n−4+ε)/r²)` and the integrated growth
/// bound `I(r₂) ≤ I(r₁)(r₂/r₁)^{4λ} e^{c(r₁^{−2} − r₂^{−2})}`,
/// `c = 2λ(4λ+2n−4+ε)`. Returns `[bound, growth]`.
pub fn certify_t11(curve: &FrequencyCurve, lambda: f64, epsilon: f64) -> [Certificate; 2] {
    let mut bound = Certificate::new(TheoremId::T11Bound, curve);
    let mut growth = Certificate::new(TheoremId::T11Growth, curve);
    for c in [&mut bound, &mut growth] {
        c.params.lambda = lambda;
        c.params.epsilon = Some(epsilon);
    }
    if lambda <= 0.0 {
        let note = "λ = 0: only parallel fields qualify; the bound degenerates";
        return [bound.vacuous(note), growth.vacuous(note)];
    }
    if constant_curve(curve) {
        let note = "|u|² constant on level sets: D ≡ 0 and the bound holds trivially";
        return [bound.vacuous(note), growth.vacuous(note)];
    }
    if no_frequency(curve) {
        let note = "U undefined on the whole range";
        return [bound.inconclusive(note), growth.inconclusive(note)];
    }
    let n = curve.n as f64;
    let coef = 4.0 * lambda + 2.0 * n - 4.0 + epsilon;
    let checks: Vec<Check> = curve
        .points
        .iter()
        .map(|p| {
            let rhs = 2.0 * lambda * (1.0 + coef / (p.r * p.r));
            match p.u {
                Some(u) => Check {
                    r: p.r,
                    margin: Some(rhs - u.value),
                    slack: REL_SLACK * rhs.abs().max(u.value.abs()) + u.err,
                },
                None => Check {
                    r: p.r,
                    margin: None,
                    slack: 0.0,
                },
            }
        })
        .collect();
    threshold_verdict(&mut bound, &checks);

    let c = 2.0 * lambda * coef;
    let start = scan_threshold(&checks).map(|i| {
        let s = (2.0 * n).sqrt();
        (i..curve.len())
            .find(|&j| curve.points[j].r >= s)
            .unwrap_or(curve.len())
    });
    match start {
        Some(s) if s + 1 < curve.len() => {
            let pts = &curve.points[s..];
            let r: Vec<f64> = pts.iter().map(|p| p.r).collect();
            let phi: Vec<Option<f64>> = pts
                .iter()
                .map(|p| {
                    p.ln_i()
                        .map(|l| l - 4.0 * lambda * p.r.ln() + c / (p.r * p.r))
                })
                .collect();
            let slack: Vec<f64> = pts.iter().map(ln_i_rel_err).collect();
            let checks = pair_checks(&r, &phi, &phi, &slack);
            growth.r_empirical = Some(r[0]);
            growth.min_margin = min_margin(&checks);
            growth.passed = checks.iter().all(Check::ok);
            growth.note(format!(
                "{} grid pairs checked in log form; margin is ln(RHS) − ln(LHS)",
                r.len() * (r.len() - 1) / 2
            ));
        }
        _ => growth.note("no frequency threshold with at least two grid points beyond it"),
    }
    [bound, growth]
}

/// Poisson growth bound
/// `I(r₂) ≤ (r₂/r₁)^{4λ+δ} {I(r₁) + 20 sup J / (4λ+δ)}` for all grid pairs
/// above a searched threshold.
pub fn certify_t13(curve: &FrequencyCurve, lambda: f64, delta: f64) -> Result<Certificate> {
    let mut cert = Certificate::new(TheoremId::T13Poisson, curve);
    cert.params.lambda = lambda;
    cert.params.delta = Some(delta);
    let psi = curve
        .psi
        .ok_or_else(|| Error::Contract("T13 needs a curve computed with ψ".into()))?;
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::ParameterDomain(format!(
            "δ must lie in (0, 2), got {delta}"
        )));
    }
    if curve.points.iter().all(|p| p.ln_i().is_none()) {
        return Ok(cert.inconclusive("I not positive anywhere on the range"));
    }
    let a = 4.0 * lambda + delta;
    let j0 = curve
        .points
        .iter()
        .filter_map(|p| p.j.map(|j| j.to_f64()))
        .fold(0.0, f64::max);
    let ln_extra = (20.0 * j0 / a).ln();
    let r: Vec<f64> = curve.r();
    let left: Vec<Option<f64>> = curve
        .points
        .iter()
        .map(|p| {
            if p.flag.is_some() {
                return None;
            }
            let ln_i = p.ln_i().unwrap_or(f64::NEG_INFINITY);
            Some(log_add(ln_i, ln_extra) - a * p.r.ln())
        })
        .collect();
    let right: Vec<Option<f64>> = curve
        .points
        .iter()
        .map(|p| {
            if p.flag.is_some() {
                None
            } else {
                Some(p.ln_i().unwrap_or(f64::NEG_INFINITY) - a * p.r.ln())
            }
        })
        .collect();
    let slack: Vec<f64> = curve
        .points
        .iter()
        .map(|p| ln_i_rel_err(p).min(1.0))
        .collect();
    let checks = pair_checks(&r, &left, &right, &slack);
    threshold_verdict(&mut cert, &checks);
    cert.note(format!(
        "ψ = {psi}, sup J = {j0:.6e}; margin is ln(RHS) − ln(LHS)"
    ));
    Ok(cert)
}

/// `I > 0` beyond `2√(n + 4λ)`.
pub fn certify_p31(curve: &FrequencyCurve, lambda: f64) -> Certificate {
    let mut cert = Certificate::new(TheoremId::P31Positivity, curve);
    cert.params.lambda = lambda;
    let thr = 2.0 * (curve.n as f64 + 4.0 * lambda).sqrt();
    let checks: Vec<Check> = curve
        .points
        .iter()
        .map(|p| Check {
            r: p.r,
            margin: (p.i.value > 0.0).then(|| (p.i.value - p.i.err) / p.i.value),
            slack: 0.0,
        })
        .collect();
    let beyond: Vec<Check> = checks.iter().copied().filter(|c| c.r > thr).collect();
    if beyond.is_empty() {
        return cert.vacuous(format!("no grid point beyond the threshold {thr:.6}"));
    }
    cert.r_empirical = scan_threshold(&checks).map(|i| checks[i].r);
    cert.min_margin = min_margin(&beyond);
    cert.passed = beyond.iter().all(Check::ok);
    cert.note(format!(
        "threshold 2√(n+4λ) = {thr:.6}; margin is (I − err)/I"
    ));
    cert
}

/// Level beyond which a frequency above `(2+δ)λ` forces quadratic growth:
/// `max(√(4n(2+δ)/δ), √(5(2+δ)²λ/δ))`.
pub fn t43_threshold(n: f64, lambda: f64, delta: f64) -> f64 {
    (4.0 * n * (2.0 + delta) / delta)
        .sqrt()
        .max((5.0 * (2.0 + delta).powi(2) * lambda / delta).sqrt())
}

/// If `U(r₀) > (2+δ)λ` at some grid `r₀ ≥ R`, then `U ≥ r²/2 − r` at every
/// later grid point.
pub fn certify_t43(curve: &FrequencyCurve, lambda: f64, delta: f64) -> Certificate {
    let mut cert = Certificate::new(TheoremId::T43Dichotomy, curve);
    cert.params.lambda = lambda;
    cert.params.delta = Some(delta);
    let big_r = t43_threshold(curve.n as f64, lambda, delta);
    let onset = curve
        .points
        .iter()
        .position(|p| p.r >= big_r && p.u.is_some_and(|u| u.value > (2.0 + delta) * lambda));
    let Some(onset) = onset else {
        return cert.vacuous(format!(
            "U never exceeds (2+δ)λ = {:.6} at grid points beyond R = {big_r:.6}",
            (2.0 + delta) * lambda
        ));
    };
    let checks: Vec<Check> = curve
        .points
        .iter()
        .map(|p| {
            let target = 0.5 * p.r * p.r - p.r;
            match p.u {
                Some(u) => Check {
                    r: p.r,
                    margin: Some(u.value - target),
                    slack: REL_SLACK * u.value.abs().max(target.abs()) + u.err,
                },
                None => Check {
                    r: p.r,
                    margin: None,
                    slack: 0.0,
                },
            }
        })
        .collect();
    let after = &checks[onset..];
    cert.r_empirical = scan_threshold(&checks).map(|i| checks[i].r);
    cert.min_margin = min_margin(after);
    cert.passed = after.iter().all(Check::ok);
    let last = curve.points.last().expect("onset implies points");
    cert.note(format!(
        "R = {big_r:.6}; onset at r = {:.6} with U = {:.6}",
        curve.points[onset].r,
        curve.points[onset].u.map(|u| u.value).unwrap_or(f64::NAN)
    ));
    if let Some(u) = last.u {
        cert.note(format!(
            "asymptote: U/(r²/2) = {:.6} at r = {:.6}",
            u.value / (0.5 * last.r * last.r),
            last.r
        ));
    }
    cert
}
