//! Differential inequalities for D and U, the three-circles estimate, and
//! gradient (Bochner) fields.

use super::growth::certify_t11;
use super::{min_margin, scan_threshold, Certificate, Check, TheoremId, REL_SLACK};
use crate::error::{Error, Result};
use crate::fields::{gradient_field, Field};
use crate::frequency::{
    curve, d_boundary, d_d, frequency_of, i_boundary, i_prime, ratio, s_boundary, FrequencyCurve,
};
use crate::models::SolitonModel;
use crate::numerics::{central_diff, GridSpec, NumericsConfig, Scaled};

fn ln_positive(s: &Scaled, what: &str, r: f64) -> Result<f64> {
    if s.value > 0.0 {
        Ok(s.ln_abs())
    } else {
        Err(Error::UndefinedLog(format!(
            "{what}({r}) = {} is not positive",
            s.value
        )))
    }
}

fn empty_curve(model: &SolitonModel, field: &Field, lambda: f64, grid: &[f64]) -> FrequencyCurve {
    FrequencyCurve {
        model: model.spec(),
        field: field.spec().to_string(),
        n: model.n,
        k: model.k,
        lambda,
        delta: f64::NAN,
        psi: None,
        points: grid
            .first()
            .into_iter()
            .chain(grid.last())
            .map(|&r| crate::frequency::CurvePoint {
                r,
                i: Scaled::zero(),
                d: Scaled::zero(),
                u: None,
                j: None,
                k: Scaled::zero(),
                dlog_i: None,
                d_d: Scaled::zero(),
                s_corr: None,
                flag: None,
            })
            .collect(),
    }
}

/// Lower bounds for `r (log D)'` and `r (log U)'` wherever `D, I > 0`, with
/// finite-difference left sides, and the simplified `(log U)'` bound
/// wherever `U > 2λ` and `r² > 2n / (1 − 2λ/U)`. Returns `[P41, C42]`.
pub fn certify_p41_c42(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    grid: &[f64],
    cfg: &NumericsConfig,
) -> Result<[Certificate; 2]> {
    field.check_compatible(model)?;
    let shell = empty_curve(model, field, lambda, grid);
    let mut p41 = Certificate::new(TheoremId::P41Inequalities, &shell);
    let mut c42 = Certificate::new(TheoremId::C42LowerBound, &shell);
    let n = model.nf();
    let mut checks41 = Vec::new();
    let mut checks42 = Vec::new();
    let mut skipped = 0usize;
    for &r in grid {
        let i = i_boundary(model, field, r)?;
        let d = d_boundary(model, field, r)?;
        let Some(u) = frequency_of(&i, &d) else {
            skipped += 1;
            continue;
        };
        if !(d.value > 0.0) {
            skipped += 1;
            continue;
        }
        let ln_d = |x: f64| ln_positive(&d_boundary(model, field, x)?, "D", x);
        let ln_u = |x: f64| {
            let i = i_boundary(model, field, x)?;
            let d = d_boundary(model, field, x)?;
            Ok(ln_positive(&d, "D", x)? - ln_positive(&i, "I", x)?)
        };
        let (Ok(fd_d), Ok(fd_u)) = (
            central_diff(ln_d, r, cfg.fd_step_scale),
            central_diff(ln_u, r, cfg.fd_step_scale),
        ) else {
            skipped += 1;
            continue;
        };
        let s_over_i = ratio(&s_boundary(model, field, r)?, &i);
        let rn = r.powf(1.0 - n);
        let uv = u.value;
        let s_term = rn * s_over_i;
        let base = 2.0 - n + r * r / 2.0;
        let lam_term = lambda * r * r / uv;
        let scale = (2.0 - n).abs()
            + r * r / 2.0
            + uv.abs()
            + lam_term.abs()
            + s_term.abs() * (4.0 * lambda / uv + 4.0);
        // ∂/∂U of the right sides is at most 1 + λr²/U² in size.
        let u_prop = u.err * (1.0 + lam_term / uv + 4.0 * lambda * s_term / (uv * uv));
        let rhs41 = base + uv - lam_term - 4.0 * lambda / uv * s_term;
        checks41.push(Check {
            r,
            margin: Some(r * fd_d.value - rhs41),
            slack: REL_SLACK * scale + r * (fd_d.truncation + fd_u.truncation) + u_prop,
        });
        let rhs42 =
            base - uv - lam_term + (1.0 - 2.0 * lambda / uv - 2.0 * n / (r * r)) * 2.0 * s_term;
        checks41.push(Check {
            r,
            margin: Some(r * fd_u.value - rhs42),
            slack: REL_SLACK * scale + r * fd_u.truncation + u_prop,
        });
        if uv > 2.0 * lambda && r * r > 2.0 * n / (1.0 - 2.0 * lambda / uv) {
            let rhs = (2.0 - n - uv) / r + r * (0.5 - lambda / uv);
            checks42.push(Check {
                r,
                margin: Some(fd_u.value - rhs),
                slack: REL_SLACK * scale / r + fd_u.truncation + u_prop / r,
            });
        }
    }
    for c in [&mut p41, &mut c42] {
        c.params.lambda = lambda;
        if skipped > 0 {
            c.note(format!(
                "{skipped} grid points skipped where D or I is not positive"
            ));
        }
    }
    let finish = |mut c: Certificate, checks: &[Check], what: &str| {
        if checks.is_empty() {
            return c.vacuous(format!("hypotheses of {what} never hold on the grid"));
        }
        c.r_empirical = scan_threshold(checks).map(|i| checks[i].r);
        c.min_margin = min_margin(checks);
        c.passed = checks.iter().all(Check::ok);
        c.note(format!(
            "{} pointwise checks, finite-difference left sides",
            checks.len()
        ));
        c
    };
    Ok([
        finish(p41, &checks41, "the D/U inequalities"),
        finish(c42, &checks42, "the simplified lower bound"),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P53Params {
    pub r1: f64,
    pub big_r: f64,
    pub delta: f64,
}

impl Default for P53Params {
    fn default() -> Self {
        P53Params {
            r1: 6.0,
            big_r: 20.0,
            delta: 0.5,
        }
    }
}

/// Level where `(4λ+2δ)(1 − 2n/r²) ≥ 4λ`, the sign condition the
/// three-circles argument needs: `√(n(4λ+2δ)/δ)`.
pub fn p53_r0(n: f64, lambda: f64, delta: f64) -> f64 {
    (n * (4.0 * lambda + 2.0 * delta) / delta).sqrt()
}

/// If `D(R) ≤ e^{(2R−1)/6} I(r₁)` then
/// `I(r) ≤ (r/r₁)^{4λ+2δ} [1 + 1/(2λ+δ)] I(r₁)` on `[r₁, R−1]`.
pub fn certify_p53(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    params: P53Params,
    cfg: &NumericsConfig,
) -> Result<Certificate> {
    field.check_compatible(model)?;
    let P53Params { r1, big_r, delta } = params;
    let grid_hint = [r1, big_r];
    let mut cert = Certificate::new(
        TheoremId::P53ThreeCircles,
        &empty_curve(model, field, lambda, &grid_hint),
    );
    cert.params.lambda = lambda;
    cert.params.delta = Some(delta);
    if !(lambda > 0.0) {
        return Ok(cert.vacuous("λ = 0: the statement needs λ > 0"));
    }
    if !(delta > 0.0 && delta < 2.0 * lambda) {
        return Err(Error::ParameterDomain(format!(
            "δ must lie in (0, 2λ) = (0, {}), got {delta}",
            2.0 * lambda
        )));
    }
    if !(r1 > model.b_min() && big_r - 1.0 > r1) {
        return Err(Error::ParameterDomain(format!(
            "need b_min < r₁ < R − 1, got r₁ = {r1}, R = {big_r}"
        )));
    }
    let i1 = i_boundary(model, field, r1)?;
    let d_big = d_boundary(model, field, big_r)?;
    let allowance = (2.0 * big_r - 1.0) / 6.0;
    let hypothesis = if d_big.value <= 0.0 {
        true
    } else if i1.value <= 0.0 {
        false
    } else {
        d_big.ln_abs() <= allowance + i1.ln_abs()
    };
    let r0 = p53_r0(model.nf(), lambda, delta);
    cert.note(format!("r0 estimate {r0:.6}"));
    if let Some(r0_emp) = k_inequality_threshold(model, field, lambda, delta, big_r)? {
        cert.note(format!(
            "K-inequality holds wherever K > 0 from r = {r0_emp:.6}"
        ));
    }
    if r1 < r0 {
        cert.note(format!("r₁ = {r1} lies below the r0 estimate"));
    }
    if !hypothesis {
        return Ok(cert.vacuous(format!(
            "hypothesis not satisfied: ln D(R) = {:.6} > (2R−1)/6 + ln I(r₁) = {:.6}",
            d_big.ln_abs(),
            allowance + i1.ln_abs()
        )));
    }
    let a = 4.0 * lambda + 2.0 * delta;
    let ln_c = (1.0 + 1.0 / (2.0 * lambda + delta)).ln() + i1.ln_abs();
    let grid = GridSpec::new(r1, big_r - 1.0, cfg.r_grid.points.min(100))?.points();
    let mut checks = Vec::with_capacity(grid.len());
    for &r in &grid {
        let i = i_boundary(model, field, r)?;
        let rhs = a * (r / r1).ln() + ln_c;
        let margin = if i.value > 0.0 {
            rhs - i.ln_abs()
        } else {
            f64::INFINITY
        };
        checks.push(Check {
            r,
            margin: Some(margin),
            slack: REL_SLACK + i.rel_err().min(1.0) + i1.rel_err(),
        });
    }
    cert.r_range = [r1, big_r - 1.0];
    cert.r_empirical = Some(r1);
    cert.min_margin = min_margin(&checks).filter(|m| m.is_finite());
    cert.passed = checks.iter().all(Check::ok);
    cert.note(format!(
        "hypothesis holds: ln D(R) = {:.6} ≤ {:.6}; margin is ln(RHS) − ln I",
        d_big.ln_abs(),
        allowance + i1.ln_abs()
    ));
    Ok(cert)
}

/// First grid level beyond which
/// `r K' ≥ (2λr²/(4λ+2δ)) K + [U + 2 − n + δr²/(4λ+2δ) − (4λ+2δ)] D`
/// holds at every point with `K = D − (2λ+δ) I > 0` (the inequality is
/// vacuous where `K ≤ 0`).
fn k_inequality_threshold(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    delta: f64,
    big_r: f64,
) -> Result<Option<f64>> {
    let lo = (model.b_min() * 1.05).max(1.0);
    if big_r <= lo {
        return Ok(None);
    }
    let n = model.nf();
    let dk = 2.0 * delta;
    let a = 4.0 * lambda + dk;
    let grid = GridSpec::new(lo, big_r, 100)?.points();
    let mut checks = Vec::with_capacity(grid.len());
    for &r in &grid {
        let i = i_boundary(model, field, r)?;
        let d = d_boundary(model, field, r)?;
        let coef = 2.0 * lambda + delta;
        let k = d.sub(&i.scale_by(coef));
        let margin = match frequency_of(&i, &d) {
            _ if k.value <= 0.0 => Some(f64::INFINITY),
            Some(u) => {
                let kp = d_d(model, field, r)?.sub(&i_prime(model, field, r)?.scale_by(coef));
                let rhs_k = 2.0 * lambda * r * r / a;
                let rhs_d = u.value + 2.0 - n + dk * r * r / (2.0 * a) - a;
                // everything divided by K to stay in range
                let lhs = r * ratio(&kp, &k);
                Some(lhs - rhs_k - rhs_d * ratio(&d, &k))
            }
            None => None,
        };
        checks.push(Check {
            r,
            margin,
            slack: REL_SLACK * r * r,
        });
    }
    Ok(scan_threshold(&checks).map(|i| checks[i].r))
}

/// Gradient of an eigenfunction: exact Bochner identity `ℒ(∂_i v) = −λ ∂_i v`
/// with `λ = λ_v − 1/2`, then the frequency bound on the gradient field.
pub fn certify_c12(
    model: &SolitonModel,
    v: &Field,
    epsilon: f64,
    grid: &[f64],
    cfg: &NumericsConfig,
) -> Result<Certificate> {
    let u = gradient_field(v)?;
    u.check_compatible(model)?;
    let exact = u.is_exact_eigen();
    let c = curve(model, &u, u.lambda, 0.5, grid, None, cfg)?;
    let [bound, growth] = certify_t11(&c, u.lambda, epsilon);
    let mut cert = Certificate::new(TheoremId::C12Bochner, &c);
    cert.params.epsilon = Some(epsilon);
    cert.note(format!(
        "exact identity ℒ(∂v) = −λ ∂v: {}",
        if exact { "verified" } else { "violated" }
    ));
    cert.note(format!(
        "frequency bound {}, growth bound {}",
        bound.verdict(),
        growth.verdict()
    ));
    cert.r_empirical = bound.r_empirical;
    cert.min_margin = bound.min_margin;
    if !exact {
        cert.passed = false;
        return Ok(cert);
    }
    if bound.vacuous && growth.vacuous {
        return Ok(cert.vacuous("λ = 0 or constant gradient: parallel field"));
    }
    if bound.inconclusive || growth.inconclusive {
        return Ok(cert.inconclusive("frequency undefined for the gradient field"));
    }
    cert.passed = bound.passed && growth.passed;
    Ok(cert)
}
