//! Adaptive Gauss-Kronrod quadrature (21-point Kronrod extension of the
//! 10-point Gauss rule) with QUADPACK-style error estimates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsConfig;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_904_769_615_567,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of a quadrature: value, error estimate and the integral of |f|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub abs_integral: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const ROUNDOFF_FLOOR: f64 = 50.0 * f64::EPSILON;

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / resasc).powf(1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = ROUNDOFF_FLOOR * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(centre - x);
        let f2 = f(centre + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += wg * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let f1 = f(centre - x);
        let f2 = f(centre + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let err = rescale_error((resk - resg) * half, resabs, resasc);
    Segment {
        a,
        b,
        value,
        error: err,
        abs: resabs,
    }
}

/// Adaptive integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below
/// `max(quad_abs_tol, quad_rel_tol * |result|)`. Running out of the
/// subdivision budget yields [`Error::QuadratureFailure`] carrying the best
/// estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &NumericsConfig,
) -> Result<QuadResult> {
    integrate_with(
        &f,
        a,
        b,
        cfg.quad_abs_tol,
        cfg.quad_rel_tol,
        cfg.quad_max_intervals,
    )
}

pub(crate) fn integrate_with<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::ParameterDomain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            abs_integral: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate_with(f, b, a, abs_tol, rel_tol, max_intervals)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }

    let first = gk21(f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_integral = first.abs;
    // Segments too narrow to bisect meaningfully.
    let mut frozen_err = 0.0;
    let mut frozen_val = 0.0;
    let mut frozen_abs = 0.0;
    heap.push(first);

    loop {
        let tol = abs_tol.max(rel_tol * value.abs());
        // Either converged, or limited by the rounding floor of the rule
        // (cancelling integrands); the reported error stays honest.
        if error <= tol || error <= 2.0 * ROUNDOFF_FLOOR * abs_integral {
            break;
        }
        if heap.len() + 1 > max_intervals || heap.is_empty() {
            return Err(Error::QuadratureFailure {
                a,
                b,
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-15 * (b - a) {
            frozen_err += worst.error;
            frozen_val += worst.value;
            frozen_abs += worst.abs;
            if heap.is_empty() {
                value = frozen_val;
                error = frozen_err;
                let tol = abs_tol.max(rel_tol * value.abs());
                if error > tol {
                    return Err(Error::QuadratureFailure {
                        a,
                        b,
                        estimate: value,
                        error,
                    });
                }
                break;
            }
            continue;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        evaluations += 42;
        heap.push(left);
        heap.push(right);
        value = frozen_val;
        error = frozen_err;
        abs_integral = frozen_abs;
        for s in heap.iter() {
            value += s.value;
            error += s.error;
            abs_integral += s.abs;
        }
    }

    Ok(QuadResult {
        value,
        error,
        abs_integral,
        evaluations,
    })
}

/// Bound on `∫_x^∞ t^p e^{-t²/4} dt`, valid for `x² > 2(p-1)`; infinite otherwise.
pub fn gaussian_moment_tail(p: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    let denom = 1.0 - 2.0 * (p - 1.0) / (x * x);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * x.powf(p - 1.0) * (-x * x / 4.0).exp() / denom
}

/// Integrate over `[a, ∞)`, truncating where `tail_bound(X) ≥ ∫_X^∞ |f|`
/// drops below half the absolute tolerance. The truncation bound is added
/// to the reported error.
pub fn integrate_tail<F, T>(f: F, a: f64, tail_bound: T, cfg: &NumericsConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let target = 0.5 * cfg.quad_abs_tol;
    let mut width = 1.0_f64.max(a.abs() * 0.25);
    let mut cutoff = a + width;
    let mut iterations = 0;
    while !(tail_bound(cutoff) <= target) {
        width *= 1.5;
        cutoff = a + width;
        iterations += 1;
        if iterations > 200 {
            return Err(Error::NumericRange(format!(
                "tail bound never fell below {target:e} beyond {a}"
            )));
        }
    }
    let mut r = integrate(f, a, cutoff, cfg)?;
    r.error += tail_bound(cutoff);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_integral_is_exact() {
        let cfg = NumericsConfig::default();
        let r = integrate(|x| x, 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!(r.error < 1e-12);
    }

    #[test]
    fn reversed_bounds_negate() {
        let cfg = NumericsConfig::default();
        let r = integrate(|x| x * x, 1.0, 0.0, &cfg).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let cfg = NumericsConfig {
            quad_max_intervals: 3,
            quad_rel_tol: 1e-14,
            quad_abs_tol: 1e-300,
            ..NumericsConfig::default()
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg).unwrap_err();
        match err {
            Error::QuadratureFailure { estimate, .. } => assert!(estimate.is_finite()),
            e => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        // ∫_x^∞ t^3 e^{-t²/4} = 2(x²+4) e^{-x²/4}
        for &x in &[3.0, 5.0, 9.0] {
            let exact = 2.0 * (x * x + 4.0) * (-x * x / 4.0_f64).exp();
            assert!(gaussian_moment_tail(3.0, x) >= exact);
        }
    }
}
