//! Values checked against independent high-precision computations.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use driftfreq::fields::poly::{q, q_to_f64, MPoly, UPoly};
use driftfreq::fields::{half_integer, hermite_poly, is_eigen, GrowingSolution, Parity};
use driftfreq::models::{make_model, unit_sphere_area};
use driftfreq::numerics::{
    gaussian_moment_tail, integrate, integrate_tail, GridSpec, NumericsConfig,
};

fn cfg() -> NumericsConfig {
    NumericsConfig::default()
}

#[test]
fn gaussian_integral() {
    let r = integrate_tail(
        |x| (-x * x).exp(),
        0.0,
        |x| (-x * x).exp() / x.max(1e-300),
        &cfg(),
    )
    .unwrap();
    assert!((r.value - 0.886_226_925_452_758_01).abs() < 1e-10);
}

#[test]
fn cubic_moment_tail_is_bounded_by_estimate() {
    // ∫_6^∞ t³ e^{−t²/4} dt
    let exact = 0.009_872_784_326_934_364;
    let q = integrate(|t| t.powi(3) * (-t * t / 4.0).exp(), 6.0, 60.0, &cfg()).unwrap();
    assert!((q.value - exact).abs() < 1e-12);
    let bound = gaussian_moment_tail(3.0, 6.0);
    assert!(bound >= exact);
    assert!(bound < 1.5 * exact);
    assert!(gaussian_moment_tail(3.0, 1.0).is_infinite());
}

#[test]
fn sphere_areas() {
    assert_eq!(unit_sphere_area(1), 2.0);
    assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-15);
    assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    assert!((unit_sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
}

#[test]
fn soliton_identities_hold_on_all_models() {
    let grid = GridSpec::new(3.0, 40.0, 30).unwrap().points();
    for (n, k) in [(1, 0), (2, 0), (3, 0), (5, 0), (3, 2), (4, 1), (2, 1)] {
        let m = make_model(n, k).unwrap();
        let res = m.verify_soliton_identities(&grid).unwrap();
        assert!(res.max() < 1e-10, "gc:{n}:{k}: {res:?}");
    }
}

#[test]
fn hermite_low_degrees() {
    assert_eq!(hermite_poly(0), UPoly::from_ints(&[1]));
    assert_eq!(hermite_poly(1), UPoly::from_ints(&[0, 1]));
    assert_eq!(hermite_poly(2), UPoly::from_ints(&[-2, 0, 1]));
    assert_eq!(hermite_poly(3), UPoly::from_ints(&[0, -6, 0, 1]));
    assert_eq!(hermite_poly(4), UPoly::from_ints(&[12, 0, -12, 0, 1]));
    assert_eq!(hermite_poly(5), UPoly::from_ints(&[0, 60, 0, -20, 0, 1]));
}

#[test]
fn hermite_derivative_and_eigen_identities() {
    for m in 1..=12u32 {
        let h = hermite_poly(m);
        assert_eq!(
            h.deriv(),
            hermite_poly(m - 1).scale(&q(m as i64)),
            "m = {m}"
        );
        let comp = vec![MPoly::from_univariate(&h, 1, 0)];
        assert!(is_eigen(&comp, &half_integer(m)), "m = {m}");
        assert!(!is_eigen(&comp, &half_integer(m + 1)), "m = {m}");
    }
}

#[test]
fn hermite_orthogonality_and_norms() {
    let c = cfg();
    let w = |x: f64| (-x * x / 4.0).exp();
    for m in 0..=6u32 {
        let hm = hermite_poly(m).to_f64();
        for l in 0..=m {
            let hl = hermite_poly(l).to_f64();
            let v = integrate(|x| hm.eval(x) * hl.eval(x) * w(x), -40.0, 40.0, &c)
                .unwrap()
                .value;
            // ‖h_m‖² = 2^m m! · 2√π
            let want = if l == m {
                2f64.powi(m as i32) * (1..=m).product::<u32>() as f64 * 2.0 * PI.sqrt()
            } else {
                0.0
            };
            assert!(
                (v - want).abs() < 1e-8 * want.max(1.0),
                "m = {m}, l = {l}: {v}"
            );
        }
    }
}

#[test]
fn rational_conversion() {
    assert_eq!(q_to_f64(&half_integer(3)), 1.5);
}

/// (λ, parity, x, ln|u|, u'/u) for `u = ₁F₁(−λ; ½; x²/4)` (even) and
/// `u = x ₁F₁(½−λ; 3/2; x²/4)` (odd).
const GROWING: &[(f64, Parity, f64, f64, f64)] = &[
    (
        0.5,
        Parity::Even,
        1.0,
        -0.302_405_515_664_486_91,
        -0.737_427_403_914_982_51,
    ),
    (
        0.5,
        Parity::Even,
        2.5,
        0.133_580_707_173_327_95,
        2.069_674_272_424_97,
    ),
    (
        0.5,
        Parity::Even,
        5.0,
        4.090_810_334_508_078_5,
        1.932_822_796_508_465_2,
    ),
    (
        0.5,
        Parity::Even,
        10.0,
        21.152_862_841_764_514,
        4.785_872_191_823_233_5,
    ),
    (
        0.5,
        Parity::Even,
        20.0,
        94.716_954_177_932_297,
        9.898_444_742_093_713_8,
    ),
    (
        0.5,
        Parity::Even,
        40.0,
        393.319_154_814_913_78,
        19.949_810_838_845_795,
    ),
    (
        0.75,
        Parity::Even,
        1.0,
        -0.483_131_970_429_365_02,
        -1.269_862_502_526_532,
    ),
    (
        0.75,
        Parity::Even,
        2.5,
        0.561_876_459_084_754_84,
        1.505_942_632_797_511_6,
    ),
    (
        0.75,
        Parity::Even,
        5.0,
        3.645_298_095_352_462_8,
        1.605_045_886_184_604_7,
    ),
    (
        0.75,
        Parity::Even,
        10.0,
        20.068_889_774_167_139,
        4.728_823_795_970_838_9,
    ),
    (
        0.75,
        Parity::Even,
        20.0,
        93.262_527_171_513_304,
        9.872_719_788_478_600_5,
    ),
    (
        0.75,
        Parity::Even,
        40.0,
        391.512_826_011_696_48,
        19.937_223_789_550_409,
    ),
    (
        1.0,
        Parity::Odd,
        1.0,
        -0.089_370_965_427_593_623,
        0.808_128_215_712_850_85,
    ),
    (
        1.0,
        Parity::Odd,
        2.5,
        -0.065_267_539_216_786_021,
        -1.219_996_812_931_000_4,
    ),
    (
        1.0,
        Parity::Odd,
        5.0,
        3.523_726_838_630_692_4,
        1.763_117_406_419_041_9,
    ),
    (
        1.0,
        Parity::Odd,
        10.0,
        19.611_680_634_001_57,
        4.670_108_046_753_466_5,
    ),
    (
        1.0,
        Parity::Odd,
        20.0,
        92.429_801_962_162_894,
        9.846_855_993_638_300_5,
    ),
    (
        1.0,
        Parity::Odd,
        40.0,
        390.327_198_626_053_86,
        19.924_620_714_969_093,
    ),
];

#[test]
fn growing_solutions_match_hypergeometric_closed_forms() {
    let c = cfg();
    for &(lambda, parity, x, ln_u, log_deriv) in GROWING {
        let sol = GrowingSolution::solve(lambda, parity, 64.0, &c).unwrap();
        assert_eq!(sol.parity, parity);
        let (got, _) = sol.log_abs_u(x).unwrap();
        assert!(
            (got - ln_u).abs() < 1e-7 * ln_u.abs().max(1.0),
            "λ={lambda} x={x}: ln|u| {got} vs {ln_u}"
        );
        let st = sol.state(x).unwrap();
        let ratio = st.theta.tan();
        assert!(
            (ratio - log_deriv).abs() < 1e-7 * log_deriv.abs().max(1.0),
            "λ={lambda} x={x}: u'/u {ratio} vs {log_deriv}"
        );
    }
}

#[test]
fn growing_solution_avoids_polynomial_parity() {
    // λ = 1 even would be the Hermite polynomial h₂
    let sol = GrowingSolution::solve(1.0, Parity::Even, 20.0, &cfg()).unwrap();
    assert_eq!(sol.parity, Parity::Odd);
}

#[test]
fn growing_wronskian() {
    // W(u_even, u_odd) = e^{x²/4} since W' = (x/2) W and W(0) = 1
    let c = cfg();
    let lambda = 0.75;
    let e = GrowingSolution::solve(lambda, Parity::Even, 30.0, &c).unwrap();
    let o = GrowingSolution::solve(lambda, Parity::Odd, 30.0, &c).unwrap();
    // cancellation grows like e^{x²/4}, so stay at moderate x
    for x in [0.5, 2.0, 4.0, 8.0] {
        let (u1, d1) = e.value_and_derivative(x).unwrap();
        let (u2, d2) = o.value_and_derivative(x).unwrap();
        let w = u1 * d2 - u2 * d1;
        let want = (x * x / 4.0f64).exp();
        assert!(((w - want) / want).abs() < 1e-7, "x = {x}: {w} vs {want}");
    }
}
