//! Pass/fail certificates for the growth, positivity and monotonicity
//! statements, built on frequency curves.

mod asymptotics;
mod differential;
mod growth;
mod suite;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::FrequencyCurve;

pub use asymptotics::{
    certify_asymptotics, expected_coefficient, fit_asymptotics, fit_asymptotics_window,
    sharp_asymptotics, AsymptoticFit, FIT_REL_TOL, FIT_WINDOW,
};
pub use differential::{certify_c12, certify_p41_c42, certify_p53, p53_r0, P53Params};
pub use growth::{certify_p31, certify_t11, certify_t13, certify_t43, t43_threshold};
pub use suite::{
    catalog, certification_grid, run_suite, CatalogEntry, Suite, SuiteItem, SuiteOptions,
};

/// Relative slack granted to every comparison on top of propagated errors.
pub const REL_SLACK: f64 = 1e-6;

/// Fraction of the grid's upper end beyond which every assertion must hold
/// for threshold-type certificates to pass.
pub const TAIL_FRACTION: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T11_bound")]
    T11Bound,
    #[serde(rename = "T11_growth")]
    T11Growth,
    #[serde(rename = "T13_poisson")]
    T13Poisson,
    #[serde(rename = "P31_positivity")]
    P31Positivity,
    #[serde(rename = "P41_inequalities")]
    P41Inequalities,
    #[serde(rename = "C42_lowerbound")]
    C42LowerBound,
    #[serde(rename = "T43_dichotomy")]
    T43Dichotomy,
    #[serde(rename = "P53_three_circles")]
    P53ThreeCircles,
    #[serde(rename = "C12_bochner")]
    C12Bochner,
    #[serde(rename = "S41_asymptotics")]
    S41Asymptotics,
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T11Bound => "T11_bound",
            TheoremId::T11Growth => "T11_growth",
            TheoremId::T13Poisson => "T13_poisson",
            TheoremId::P31Positivity => "P31_positivity",
            TheoremId::P41Inequalities => "P41_inequalities",
            TheoremId::C42LowerBound => "C42_lowerbound",
            TheoremId::T43Dichotomy => "T43_dichotomy",
            TheoremId::P53ThreeCircles => "P53_three_circles",
            TheoremId::C12Bochner => "C12_bochner",
            TheoremId::S41Asymptotics => "S41_asymptotics",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertParams {
    pub n: u32,
    pub k: u32,
    pub lambda: f64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "vacuous",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem_id: TheoremId,
    pub model: String,
    pub field: String,
    pub params: CertParams,
    pub r_range: [f64; 2],
    #[serde(rename = "R_empirical")]
    pub r_empirical: Option<f64>,
    pub min_margin: Option<f64>,
    pub passed: bool,
    pub vacuous: bool,
    pub inconclusive: bool,
    pub notes: Vec<String>,
}

impl Certificate {
    pub(crate) fn new(id: TheoremId, curve: &FrequencyCurve) -> Certificate {
        let (lo, hi) = curve.r_range();
        Certificate {
            theorem_id: id,
            model: curve.model.clone(),
            field: curve.field.clone(),
            params: CertParams {
                n: curve.n,
                k: curve.k,
                lambda: curve.lambda,
                epsilon: None,
                delta: None,
            },
            r_range: [lo, hi],
            r_empirical: None,
            min_margin: None,
            passed: false,
            vacuous: false,
            inconclusive: false,
            notes: Vec::new(),
        }
    }

    pub(crate) fn vacuous(mut self, note: impl Into<String>) -> Certificate {
        self.passed = true;
        self.vacuous = true;
        self.min_margin = None;
        self.notes.push(note.into());
        self
    }

    pub(crate) fn inconclusive(mut self, note: impl Into<String>) -> Certificate {
        self.passed = false;
        self.inconclusive = true;
        self.notes.push(note.into());
        self
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn verdict(&self) -> Verdict {
        if self.inconclusive {
            Verdict::Inconclusive
        } else if self.vacuous {
            Verdict::Vacuous
        } else if self.passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

/// One pointwise comparison `margin ≥ −slack`; `margin = None` (undefined
/// quantity) counts as a violation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Check {
    pub r: f64,
    pub margin: Option<f64>,
    pub slack: f64,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.margin.is_some_and(|m| m >= -self.slack)
    }
}

/// Index of the first check after which every later check holds.
pub(crate) fn scan_threshold(checks: &[Check]) -> Option<usize> {
    let mut start = checks.len();
    for (i, c) in checks.iter().enumerate().rev() {
        if c.ok() {
            start = i;
        } else {
            break;
        }
    }
    (start < checks.len()).then_some(start)
}

/// Minimum margin over checks; `None` if any margin is undefined or the set is empty.
pub(crate) fn min_margin(checks: &[Check]) -> Option<f64> {
    checks
        .iter()
        .map(|c| c.margin.unwrap_or(f64::NEG_INFINITY))
        .reduce(f64::min)
        .filter(|m| *m > f64::NEG_INFINITY)
}

/// Threshold-type verdict: scan for the empirical threshold, then require
/// every check in the fixed tail `r ≥ TAIL_FRACTION · r_hi` to hold. The
/// reported margin is the minimum over that tail, which makes it
/// independent of where the threshold lands.
pub(crate) fn threshold_verdict(cert: &mut Certificate, checks: &[Check]) {
    let r_hi = checks.last().map(|c| c.r).unwrap_or(f64::NAN);
    let tail: Vec<Check> = checks
        .iter()
        .copied()
        .filter(|c| c.r >= TAIL_FRACTION * r_hi)
        .collect();
    cert.r_empirical = scan_threshold(checks).map(|i| checks[i].r);
    cert.min_margin = min_margin(&tail);
    cert.passed = !tail.is_empty() && tail.iter().all(Check::ok);
    if cert.r_empirical.is_none() {
        cert.note("no grid threshold beyond which the assertion holds");
    }
}

/// Which certificates to run.
impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::parse(s)
    }
}

/// Aggregate exit status: 0 all pass, 1 any failure, 3 any inconclusive.
pub fn exit_code(certs: &[Certificate]) -> i32 {
    if certs.iter().any(|c| c.verdict() == Verdict::Fail) {
        1
    } else if certs.iter().any(|c| c.verdict() == Verdict::Inconclusive) {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(r: f64, m: Option<f64>) -> Check {
        Check {
            r,
            margin: m,
            slack: 1e-9,
        }
    }

    #[test]
    fn threshold_scans_from_the_right() {
        let c = [
            check(1.0, Some(-1.0)),
            check(2.0, Some(0.5)),
            check(3.0, None),
            check(4.0, Some(0.1)),
            check(5.0, Some(0.2)),
        ];
        assert_eq!(scan_threshold(&c), Some(3));
        assert_eq!(scan_threshold(&c[..3]), None);
        assert_eq!(min_margin(&c[3..]), Some(0.1));
        assert_eq!(min_margin(&c), None);
    }

    #[test]
    fn exit_codes() {
        let curve = FrequencyCurve {
            model: "gc:1:0".into(),
            field: "hermite:1".into(),
            n: 1,
            k: 0,
            lambda: 0.5,
            delta: 0.5,
            psi: None,
            points: vec![],
        };
        let mut pass = Certificate::new(TheoremId::T11Bound, &curve);
        pass.passed = true;
        let fail = Certificate::new(TheoremId::T11Bound, &curve);
        let inc = Certificate::new(TheoremId::T11Bound, &curve).inconclusive("x");
        assert_eq!(exit_code(&[pass.clone()]), 0);
        assert_eq!(exit_code(&[pass.clone(), inc.clone()]), 3);
        assert_eq!(exit_code(&[inc, fail]), 1);
        let json = pass.to_json();
        assert!(json.contains("\"theorem_id\":\"T11_bound\""));
        assert!(json.contains("\"R_empirical\":null"));
    }
}
