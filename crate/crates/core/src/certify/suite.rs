//! Certificate suites over a single (model, field) pair and over the catalog.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use super::asymptotics::{certify_asymptotics, sharp_asymptotics};
use super::differential::{certify_c12, certify_p41_c42, certify_p53, P53Params};
use super::growth::{certify_p31, certify_t11, certify_t13, certify_t43};
use super::{Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::fields::{gradient_field, parse_field, Field};
use crate::frequency::{curve, FrequencyCurve, Psi};
use crate::models::SolitonModel;
use crate::numerics::{GridSpec, NumericsConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteItem {
    T11,
    T13,
    P31,
    P41,
    C42,
    T43,
    P53,
    C12,
    Asy,
}

impl SuiteItem {
    pub const ALL: [SuiteItem; 9] = [
        SuiteItem::T11,
        SuiteItem::T13,
        SuiteItem::P31,
        SuiteItem::P41,
        SuiteItem::C42,
        SuiteItem::T43,
        SuiteItem::P53,
        SuiteItem::C12,
        SuiteItem::Asy,
    ];

    fn name(&self) -> &'static str {
        match self {
            SuiteItem::T11 => "T11",
            SuiteItem::T13 => "T13",
            SuiteItem::P31 => "P31",
            SuiteItem::P41 => "P41",
            SuiteItem::C42 => "C42",
            SuiteItem::T43 => "T43",
            SuiteItem::P53 => "P53",
            SuiteItem::C12 => "C12",
            SuiteItem::Asy => "ASY",
        }
    }
}

/// A set of suite items, parsed from `all` or a comma list such as `T11,P31`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suite(BTreeSet<SuiteItem>);

impl Suite {
    pub fn all() -> Suite {
        Suite(SuiteItem::ALL.into_iter().collect())
    }

    pub fn parse(s: &str) -> Result<Suite> {
        let mut items = BTreeSet::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok.eq_ignore_ascii_case("all") {
                items.extend(SuiteItem::ALL);
                continue;
            }
            let item = SuiteItem::ALL
                .into_iter()
                .find(|i| i.name().eq_ignore_ascii_case(tok))
                .ok_or_else(|| {
                    Error::parse(
                        tok,
                        "expected one of T11,T13,P31,P41,C42,T43,P53,C12,ASY or all",
                    )
                })?;
            items.insert(item);
        }
        if items.is_empty() {
            return Err(Error::parse(s, "empty suite"));
        }
        Ok(Suite(items))
    }

    pub fn contains(&self, item: SuiteItem) -> bool {
        self.0.contains(&item)
    }

    pub fn items(&self) -> impl Iterator<Item = SuiteItem> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.items().map(|i| i.name()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub suite: Suite,
    pub epsilon: f64,
    pub delta: f64,
    /// Overrides the field's own λ.
    pub lambda: Option<f64>,
    pub psi: Option<Psi>,
    pub r1: f64,
    pub big_r: f64,
    /// Defaults to the config grid; the lower end is raised to `1.05 b_min`.
    pub grid: Option<GridSpec>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        let p53 = P53Params::default();
        SuiteOptions {
            suite: Suite::all(),
            epsilon: 1.0,
            delta: 0.5,
            lambda: None,
            psi: None,
            r1: p53.r1,
            big_r: p53.big_r,
            grid: None,
        }
    }
}

/// Grid used for certification: `grid` with its lower end clear of `b_min`.
pub fn certification_grid(model: &SolitonModel, grid: GridSpec) -> Result<Vec<f64>> {
    let lo = grid.r_lo.max(1.05 * model.b_min());
    Ok(GridSpec::new(lo, grid.r_hi, grid.points)?.points())
}

fn not_l2(id: TheoremId, c: &FrequencyCurve) -> Certificate {
    Certificate::new(id, c).vacuous("hypothesis u ∈ L² not satisfied")
}

fn no_lambda(id: TheoremId, c: &FrequencyCurve) -> Certificate {
    Certificate::new(id, c).vacuous("hypothesis ⟨ℒu,u⟩ ≥ −λ|u|² not satisfied")
}

/// Whether `⟨ℒu,u⟩ ≥ −λ|u|²` holds: exactly for eigenfunctions, at the grid
/// levels otherwise.
fn lambda_hypothesis(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    grid: &[f64],
) -> Result<bool> {
    if field.is_exact_eigen() || field.growing().is_some() {
        return Ok(lambda >= field.lambda * (1.0 - 1e-12));
    }
    for &r in grid {
        let s = field.eval(model, r)?;
        let v = -(s.lu_dot_u + lambda * s.value2);
        if v > 1e-9 * (s.lu_dot_u.abs() + lambda * s.value2.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Run every selected certificate on one (model, field) pair. Certificates
/// are computed in parallel and returned in a fixed order.
pub fn run_suite(
    model: &SolitonModel,
    field: &Field,
    opts: &SuiteOptions,
    cfg: &NumericsConfig,
) -> Result<Vec<Certificate>> {
    field.check_compatible(model)?;
    let lambda = opts.lambda.unwrap_or(field.lambda);
    let grid = certification_grid(model, opts.grid.unwrap_or(cfg.r_grid))?;
    let psi = opts
        .suite
        .contains(SuiteItem::T13)
        .then(|| opts.psi.unwrap_or(Psi::Zero));
    let c = curve(model, field, lambda, opts.delta, &grid, psi, cfg)?;
    let l2 = field.growing().is_none();
    let hyp = lambda_hypothesis(model, field, lambda, &grid)?;
    let wants41 = opts.suite.contains(SuiteItem::P41);
    let wants42 = opts.suite.contains(SuiteItem::C42);
    // P41 and C42 share one computation.
    let items: Vec<SuiteItem> = opts
        .suite
        .items()
        .filter(|&i| !(i == SuiteItem::C42 && wants41))
        .collect();
    let groups: Vec<Result<Vec<Certificate>>> = items
        .par_iter()
        .map(|&item| -> Result<Vec<Certificate>> {
            Ok(match item {
                SuiteItem::T11 if !hyp => vec![
                    no_lambda(TheoremId::T11Bound, &c),
                    no_lambda(TheoremId::T11Growth, &c),
                ],
                SuiteItem::P41 | SuiteItem::C42 if !hyp => [
                    (wants41, TheoremId::P41Inequalities),
                    (wants42, TheoremId::C42LowerBound),
                ]
                .into_iter()
                .filter(|w| w.0)
                .map(|w| no_lambda(w.1, &c))
                .collect(),
                SuiteItem::T43 if !hyp => vec![no_lambda(TheoremId::T43Dichotomy, &c)],
                SuiteItem::P53 if !hyp => vec![no_lambda(TheoremId::P53ThreeCircles, &c)],
                SuiteItem::Asy if !hyp => vec![no_lambda(TheoremId::S41Asymptotics, &c)],
                SuiteItem::T11 if !l2 => vec![
                    not_l2(TheoremId::T11Bound, &c),
                    not_l2(TheoremId::T11Growth, &c),
                ],
                SuiteItem::T11 => certify_t11(&c, lambda, opts.epsilon).to_vec(),
                SuiteItem::T13 if !l2 => vec![not_l2(TheoremId::T13Poisson, &c)],
                SuiteItem::T13 => vec![certify_t13(&c, lambda, opts.delta)?],
                SuiteItem::P31 if !l2 => vec![not_l2(TheoremId::P31Positivity, &c)],
                SuiteItem::P31 if !field.is_exact_eigen() => {
                    vec![Certificate::new(TheoremId::P31Positivity, &c)
                        .vacuous("field is not an exact eigenfunction")]
                }
                SuiteItem::P31 => vec![certify_p31(&c, lambda)],
                SuiteItem::P41 | SuiteItem::C42 => {
                    let [p41, c42] = certify_p41_c42(model, field, lambda, &grid, cfg)?;
                    let mut out = Vec::new();
                    if wants41 {
                        out.push(p41);
                    }
                    if wants42 {
                        out.push(c42);
                    }
                    out
                }
                SuiteItem::T43 => vec![certify_t43(&c, lambda, opts.delta)],
                SuiteItem::P53 => {
                    let mut delta = opts.delta;
                    let mut note = None;
                    if lambda > 0.0 && delta >= 2.0 * lambda {
                        delta = lambda;
                        note = Some(format!("δ reduced to λ = {lambda} to lie in (0, 2λ)"));
                    }
                    let params = P53Params {
                        r1: opts.r1.max(1.05 * model.b_min()),
                        big_r: opts.big_r,
                        delta,
                    };
                    let mut cert = certify_p53(model, field, lambda, params, cfg)?;
                    cert.notes.extend(note);
                    vec![cert]
                }
                SuiteItem::C12 => match gradient_field(field) {
                    Ok(_) => vec![certify_c12(model, field, opts.epsilon, &grid, cfg)?],
                    Err(e) => vec![Certificate::new(TheoremId::C12Bochner, &c)
                        .vacuous(format!("not applicable: {e}"))],
                },
                SuiteItem::Asy if !l2 => vec![not_l2(TheoremId::S41Asymptotics, &c)],
                SuiteItem::Asy => vec![certify_asymptotics(&c, lambda, sharp_asymptotics(field))],
            })
        })
        .collect();
    let mut out = Vec::new();
    for g in groups {
        out.extend(g?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub model: String,
    pub field: String,
    pub psi: Option<Psi>,
}

impl CatalogEntry {
    fn new(model: &str, field: impl Into<String>) -> CatalogEntry {
        CatalogEntry {
            model: model.into(),
            field: field.into(),
            psi: None,
        }
    }

    fn with_psi(mut self, psi: Psi) -> CatalogEntry {
        self.psi = Some(psi);
        self
    }

    pub fn build(&self, cfg: &NumericsConfig) -> Result<(SolitonModel, Field)> {
        let model: SolitonModel = self.model.parse()?;
        let field = parse_field(&self.field, &model, cfg)?;
        Ok((model, field))
    }
}

/// Catalog of (model, field) pairs exercised by `certify --catalog`.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for m in 0..=8 {
        out.push(CatalogEntry::new("gc:1:0", format!("hermite:{m}")));
    }
    for m in 1..=8 {
        out.push(CatalogEntry::new("gc:1:0", format!("grad:hermite:{m}")));
    }
    for n in [2, 3, 5] {
        let model = format!("gc:{n}:0");
        for m in 0..=4 {
            out.push(CatalogEntry::new(&model, format!("radial:{m}")));
        }
        for m in 1..=4 {
            out.push(CatalogEntry::new(&model, format!("grad:radial:{m}")));
        }
    }
    out.push(CatalogEntry::new("gc:3:2", "prod:1"));
    out.push(CatalogEntry::new("gc:4:1", "prod:0,0,0"));
    out.push(CatalogEntry::new("gc:2:1", "prod:2"));
    for lam in ["0.5", "0.75", "1"] {
        out.push(CatalogEntry::new("gc:1:0", format!("grow:{lam}")));
    }
    out.push(CatalogEntry::new("gc:1:0", "mix:2,4").with_psi(Psi::Deficit));
    out.push(CatalogEntry::new("gc:1:0", "mix:1,3").with_psi(Psi::Deficit));
    out.push(CatalogEntry::new("gc:1:0", "hermite:1").with_psi(Psi::Gaussian));
    out.push(CatalogEntry::new("gc:1:0", "hermite:3").with_psi(Psi::Gaussian));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("all").unwrap(), Suite::all());
        let s = Suite::parse("t11, ASY").unwrap();
        assert!(s.contains(SuiteItem::T11) && s.contains(SuiteItem::Asy));
        assert!(!s.contains(SuiteItem::P31));
        assert_eq!(s.to_string(), "T11,ASY");
        assert!(Suite::parse("T99").is_err());
        assert!(Suite::parse("").is_err());
    }

    #[test]
    fn catalog_entries_build() {
        let cfg = NumericsConfig::default();
        for e in catalog() {
            e.build(&cfg)
                .unwrap_or_else(|err| panic!("{}/{}: {err}", e.model, e.field));
        }
    }
}
