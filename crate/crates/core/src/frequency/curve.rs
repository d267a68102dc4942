//! Assembly of I, D, U, J, K and the derivative formulas over a grid.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::boundary::{
    d_d_from, d_from, dlog_i_from, frequency_of, i_from, level, s_correction_from, Estimate,
};
use super::solid::{j_compute, Psi};
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::models::SolitonModel;
use crate::numerics::{format_f64, format_scaled, NumericsConfig, Scaled};

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub r: f64,
    pub i: Scaled,
    pub d: Scaled,
    pub u: Option<Estimate>,
    pub j: Option<Scaled>,
    pub k: Scaled,
    pub dlog_i: Option<Estimate>,
    pub d_d: Scaled,
    /// `r (log I)' − 2U`, the S-correction term.
    pub s_corr: Option<f64>,
    /// Non-fatal failure at this point.
    pub flag: Option<String>,
}

impl CurvePoint {
    fn failed(r: f64, e: &Error) -> CurvePoint {
        let nan = Scaled {
            value: f64::NAN,
            log_scale: 0.0,
            err: f64::NAN,
        };
        CurvePoint {
            r,
            i: nan,
            d: nan,
            u: None,
            j: None,
            k: nan,
            dlog_i: None,
            d_d: nan,
            s_corr: None,
            flag: Some(e.to_string()),
        }
    }

    /// `ln I`, or `None` where I is not positive.
    pub fn ln_i(&self) -> Option<f64> {
        (self.i.value > 0.0).then(|| self.i.ln_abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyCurve {
    pub model: String,
    pub field: String,
    pub n: u32,
    pub k: u32,
    pub lambda: f64,
    pub delta: f64,
    pub psi: Option<Psi>,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSummary {
    pub points: usize,
    pub failed: usize,
    pub u_defined: usize,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    /// `2√(n + 4λ)`
    pub positivity_threshold: f64,
    /// I > 0 at every grid point beyond the threshold.
    pub positive_beyond_threshold: bool,
}

impl FrequencyCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn r(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.r).collect()
    }

    pub fn u(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.u.map(|e| e.value)).collect()
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.flag.is_some()).count()
    }

    pub fn r_range(&self) -> (f64, f64) {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => (a.r, b.r),
            _ => (f64::NAN, f64::NAN),
        }
    }

    pub fn positivity_threshold(&self) -> f64 {
        2.0 * (self.n as f64 + 4.0 * self.lambda).sqrt()
    }

    pub fn summary(&self) -> CurveSummary {
        let us: Vec<f64> = self
            .points
            .iter()
            .filter_map(|p| p.u.map(|e| e.value))
            .collect();
        let thr = self.positivity_threshold();
        CurveSummary {
            points: self.len(),
            failed: self.failures(),
            u_defined: us.len(),
            u_min: us.iter().copied().reduce(f64::min),
            u_max: us.iter().copied().reduce(f64::max),
            positivity_threshold: thr,
            positive_beyond_threshold: self
                .points
                .iter()
                .filter(|p| p.r > thr)
                .all(|p| p.i.value > 0.0),
        }
    }

    /// CSV with header `r,I,D,U,J,K,dlogI,dD,err_I,err_D,S_corr,flag`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record([
            "r", "I", "D", "U", "J", "K", "dlogI", "dD", "err_I", "err_D", "S_corr", "flag",
        ])
        .map_err(io)?;
        let sc = |s: &Scaled| format_scaled(s.value, s.log_scale);
        let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        for p in &self.points {
            out.write_record([
                format_f64(p.r),
                sc(&p.i),
                sc(&p.d),
                opt(p.u.map(|e| e.value)),
                p.j.as_ref().map(sc).unwrap_or_default(),
                sc(&p.k),
                opt(p.dlog_i.map(|e| e.value)),
                sc(&p.d_d),
                format_scaled(p.i.err, p.i.log_scale),
                format_scaled(p.d.err, p.d.log_scale),
                opt(p.s_corr),
                p.flag.clone().unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn point(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    delta: f64,
    r: f64,
    psi: Option<Psi>,
    cfg: &NumericsConfig,
) -> Result<CurvePoint> {
    let l = level(model, field, r)?;
    let i = i_from(model, &l);
    let d = d_from(model, &l);
    let u = frequency_of(&i, &d);
    let j = psi
        .map(|p| j_compute(model, field, p, r, cfg))
        .transpose()?;
    let k = d.sub(&i.scale_by(2.0 * lambda + delta / 2.0));
    Ok(CurvePoint {
        r,
        i,
        d,
        u,
        j,
        k,
        dlog_i: dlog_i_from(model, &l, &i).ok(),
        d_d: d_d_from(model, &l, &d),
        s_corr: s_correction_from(model, &l, &i),
        flag: None,
    })
}

/// Evaluate every quantity on `grid`; per-point failures are flagged, not fatal.
pub fn curve(
    model: &SolitonModel,
    field: &Field,
    lambda: f64,
    delta: f64,
    grid: &[f64],
    psi: Option<Psi>,
    cfg: &NumericsConfig,
) -> Result<FrequencyCurve> {
    if !(lambda >= 0.0) {
        return Err(Error::ParameterDomain(format!(
            "λ must be ≥ 0, got {lambda}"
        )));
    }
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::ParameterDomain(format!(
            "δ must lie in (0, 2), got {delta}"
        )));
    }
    field.check_compatible(model)?;
    if let Some(&bad) = grid
        .iter()
        .find(|&&r| !(r > model.b_min()) || !r.is_finite())
    {
        return Err(Error::BelowCriticalLevel {
            r: bad,
            b_min: model.b_min(),
        });
    }
    let points = grid
        .par_iter()
        .map(|&r| {
            point(model, field, lambda, delta, r, psi, cfg)
                .unwrap_or_else(|e| CurvePoint::failed(r, &e))
        })
        .collect();
    Ok(FrequencyCurve {
        model: model.spec(),
        field: field.spec().to_string(),
        n: model.n,
        k: model.k,
        lambda,
        delta,
        psi,
        points,
    })
}
