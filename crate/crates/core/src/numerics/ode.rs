//! Dormand-Prince 5(4) integrator with continuous (dense) output.

use super::NumericsConfig;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    rcont: [[f64; N]; 5],
}

/// Dense solution table produced by [`ode_solve`].
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    t_start: f64,
    t_end: f64,
    y_start: [f64; N],
    y_end: [f64; N],
}

impl<const N: usize> DenseSolution<N> {
    pub fn span(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    pub fn steps(&self) -> usize {
        self.steps.len()
    }

    pub fn final_state(&self) -> [f64; N] {
        self.y_end
    }

    /// Interpolated state at `t` inside the integration span.
    pub fn eval(&self, t: f64) -> Result<[f64; N]> {
        let (lo, hi) = if self.t_start <= self.t_end {
            (self.t_start, self.t_end)
        } else {
            (self.t_end, self.t_start)
        };
        if !(t >= lo && t <= hi) {
            return Err(Error::ParameterDomain(format!(
                "t = {t} outside solution span [{lo}, {hi}]"
            )));
        }
        if self.steps.is_empty() || t == self.t_start {
            return Ok(self.y_start);
        }
        let forward = self.t_end > self.t_start;
        let idx = self
            .steps
            .partition_point(|s| {
                if forward {
                    s.t0 + s.h < t
                } else {
                    s.t0 + s.h > t
                }
            })
            .min(self.steps.len() - 1);
        let s = &self.steps[idx];
        let theta = (t - s.t0) / s.h;
        let theta1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            let r = &s.rcont;
            y[i] = r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        Ok(y)
    }
}

fn stage<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N], h: f64) -> ([[f64; N]; 7], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = rhs(t, y);
    let mut y1 = [0.0; N];
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        if s == 6 {
            y1 = ys;
        }
        k[s] = rhs(t + C[s] * h, &ys);
    }
    (k, y1)
}

/// Adaptive integration of `y' = rhs(t, y)` over `span = (t0, t1)` with
/// per-step local error bounded by `ode_tol` (mixed absolute/relative).
pub fn ode_solve<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    span: (f64, f64),
    cfg: &NumericsConfig,
) -> Result<DenseSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let (t0, t1) = span;
    let tol = cfg.ode_tol;
    let direction = if t1 >= t0 { 1.0 } else { -1.0 };
    let length = (t1 - t0).abs();
    let mut steps = Vec::new();
    if length == 0.0 {
        return Ok(DenseSolution {
            steps,
            t_start: t0,
            t_end: t1,
            y_start: y0,
            y_end: y0,
        });
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = direction * (1e-3 * length).min(0.01);
    let h_min = 1e-13 * length.max(t0.abs()).max(1.0);
    let mut rejections = 0usize;

    while (t1 - t) * direction > 0.0 {
        if (t + h - t1) * direction > 0.0 {
            h = t1 - t;
        }
        let (k, y_next) = stage(&rhs, t, &y, h);
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for s in 0..7 {
                e += E[s] * k[s][i];
            }
            e *= h;
            let sc = tol + tol * y[i].abs().max(y_next[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::NumericRange(format!(
                "non-finite state near t = {t} during ODE integration"
            )));
        }
        if err <= 1.0 {
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_next[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k[6][i] - bspl;
                let mut d = 0.0;
                for s in 0..7 {
                    d += D[s] * k[s][i];
                }
                rcont[4][i] = h * d;
            }
            steps.push(DenseStep { t0: t, h, rcont });
            t += h;
            y = y_next;
            rejections = 0;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            rejections += 1;
            h *= (0.9 * err.powf(-0.25)).clamp(0.1, 0.5);
            if h.abs() < h_min || rejections > 100 {
                return Err(Error::Stiffness { t, h });
            }
        }
    }

    Ok(DenseSolution {
        steps,
        t_start: t0,
        t_end: t1,
        y_start: y0,
        y_end: y,
    })
}

/// Fixed-step fifth-order Dormand-Prince, used to measure convergence order.
pub fn rk_fixed<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    span: (f64, f64),
    n_steps: usize,
) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = (span.1 - span.0) / n_steps as f64;
    let mut y = y0;
    for i in 0..n_steps {
        let t = span.0 + i as f64 * h;
        y = stage(&rhs, t, &y, h).1;
    }
    y
}
