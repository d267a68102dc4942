//! Exact rational polynomials: univariate (for radial profiles) and
//! multivariate on the Euclidean factor `R^d`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Univariate polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        UPoly::from_coeffs(vec![q(0), q(1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::from_coeffs(c.iter().map(|&v| q(v)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn deriv(&self) -> Self {
        UPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * q(i as i64))
                .collect(),
        )
    }

    /// Multiply by `x^p`.
    pub fn shift(&self, p: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); p];
        c.extend(self.coeffs.iter().cloned());
        UPoly::from_coeffs(c)
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> F64Poly {
        F64Poly {
            coeffs: self.coeffs.iter().map(q_to_f64).collect(),
        }
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        self.scale(&q(-1))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Floating-point image of a [`UPoly`], evaluated by Horner's rule.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct F64Poly {
    coeffs: Vec<f64>,
}

impl F64Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * x + c * i as f64)
    }

    /// `Σ |c_i| |x|^i`, the conditioning scale of the evaluation.
    pub fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn eval_deriv_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * ax + c.abs() * i as f64)
    }

    /// Forward rounding bound of Horner evaluation at `x`.
    pub fn rounding_bound(&self, x: f64) -> f64 {
        2.0 * (self.coeffs.len() as f64 + 1.0) * f64::EPSILON * self.eval_abs(x)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Multivariate polynomial on `R^d` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, q(1));
        p
    }

    /// `u(y_i)` for a univariate `u`.
    pub fn from_univariate(u: &UPoly, nvars: usize, i: usize) -> Self {
        let mut p = MPoly::zero(nvars);
        for (deg, c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = deg as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// `u(|y|²)` for a univariate `u`.
    pub fn radial(u: &UPoly, nvars: usize) -> Self {
        let s = (0..nvars).fold(MPoly::zero(nvars), |acc, i| {
            let yi = MPoly::var(nvars, i);
            &acc + &(&yi * &yi)
        });
        let mut result = MPoly::zero(nvars);
        let mut power = MPoly::constant(nvars, q(1));
        for c in u.coeffs() {
            result = &result + &power.scale(c);
            power = &power * &s;
        }
        result
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c * q(e[i] as i64));
        }
        p
    }

    /// Ornstein-Uhlenbeck drift Laplacian `Σ ∂_i² − ½ Σ y_i ∂_i`.
    pub fn drift_laplacian(&self) -> Self {
        let mut p = MPoly::zero(self.nvars);
        let half = q_frac(1, 2);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            if deg > 0 {
                p.add_term(e.clone(), -(c * &half) * q(deg as i64));
            }
            for i in 0..self.nvars {
                if e[i] >= 2 {
                    let mut e2 = e.clone();
                    e2[i] -= 2;
                    p.add_term(e2, c * q((e[i] * (e[i] - 1)) as i64));
                }
            }
        }
        p
    }

    /// Average over the sphere `|y| = ρ`, as a polynomial in `t = ρ²`.
    pub fn sphere_average(&self) -> UPoly {
        let d = self.nvars as i64;
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().any(|a| a % 2 == 1) {
                continue;
            }
            let half: Vec<i64> = e.iter().map(|&a| (a / 2) as i64).collect();
            let total: i64 = half.iter().sum();
            // ⟨y^α⟩ = Π (2a_i − 1)!! / Π_{j<A} (d + 2j)
            let mut num = BigInt::one();
            for &a in &half {
                for j in 0..a {
                    num *= BigInt::from(2 * j + 1);
                }
            }
            let mut den = BigInt::one();
            for j in 0..total {
                den *= BigInt::from(d + 2 * j);
            }
            let avg = Q::new(num, den);
            *out.entry(total as usize).or_insert_with(Q::zero) += c * avg;
        }
        let deg = out.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![Q::zero(); deg + 1];
        for (k, v) in out {
            coeffs[k] = v;
        }
        UPoly::from_coeffs(coeffs)
    }

    pub fn eval_f64(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.iter().zip(y).map(|(&a, &yi)| yi.powi(a as i32)).product();
                q_to_f64(c) * m
            })
            .sum()
    }

    pub fn eval_q(&self, y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (&a, yi) in e.iter().zip(y) {
                for _ in 0..a {
                    m *= yi;
                }
            }
            acc += m;
        }
        acc
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &rhs.scale(&q(-1))
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_arithmetic() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let d = p.deriv();
        assert_eq!(d, UPoly::from_ints(&[0, 2]));
        assert_eq!((&p * &p), UPoly::from_ints(&[4, 0, -4, 0, 1]));
        assert_eq!(format!("{p}"), "x^2 - 2");
        assert!((&p - &p).is_zero());
        assert_eq!(p.eval_q(&q(3)), q(7));
    }

    #[test]
    fn sphere_average_of_quadratics() {
        // On S² ⊂ R³: ⟨y₁²⟩ = 1/3, ⟨y₁⁴⟩ = 1/5, ⟨y₁²y₂²⟩ = 1/15.
        let y1 = MPoly::var(3, 0);
        let y2 = MPoly::var(3, 1);
        let y1sq = &y1 * &y1;
        assert_eq!(
            y1sq.sphere_average(),
            UPoly::constant(q_frac(1, 3)).shift(1)
        );
        assert_eq!(
            (&y1sq * &y1sq).sphere_average(),
            UPoly::constant(q_frac(1, 5)).shift(2)
        );
        let mixed = &y1sq * &(&y2 * &y2);
        assert_eq!(
            mixed.sphere_average(),
            UPoly::constant(q_frac(1, 15)).shift(2)
        );
        assert!((&y1 * &y2).sphere_average().is_zero());
    }

    #[test]
    fn drift_laplacian_of_radial_quadratic() {
        // ℒ(|y|² − 2d) = −(|y|² − 2d)
        for d in 1..5 {
            let u = MPoly::radial(&UPoly::from_ints(&[-2 * d as i64, 1]), d);
            let res = &u.drift_laplacian() + &u;
            assert!(res.is_zero(), "d = {d}");
        }
    }

    #[test]
    fn f64_image_and_bounds() {
        let p = UPoly::from_ints(&[12, 0, -12, 0, 1]).to_f64();
        assert_eq!(p.eval(2.0), 12.0 - 48.0 + 16.0);
        assert_eq!(p.eval_deriv(2.0), -48.0 + 32.0);
        assert_eq!(p.eval_abs(2.0), 12.0 + 48.0 + 16.0);
        assert!(p.rounding_bound(2.0) > 0.0);
    }
}
