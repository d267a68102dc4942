//! Closed-form polynomial eigenfunctions of the Ornstein-Uhlenbeck operator.

use super::poly::{q, q_frac, MPoly, UPoly, Q};

/// Monic Hermite polynomial `h_m` with `h'' − (x/2) h' = −(m/2) h`.
pub fn hermite_poly(m: u32) -> UPoly {
    let mut prev = UPoly::constant(q(1));
    if m == 0 {
        return prev;
    }
    let mut cur = UPoly::x();
    for j in 1..m {
        let next = &(&UPoly::x() * &cur) - &prev.scale(&q(2 * j as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Monic radial eigenfunction on `R^d` as a polynomial in `s = |y|²`,
/// eigenvalue `m`.
pub fn radial_poly(d: u32, m: u32) -> UPoly {
    let mut coeffs = vec![q(1)];
    for j in 0..m as i64 {
        let prev = coeffs[j as usize].clone();
        coeffs.push(prev * q(-(m as i64 - j)) / q(2 * (j + 1) * (2 * j + d as i64)));
    }
    let lead = coeffs[m as usize].clone();
    UPoly::from_coeffs(coeffs.into_iter().map(|c| c / &lead).collect())
}

/// `Π h_{m_i}(y_i)`.
pub fn product_poly(degrees: &[u32]) -> MPoly {
    let d = degrees.len();
    degrees
        .iter()
        .enumerate()
        .fold(MPoly::constant(d, q(1)), |acc, (i, &m)| {
            &acc * &MPoly::from_univariate(&hermite_poly(m), d, i)
        })
}

/// `ℒ p + λ p` for each component.
pub fn eigen_residual(components: &[MPoly], lambda: &Q) -> Vec<MPoly> {
    components
        .iter()
        .map(|c| &c.drift_laplacian() + &c.scale(lambda))
        .collect()
}

pub fn is_eigen(components: &[MPoly], lambda: &Q) -> bool {
    eigen_residual(components, lambda)
        .iter()
        .all(MPoly::is_zero)
}

pub fn half_integer(m: u32) -> Q {
    q_frac(m as i64, 2)
}

pub fn is_zero_field(components: &[MPoly]) -> bool {
    components.iter().all(MPoly::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_hermites() {
        assert_eq!(hermite_poly(0), UPoly::from_ints(&[1]));
        assert_eq!(hermite_poly(2), UPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(hermite_poly(3), UPoly::from_ints(&[0, -6, 0, 1]));
        assert_eq!(hermite_poly(4), UPoly::from_ints(&[12, 0, -12, 0, 1]));
    }

    #[test]
    fn radial_low_degree() {
        assert_eq!(radial_poly(3, 1), UPoly::from_ints(&[-6, 1]));
        assert_eq!(radial_poly(5, 0), UPoly::from_ints(&[1]));
        // n = 2, m = 2: s² − 16 s + 32
        assert_eq!(radial_poly(2, 2), UPoly::from_ints(&[32, -16, 1]));
    }

    #[test]
    fn hermite_eigen_identity_up_to_ten() {
        for m in 0..=10 {
            let p = MPoly::from_univariate(&hermite_poly(m), 1, 0);
            assert!(is_eigen(&[p], &half_integer(m)), "m = {m}");
        }
    }
}
