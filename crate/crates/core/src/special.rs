//! Binary entropy and the Chebyshev polynomials of the second and fourth kind.

use num_traits::Num;

use crate::error::{Error, Result};

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::EntropyDomain(x));
    }
    Ok(entropy_unchecked(x))
}

pub(crate) fn entropy_unchecked(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `log_q(x)` as `ln x / ln q`.
pub fn log_q(x: f64, q: usize) -> f64 {
    x.ln() / (q as f64).ln()
}

/// `U_i(x)` via `U_0 = 1`, `U_1 = 2x`, `U_i = 2x·U_{i-1} - U_{i-2}`.
///
/// Generic so that `U_i(1)` can be evaluated in exact integer arithmetic.
pub fn chebyshev_u<T: Num + Copy>(i: usize, x: T) -> T {
    let two_x = x + x;
    let (mut prev, mut cur) = (T::one(), two_x);
    if i == 0 {
        return prev;
    }
    for _ in 1..i {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `W_i(x) = U_i(x) + U_{i-1}(x)` with `U_{-1} = 0`.
pub fn chebyshev_w<T: Num + Copy>(i: usize, x: T) -> T {
    if i == 0 {
        T::one()
    } else {
        chebyshev_u(i, x) + chebyshev_u(i - 1, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert!(matches!(entropy(1.5), Err(Error::EntropyDomain(_))));
        assert!(entropy(-0.1).is_err());
        assert!(entropy(f64::NAN).is_err());
        // Direct evaluation at 2 - √3.
        let x = 2.0 - 3f64.sqrt();
        let expected = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((entropy(x).unwrap() - expected).abs() < 1e-15);
        assert!((entropy(x).unwrap() - 0.838_51).abs() < 1e-5);
    }

    #[test]
    fn entropy_symmetry() {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((entropy(x).unwrap() - entropy(1.0 - x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn chebyshev_at_one() {
        for i in 0..=10usize {
            assert_eq!(chebyshev_u(i, 1i64), i as i64 + 1);
            assert_eq!(chebyshev_w(i, 1i64), 2 * i as i64 + 1);
        }
    }

    #[test]
    fn chebyshev_low_degrees() {
        assert!((chebyshev_u(1, 0.3_f64) - 0.6).abs() < 1e-15);
        assert_eq!(chebyshev_u(0, 0.7), 1.0);
        assert_eq!(chebyshev_w(0, 0.7), 1.0);
        assert_eq!(chebyshev_w(0, -3.0), 1.0);
    }

    #[test]
    fn chebyshev_roots() {
        for i in 1..=8usize {
            for k in 1..=i {
                let nu = ((i - k + 1) as f64 * PI / (i as f64 + 1.0)).cos();
                assert!(chebyshev_u(i, nu).abs() < 1e-12, "U_{i} root {k}");
                let omega = ((i - k + 1) as f64 * PI / (i as f64 + 0.5)).cos();
                assert!(chebyshev_w(i, omega).abs() < 1e-12, "W_{i} root {k}");
            }
        }
        // U_2 vanishes at ±cos(π/3).
        assert!(chebyshev_u(2, (PI / 3.0).cos()).abs() < 1e-15);
        assert!(chebyshev_u(2, (2.0 * PI / 3.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_trig_form() {
        for j in 1..20 {
            let theta = j as f64 * 0.15;
            for i in 0..10usize {
                let u = ((i + 1) as f64 * theta).sin() / theta.sin();
                let w = ((i as f64 + 0.5) * theta).sin() / (0.5 * theta).sin();
                assert!((chebyshev_u(i, theta.cos()) - u).abs() < 1e-9);
                assert!((chebyshev_w(i, theta.cos()) - w).abs() < 1e-9);
            }
        }
    }
}
