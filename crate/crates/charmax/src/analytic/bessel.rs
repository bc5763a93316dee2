//! The modified Bessel function I₀.

use crate::error::{Error, Result};

/// I₀(t) = Σ_{m ≥ 0} (t/2)^{2m} / (m!)², summed with compensation to
/// relative accuracy near machine precision.
///
/// Even in t; |t| ≤ 700 keeps every term (and the value) inside f64 range.
pub fn bessel_i0(t: f64) -> Result<f64> {
    if !(t.abs() <= 700.0) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[-700, 700]",
        });
    }
    let x = 0.25 * t * t;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut m = 1u64;
    while m < 4000 {
        term *= x / (m * m) as f64;
        // Kahan step
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if term < sum * 1e-17 {
            break;
        }
        m += 1;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn value_at_two() {
        // Σ 1/(n!)² to 30 terms
        let mut oracle = 0.0f64;
        let mut fact = 1.0f64;
        for n in 0..30u64 {
            if n > 0 {
                fact *= n as f64;
            }
            oracle += 1.0 / (fact * fact);
        }
        let v = bessel_i0(2.0).unwrap();
        assert!((v - oracle).abs() < 1e-15 * oracle);
        assert!((v - 2.2795853023360673).abs() < 1e-14);
    }

    #[test]
    fn even_function() {
        for t in [0.3, 1.7, 19.5, 300.0] {
            assert_eq!(
                bessel_i0(t).unwrap().to_bits(),
                bessel_i0(-t).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn dominated_by_exponentials() {
        // I₀(t) < min(e^t, e^{t²}) on (0, 20]
        let mut t = 0.05;
        while t <= 20.0 {
            let v = bessel_i0(t).unwrap();
            assert!(v < t.exp().min((t * t).exp()), "t={t}");
            t += 0.05;
        }
    }

    #[test]
    fn large_argument_asymptotic() {
        // I₀(t) ~ e^t/√(2πt) · (1 + 1/(8t) + …)
        let t = 700.0;
        let v = bessel_i0(t).unwrap();
        assert!(v.is_finite());
        let lead = t.exp() / (2.0 * std::f64::consts::PI * t).sqrt() * (1.0 + 1.0 / (8.0 * t));
        assert!((v / lead - 1.0).abs() < 1e-4);
    }

    #[test]
    fn range_guard() {
        assert!(bessel_i0(700.5).is_err());
        assert!(bessel_i0(-701.0).is_err());
        assert!(bessel_i0(f64::NAN).is_err());
    }
}
