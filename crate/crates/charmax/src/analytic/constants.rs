//! Named analytic constants.

use std::sync::OnceLock;

use super::bessel::bessel_i0;
use super::quad::{adaptive_simpson, gauss_legendre, QuadratureResult};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ, 30 digits.
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

/// Integrand of the constant A: log(I₀(t))/t², continued to t = 0 by its
/// limit 1/4. Below t = 10⁻³ the Taylor form 1/4 − t²/64 + t⁴/576 is used
/// to avoid the 0/0 cancellation; its next term is below 10⁻²² there.
pub fn a_integrand(t: f64) -> f64 {
    if t < 1e-3 {
        let t2 = t * t;
        0.25 - t2 / 64.0 + t2 * t2 / 576.0
    } else {
        bessel_i0(t).expect("t in [0, 2]").ln() / (t * t)
    }
}

/// A = ∫₀² log(I₀(t))/t² dt by two independent schemes (adaptive Simpson
/// and composite Gauss–Legendre), required to agree within `tol`.
///
/// `tol` must be at least 1e-12; tighter requests exceed what double
/// precision supports here.
pub fn constant_a(tol: f64) -> Result<QuadratureResult> {
    if !(tol >= 1e-12) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "[1e-12, inf)",
        });
    }
    let simpson = adaptive_simpson(a_integrand, 0.0, 2.0, (tol / 8.0).max(1e-14));
    let gauss = gauss_legendre(a_integrand, 0.0, 2.0, 24, 8);
    let diff = (simpson.value - gauss.value).abs();
    if diff > tol {
        return Err(Error::SchemesDisagree {
            a: simpson.value,
            b: gauss.value,
            diff,
            tol,
        });
    }
    Ok(QuadratureResult {
        value: gauss.value,
        est_error: diff.max(gauss.est_error),
        scheme: "adaptive-simpson+gauss-legendre",
        evaluations: simpson.evaluations + gauss.evaluations,
    })
}

/// The constant A computed once at full precision and cached; every
/// main-term shape reuses this value.
pub fn constant_a_cached() -> f64 {
    static A: OnceLock<f64> = OnceLock::new();
    *A.get_or_init(|| constant_a(1e-12).expect("dual quadrature converges").value)
}
