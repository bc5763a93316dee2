//! The k-fold divisor function, its square series, and the local Euler
//! factors behind them.
//!
//! The central object is Σ_n d_k(n)²/n^{2σ}, evaluated as an Euler product
//! of local factors Σ_a d_k(p^a)²p^{−2aσ} with d_k(p^a) = C(k+a−1, a).
//! Each local factor also equals ∫₀¹ |1 − e(θ)p^{−σ}|^{−2k} dθ exactly,
//! which provides an independent oracle.

use super::primes::{for_each_prime, prime_zeta};
use super::quad::{periodic_trapezoid, QuadratureResult};
use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

/// Binomial coefficient C(n, r), exact in u128.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc * (n - r + i) as u128 / i as u128;
    }
    acc
}

/// d_k(n): the number of ordered factorizations of n into k positive
/// factors. Multiplicative, with d_k(p^a) = C(k+a−1, a); d_0(n) = [n = 1].
pub fn dk(n: u64, k: u32) -> u64 {
    assert!(n >= 1, "dk is defined on positive integers");
    if k == 0 {
        return u64::from(n == 1);
    }
    let f = crate::arith::factorize(n).expect("n >= 1");
    let mut acc: u128 = 1;
    for &(_, a) in f.factors() {
        acc = acc
            .checked_mul(binomial(k as u64 + a as u64 - 1, a as u64))
            .expect("d_k(n) fits in u128");
    }
    u64::try_from(acc).expect("d_k(n) fits in u64 for supported arguments")
}

/// Σ_{a ≥ 1} d_k(p^a)²·p^{−2aσ} (the local factor minus its constant term),
/// summed until the geometric tail bound drops below `rel`·sum.
/// Returns (sum, certified relative tail bound).
fn local_factor_minus_one(p: u64, k: u32, sigma: f64, a_max: u32, rel: f64) -> Result<(f64, f64)> {
    let x = (p as f64).powf(-2.0 * sigma);
    let kf = k as f64;
    let mut sum = 0.0f64;
    let mut term = 1.0f64; // d_k(p^a)² x^a, starting at a = 0
    let mut best = f64::INFINITY;
    for a in 0..a_max as u64 {
        let af = a as f64;
        term *= ((kf + af) / (af + 1.0)).powi(2) * x;
        sum += term;
        // ratios decrease in a, so the tail beyond a+1 is geometric
        let rho = ((kf + af + 1.0) / (af + 2.0)).powi(2) * x;
        if rho < 1.0 {
            let tail = term * rho / (1.0 - rho);
            best = tail / (1.0 + sum);
            if best <= rel {
                return Ok((sum, best));
            }
        }
    }
    Err(Error::ToleranceUnreachable { tol: rel, best })
}

/// Local factor Σ_{a ≥ 0} d_k(p^a)²·p^{−2aσ}, certified to relative 1e-12.
///
/// Requires prime p, σ ∈ (1/2, 1]; `a_max` caps the number of terms (a few
/// hundred suffices far beyond any supported k).
pub fn local_factor_series(p: u64, k: u32, sigma: f64, a_max: u32) -> Result<f64> {
    assert!(is_prime_u64(p), "local factors exist only at primes");
    check_sigma(sigma)?;
    if k == 0 {
        return Ok(1.0);
    }
    let (u, _) = local_factor_minus_one(p, k, sigma, a_max, 1e-12)?;
    Ok(1.0 + u)
}

/// The same local factor as an integral: ∫₀¹ (1 − 2p^{−σ}cos 2πθ + p^{−2σ})^{−k} dθ.
///
/// The identity with [`local_factor_series`] is exact; the two evaluations
/// agree to quadrature accuracy.
pub fn local_factor_integral(p: u64, k: u32, sigma: f64) -> Result<QuadratureResult> {
    assert!(is_prime_u64(p), "local factors exist only at primes");
    check_sigma(sigma)?;
    if k == 0 {
        return Ok(QuadratureResult {
            value: 1.0,
            est_error: 0.0,
            scheme: "constant",
            evaluations: 1,
        });
    }
    let r = (p as f64).powf(-sigma);
    let ki = -(k as i32);
    periodic_trapezoid(
        move |theta| {
            (1.0 - 2.0 * r * (2.0 * std::f64::consts::PI * theta).cos() + r * r).powi(ki)
        },
        1e-13,
    )
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
            range: "(1/2, 1]",
        });
    }
    Ok(())
}

/// An Euler-product evaluation together with the certificate that came
/// with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Certified bound on |log(value) − log(true sum)| — the natural scale
    /// for a product whose value grows like exp(k²·P(2σ)). For small bounds
    /// this is the relative error of `value`.
    pub tail_bound: f64,
    /// Largest prime whose local factor entered the product.
    pub prime_cutoff: u64,
}

/// Σ_{n ≥ 1} d_k(n)²/n^{2σ} by an Euler product over p ≤ P, with the
/// p > P contribution restored through the prime zeta function:
/// log(local factor) = k²p^{−2σ} + O(k⁴p^{−4σ}), and Σ_{p>P} p^{−2σ} is
/// P(2σ) minus the sieved head. P starts at max(10⁵, 50·(2k)^{1/σ}) and
/// doubles until the certified remainder fits `tol`.
///
/// `tol` bounds the log-scale defect (see [`SeriesValue::tail_bound`]).
pub fn divisor_square_series(k: u32, sigma: f64, tol: f64) -> Result<SeriesValue> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    check_sigma(sigma)?;
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let kf = k as f64;
    const P_CAP: f64 = 3e8;
    // log-scale remainder of replacing Σ_{p>P} log(local) by k²·Σ p^{−2σ}:
    // per prime ≤ (k²x)²/(1−k²x) with x = p^{−2σ}, summed by integral
    // comparison, valid once k²P^{−2σ} ≤ 1/2.
    let remainder = |p: f64| -> f64 {
        let head = kf * kf * p.powf(-2.0 * sigma);
        if head > 0.5 {
            return f64::INFINITY;
        }
        kf.powi(4) * p.powf(1.0 - 4.0 * sigma) / ((4.0 * sigma - 1.0) * (1.0 - head))
    };
    let mut p_cut = (1e5f64).max(50.0 * (2.0 * kf).powf(1.0 / sigma));
    while remainder(p_cut) > tol / 4.0 && p_cut < P_CAP {
        p_cut = (p_cut * 2.0).min(P_CAP);
    }
    if remainder(p_cut) > tol / 4.0 {
        return Err(Error::ToleranceUnreachable {
            tol,
            best: remainder(p_cut),
        });
    }
    let p_cut = p_cut as u64;

    let mut log_sum = Kahan::default();
    let mut head_2s = Kahan::default();
    let mut n_primes = 0u64;
    let mut series_err = Ok(());
    for_each_prime(p_cut, |p| {
        if series_err.is_err() {
            return;
        }
        match local_factor_minus_one(p, k, sigma, 400, 1e-15) {
            Ok((u, _)) => log_sum.add(u.ln_1p()),
            Err(e) => series_err = Err(e),
        }
        head_2s.add((p as f64).powf(-2.0 * sigma));
        n_primes += 1;
    });
    series_err?;
    let tail_2s = (prime_zeta(2.0 * sigma)? - head_2s.value()).max(0.0);
    let log_value = log_sum.value() + kf * kf * tail_2s;
    // certificate: truncation remainder + per-factor series tails +
    // accumulated rounding + prime-zeta accuracy, all on the log scale
    let tail_bound = remainder(p_cut as f64)
        + n_primes as f64 * (1e-15 + 2.0 * f64::EPSILON)
        + kf * kf * 1e-14
        + 1e-13 * log_value.abs();
    if tail_bound > tol {
        return Err(Error::ToleranceUnreachable {
            tol,
            best: tail_bound,
        });
    }
    Ok(SeriesValue {
        value: log_value.exp(),
        tail_bound,
        prime_cutoff: p_cut,
    })
}

/// The k-th-moment limit constant for half-point sums at prime moduli:
/// (2^{2k−1}/π^{2k}) · Σ_{n odd} d_k(n)²/n², evaluated as the full series
/// with its 2-adic local factor removed.
pub fn halfpoint_limit_constant(k: u32, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let scale = 2f64.powi(2 * k as i32 - 1) / std::f64::consts::PI.powi(2 * k as i32);
    let two_adic = local_factor_series(2, k, 1.0, 400)?;
    // two passes: a rough run sizes the value, then the log-scale tolerance
    // is set so the absolute error of the final constant fits `tol`
    let rough = divisor_square_series(k, 1.0, 1e-3)?;
    let log_tol = (tol * two_adic / (scale * rough.value) / 2.0).clamp(1e-11, 1e-3);
    let full = divisor_square_series(k, 1.0, log_tol)?;
    let constant = scale * full.value / two_adic;
    let achieved = constant * (full.tail_bound * 1.01 + 1e-12);
    if achieved > tol {
        return Err(Error::ToleranceUnreachable {
            tol,
            best: achieved,
        });
    }
    Ok(constant)
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let s = self.sum + y;
        self.comp = (s - self.sum) - y;
        self.sum = s;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}
