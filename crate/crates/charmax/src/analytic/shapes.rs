//! Main-term "shapes": the leading terms of the asymptotic bounds, with
//! every unknowable O(·) factor dropped and documented.
//!
//! Shapes are for trend plots and documented comparisons only — they are
//! never pass/fail oracles, because the constants inside the dropped O(·)
//! terms are not determined by the theory. Each value therefore carries a
//! mandatory caveat string naming exactly what was dropped.

use serde::Serialize;
use std::collections::BTreeMap;

use super::constants::{constant_a_cached, EULER_GAMMA};
use crate::error::{Error, Result};

/// Which main term a shape represents, named by role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// Upper envelope for normalized 2k-th moments of the maximum.
    MomentUpper,
    /// Lower envelope for normalized 2k-th moments of the maximum.
    MomentLower,
    /// Predicted 2k-th moment of the half-point sum at prime modulus q.
    HalfPointMoment,
    /// Decay of the proportion of characters with a large half-point sum.
    HalfPointTail,
    /// Upper envelope for the distribution tail of the maximum.
    TailUpper,
    /// Lower envelope for the distribution tail of the maximum.
    TailLower,
    /// Log-scale upper bound for the divisor-square series.
    DivisorSeriesBound,
}

/// A main term with its parameters and the caveat that keeps it honest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainTermShape {
    pub kind: ShapeKind,
    pub params: BTreeMap<&'static str, f64>,
    /// Natural logarithm of the shape's value.
    pub log_value: f64,
    pub caveat: &'static str,
}

fn require(cond: bool, name: &'static str, value: f64, range: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}

/// exp(4k log log k + k log log log k), the growth envelope above the
/// normalized moments of M. Requires k ≥ 3 so the iterated logs exist.
pub fn moment_upper_shape(k: u32) -> Result<MainTermShape> {
    require(k >= 3, "k", k as f64, "[3, inf)")?;
    let kf = k as f64;
    let llk = kf.ln().ln();
    Ok(MainTermShape {
        kind: ShapeKind::MomentUpper,
        params: BTreeMap::from([("k", kf)]),
        log_value: 4.0 * kf * llk + kf * llk.ln(),
        caveat: "drops an exp(O(k)) factor; trend comparison only, never a pass/fail bound",
    })
}

/// exp(2k log log k), the growth envelope below the normalized moments.
pub fn moment_lower_shape(k: u32) -> Result<MainTermShape> {
    require(k >= 3, "k", k as f64, "[3, inf)")?;
    let kf = k as f64;
    Ok(MainTermShape {
        kind: ShapeKind::MomentLower,
        params: BTreeMap::from([("k", kf)]),
        log_value: 2.0 * kf * kf.ln().ln(),
        caveat: "drops an exp(O(k)) factor; trend comparison only, never a pass/fail bound",
    })
}

/// (e^γ/π)^{2k} q^k (log k)^{2k} exp((2k/log k)·A): the predicted 2k-th
/// moment of the half-point sum at prime modulus q, with A cached from the
/// dual quadrature.
pub fn half_point_moment_shape(k: u32, q: u64) -> Result<MainTermShape> {
    require(k >= 3, "k", k as f64, "[3, inf)")?;
    require(q >= 3, "q", q as f64, "[3, inf)")?;
    let a = constant_a_cached();
    let kf = k as f64;
    let log_value = 2.0 * kf * (EULER_GAMMA - std::f64::consts::PI.ln())
        + kf * (q as f64).ln()
        + 2.0 * kf * kf.ln().ln()
        + 2.0 * kf / kf.ln() * a;
    Ok(MainTermShape {
        kind: ShapeKind::HalfPointMoment,
        params: BTreeMap::from([("k", kf), ("q", q as f64), ("A", a), ("gamma", EULER_GAMMA)]),
        log_value,
        caveat: "drops O(1/log k) inside the (2k/log k)(A + ·) exponent",
    })
}

/// 2kσ log log (2k)^{1/σ} + (2k)^{1/σ}/(2σ−1): log-scale upper bound for
/// the divisor-square series. Blows up as σ → 1/2⁺ (documented pole).
pub fn divisor_series_log_bound(k: u32, sigma: f64) -> Result<MainTermShape> {
    require(k >= 2, "k", k as f64, "[2, inf)")?;
    require(sigma > 0.5 && sigma <= 1.0, "sigma", sigma, "(1/2, 1]")?;
    let kf = k as f64;
    let root = (2.0 * kf).powf(1.0 / sigma);
    Ok(MainTermShape {
        kind: ShapeKind::DivisorSeriesBound,
        params: BTreeMap::from([("k", kf), ("sigma", sigma)]),
        log_value: 2.0 * kf * sigma * root.ln().ln() + root / (2.0 * sigma - 1.0),
        caveat: "drops an additive O(k); the bound holds up to that shift",
    })
}

/// The three tail main terms: the upper envelope for the tail proportion,
/// the refined lower envelope (with user-supplied B — the theory does not
/// fix it numerically), and the half-point tail decay.
pub fn tail_shapes(alpha: f64, b: f64) -> Result<(MainTermShape, MainTermShape, MainTermShape)> {
    require(alpha >= 3.0, "alpha", alpha, "[3, inf)")?;
    require(b > 0.0, "B", b, "(0, inf)")?;
    let a = constant_a_cached();
    let pi = std::f64::consts::PI;
    let eg = EULER_GAMMA.exp();

    // 1 − exp(−(2e^γ/(πα))·e^{πα/e^γ − A − 1})
    let x_upper = 2.0 * eg / (pi * alpha) * (pi * alpha / eg - a - 1.0).exp();
    let upper = MainTermShape {
        kind: ShapeKind::TailUpper,
        params: BTreeMap::from([("alpha", alpha), ("A", a), ("gamma", EULER_GAMMA)]),
        log_value: (-(-x_upper).exp_m1()).ln(),
        caveat: "drops the (1 + O(inner)) correction factor in the double exponent",
    };

    // 1 − exp(−e^{B√α/(log α)^{1/4}})
    let x_lower = (b * alpha.sqrt() / alpha.ln().powf(0.25)).exp();
    let lower = MainTermShape {
        kind: ShapeKind::TailLower,
        params: BTreeMap::from([("alpha", alpha), ("B", b)]),
        log_value: (-(-x_lower).exp_m1()).ln(),
        caveat: "B is not determined by the theory; the exponent also hides an α^{-o(1)} factor",
    };

    // exp(−2e^{α−A−1}/α)
    let half_point = MainTermShape {
        kind: ShapeKind::HalfPointTail,
        params: BTreeMap::from([("alpha", alpha), ("A", a)]),
        log_value: -2.0 * (alpha - a - 1.0).exp() / alpha,
        caveat: "drops the (1 + o(1)) factor multiplying the double exponent",
    };
    Ok((upper, lower, half_point))
}
