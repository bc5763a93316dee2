//! Partial sums of a character and their extremes.
//!
//! S_χ(t) = Σ_{n ≤ t} χ(n) is a walk through sums of roots of unity; this
//! module computes its running maximum M(χ) with the smallest argmax N_χ,
//! the half-point value S_χ(⌊q/2⌋), sums over rational intervals
//! (αq, βq], and the Gauss-sum Fourier expansion of S_χ(t).
//!
//! Accumulation convention: the reference scans here add complex doubles in
//! index order — the worst-case rounding error is ~q·2⁻⁵⁰, far below every
//! tolerance used at supported moduli. Where exactness matters (the dyadic
//! telescoping identity), [`ExactSum`] accumulates integer multiplicities
//! of roots instead and renders once at the end.

mod dyadic;

pub use dyadic::{dyadic_path, dyadic_reconstruct, DyadicPath};

use num_complex::Complex64;

use crate::arith::{CharValue, Character, Parity};
use crate::error::{Error, Result};

/// The extremes of one character's partial-sum walk, as stored in sweep
/// tables: the maximum M, its smallest argmax N, the half-point sum, parity
/// and conductor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharExtremes {
    /// M(χ) = max_{1 ≤ t ≤ q} |S_χ(t)|; always in [1, q).
    pub m: f64,
    /// Smallest integer t attaining the maximum.
    pub n: u64,
    /// S_χ(⌊q/2⌋). Zero (to rounding) exactly when the character is even.
    pub s_half: Complex64,
    pub parity: Parity,
    pub conductor: u64,
}

/// Canonicalize -0.0 to +0.0 so that rows derived by conjugation are
/// bitwise identical to rows computed by a direct scan.
pub(crate) fn canonical_zero(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

/// Scan the full walk of a nonprincipal character: M, smallest argmax,
/// half-point sum, parity, conductor.
pub fn prefix_extremes(chi: &Character) -> Result<CharExtremes> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    let half = q / 2;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 1u64;
    let mut s_half = Complex64::new(0.0, 0.0);
    for t in 1..q {
        let v = chi.eval(t);
        if !v.is_zero() {
            sum += v.to_complex();
        }
        let mag = sum.norm_sqr();
        if mag > best {
            best = mag;
            argmax = t;
        }
        if t == half {
            s_half = sum;
        }
    }
    Ok(CharExtremes {
        m: best.sqrt(),
        n: argmax,
        s_half: canonical_zero(s_half),
        parity: chi.parity(),
        conductor: chi.conductor().0,
    })
}

/// S_χ(⌊q/2⌋) by direct summation.
pub fn half_point_sum(chi: &Character) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=chi.modulus() / 2 {
        let v = chi.eval(n);
        if !v.is_zero() {
            sum += v.to_complex();
        }
    }
    canonical_zero(sum)
}

/// Σ_{αq < n ≤ βq} χ(n) for 0 ≤ α ≤ β ≤ 1.
pub fn interval_sum(chi: &Character, alpha: f64, beta: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
        return Err(Error::OutOfRange {
            name: "interval endpoint",
            value: if (0.0..=1.0).contains(&alpha) { beta } else { alpha },
            range: "[0, 1]",
        });
    }
    if alpha > beta {
        return Err(Error::EmptyInterval { alpha, beta });
    }
    let q = chi.modulus();
    let lo = (alpha * q as f64).floor() as u64;
    let hi = (beta * q as f64).floor() as u64;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in lo + 1..=hi {
        let v = chi.eval(n);
        if !v.is_zero() {
            sum += v.to_complex();
        }
    }
    Ok(sum)
}

/// A truncated Fourier-expansion value of S_χ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub value: Complex64,
    /// True only for the full expansion (z = q), where the defect from the
    /// true partial sum is O(log q); truncations carry no error theory.
    pub certified: bool,
}

/// Evaluate (τ(χ)/2πi) Σ_{1 ≤ |n| ≤ z} (χ̄(n)/n)(1 − e(−nt/q)).
///
/// Requires a primitive nonprincipal χ; t ∈ [0, q], 1 ≤ z ≤ q.
pub fn polya_expansion(chi: &Character, t: f64, z: u64) -> Result<Expansion> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    let (conductor, _) = chi.conductor();
    if conductor != q {
        return Err(Error::ImprimitiveCharacter {
            conductor,
            modulus: q,
        });
    }
    if z == 0 || z > q {
        return Err(Error::BadTruncation { z, max: q });
    }
    if !(0.0..=q as f64).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, q]",
        });
    }
    let bar = chi.conjugate();
    // χ̄(-1) = ±1 decides how the negative-frequency terms fold in.
    let odd = matches!(chi.parity(), Parity::Odd);
    let tau = chi.gauss_sum();
    let mut series = Complex64::new(0.0, 0.0);
    let step = -2.0 * std::f64::consts::PI * t / q as f64;
    for n in 1..=z {
        let v = bar.eval(n);
        if v.is_zero() {
            continue;
        }
        let vc = v.to_complex();
        let angle = step * n as f64;
        let pos = Complex64::new(1.0 - angle.cos(), -angle.sin());
        let neg = Complex64::new(1.0 - angle.cos(), angle.sin());
        // term(n) + term(-n), with χ̄(-n) = χ̄(-1)·χ̄(n) and the 1/(-n) sign.
        let folded = if odd {
            vc * (pos + neg) // -(-1) = +1
        } else {
            vc * (pos - neg)
        };
        series += folded / n as f64;
    }
    let value = tau / Complex64::new(0.0, 2.0 * std::f64::consts::PI) * series;
    Ok(Expansion {
        value,
        certified: z == q,
    })
}

/// Exact accumulator over the group's roots of unity: an integer
/// multiplicity per root index. Addition is associative and exact, so block
/// decompositions of a prefix sum reproduce the direct accumulation bit for
/// bit after rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSum {
    /// counts[j] multiplies e(j / counts.len()).
    counts: Vec<i64>,
}

impl ExactSum {
    /// A zero sum over the d-th roots of unity (d = group exponent).
    pub fn zero(d: u64) -> Self {
        ExactSum {
            counts: vec![0; d as usize],
        }
    }

    pub fn add(&mut self, v: CharValue) {
        if let CharValue::Root { num, den } = v {
            let d = self.counts.len() as u64;
            debug_assert_eq!(d % den, 0);
            self.counts[(num * (d / den)) as usize] += 1;
        }
    }

    pub fn merge(&mut self, other: &ExactSum) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Number of accumulated nonzero terms.
    pub fn terms(&self) -> i64 {
        self.counts.iter().sum()
    }

    pub fn render(&self) -> Complex64 {
        let d = self.counts.len() as u64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                acc += crate::arith::unit_root(j as u64, d).scale(c as f64);
            }
        }
        acc
    }
}

/// Exact prefix sum S_χ(t) as root multiplicities.
pub fn prefix_sum_exact(chi: &Character, t: u64) -> ExactSum {
    let mut acc = ExactSum::zero(chi.group().exponent());
    for n in 1..=t.min(chi.modulus()) {
        acc.add(chi.eval(n));
    }
    acc
}
