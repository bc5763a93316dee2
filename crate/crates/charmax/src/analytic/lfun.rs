//! Truncated Dirichlet L-values at s = 1 with certified tails.

use num_complex::Complex64;
use std::sync::Arc;

use crate::arith::{enumerate_characters, Character, UnitGroup};
use crate::error::{Error, Result};

/// A truncated L(1, χ) together with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValue {
    pub value: Complex64,
    /// Certified bound on the dropped tail, from partial summation with
    /// the trivial block bound |Σ_{n ≤ x} χ(n)| ≤ q/2.
    pub tail_bound: f64,
    /// Number of terms actually summed.
    pub truncation: u64,
}

fn truncation_for(q: u64, tol: f64) -> Result<u64> {
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let t = (q as f64 / tol).ceil();
    if t > 2e9 {
        return Err(Error::ToleranceUnreachable {
            tol,
            best: q as f64 / 2e9,
        });
    }
    Ok(t as u64)
}

fn require_primitive(chi: &Character) -> Result<()> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let (conductor, _) = chi.conductor();
    if conductor != chi.modulus() {
        return Err(Error::ImprimitiveCharacter {
            conductor,
            modulus: chi.modulus(),
        });
    }
    Ok(())
}

/// L(1, χ) = Σ_{n ≤ T} χ(n)/n with T = ⌈q/tol⌉, so the Abel-summation
/// tail bound q/(T+1) is at most `tol`. Requires a primitive nonprincipal
/// character.
pub fn l_one(chi: &Character, tol: f64) -> Result<LValue> {
    require_primitive(chi)?;
    let q = chi.modulus();
    let t = truncation_for(q, tol)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=t {
        let v = chi.eval(n);
        if !v.is_zero() {
            sum += v.to_complex().unscale(n as f64);
        }
    }
    Ok(LValue {
        value: sum,
        tail_bound: q as f64 / (t + 1) as f64,
        truncation: t,
    })
}

/// L(1, χ) for every character of the group at once (the principal slot
/// holds a zero value with an infinite tail bound as a sentinel).
///
/// One pass accumulates the residue-class harmonic sums
/// H_r = Σ_{n ≤ T, n ≡ r} 1/n; each character then costs O(q) instead of
/// O(T), which is what makes modulus-wide verification runs cheap.
pub fn l_one_all(group: &Arc<UnitGroup>, tol: f64) -> Result<Vec<LValue>> {
    let q = group.modulus().q();
    let t = truncation_for(q, tol)?;
    let mut class_sums = vec![0.0f64; q as usize];
    let mut comp = vec![0.0f64; q as usize];
    for n in 1..=t {
        let r = (n % q) as usize;
        // Kahan per class: each class sum is a slowly-growing harmonic piece
        let term = 1.0 / n as f64;
        let y = term - comp[r];
        let s = class_sums[r] + y;
        comp[r] = (s - class_sums[r]) - y;
        class_sums[r] = s;
    }
    let tail_bound = q as f64 / (t + 1) as f64;
    let values = enumerate_characters(group)
        .map(|chi| {
            if chi.is_principal() {
                return LValue {
                    value: Complex64::new(0.0, 0.0),
                    tail_bound: f64::INFINITY,
                    truncation: 0,
                };
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for r in 1..q {
                let v = chi.eval(r);
                if !v.is_zero() {
                    sum += v.to_complex().scale(class_sums[r as usize]);
                }
            }
            LValue {
                value: sum,
                tail_bound,
                truncation: t,
            }
        })
        .collect();
    Ok(values)
}
