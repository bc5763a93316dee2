//! Empirical moment and tail statistics over sweep tables, the b(n)
//! convolution-coefficient oracle, the odd-character orthogonality
//! identity, and cross-modulus aggregation.
//!
//! Moments average over all φ(q) characters (the principal one
//! contributes zero and is simply absent from the table); tail fractions
//! divide by the φ(q) − 1 nonprincipal rows actually counted.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::analytic::{
    halfpoint_limit_constant, moment_upper_shape, tail_shapes, MainTermShape, EULER_GAMMA,
};
use crate::arith::{enumerate_characters, gcd, Parity, UnitGroup};
use crate::error::{Error, Result};
use crate::sweep::SweepTable;

/// Row field a moment is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MomentStatistic {
    /// max_t |S_χ(t)|.
    M,
    /// S_χ(⌊q/2⌋).
    #[serde(rename = "S_half")]
    SHalf,
}

impl std::str::FromStr for MomentStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(MomentStatistic::M),
            "S_half" | "s_half" | "s-half" => Ok(MomentStatistic::SHalf),
            _ => Err(Error::OutOfRange {
                name: "statistic",
                value: f64::NAN,
                range: "M|S_half",
            }),
        }
    }
}

/// Reference a moment is displayed against. Never a pass/fail oracle.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentComparison {
    /// Growth-envelope main term (carries its own caveat).
    Shape(MainTermShape),
    /// Finite limit of the normalized moment.
    LimitConstant { value: f64, note: &'static str },
}

/// One empirical 2k-th moment.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub q: u64,
    pub k: u64,
    pub statistic: MomentStatistic,
    /// (1/φ(q)) Σ over nonprincipal χ of |·|^{2k}.
    pub raw: f64,
    /// raw / q^k.
    pub normalized: f64,
    pub comparison: Option<MomentComparison>,
}

/// Average |·|^{2k} over every nonprincipal character of a complete table.
pub fn empirical_moment(
    table: &SweepTable,
    k: u64,
    statistic: MomentStatistic,
) -> Result<MomentReport> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    if k > 64 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            range: "1..=64",
        });
    }
    if !table.complete() || table.is_empty() {
        return Err(Error::IncompleteTable);
    }
    let q = table.q();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for row in table.rows() {
        let sq = match statistic {
            MomentStatistic::M => row.m * row.m,
            MomentStatistic::SHalf => row.s_half.norm_sqr(),
        };
        let term = sq.powi(k as i32);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let raw = sum / table.phi() as f64;
    let normalized = raw / (q as f64).powi(k as i32);
    let comparison = match statistic {
        MomentStatistic::SHalf => halfpoint_limit_constant(k as u32, 1e-9)
            .ok()
            .map(|value| MomentComparison::LimitConstant {
                value,
                note: "large-q limit of the normalized half-point moment over prime moduli",
            }),
        MomentStatistic::M => {
            if k >= 3 {
                moment_upper_shape(k as u32).ok().map(MomentComparison::Shape)
            } else {
                None
            }
        }
    };
    Ok(MomentReport {
        q,
        k,
        statistic,
        raw,
        normalized,
        comparison,
    })
}

/// Which tail is being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    /// Fraction of rows with M ≤ α√q.
    BelowThreshold,
    /// Fraction of rows (odd characters only) with |S_half| ≥ (e^γ/π)α√q.
    HalfPointAbove,
}

/// Counting statistics on an α-grid, with display-only main terms.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub q: u64,
    pub kind: TailKind,
    pub alphas: Vec<f64>,
    pub counts: Vec<u64>,
    /// counts / (φ(q) − 1).
    pub fractions: Vec<f64>,
    pub denominator: u64,
    /// Main-term value at each α where the closed form is meaningful
    /// (α ≥ 3); advisory, never asserted against.
    pub comparisons: Vec<Option<f64>>,
}

/// Distribution function of M/√q: fraction of rows at or below each α.
pub fn tail_f(table: &SweepTable, alphas: &[f64]) -> Result<TailReport> {
    if !table.complete() || table.is_empty() {
        return Err(Error::IncompleteTable);
    }
    let q = table.q();
    let sqrt_q = (q as f64).sqrt();
    let denominator = table.phi() - 1;
    let mut counts = Vec::with_capacity(alphas.len());
    let mut fractions = Vec::with_capacity(alphas.len());
    let mut comparisons = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let c = table
            .rows()
            .iter()
            .filter(|r| r.m <= alpha * sqrt_q)
            .count() as u64;
        counts.push(c);
        fractions.push(c as f64 / denominator as f64);
        comparisons.push(if alpha >= 3.0 {
            tail_shapes(alpha, 1.0).ok().map(|(u, _, _)| u.log_value.exp())
        } else {
            None
        });
    }
    Ok(TailReport {
        q,
        kind: TailKind::BelowThreshold,
        alphas: alphas.to_vec(),
        counts,
        fractions,
        denominator,
        comparisons,
    })
}

/// Fraction of rows with |S_half| ≥ (e^γ/π)α√q, prime modulus only.
///
/// Even characters have a vanishing half-point sum; their rows carry only
/// rounding residue, so the count is restricted to odd characters (which
/// is what the threshold family is about).
pub fn tail_g(table: &SweepTable, alphas: &[f64]) -> Result<TailReport> {
    if !table.modulus().is_prime() {
        return Err(Error::CompositeModulus { q: table.q() });
    }
    if !table.complete() || table.is_empty() {
        return Err(Error::IncompleteTable);
    }
    let q = table.q();
    let scale = EULER_GAMMA.exp() / std::f64::consts::PI * (q as f64).sqrt();
    let denominator = table.phi() - 1;
    let mut counts = Vec::with_capacity(alphas.len());
    let mut fractions = Vec::with_capacity(alphas.len());
    let mut comparisons = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let threshold = alpha * scale;
        let c = table
            .rows()
            .iter()
            .filter(|r| r.parity == Parity::Odd && r.s_half.norm() >= threshold)
            .count() as u64;
        counts.push(c);
        fractions.push(c as f64 / denominator as f64);
        comparisons.push(if alpha >= 3.0 {
            tail_shapes(alpha, 1.0)
                .ok()
                .map(|(_, _, c)| c.log_value.exp())
        } else {
            None
        });
    }
    Ok(TailReport {
        q,
        kind: TailKind::HalfPointAbove,
        alphas: alphas.to_vec(),
        counts,
        fractions,
        denominator,
        comparisons,
    })
}

/// Per-part weight generating the b(n) coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BWeight {
    /// 1/d on odd parts d ≤ q, 0 on even parts — the half-point case.
    /// No coprimality zeroing: every odd part ≤ q participates.
    HalfPoint,
    /// (e(αd)/d)(1 − e((β−α)d)) on parts d ≤ q — the interval case;
    /// coefficients at n with gcd(n, q) > 1 are zeroed (they only ever
    /// multiply a vanished character value).
    Interval { alpha: f64, beta: f64 },
}

impl BWeight {
    fn endpoints(&self) -> (f64, f64) {
        match *self {
            BWeight::HalfPoint => (0.0, 0.5),
            BWeight::Interval { alpha, beta } => (alpha, beta),
        }
    }

    fn part_weight(&self, d: u64) -> Complex64 {
        match *self {
            BWeight::HalfPoint => {
                if d % 2 == 1 {
                    Complex64::new(1.0 / d as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            BWeight::Interval { alpha, beta } => {
                let inv = 1.0 / d as f64;
                e(alpha * d as f64).scale(inv) * (Complex64::new(1.0, 0.0) - e((beta - alpha) * d as f64))
            }
        }
    }
}

/// e(x) = exp(2πix), with the argument reduced mod 1 first.
fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x.fract())
}

/// Coefficients of (Σ_{d≤q} w(d) z_d)^k collected by product: b(n) sums
/// w(n_1)···w(n_k) over ordered factorizations n = n_1···n_k, parts ≤ q.
#[derive(Debug, Clone)]
pub struct BCoefficients {
    q: u64,
    k: u64,
    alpha: f64,
    beta: f64,
    values: Vec<Complex64>,
}

impl BCoefficients {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Largest index carrying a coefficient (q^k).
    pub fn max_index(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// b(n); zero outside [1, q^k].
    pub fn value(&self, n: u64) -> Complex64 {
        self.values
            .get(n as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Nonzero coefficients in index order.
    pub fn support(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(n, v)| (n as u64, *v))
    }
}

const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Brute-force b(n) for all n ≤ q^k by iterated convolution.
pub fn b_oracle(q: u64, k: u64, weight: BWeight) -> Result<BCoefficients> {
    if q == 0 || k == 0 {
        return Err(Error::ZeroArgument);
    }
    let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget {
            size,
            budget: ENUMERATION_BUDGET,
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut f: Vec<Complex64> = vec![zero; q as usize + 1];
    for d in 1..=q {
        f[d as usize] = weight.part_weight(d);
    }
    let mut top = q as usize;
    for _ in 1..k {
        let new_top = top * q as usize;
        let mut g = vec![zero; new_top + 1];
        for d in 1..=q as usize {
            let w = weight.part_weight(d as u64);
            if w == zero {
                continue;
            }
            for (m, &fm) in f.iter().enumerate().skip(1) {
                if fm != zero {
                    g[d * m] += w * fm;
                }
            }
        }
        f = g;
        top = new_top;
    }
    debug_assert_eq!(top as u128 + 1, size + 1);
    if let BWeight::Interval { .. } = weight {
        for (n, v) in f.iter_mut().enumerate().skip(1) {
            if gcd(n as u64, q) > 1 {
                *v = zero;
            }
        }
    }
    let (alpha, beta) = weight.endpoints();
    Ok(BCoefficients {
        q,
        k,
        alpha,
        beta,
        values: f,
    })
}

/// Both sides of the odd-character orthogonality identity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrthogonalityCheck {
    /// Σ over odd χ of |Σ_{n≤q, n odd} χ(n)/n|^{2k}, by direct enumeration.
    pub lhs: f64,
    /// (φ/2)[Σ_a (Σ_m b(a+mq))² − Σ_a (Σ_s b(a+sq))(Σ_t b(q−a+tq))].
    pub rhs: f64,
    /// |lhs − rhs| / max(1, |lhs|). The identity is exact; anything beyond
    /// rounding noise is a bug.
    pub residual: f64,
}

/// Evaluate the orthogonality identity at prime q by two independent
/// enumerations.
pub fn orthogonality_check(q: u64, k: u64) -> Result<OrthogonalityCheck> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    let group = UnitGroup::new(q)?;
    if !group.modulus().is_prime() {
        return Err(Error::CompositeModulus { q });
    }
    // lhs costs ~q²/4 character evaluations on top of the q^k table
    let size = (q as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX)
        .saturating_add((q as u128 * q as u128) / 4);
    if size > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget {
            size,
            budget: ENUMERATION_BUDGET,
        });
    }

    let mut lhs = 0.0f64;
    for chi in enumerate_characters(&group) {
        if chi.parity() != Parity::Odd {
            continue;
        }
        let mut s = Complex64::new(0.0, 0.0);
        let mut n = 1u64;
        while n <= q {
            let v = chi.eval(n);
            if !v.is_zero() {
                s += v.to_complex().unscale(n as f64);
            }
            n += 2;
        }
        lhs += s.norm_sqr().powi(k as i32);
    }

    let b = b_oracle(q, k, BWeight::HalfPoint)?;
    let mut class_sums = vec![0.0f64; q as usize];
    for (n, v) in b.support() {
        let a = (n % q) as usize;
        if a != 0 {
            class_sums[a] += v.re;
        }
    }
    let mut diagonal = 0.0;
    let mut reflected = 0.0;
    for a in 1..q as usize {
        diagonal += class_sums[a] * class_sums[a];
        reflected += class_sums[a] * class_sums[q as usize - a];
    }
    let rhs = group.phi() as f64 / 2.0 * (diagonal - reflected);
    let residual = (lhs - rhs).abs() / lhs.abs().max(1.0);
    Ok(OrthogonalityCheck { lhs, rhs, residual })
}

/// Moduli a pooled statistic claims to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    /// Every modulus in [3, N] must be present.
    Full,
    /// The pool is an explicitly flagged prime-only subset: every supplied
    /// modulus must be prime, but the subset may be sparse.
    PrimesOnly,
}

/// Pooled fraction of rows with M ≤ α√q across tables, one per modulus.
pub fn aggregate_gn(tables: &[SweepTable], alpha: f64, coverage: Coverage) -> Result<f64> {
    if tables.is_empty() {
        return Err(Error::ZeroArgument);
    }
    let mut present = BTreeSet::new();
    for t in tables {
        if !t.complete() {
            return Err(Error::IncompleteTable);
        }
        if coverage == Coverage::PrimesOnly && !t.modulus().is_prime() {
            return Err(Error::CompositeModulus { q: t.q() });
        }
        present.insert(t.q());
    }
    if coverage == Coverage::Full {
        let n = *present.iter().next_back().expect("nonempty");
        for m in 3..=n {
            if !present.contains(&m) {
                return Err(Error::CoverageGap { q: m });
            }
        }
    }
    let mut hits = 0u64;
    let mut total = 0u64;
    for t in tables {
        let bar = alpha * (t.q() as f64).sqrt();
        hits += t.rows().iter().filter(|r| r.m <= bar).count() as u64;
        total += t.len() as u64;
    }
    Ok(hits as f64 / total as f64)
}
