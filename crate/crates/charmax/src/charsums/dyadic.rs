//! Dyadic decomposition of a prefix sum.
//!
//! For a target point N < q, write N/q in binary as a_1 a_2 … and let
//! A(l) = 0.a_1…a_l be the l-bit truncation. The prefix sum up to ⌊q·A(L)⌋
//! telescopes exactly into block sums over (⌊q·A(l)⌋, ⌊q·A(l+1)⌋], and the
//! uncovered gap beyond ⌊q·A(L)⌋ holds at most q/2^L + 1 integers.

use super::ExactSum;
use crate::arith::Character;
use crate::error::{Error, Result};

/// The binary digits of N/q and the dyadic cut points they induce.
///
/// Cut numerators m_l satisfy A(l) = m_l / 2^l with m_0 = 0 and
/// m_{l+1} = 2·m_l + a_{l+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicPath {
    n: u64,
    q: u64,
    bits: Vec<u8>,
    cut_nums: Vec<u64>,
}

impl DyadicPath {
    pub fn target(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    /// Digit a_l for l in [1, L].
    pub fn bit(&self, l: usize) -> u8 {
        self.bits[l - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// A(l) = m_l / 2^l as a float, for l in [0, L].
    pub fn cut(&self, l: usize) -> f64 {
        self.cut_nums[l] as f64 / (1u64 << l) as f64
    }

    /// ⌊q · A(l)⌋, computed exactly in integers.
    pub fn cut_floor(&self, l: usize) -> u64 {
        ((self.q as u128 * self.cut_nums[l] as u128) >> l) as u64
    }

    /// Upper bound q/2^L + 1 on the number of integers left uncovered
    /// between ⌊q·A(L)⌋ and N.
    pub fn gap_bound(&self) -> f64 {
        self.q as f64 / (1u64 << self.depth()) as f64 + 1.0
    }
}

/// Extract the first `levels` binary digits of n/q.
///
/// Requires 1 ≤ n < q and 1 ≤ levels ≤ 63 (beyond 63 the cut numerators
/// would overflow, and the gap bound is already below 1 for any supported
/// modulus).
pub fn dyadic_path(n: u64, q: u64, levels: u32) -> Result<DyadicPath> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n >= q {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[1, q)",
        });
    }
    if !(1..=63).contains(&levels) {
        return Err(Error::OutOfRange {
            name: "levels",
            value: levels as f64,
            range: "[1, 63]",
        });
    }
    let mut bits = Vec::with_capacity(levels as usize);
    let mut cut_nums = Vec::with_capacity(levels as usize + 1);
    cut_nums.push(0);
    let mut m = 0u64;
    let mut r = n;
    for _ in 0..levels {
        r *= 2;
        let a = u8::from(r >= q);
        if a == 1 {
            r -= q;
        }
        m = 2 * m + a as u64;
        bits.push(a);
        cut_nums.push(m);
    }
    Ok(DyadicPath {
        n,
        q,
        bits,
        cut_nums,
    })
}

/// Telescope the path's block sums exactly and report the result together
/// with the first uncovered integer, ⌊q·A(L)⌋.
///
/// The returned sum equals S_χ(⌊q·A(L)⌋) bit for bit: both sides are
/// integer multiplicities of the same roots of unity.
pub fn dyadic_reconstruct(chi: &Character, path: &DyadicPath) -> (ExactSum, u64) {
    assert_eq!(chi.modulus(), path.modulus());
    let mut total = ExactSum::zero(chi.group().exponent());
    for l in 0..path.depth() {
        let lo = path.cut_floor(l);
        let hi = path.cut_floor(l + 1);
        for n in lo + 1..=hi {
            total.add(chi.eval(n));
        }
    }
    (total, path.cut_floor(path.depth()))
}
