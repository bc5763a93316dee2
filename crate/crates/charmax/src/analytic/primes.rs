//! Prime sieves, prime sums, and the zeta functions that control series
//! tails.

use crate::error::{Error, Result};

/// Primes up to and including `limit`, by a bit-packed Eratosthenes sieve.
/// Intended for moderate limits (tens of millions); larger scans should
/// stream through [`for_each_prime`].
pub fn sieve(limit: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    for_each_prime(limit, |p| primes.push(p));
    primes
}

/// Call `f` on every prime ≤ limit, in order, using a segmented bit sieve
/// with O(√limit + segment) memory.
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    // base sieve up to √limit, plain bytes (root ≤ ~32k for limit ≤ 1e9)
    let mut base = vec![true; (root + 1) as usize];
    base[0] = false;
    if root >= 1 {
        base[1] = false;
    }
    let mut p = 2u64;
    while p * p <= root {
        if base[p as usize] {
            let mut m = p * p;
            while m <= root {
                base[m as usize] = false;
                m += p;
            }
        }
        p += 1;
    }
    let base_primes: Vec<u64> = (2..=root).filter(|&i| base[i as usize]).collect();
    for &bp in &base_primes {
        if bp <= limit {
            f(bp);
        }
    }
    const SEGMENT: u64 = 1 << 20;
    let mut lo = root + 1;
    let mut composite = vec![0u64; (SEGMENT as usize).div_ceil(64)];
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        composite.iter_mut().for_each(|w| *w = 0);
        for &bp in &base_primes {
            if bp * bp > hi {
                break;
            }
            let mut m = lo.div_ceil(bp) * bp;
            if m < bp * bp {
                m = bp * bp;
            }
            while m <= hi {
                let off = (m - lo) as usize;
                composite[off / 64] |= 1 << (off % 64);
                m += bp;
            }
        }
        for n in lo..=hi {
            let off = (n - lo) as usize;
            if composite[off / 64] & (1 << (off % 64)) == 0 {
                f(n);
            }
        }
        lo = hi + 1;
    }
}

/// Σ_{p < x} p^{−σ}, exact over a sieve. Strict inequality: an integer x
/// is excluded. Supported for x ≤ 10⁹ (sieve budget) and σ ∈ [1/2, 1].
pub fn prime_sum(x: f64, sigma: f64) -> Result<f64> {
    if !(2.0..=1e9).contains(&x) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "[2, 1e9]",
        });
    }
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
            range: "[1/2, 1]",
        });
    }
    let limit = if x.fract() == 0.0 {
        x as u64 - 1
    } else {
        x.floor() as u64
    };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for_each_prime(limit, |p| {
        let term = (p as f64).powf(-sigma);
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    });
    Ok(sum)
}

/// ζ(s) for s > 1 by Euler–Maclaurin (N = 30 with Bernoulli corrections
/// through B₁₆; error far below 1e-16 on this range).
pub fn riemann_zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta evaluated only to the right of the pole");
    const N: u64 = 30;
    const BERNOULLI: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let nf = N as f64;
    let mut sum = 0.0;
    for n in 1..N {
        sum += (n as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{1−s−2j}
    let mut rising = s; // s(s+1)…(s+2j−2), starts at j=1 with just s
    let mut factorial = 2.0f64; // (2j)!
    for (j, b) in BERNOULLI.iter().enumerate() {
        let twoj = 2 * (j as u64 + 1);
        sum += b / factorial * rising * nf.powf(1.0 - s - twoj as f64);
        rising *= (s + twoj as f64 - 1.0) * (s + twoj as f64);
        factorial *= ((twoj + 1) * (twoj + 2)) as f64;
    }
    sum
}

/// The prime zeta function P(s) = Σ_p p^{−s} for s > 1, via
/// P(s) = Σ_{m ≥ 1} μ(m)/m · log ζ(ms).
pub fn prime_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "(1, inf)",
        });
    }
    let mut sum = 0.0;
    for m in 1..=128u64 {
        let mu = moebius(m);
        if mu == 0 {
            continue;
        }
        let lz = riemann_zeta(m as f64 * s).ln();
        sum += mu as f64 / m as f64 * lz;
        if lz.abs() < 1e-18 {
            break;
        }
    }
    Ok(sum)
}

fn moebius(n: u64) -> i32 {
    let f = crate::arith::factorize(n).expect("n >= 1");
    let mut sign = 1;
    for &(_, e) in f.factors() {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_known_counts() {
        assert_eq!(sieve(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve(2), vec![2]);
        assert_eq!(sieve(1), Vec::<u64>::new());
        assert_eq!(sieve(100).len(), 25);
        assert_eq!(sieve(10_000).len(), 1229);
        assert_eq!(sieve(1_000_000).len(), 78_498);
    }

    #[test]
    fn segmented_agrees_with_direct() {
        // force multiple segments by checking a count past 2^20
        let mut count = 0u64;
        let mut last = 0u64;
        for_each_prime(3_000_000, |p| {
            count += 1;
            last = p;
        });
        assert_eq!(count, 216_816);
        assert_eq!(last, 2_999_999);
    }

    #[test]
    fn prime_sum_small_values() {
        assert_eq!(prime_sum(2.0, 1.0).unwrap(), 0.0);
        let s = prime_sum(10.0, 1.0).unwrap();
        let direct = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((s - direct).abs() < 1e-15);
        // integer endpoint excluded
        let s7 = prime_sum(7.0, 1.0).unwrap();
        assert!((s7 - (0.5 + 1.0 / 3.0 + 0.2)).abs() < 1e-15);
        let s7plus = prime_sum(7.5, 1.0).unwrap();
        assert!(s7plus > s7);
    }

    #[test]
    fn prime_sum_guards() {
        assert!(prime_sum(1.5, 1.0).is_err());
        assert!(prime_sum(2e9, 1.0).is_err());
        assert!(prime_sum(100.0, 0.4).is_err());
        assert!(prime_sum(100.0, 1.1).is_err());
    }

    #[test]
    fn prime_sum_tracks_loglog_growth() {
        // the σ = 1 sum grows like log log x plus a constant
        let a = prime_sum(1e4, 1.0).unwrap();
        let b = prime_sum(1e6, 1.0).unwrap();
        let c = prime_sum(1e8, 1.0).unwrap();
        let g1 = b - a - ((1e6f64).ln().ln() - (1e4f64).ln().ln());
        let g2 = c - b - ((1e8f64).ln().ln() - (1e6f64).ln().ln());
        assert!(g1.abs() < 0.01);
        assert!(g2.abs() < 0.005);
    }

    #[test]
    fn zeta_reference_values() {
        let pi = std::f64::consts::PI;
        assert!((riemann_zeta(2.0) - pi * pi / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0) - pi.powi(4) / 90.0).abs() < 1e-15);
        assert!((riemann_zeta(1.2) - 5.591582441177750777).abs() < 1e-13);
    }

    #[test]
    fn prime_zeta_reference_values() {
        assert!((prime_zeta(2.0).unwrap() - 0.452247420041065498506543364832).abs() < 1e-14);
        assert!((prime_zeta(1.2).unwrap() - 1.519768312818274648968).abs() < 1e-13);
        assert!((prime_zeta(1.6).unwrap() - 0.734844117918303986726).abs() < 1e-14);
        assert!(prime_zeta(1.0).is_err());
    }

    #[test]
    fn prime_zeta_consistent_with_sieve() {
        // P(2) minus the sieved head equals the tail, which is tiny and positive
        let head: f64 = sieve(100_000).iter().map(|&p| (p as f64).powi(-2)).sum();
        let tail = prime_zeta(2.0).unwrap() - head;
        assert!(tail > 0.0 && tail < 1.0 / 100_000.0);
    }
}
