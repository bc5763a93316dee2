//! Rendering exact roots of unity to complex doubles.
//!
//! All character evaluation in this crate is exact (rational exponents of a
//! root of unity); floating point enters only here. Two properties matter
//! beyond plain accuracy and both are load-bearing for determinism tests:
//!
//! * conjugate symmetry is bitwise exact: `unit_root(d - n, d)` is the exact
//!   IEEE conjugate of `unit_root(n, d)`, so scanning a conjugate character
//!   produces bitwise-conjugate sums;
//! * the quadrant points 1, i, -1, -i are exact, so real characters stay
//!   exactly real.
//!
//! Both come from reducing the angle to the first quadrant before calling
//! libm and applying sign flips afterwards.

use num_complex::Complex64;

/// e(n/d) = exp(2πi·n/d) for 0 ≤ n < d, quadrant-exact.
pub fn unit_root(n: u64, d: u64) -> Complex64 {
    debug_assert!(d > 0 && n < d);
    // Upper half plane: conjugate of the reflection.
    if 2 * n > d {
        let z = unit_root(d - n, d);
        return Complex64::new(z.re, -z.im);
    }
    // Exact cardinal directions.
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * n == d {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * n == d {
        return Complex64::new(0.0, 1.0);
    }
    // Second quadrant: angle π - β with β in the first quadrant.
    if 4 * n > d {
        let beta = std::f64::consts::PI * ((d - 2 * n) as f64 / d as f64);
        return Complex64::new(-beta.cos(), beta.sin());
    }
    let theta = 2.0 * std::f64::consts::PI * (n as f64 / d as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// Table of all d-th roots: entry j is e(j/d), with the same exactness
/// guarantees as `unit_root`. Shared read-only by sweep workers.
pub fn roots_table(d: u64) -> Vec<Complex64> {
    let n = usize::try_from(d).expect("root table length fits usize");
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..=(n / 2) {
        let z = unit_root(j as u64, d);
        out[j] = z;
        if j > 0 && j * 2 != n {
            out[n - j] = Complex64::new(z.re, -z.im);
        }
    }
    out
}
