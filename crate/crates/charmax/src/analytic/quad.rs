//! Numerical integration with error estimates.
//!
//! Three deliberately independent schemes: adaptive Simpson (local
//! refinement), composite Gauss–Legendre with nodes computed at runtime
//! (fixed order, spectral accuracy for analytic integrands), and the
//! periodic trapezoid rule (exponentially convergent on smooth periodic
//! integrands). Callers that need certified agreement run two of them and
//! compare.

use crate::error::{Error, Result};

/// The outcome of one quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// A posteriori estimate: refinement difference, not a rigorous bound.
    pub est_error: f64,
    pub scheme: &'static str,
    pub evaluations: u64,
}

/// Adaptive Simpson on [a, b] with the classical 1/15 error share.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> QuadratureResult {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        evals: &mut u64,
        err: &mut f64,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        *evals += 2;
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            *err += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evals, err)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evals, err)
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let mut evals = 3u64;
    let mut err = 0.0;
    let whole = simpson(fa, fm, fb, b - a);
    let value = recurse(&f, a, b, fa, fm, fb, whole, tol, 48, &mut evals, &mut err);
    QuadratureResult {
        value,
        est_error: err.max(f64::EPSILON * value.abs()),
        scheme: "adaptive-simpson",
        evaluations: evals,
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], order n, by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th root (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p0, p1 walk the three-term recurrence up to degree n.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre: `order` points on each of `panels` equal
/// subintervals of [a, b]. The error estimate compares against a run with
/// doubled panels.
pub fn gauss_legendre(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    order: usize,
    panels: usize,
) -> QuadratureResult {
    let (nodes, weights) = gauss_legendre_nodes(order);
    let eval = |panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            let mut acc = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                acc += w * f(mid + 0.5 * h * x);
            }
            total += acc * 0.5 * h;
        }
        total
    };
    let coarse = eval(panels);
    let fine = eval(2 * panels);
    QuadratureResult {
        value: fine,
        est_error: (fine - coarse).abs().max(f64::EPSILON * fine.abs()),
        scheme: "gauss-legendre",
        evaluations: (order * panels * 3) as u64,
    }
}

/// Trapezoid rule for a 1-periodic integrand over one period, doubling the
/// node count until two consecutive refinements agree within `tol`
/// relative to the value.
pub fn periodic_trapezoid(f: impl Fn(f64) -> f64, tol: f64) -> Result<QuadratureResult> {
    let eval = |n: u64| -> f64 {
        let mut acc = 0.0;
        for j in 0..n {
            acc += f(j as f64 / n as f64);
        }
        acc / n as f64
    };
    let mut n = 16u64;
    let mut prev = eval(n);
    let mut evals = n;
    loop {
        n *= 2;
        let cur = eval(n);
        evals += n;
        let diff = (cur - prev).abs();
        if diff <= tol * cur.abs().max(1.0) {
            return Ok(QuadratureResult {
                value: cur,
                est_error: diff.max(f64::EPSILON * cur.abs()),
                scheme: "periodic-trapezoid",
                evaluations: evals,
            });
        }
        if n > (1 << 22) {
            return Err(Error::ToleranceUnreachable {
                tol,
                best: diff / cur.abs().max(1.0),
            });
        }
        prev = cur;
    }
}
