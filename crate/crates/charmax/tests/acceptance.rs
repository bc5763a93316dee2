//! Acceptance gate: thirteen numbered criteria, one test and one printed
//! verdict line each (`cargo test --test acceptance -- --nocapture` shows
//! them). Every tolerance is pinned here, not computed; a red line means
//! the library misses the contract, not that a knob needs turning.
//!
//! The heavyweight sweep fixtures (q = 1009, 10007, 100003) are shared
//! across criteria through `OnceLock`, and the wall time of the largest
//! sweep is part of criterion 9's budget.

use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use charmax::analytic::{
    a_integrand, constant_a, divisor_square_series, l_one_all, local_factor_integral,
    local_factor_series, prime_sum, sieve,
};
use charmax::arith::{enumerate_characters, Parity, UnitGroup};
use charmax::charsums::{
    dyadic_path, dyadic_reconstruct, half_point_sum, polya_expansion, prefix_sum_exact,
};
use charmax::hist::{histogram, HistogramSpec, Normalization};
use charmax::moments::{empirical_moment, orthogonality_check, tail_f, MomentStatistic};
use charmax::sweep::{sweep, Engine, SweepTable};

fn workers() -> usize {
    std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
}

struct TimedTable {
    table: SweepTable,
    seconds: f64,
}

fn timed_sweep(q: u64) -> TimedTable {
    let start = Instant::now();
    let table = sweep(q, Engine::Exact, workers()).expect("exact sweep");
    TimedTable {
        table,
        seconds: start.elapsed().as_secs_f64(),
    }
}

static Q1009: OnceLock<TimedTable> = OnceLock::new();
static Q10007: OnceLock<TimedTable> = OnceLock::new();
static Q100003: OnceLock<TimedTable> = OnceLock::new();

fn q1009() -> &'static TimedTable {
    Q1009.get_or_init(|| timed_sweep(1009))
}

fn q10007() -> &'static TimedTable {
    Q10007.get_or_init(|| timed_sweep(10007))
}

fn q100003() -> &'static TimedTable {
    Q100003.get_or_init(|| timed_sweep(100003))
}

/// Print the verdict line for criterion `n`, then enforce it.
fn gate(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "pass" } else { "FAIL" };
    println!("criterion {n:02}: {verdict} — {detail}");
    assert!(pass, "criterion {n:02} failed — {detail}");
}

#[test]
fn criterion_01_gauss_sum_magnitude() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0u64;
    for q in 3..=500u64 {
        let group = UnitGroup::new(q).unwrap();
        for chi in enumerate_characters(&group).filter(|c| c.is_primitive()) {
            let tau = chi.gauss_sum();
            let sqrt_q = (q as f64).sqrt();
            worst = worst.max((tau.norm() - sqrt_q).abs() / sqrt_q);
            count += 1;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    gate(
        1,
        worst < 1e-6 && seconds < 60.0,
        &format!(
            "|τ(χ)| = √q for {count} primitive characters over q ≤ 500; \
             worst relative deviation {worst:.2e}, {seconds:.1} s"
        ),
    );
}

#[test]
fn criterion_02_even_half_point_vanishing() {
    let mut worst = 0.0f64;
    let mut count = 0u64;
    for q in sieve(1009) {
        if q < 3 {
            continue;
        }
        let group = UnitGroup::new(q).unwrap();
        for chi in enumerate_characters(&group)
            .filter(|c| !c.is_principal() && c.parity() == Parity::Even)
        {
            worst = worst.max(half_point_sum(&chi).norm());
            count += 1;
        }
    }
    gate(
        2,
        worst < 1e-9,
        &format!(
            "S(⌊q/2⌋) vanishes for {count} even nonprincipal characters \
             over primes q ≤ 1009; worst magnitude {worst:.2e}"
        ),
    );
}

#[test]
fn criterion_03_odd_half_point_l_value_relation() {
    let start = Instant::now();
    let tol = 1e-6;
    let pi = std::f64::consts::PI;
    let mut worst_diff = 0.0f64;
    let mut worst_relative_bound = 0.0f64;
    let mut within_bound = true;
    let mut count = 0u64;
    for q in sieve(101) {
        if q < 3 {
            continue;
        }
        let group = UnitGroup::new(q).unwrap();
        let l_values = l_one_all(&group, tol).unwrap();
        let sqrt_q = (q as f64).sqrt();
        for chi in enumerate_characters(&group).filter(|c| c.parity() == Parity::Odd) {
            let bar = chi.conjugate();
            let l_bar = &l_values[bar.index() as usize];
            let factor = Complex64::new(2.0, 0.0) - bar.eval(2).to_complex();
            let predicted = factor * chi.gauss_sum() / Complex64::new(0.0, pi) * l_bar.value;
            let s = half_point_sum(&chi);
            let diff = (s - predicted).norm();
            // |2 − χ̄(2)| ≤ 3 and |τ| = √q propagate the certified L tail.
            let bound = 3.0 * sqrt_q * l_bar.tail_bound / pi + 1e-9 * sqrt_q;
            within_bound &= diff <= bound;
            worst_diff = worst_diff.max(diff);
            worst_relative_bound = worst_relative_bound.max(bound / s.norm());
            count += 1;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    gate(
        3,
        within_bound && worst_relative_bound <= 1e-3 && seconds < 300.0,
        &format!(
            "S(⌊q/2⌋) = (2 − χ̄(2)) τ/(πi) · L(1, χ̄) for {count} odd characters \
             over primes q ≤ 101; worst |lhs − rhs| {worst_diff:.2e}, certified bound \
             ≤ {worst_relative_bound:.2e} relative, {seconds:.1} s"
        ),
    );
}

#[test]
fn criterion_04_local_factor_series_vs_integral() {
    let mut worst = 0.0f64;
    for p in [3u64, 5, 13, 101] {
        for k in [1u32, 2, 3, 5] {
            for sigma in [0.6f64, 0.8, 1.0] {
                let series = local_factor_series(p, k, sigma, 400).unwrap();
                let integral = local_factor_integral(p, k, sigma).unwrap();
                worst = worst.max((series - integral.value).abs());
            }
        }
    }
    let series_anchor = local_factor_series(3, 2, 1.0, 400).unwrap();
    let integral_anchor = local_factor_integral(3, 2, 1.0).unwrap().value;
    let anchor = 1.58203125;
    let anchor_dev = (series_anchor - anchor).abs().max((integral_anchor - anchor).abs());
    gate(
        4,
        worst <= 1e-8 && anchor_dev <= 1e-8,
        &format!(
            "Bessel-moment local factors: series vs integral within {worst:.2e} \
             on the 48-point (p, k, σ) grid; anchor (3, 2, 1) hits {anchor} \
             within {anchor_dev:.2e}"
        ),
    );
}

#[test]
fn criterion_05_divisor_square_closed_forms() {
    let pi = std::f64::consts::PI;
    let first = divisor_square_series(1, 1.0, 1e-10).unwrap().value;
    let second = divisor_square_series(2, 1.0, 1e-8).unwrap().value;
    let dev1 = (first - pi * pi / 6.0).abs();
    let dev2 = (second - 5.0 * pi.powi(4) / 72.0).abs();
    gate(
        5,
        dev1 <= 1e-9 && dev2 <= 1e-6,
        &format!(
            "divisor-square series: k=1 hits π²/6 within {dev1:.2e}, \
             k=2 hits 5π⁴/72 within {dev2:.2e}"
        ),
    );
}

#[test]
fn criterion_06_constant_a_quadrature() {
    let a = constant_a(1e-10).unwrap();
    let integrand_dev = (a_integrand(1e-4) - 0.25).abs();
    gate(
        6,
        a.est_error <= 1e-10 && integrand_dev <= 1e-6,
        &format!(
            "constant A = {:.12} with dual schemes agreeing within {:.2e}; \
             integrand(1e-4) sits {integrand_dev:.2e} from the limit 1/4",
            a.value, a.est_error
        ),
    );
}

#[test]
fn criterion_07_orthogonality_identity() {
    let mut worst = 0.0f64;
    for (q, k) in [(5u64, 1u64), (7, 1), (7, 2), (11, 1)] {
        let check = orthogonality_check(q, k).unwrap();
        worst = worst.max(check.residual);
    }
    gate(
        7,
        worst <= 1e-9,
        &format!(
            "odd-character orthogonality identity at (q, k) ∈ \
             {{(5,1), (7,1), (7,2), (11,1)}}; worst residual {worst:.2e}"
        ),
    );
}

#[test]
fn criterion_08_half_point_moment_limit() {
    let deviations: Vec<f64> = [q1009(), q10007(), q100003()]
        .iter()
        .map(|t| {
            let report = empirical_moment(&t.table, 1, MomentStatistic::SHalf).unwrap();
            (report.normalized - 0.25).abs()
        })
        .collect();
    let shrinking = deviations[0] > deviations[1] && deviations[1] > deviations[2];
    gate(
        8,
        deviations[2] <= 0.02 && shrinking,
        &format!(
            "normalized half-point moment (k=1) deviates from 1/4 by \
             {:.2e} → {:.2e} → {:.2e} across q = 1009, 10007, 100003",
            deviations[0], deviations[1], deviations[2]
        ),
    );
}

#[test]
fn criterion_09_desk_scale_sweep() {
    let timed = q100003();
    let tail = tail_f(&timed.table, &[2.0]).unwrap();
    let fraction = tail.fractions[0];

    let spec = HistogramSpec {
        bins: 40,
        lo: 0.0,
        hi: 3.0,
        split_parity: true,
        normalization: Normalization::Density,
    };
    let hist = histogram(&timed.table, spec).unwrap();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let csv_path = dir.join("q100003-hist.csv");
    let svg_path = dir.join("q100003-hist.svg");
    std::fs::write(&csv_path, hist.to_csv()).unwrap();
    std::fs::write(&svg_path, hist.to_svg()).unwrap();
    let csv_len = std::fs::metadata(&csv_path).map(|m| m.len()).unwrap_or(0);
    let svg_len = std::fs::metadata(&svg_path).map(|m| m.len()).unwrap_or(0);

    gate(
        9,
        timed.seconds <= 1800.0 && fraction >= 0.999 && csv_len > 0 && svg_len > 0,
        &format!(
            "exact sweep of q = 100003 in {:.0} s on {} worker(s); \
             fraction with M < 2√q = {fraction:.6}; parity-split histogram \
             written ({csv_len} B csv, {svg_len} B svg)",
            timed.seconds,
            workers()
        ),
    );
}

#[test]
fn criterion_10_dyadic_rendezvous() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut worst_slack = 0.0f64;
    for _ in 0..1000 {
        let q = rng.gen_range(3..=10_000u64);
        let group = UnitGroup::new(q).unwrap();
        let phi = group.phi();
        if phi < 2 {
            continue;
        }
        let chi = charmax::arith::Character::from_index(group.clone(), rng.gen_range(1..phi));
        let n = rng.gen_range(1..q);
        let levels = rng.gen_range(1..=20u32);
        let path = dyadic_path(n, q, levels).unwrap();
        let (blocks, covered) = dyadic_reconstruct(&chi, &path);
        // The telescoped blocks must land exactly on the prefix sum at the cut…
        assert_eq!(blocks, prefix_sum_exact(&chi, covered));
        // …and the remaining gap to N stays inside the q/2^L + 1 budget.
        let direct = prefix_sum_exact(&chi, n).render();
        let slack = (direct - blocks.render()).norm() - path.gap_bound();
        worst_slack = worst_slack.max(slack);
    }
    gate(
        10,
        worst_slack <= 1e-9,
        &format!(
            "1000 seeded dyadic paths (q ≤ 10⁴, L ≤ 20): block sums equal \
             prefix sums exactly; |S(N) − blocks| − (q/2^L + 1) ≤ {worst_slack:.2e}"
        ),
    );
}

#[test]
fn criterion_11_fourier_expansion_envelope() {
    let mut detail = String::new();
    let mut pass = true;
    for q in [101u64, 1009] {
        let group = UnitGroup::new(q).unwrap();
        let bound = 10.0 * (q as f64).ln();
        let mut worst = 0.0f64;
        for chi in enumerate_characters(&group).filter(|c| !c.is_principal()) {
            for j in 1..=64u64 {
                let t = q * j / 64;
                let expansion = polya_expansion(&chi, t as f64, q).unwrap();
                let direct = prefix_sum_exact(&chi, t).render();
                worst = worst.max((expansion.value - direct).norm());
            }
        }
        pass &= worst <= bound;
        write!(detail, "q={q}: worst gap {worst:.2} ≤ {bound:.1}; ").unwrap();
    }
    gate(
        11,
        pass,
        &format!("finite Fourier expansion vs direct sums on a 64-point grid — {detail}"),
    );
}

#[test]
fn criterion_12_prime_sum_envelope_trend() {
    let xs = [1e3, 1e4, 1e5, 1e6, 1e7];
    let mut detail = String::new();
    let mut pass = true;
    let mut overall_max = 0.0f64;
    for sigma in [0.6f64, 0.8, 1.0] {
        let ratios: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let value = prime_sum(x, sigma).unwrap();
                let main = sigma * x.ln().ln();
                let u = x.powf(1.0 - sigma);
                (value - main).abs() / (u / (3.0 * u).ln())
            })
            .collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        overall_max = overall_max.max(max);
        // A ratio sequence that never decreases would mean the envelope is
        // being outgrown; every σ must show at least one strict decrease.
        let decreases = ratios.windows(2).any(|w| w[1] < w[0]);
        pass &= max.is_finite() && decreases;
        write!(detail, "σ={sigma}: max {max:.3}; ").unwrap();
    }
    gate(
        12,
        pass,
        &format!(
            "prime-sum remainder vs x^(1−σ)/ln(3x^(1−σ)) over x ∈ 10³..10⁷ — \
             {detail}overall max {overall_max:.3}, no monotone growth"
        ),
    );
}

#[test]
fn criterion_13_fourth_moment_stability() {
    let values: Vec<f64> = [q1009(), q10007(), q100003()]
        .iter()
        .map(|t| empirical_moment(&t.table, 2, MomentStatistic::M).unwrap().normalized)
        .collect();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let ratio = max / min;
    gate(
        13,
        min > 0.0 && ratio < 2.0,
        &format!(
            "normalized fourth moment of M at q = 1009, 10007, 100003: \
             {:.4}, {:.4}, {:.4} (spread ×{ratio:.3} < 2; growth-rate trend \
             curves are asymptotic in k and reported only: values logged for \
             the moment plot)",
            values[0], values[1], values[2]
        ),
    );
}
