//! Randomized structural invariants. Each property here is a statement the
//! library relies on elsewhere — conjugate symmetry, thread-count
//! invisibility, serialization fidelity — exercised over generated inputs
//! rather than the hand-picked moduli of the unit tests.

use num_complex::Complex64;
use proptest::prelude::*;

use charmax::analytic::dk;
use charmax::arith::{unit_root, Character, UnitGroup};
use charmax::charsums::{
    dyadic_path, dyadic_reconstruct, interval_sum, prefix_extremes, prefix_sum_exact,
};
use charmax::hist::{histogram, HistogramSpec, Normalization};
use charmax::moments::{b_oracle, empirical_moment, BWeight, MomentStatistic};
use charmax::sweep::{sweep, Engine};
use charmax::table::{load_table, save_table, table_bytes, table_from_bytes};
use charmax::Error;

fn canonical(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

proptest! {
    /// χ and χ̄ reach the same maximum at the same prefix, and their
    /// half-point sums are mirror images. The sweep's pair-and-derive
    /// shortcut is sound only because of this.
    #[test]
    fn conjugate_characters_share_extremes(q in 3u64..=400, pick in 0u64..u64::MAX) {
        let group = UnitGroup::new(q).unwrap();
        let index = 1 + pick % (group.phi() - 1).max(1);
        let chi = Character::from_index(group.clone(), index);
        let bar = chi.conjugate();
        let a = prefix_extremes(&chi).unwrap();
        let b = prefix_extremes(&bar).unwrap();
        prop_assert_eq!(a.m.to_bits(), b.m.to_bits());
        prop_assert_eq!(a.n, b.n);
        prop_assert_eq!(
            canonical(a.s_half).re.to_bits(),
            canonical(b.s_half.conj()).re.to_bits()
        );
        prop_assert_eq!(
            canonical(a.s_half).im.to_bits(),
            canonical(b.s_half.conj()).im.to_bits()
        );
        prop_assert_eq!(a.parity, b.parity);
        prop_assert_eq!(a.conductor, b.conductor);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    /// The worker count is a throughput knob, never a result knob.
    #[test]
    fn sweep_rows_ignore_worker_count(q in 3u64..=200, extra in 2usize..=4) {
        let serial = sweep(q, Engine::Exact, 1).unwrap();
        let parallel = sweep(q, Engine::Exact, extra).unwrap();
        prop_assert_eq!(serial.len(), parallel.len());
        for r in 0..serial.len() {
            let a = &serial.rows()[r];
            let b = &parallel.rows()[r];
            prop_assert_eq!(a.m.to_bits(), b.m.to_bits());
            prop_assert_eq!(a.n, b.n);
            prop_assert_eq!(a.s_half.re.to_bits(), b.s_half.re.to_bits());
            prop_assert_eq!(a.s_half.im.to_bits(), b.s_half.im.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    /// Power means of M are nondecreasing in the exponent, so any decrease
    /// in the computed sequence is an aggregation bug, not noise.
    #[test]
    fn power_means_of_m_are_monotone(q in 3u64..=300) {
        let table = sweep(q, Engine::Exact, 1).unwrap();
        let mut last = 0.0f64;
        for k in 1..=6u64 {
            let raw = empirical_moment(&table, k, MomentStatistic::M).unwrap().raw;
            let mean = raw.powf(1.0 / (2.0 * k as f64));
            prop_assert!(mean >= last - 1e-12 * last.abs());
            last = mean;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    /// Convolution coefficients stay inside the divisor-function envelope,
    /// and the interval weight kills indices sharing a factor with q.
    #[test]
    fn b_coefficients_obey_divisor_bound(
        q in 3u64..=60,
        k in 1u64..=3,
        a in 0.0f64..0.9,
        width in 0.01f64..0.1,
    ) {
        let beta = (a + width).min(1.0);
        let pi = std::f64::consts::PI;

        let half = b_oracle(q, k, BWeight::HalfPoint).unwrap();
        for (n, value) in half.support() {
            let bound = 2f64.powi(k as i32) * dk(n, k as u32) as f64 / n as f64;
            prop_assert!(value.norm() <= bound * (1.0 + 1e-12));
        }

        let interval = b_oracle(q, k, BWeight::Interval { alpha: a, beta }).unwrap();
        for (n, value) in interval.support() {
            let per_factor = (pi * (beta - a)).powi(k as i32);
            let bound = 2f64.powi(k as i32)
                * dk(n, k as u32) as f64
                * (1.0 / n as f64).min(per_factor);
            prop_assert!(value.norm() <= bound * (1.0 + 1e-12));
            prop_assert_eq!(charmax::arith::gcd(n, q), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    /// Serialization is a bijection on completed tables: decode ∘ encode is
    /// the identity and encode ∘ decode reproduces the bytes.
    #[test]
    fn table_encoding_round_trips(q in 3u64..=150) {
        let table = sweep(q, Engine::Exact, 1).unwrap();
        let bytes = table_bytes(&table);
        let back = table_from_bytes(&bytes, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(table.q(), back.q());
        prop_assert_eq!(table.engine(), back.engine());
        prop_assert_eq!(table.complete(), back.complete());
        prop_assert_eq!(table.rows().len(), back.rows().len());
        for r in 0..table.len() {
            prop_assert_eq!(table.exponents(r), back.exponents(r));
            let a = &table.rows()[r];
            let b = &back.rows()[r];
            prop_assert_eq!(a.m.to_bits(), b.m.to_bits());
            prop_assert_eq!(a.n, b.n);
            prop_assert_eq!(a.parity, b.parity);
            prop_assert_eq!(a.conductor, b.conductor);
            prop_assert_eq!(a.s_half.re.to_bits(), b.s_half.re.to_bits());
            prop_assert_eq!(a.s_half.im.to_bits(), b.s_half.im.to_bits());
        }
        prop_assert_eq!(bytes, table_bytes(&back));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    /// Any single corrupted byte in the row region is caught by the
    /// checksum before a row is believed.
    #[test]
    fn single_byte_corruption_is_detected(q in 3u64..=80, pick in 0usize..usize::MAX, bit in 0u8..8) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tbl");
        let table = sweep(q, Engine::Exact, 1).unwrap();
        save_table(&table, &path).unwrap();

        let mut bytes = std::fs::read(&path).unwrap();
        let header_end = bytes.iter().position(|&b| b == b'\n').unwrap() + 1;
        let offset = header_end + pick % (bytes.len() - header_end);
        bytes[offset] ^= 1 << bit;
        std::fs::write(&path, &bytes).unwrap();

        let corrupt = matches!(load_table(&path), Err(Error::CorruptTable { .. }));
        prop_assert!(corrupt);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    /// Dyadic block sums telescope exactly onto the prefix sum at the cut,
    /// and the skipped stretch to N stays within the level budget.
    #[test]
    fn dyadic_blocks_telescope(
        q in 3u64..=2000,
        pick in 0u64..u64::MAX,
        n_pick in 0u64..u64::MAX,
        levels in 1u32..=16,
    ) {
        let group = UnitGroup::new(q).unwrap();
        let index = 1 + pick % (group.phi() - 1).max(1);
        let chi = Character::from_index(group.clone(), index);
        let n = 1 + n_pick % (q - 1);
        let path = dyadic_path(n, q, levels).unwrap();
        let (blocks, covered) = dyadic_reconstruct(&chi, &path);
        prop_assert_eq!(&blocks, &prefix_sum_exact(&chi, covered));
        let direct = prefix_sum_exact(&chi, n).render();
        prop_assert!((direct - blocks.render()).norm() <= path.gap_bound() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    /// Histogram bins plus the dropped counter conserve the table's rows,
    /// and per-parity densities integrate to one whenever the class has
    /// any in-range mass.
    #[test]
    fn histogram_conserves_mass(q in 3u64..=300, bins in 1u32..=60, lo in 0.0f64..0.5, hi in 1.2f64..3.5) {
        let table = sweep(q, Engine::Exact, 1).unwrap();
        let spec = HistogramSpec {
            bins,
            lo,
            hi,
            split_parity: true,
            normalization: Normalization::Density,
        };
        let hist = histogram(&table, spec).unwrap();
        let binned: u64 = hist.count_even.iter().sum::<u64>() + hist.count_odd.iter().sum::<u64>();
        prop_assert_eq!(binned + hist.dropped, table.len() as u64);

        let width = (hi - lo) / bins as f64;
        for (counts, densities) in [
            (&hist.count_even, &hist.density_even),
            (&hist.count_odd, &hist.density_odd),
        ] {
            let in_range: u64 = counts.iter().sum();
            let mass: f64 = densities.iter().map(|d| d * width).sum();
            if in_range > 0 {
                prop_assert!((mass - 1.0).abs() < 1e-9);
            } else {
                prop_assert_eq!(mass, 0.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]
    /// An interval sum is the difference of the two bracketing prefix sums.
    #[test]
    fn interval_equals_prefix_difference(
        q in 3u64..=500,
        pick in 0u64..u64::MAX,
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
    ) {
        let (alpha, beta) = if a <= b { (a, b) } else { (b, a) };
        let group = UnitGroup::new(q).unwrap();
        let index = 1 + pick % (group.phi() - 1).max(1);
        let chi = Character::from_index(group.clone(), index);
        let direct = interval_sum(&chi, alpha, beta).unwrap();
        let hi = prefix_sum_exact(&chi, (beta * q as f64).floor() as u64).render();
        let lo = prefix_sum_exact(&chi, (alpha * q as f64).floor() as u64).render();
        prop_assert!((direct - (hi - lo)).norm() <= 1e-9 * q as f64);
    }
}

proptest! {
    /// e(−n/d) is the exact conjugate of e(n/d), bit for bit — the identity
    /// behind deriving a conjugate row without rescanning.
    #[test]
    fn unit_roots_conjugate_exactly(d in 1u64..=1_000_000, pick in 0u64..u64::MAX) {
        let n = pick % d;
        let mirrored = if n == 0 { 0 } else { d - n };
        let a = unit_root(n, d);
        let b = unit_root(mirrored, d).conj();
        prop_assert_eq!(canonical(a).re.to_bits(), canonical(b).re.to_bits());
        prop_assert_eq!(canonical(a).im.to_bits(), canonical(b).im.to_bits());
    }
}
