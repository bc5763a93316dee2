//! Parity-split histograms of M/√q, emitted as CSV or self-contained SVG.

use serde::Serialize;

use crate::arith::Parity;
use crate::error::{Error, Result};
use crate::sweep::SweepTable;

/// What bar heights encode in rendered output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Count,
    /// Per-parity-class probability density (each class integrates to 1
    /// over the in-range rows).
    Density,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(Normalization::Count),
            "density" => Ok(Normalization::Density),
            _ => Err(Error::OutOfRange {
                name: "normalization",
                value: f64::NAN,
                range: "count|density",
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HistogramSpec {
    pub bins: u32,
    /// Range over M/√q; rows outside are dropped (and counted as such).
    pub lo: f64,
    pub hi: f64,
    pub split_parity: bool,
    pub normalization: Normalization,
}

/// Binned counts and densities; even and odd characters are always
/// tallied separately, `split_parity` only controls rendering.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub q: u64,
    pub spec: HistogramSpec,
    /// bins + 1 edges, edges[i] = lo + (hi − lo)·i/bins.
    pub edges: Vec<f64>,
    pub count_even: Vec<u64>,
    pub count_odd: Vec<u64>,
    pub density_even: Vec<f64>,
    pub density_odd: Vec<f64>,
    /// Rows outside [lo, hi].
    pub dropped: u64,
}

/// Bin the normalized maxima of a complete table.
pub fn histogram(table: &SweepTable, spec: HistogramSpec) -> Result<Histogram> {
    if spec.bins == 0 {
        return Err(Error::ZeroArgument);
    }
    if !(spec.lo < spec.hi) || !spec.lo.is_finite() || !spec.hi.is_finite() {
        return Err(Error::EmptyInterval {
            alpha: spec.lo,
            beta: spec.hi,
        });
    }
    if !table.complete() || table.is_empty() {
        return Err(Error::IncompleteTable);
    }
    let bins = spec.bins as usize;
    let sqrt_q = (table.q() as f64).sqrt();
    let width = (spec.hi - spec.lo) / spec.bins as f64;
    let mut count_even = vec![0u64; bins];
    let mut count_odd = vec![0u64; bins];
    let mut dropped = 0u64;
    for row in table.rows() {
        let x = row.m / sqrt_q;
        if x < spec.lo || x > spec.hi {
            dropped += 1;
            continue;
        }
        let i = (((x - spec.lo) / (spec.hi - spec.lo)) * spec.bins as f64) as usize;
        let i = i.min(bins - 1);
        match row.parity {
            Parity::Even => count_even[i] += 1,
            Parity::Odd => count_odd[i] += 1,
        }
    }
    let edges: Vec<f64> = (0..=bins)
        .map(|i| spec.lo + (spec.hi - spec.lo) * i as f64 / spec.bins as f64)
        .collect();
    let density = |counts: &[u64]| -> Vec<f64> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return vec![0.0; bins];
        }
        counts
            .iter()
            .map(|&c| c as f64 / (total as f64 * width))
            .collect()
    };
    Ok(Histogram {
        q: table.q(),
        spec,
        edges,
        density_even: density(&count_even),
        density_odd: density(&count_odd),
        count_even,
        count_odd,
        dropped,
    })
}

impl Histogram {
    /// Fixed-column CSV: bin_lo, bin_hi, count_even, count_odd,
    /// density_even, density_odd.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("bin_lo,bin_hi,count_even,count_odd,density_even,density_odd\n");
        for i in 0..self.spec.bins as usize {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.edges[i],
                self.edges[i + 1],
                self.count_even[i],
                self.count_odd[i],
                self.density_even[i],
                self.density_odd[i]
            ));
        }
        out
    }

    /// Self-contained SVG. Deterministic for fixed inputs, up to the
    /// leading version comment.
    pub fn to_svg(&self) -> String {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const ML: f64 = 70.0;
        const MR: f64 = 25.0;
        const MT: f64 = 35.0;
        const MB: f64 = 60.0;
        let pw = W - ML - MR;
        let ph = H - MT - MB;
        let bins = self.spec.bins as usize;

        let series: Vec<(&str, Vec<f64>)> = if self.spec.split_parity {
            let (e, o): (Vec<f64>, Vec<f64>) = match self.spec.normalization {
                Normalization::Count => (
                    self.count_even.iter().map(|&c| c as f64).collect(),
                    self.count_odd.iter().map(|&c| c as f64).collect(),
                ),
                Normalization::Density => {
                    (self.density_even.clone(), self.density_odd.clone())
                }
            };
            vec![("#4477aa", e), ("#cc6677", o)]
        } else {
            let both: Vec<f64> = match self.spec.normalization {
                Normalization::Count => (0..bins)
                    .map(|i| (self.count_even[i] + self.count_odd[i]) as f64)
                    .collect(),
                Normalization::Density => {
                    let total: u64 = self.count_even.iter().sum::<u64>()
                        + self.count_odd.iter().sum::<u64>();
                    let width = (self.spec.hi - self.spec.lo) / self.spec.bins as f64;
                    (0..bins)
                        .map(|i| {
                            if total == 0 {
                                0.0
                            } else {
                                (self.count_even[i] + self.count_odd[i]) as f64
                                    / (total as f64 * width)
                            }
                        })
                        .collect()
                }
            };
            vec![("#4477aa", both)]
        };
        let ymax = series
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .fold(0.0f64, f64::max)
            .max(1e-300);

        let x_of = |v: f64| ML + (v - self.spec.lo) / (self.spec.hi - self.spec.lo) * pw;
        let y_of = |v: f64| MT + ph - (v / ymax) * ph;

        let mut s = format!(
            "<!-- charmax {} histogram -->\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n",
            env!("CARGO_PKG_VERSION")
        );
        s.push_str(&format!(
            "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"20\" text-anchor=\"middle\">modulus {} — max-of-partial-sums / sqrt(q)</text>\n",
            W / 2.0,
            self.q
        ));
        for (color, values) in &series {
            for (i, &v) in values.iter().enumerate() {
                if v <= 0.0 {
                    continue;
                }
                let x0 = x_of(self.edges[i]);
                let x1 = x_of(self.edges[i + 1]);
                let y = y_of(v);
                s.push_str(&format!(
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\" fill-opacity=\"0.6\"/>\n",
                    x0,
                    y,
                    x1 - x0,
                    MT + ph - y
                ));
            }
        }
        // axes
        s.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            MT + ph,
            ML + pw,
            MT + ph
        ));
        s.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
            MT + ph
        ));
        // x ticks on up to 11 evenly spaced bin edges
        let step = (bins / 10).max(1);
        for i in (0..=bins).step_by(step) {
            let x = x_of(self.edges[i]);
            s.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
                MT + ph,
                MT + ph + 5.0
            ));
            s.push_str(&format!(
                "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{:.3}</text>\n",
                MT + ph + 20.0,
                self.edges[i]
            ));
        }
        // y ticks
        for j in 0..=5 {
            let v = ymax * j as f64 / 5.0;
            let y = y_of(v);
            s.push_str(&format!(
                "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{ML}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
                ML - 5.0
            ));
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{:.4}</text>\n",
                ML - 9.0,
                y + 4.0,
            v
            ));
        }
        if self.spec.split_parity {
            s.push_str(&format!(
                "<rect x=\"{}\" y=\"{MT}\" width=\"12\" height=\"12\" fill=\"#4477aa\" fill-opacity=\"0.6\"/><text x=\"{}\" y=\"{}\">even</text>\n",
                ML + pw - 110.0,
                ML + pw - 93.0,
                MT + 10.0
            ));
            s.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"#cc6677\" fill-opacity=\"0.6\"/><text x=\"{}\" y=\"{}\">odd</text>\n",
                ML + pw - 110.0,
                MT + 18.0,
                ML + pw - 93.0,
                MT + 28.0
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{sweep, Engine};

    fn spec(bins: u32, lo: f64, hi: f64) -> HistogramSpec {
        HistogramSpec {
            bins,
            lo,
            hi,
            split_parity: true,
            normalization: Normalization::Density,
        }
    }

    #[test]
    fn known_masses_land_in_the_right_bins() {
        // q = 5: the even character has M/√q = 1/√5 ≈ 0.447 (bin 4 of 10
        // over [0,1]); both odd ones sit at √2/√5 ≈ 0.632 (bin 6)
        let t = sweep(5, Engine::Exact, 1).unwrap();
        let h = histogram(&t, spec(10, 0.0, 1.0)).unwrap();
        assert_eq!(h.count_even[4], 1);
        assert_eq!(h.count_odd[6], 2);
        assert_eq!(h.count_even.iter().sum::<u64>(), 1);
        assert_eq!(h.count_odd.iter().sum::<u64>(), 2);
        assert_eq!(h.dropped, 0);
    }

    #[test]
    fn parity_classes_have_the_expected_sizes() {
        // prime q: (φ−1−1)/2 even and (φ−1+1)/2 odd nonprincipal rows
        let t = sweep(101, Engine::Exact, 2).unwrap();
        let h = histogram(&t, spec(20, 0.0, 3.0)).unwrap();
        assert_eq!(h.count_even.iter().sum::<u64>(), 49);
        assert_eq!(h.count_odd.iter().sum::<u64>(), 50);
    }

    #[test]
    fn densities_integrate_to_one_per_class() {
        let t = sweep(101, Engine::Exact, 2).unwrap();
        let h = histogram(&t, spec(17, 0.0, 3.0)).unwrap();
        let w = 3.0 / 17.0;
        let ie: f64 = h.density_even.iter().map(|d| d * w).sum();
        let io: f64 = h.density_odd.iter().map(|d| d * w).sum();
        assert!((ie - 1.0).abs() < 1e-12);
        assert!((io - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_edge_is_inclusive_and_outliers_drop() {
        let t = sweep(5, Engine::Exact, 1).unwrap();
        let even_x = 1.0 / 5f64.sqrt();
        let h = histogram(&t, spec(3, 0.0, even_x)).unwrap();
        assert_eq!(h.count_even[2], 1, "x = hi lands in the last bin");
        assert_eq!(h.dropped, 2, "odd rows exceed hi");
    }

    #[test]
    fn bad_specs_are_rejected() {
        let t = sweep(5, Engine::Exact, 1).unwrap();
        assert!(matches!(
            histogram(&t, spec(0, 0.0, 1.0)),
            Err(Error::ZeroArgument)
        ));
        assert!(matches!(
            histogram(&t, spec(4, 1.0, 1.0)),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn csv_has_the_mandated_columns() {
        let t = sweep(5, Engine::Exact, 1).unwrap();
        let h = histogram(&t, spec(10, 0.0, 1.0)).unwrap();
        let csv = h.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 11);
        assert_eq!(
            lines[0],
            "bin_lo,bin_hi,count_even,count_odd,density_even,density_odd"
        );
        assert_eq!(lines[5], "0.4,0.5,1,0,10,0");
        assert_eq!(lines[7], "0.6,0.7,0,2,0,10");
        assert_eq!(h.to_csv(), csv, "deterministic bytes");
    }

    #[test]
    fn svg_is_self_contained_and_stable() {
        let t = sweep(101, Engine::Exact, 1).unwrap();
        let h = histogram(&t, spec(20, 0.0, 3.0)).unwrap();
        let svg = h.to_svg();
        assert!(svg.starts_with("<!-- charmax "));
        assert!(svg.contains("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.contains("<rect"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("http://") || svg.find("http://").unwrap() > svg.find("xmlns").unwrap() - 10, "no external references beyond the namespace");
        assert_eq!(h.to_svg(), svg, "deterministic bytes");

        let mut unsplit = spec(20, 0.0, 3.0);
        unsplit.split_parity = false;
        unsplit.normalization = Normalization::Count;
        let flat = histogram(&t, unsplit).unwrap().to_svg();
        assert!(!flat.contains(">odd<"));
    }
}
