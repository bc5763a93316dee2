//! Full-modulus sweeps: one extremes row for every nonprincipal character.
//!
//! The exact engine is ground truth: a streaming O(q) scan per character,
//! organized so the inner loop is a table lookup and a complex add. Per
//! character, each group component gets a premultiplied residue table
//! `T_i[d] = e_i·(L/o_i)·d mod L`, so the root index of χ(n) is the folded
//! sum of `T_i[dlog_i(n)]` — no multiplications or divisions in the scan.
//!
//! Conjugate characters share everything but the sign of the imaginary
//! parts: the symmetric roots table makes every partial sum of χ̄ the exact
//! complex conjugate of χ's, bit for bit, so each conjugate pair is scanned
//! once and the partner row is derived. Rows come out byte-identical to a
//! direct scan (a property the tests pin down), which keeps tables
//! reproducible across worker counts and engines of delivery.
//!
//! The fourier engine instead maximizes the truncated Fourier expansion of
//! S_χ on a uniform t-grid via an FFT. It is advisory: no error theory
//! backs the truncation, so its tables are for exploration only.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::arith::{Character, FactoredModulus, UnitGroup};
use crate::charsums::{canonical_zero, CharExtremes};
use crate::error::{Error, Result};

/// How rows are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Streaming exact scan; certified ground truth.
    Exact,
    /// Truncated Fourier expansion maximized on a t-grid; advisory only.
    /// Imprimitive characters fall back to the exact scan.
    Fourier,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Fourier => "fourier",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "fourier" => Ok(Engine::Fourier),
            _ => Err(Error::OutOfRange {
                name: "engine",
                value: f64::NAN,
                range: "exact|fourier",
            }),
        }
    }
}

/// One extremes row per nonprincipal character, in enumeration order
/// (row r belongs to character index r + 1).
#[derive(Debug, Clone)]
pub struct SweepTable {
    group: Arc<UnitGroup>,
    engine: Engine,
    rows: Vec<CharExtremes>,
    /// Exponent tuples, `stride` entries per row, matching `rows`.
    exps: Vec<u64>,
    complete: bool,
}

impl SweepTable {
    /// Assemble a table from computed rows (exponents are reconstructed
    /// from the enumeration order). `rows` may be a prefix of the full
    /// sweep, in which case the table reports itself incomplete.
    pub fn assemble(
        group: Arc<UnitGroup>,
        engine: Engine,
        rows: Vec<CharExtremes>,
        complete: bool,
    ) -> SweepTable {
        let total = (group.phi() - 1) as usize;
        assert!(rows.len() <= total);
        assert!(!complete || rows.len() == total);
        let stride = group.components().len();
        let mut exps = Vec::with_capacity(rows.len() * stride);
        for r in 0..rows.len() {
            let chi = Character::from_index(Arc::clone(&group), r as u64 + 1);
            exps.extend_from_slice(chi.exponents());
        }
        SweepTable {
            group,
            engine,
            rows,
            exps,
            complete,
        }
    }

    pub fn q(&self) -> u64 {
        self.group.q()
    }

    pub fn phi(&self) -> u64 {
        self.group.phi()
    }

    pub fn modulus(&self) -> &FactoredModulus {
        self.group.modulus()
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// True when every nonprincipal character has a row.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[CharExtremes] {
        &self.rows
    }

    /// Exponent tuple of row r.
    pub fn exponents(&self, r: usize) -> &[u64] {
        let stride = self.group.components().len();
        &self.exps[r * stride..(r + 1) * stride]
    }

    /// Reconstruct the character behind row r.
    pub fn character(&self, r: usize) -> Character {
        Character::from_index(Arc::clone(&self.group), r as u64 + 1)
    }
}

/// Sweep every nonprincipal character mod q.
///
/// `workers` is the parallel width (1 is fully serial); results are
/// bitwise identical for every worker count.
pub fn sweep(q: u64, engine: Engine, workers: usize) -> Result<SweepTable> {
    if q < 3 {
        return Err(Error::ModulusTooSmall { q, min: 3 });
    }
    let group = UnitGroup::new(q)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("local thread pool");
    let phi = group.phi();
    let n_rows = (phi - 1) as usize;
    let scan = Scan::new(&group);

    let rows = match engine {
        Engine::Exact => {
            // scan one representative per conjugate pair, derive the partner
            let work: Vec<u64> = (1..phi)
                .filter(|&i| conjugate_index(&group, i) >= i)
                .collect();
            let computed: Vec<(u64, u64, CharExtremes)> = pool.install(|| {
                work.par_iter()
                    .map_init(
                        || scan.buffers(),
                        |bufs, &i| (i, conjugate_index(&group, i), scan.row(bufs, i)),
                    )
                    .collect()
            });
            let mut slots: Vec<Option<CharExtremes>> = vec![None; n_rows];
            for (i, j, row) in computed {
                if j != i {
                    slots[(j - 1) as usize] = Some(CharExtremes {
                        s_half: canonical_zero(row.s_half.conj()),
                        ..row
                    });
                }
                slots[(i - 1) as usize] = Some(row);
            }
            slots.into_iter().map(|r| r.expect("every slot filled")).collect()
        }
        Engine::Fourier => {
            let fourier = FourierScan::new(&group);
            pool.install(|| {
                (1..phi)
                    .into_par_iter()
                    .map_init(
                        || (scan.buffers(), fourier.buffers()),
                        |(sb, fb), i| fourier.row(&scan, sb, fb, i),
                    )
                    .collect()
            })
        }
    };
    Ok(SweepTable::assemble(group, engine, rows, true))
}

/// Compute rows [first, first + count) of the sweep (row r = character
/// index r + 1), without conjugate pairing — the building block for
/// chunked, checkpointed, and budgeted runs. Bitwise identical to the
/// corresponding rows of [`sweep`].
pub fn sweep_rows(
    group: &Arc<UnitGroup>,
    engine: Engine,
    workers: usize,
    first: u64,
    count: u64,
) -> Vec<CharExtremes> {
    let phi = group.phi();
    let lo = first.min(phi - 1);
    let hi = (first + count).min(phi - 1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("local thread pool");
    let scan = Scan::new(group);
    match engine {
        Engine::Exact => pool.install(|| {
            (lo + 1..hi + 1)
                .into_par_iter()
                .map_init(|| scan.buffers(), |bufs, i| scan.row(bufs, i))
                .collect()
        }),
        Engine::Fourier => {
            let fourier = FourierScan::new(group);
            pool.install(|| {
                (lo + 1..hi + 1)
                    .into_par_iter()
                    .map_init(
                        || (scan.buffers(), fourier.buffers()),
                        |(sb, fb), i| fourier.row(&scan, sb, fb, i),
                    )
                    .collect()
            })
        }
    }
}

/// Index of χ̄ in the enumeration.
pub fn conjugate_index(group: &Arc<UnitGroup>, index: u64) -> u64 {
    Character::from_index(Arc::clone(group), index)
        .conjugate()
        .index()
}

/// Shared state for exact scans of one group.
struct Scan<'g> {
    group: &'g Arc<UnitGroup>,
    roots: Vec<Complex64>,
    /// Start of each component's segment in the scratch table.
    offsets: Vec<usize>,
    table_len: usize,
}

/// Per-thread scratch: premultiplied residue tables, one segment per
/// component.
struct ScanBuffers {
    tables: Vec<u32>,
}

impl<'g> Scan<'g> {
    fn new(group: &'g Arc<UnitGroup>) -> Self {
        let roots = crate::arith::roots_table(group.exponent());
        let mut offsets = Vec::with_capacity(group.components().len());
        let mut acc = 0usize;
        for c in group.components() {
            offsets.push(acc);
            acc += c.order as usize;
        }
        Scan {
            group,
            roots,
            offsets,
            table_len: acc,
        }
    }

    fn buffers(&self) -> ScanBuffers {
        ScanBuffers {
            tables: vec![0; self.table_len],
        }
    }

    fn row(&self, bufs: &mut ScanBuffers, chi_index: u64) -> CharExtremes {
        let chi = Character::from_index(Arc::clone(self.group), chi_index);
        let l = self.group.exponent();
        for (i, c) in self.group.components().iter().enumerate() {
            let m = chi.exponents()[i] * (l / c.order);
            let seg = &mut bufs.tables[self.offsets[i]..self.offsets[i] + c.order as usize];
            let mut val = 0u64;
            for slot in seg.iter_mut() {
                *slot = val as u32;
                val += m;
                if val >= l {
                    val -= l;
                }
            }
        }
        let tables = &bufs.tables;
        let offsets = &self.offsets;
        let dlog = self.group.dlog_raw();
        let stride = self.group.components().len();
        let lu = l as u32;
        let q = self.group.q();
        let half = q / 2;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut s_half = Complex64::new(0.0, 0.0);
        let mut best = f64::NEG_INFINITY;
        let mut argmax = 1u64;
        for n in 1..q {
            let base = n as usize * stride;
            let d0 = dlog[base];
            if d0 != UnitGroup::SENTINEL {
                let mut idx = tables[offsets[0] + d0 as usize];
                for i in 1..stride {
                    idx += tables[offsets[i] + dlog[base + i] as usize];
                    if idx >= lu {
                        idx -= lu;
                    }
                }
                let r = self.roots[idx as usize];
                sum += r;
                let mag = sum.re * sum.re + sum.im * sum.im;
                if mag > best {
                    best = mag;
                    argmax = n;
                }
            }
            if n == half {
                s_half = sum;
            }
        }
        CharExtremes {
            m: best.sqrt(),
            n: argmax,
            s_half: canonical_zero(s_half),
            parity: chi.parity(),
            conductor: chi.conductor().0,
        }
    }
}

/// Shared state for the advisory Fourier engine.
struct FourierScan {
    /// Truncation Z = ⌈√q·log q⌉.
    z: u64,
    fft: Arc<dyn Fft<f64>>,
}

impl FourierScan {
    fn new(group: &Arc<UnitGroup>) -> Self {
        let q = group.q() as f64;
        let z = (q.sqrt() * q.ln()).ceil() as u64;
        let fft = FftPlanner::new().plan_fft_forward(4 * z as usize);
        FourierScan { z, fft }
    }

    fn buffers(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); 4 * self.z as usize]
    }

    fn row(
        &self,
        exact: &Scan<'_>,
        scan_bufs: &mut ScanBuffers,
        grid: &mut [Complex64],
        chi_index: u64,
    ) -> CharExtremes {
        let group = exact.group;
        let chi = Character::from_index(Arc::clone(group), chi_index);
        let q = group.q();
        let (conductor, _) = chi.conductor();
        if conductor != q {
            // no expansion without primitivity; certified scan instead
            return exact.row(scan_bufs, chi_index);
        }
        let t_len = grid.len();
        grid.iter_mut()
            .for_each(|c| *c = Complex64::new(0.0, 0.0));
        let bar = chi.conjugate();
        let w = match chi.parity() {
            crate::arith::Parity::Even => 1.0,
            crate::arith::Parity::Odd => -1.0,
        };
        for n in 1..=self.z {
            let v = bar.eval(n);
            if v.is_zero() {
                continue;
            }
            let c = v.to_complex().unscale(n as f64);
            grid[n as usize] += c;
            grid[t_len - n as usize] -= c.scale(w);
        }
        let c0: Complex64 = grid.iter().sum();
        self.fft.process(grid);
        // S(t_j) ≈ (τ/2πi)(C0 − X[j]); only |τ| = √q matters for the max
        let scale = (q as f64).sqrt() / (2.0 * std::f64::consts::PI);
        let mut best = f64::NEG_INFINITY;
        let mut best_j = 0usize;
        for (j, x) in grid.iter().enumerate() {
            let mag = (c0 - x).norm_sqr();
            if mag > best {
                best = mag;
                best_j = j;
            }
        }
        let tau = chi.gauss_sum();
        let phase = tau / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let s_half = phase * (c0 - grid[t_len / 2]);
        let t_star = best_j as f64 * q as f64 / t_len as f64;
        CharExtremes {
            m: scale * best.sqrt(),
            n: (t_star.round() as u64).clamp(1, q - 1),
            s_half: canonical_zero(s_half),
            parity: chi.parity(),
            conductor,
        }
    }
}
