//! Sweep-table persistence: a one-line JSON header followed by
//! fixed-width binary rows, plus a lossless CSV export.
//!
//! Layout per row (little endian): the character's exponent tuple
//! (stride × u64), parity (u8: 0 even, 1 odd), conductor (u64), M (f64
//! bits), N (u64), S_half real and imaginary parts (f64 bits each) —
//! 8·stride + 41 bytes. The header carries a SHA-256 checksum of the
//! whole row region, so load → save is byte-identical and any bit flip
//! in the rows is detected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::arith::{Parity, UnitGroup};
use crate::charsums::CharExtremes;
use crate::error::{Error, Result};
use crate::sweep::{Engine, SweepTable};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TableHeader {
    format_version: u32,
    q: u64,
    phi: u64,
    engine: Engine,
    generators: Vec<u64>,
    row_count: u64,
    complete: bool,
    /// Hex SHA-256 of the row region.
    checksum: String,
}

fn row_size(stride: usize) -> usize {
    8 * stride + 41
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CorruptTable {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Serialize a table to its on-disk byte layout.
pub fn table_bytes(table: &SweepTable) -> Vec<u8> {
    let stride = table.group().components().len();
    let mut rows = Vec::with_capacity(table.len() * row_size(stride));
    for (r, row) in table.rows().iter().enumerate() {
        for &e in table.exponents(r) {
            rows.extend_from_slice(&e.to_le_bytes());
        }
        rows.push(match row.parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        });
        rows.extend_from_slice(&row.conductor.to_le_bytes());
        rows.extend_from_slice(&row.m.to_bits().to_le_bytes());
        rows.extend_from_slice(&row.n.to_le_bytes());
        rows.extend_from_slice(&row.s_half.re.to_bits().to_le_bytes());
        rows.extend_from_slice(&row.s_half.im.to_bits().to_le_bytes());
    }
    let header = TableHeader {
        format_version: FORMAT_VERSION,
        q: table.q(),
        phi: table.phi(),
        engine: table.engine(),
        generators: table
            .group()
            .components()
            .iter()
            .map(|c| c.generator)
            .collect(),
        row_count: table.len() as u64,
        complete: table.complete(),
        checksum: hex(&Sha256::digest(&rows)),
    };
    let mut out = serde_json::to_vec(&header).expect("header serializes");
    out.push(b'\n');
    out.extend_from_slice(&rows);
    out
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Write a table to `path` atomically (temp file + rename).
pub fn save_table(table: &SweepTable, path: &Path) -> Result<()> {
    let bytes = table_bytes(table);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Parse a table from its on-disk byte layout.
pub fn table_from_bytes(bytes: &[u8], path: &Path) -> Result<SweepTable> {
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| corrupt(path, "missing header line"))?;
    let header: TableHeader = serde_json::from_slice(&bytes[..newline])
        .map_err(|e| corrupt(path, format!("bad header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(corrupt(
            path,
            format!("unsupported format version {}", header.format_version),
        ));
    }
    let group = UnitGroup::new(header.q)?;
    if header.phi != group.phi() {
        return Err(corrupt(path, "phi does not match modulus"));
    }
    let generators: Vec<u64> = group.components().iter().map(|c| c.generator).collect();
    if header.generators != generators {
        return Err(corrupt(path, "generator list does not match modulus"));
    }
    let total = group.phi() - 1;
    if header.row_count > total {
        return Err(corrupt(path, "row count exceeds character count"));
    }
    if header.complete && header.row_count != total {
        return Err(corrupt(path, "complete table with missing rows"));
    }
    let stride = group.components().len();
    let rows_region = &bytes[newline + 1..];
    let expect_len = header.row_count as usize * row_size(stride);
    if rows_region.len() != expect_len {
        return Err(corrupt(
            path,
            format!(
                "row region is {} bytes, expected {expect_len}",
                rows_region.len()
            ),
        ));
    }
    if hex(&Sha256::digest(rows_region)) != header.checksum {
        return Err(corrupt(path, "checksum mismatch"));
    }

    let mut rows = Vec::with_capacity(header.row_count as usize);
    for r in 0..header.row_count as usize {
        let rec = &rows_region[r * row_size(stride)..(r + 1) * row_size(stride)];
        let mut at = 0usize;
        let u64_at = |at: &mut usize| {
            let v = u64::from_le_bytes(rec[*at..*at + 8].try_into().unwrap());
            *at += 8;
            v
        };
        let mut exps = Vec::with_capacity(stride);
        for _ in 0..stride {
            exps.push(u64_at(&mut at));
        }
        let parity = match rec[at] {
            0 => Parity::Even,
            1 => Parity::Odd,
            other => return Err(corrupt(path, format!("row {r}: parity byte {other}"))),
        };
        at += 1;
        let conductor = u64_at(&mut at);
        let m = f64::from_bits(u64_at(&mut at));
        let n = u64_at(&mut at);
        let re = f64::from_bits(u64_at(&mut at));
        let im = f64::from_bits(u64_at(&mut at));
        // stored exponents are redundant against the enumeration order;
        // a mismatch means the rows belong to some other table
        let chi = crate::arith::Character::from_index(Arc::clone(&group), r as u64 + 1);
        if chi.exponents() != exps {
            return Err(corrupt(path, format!("row {r}: exponent tuple mismatch")));
        }
        rows.push(CharExtremes {
            m,
            n,
            s_half: num_complex::Complex64::new(re, im),
            parity,
            conductor,
        });
    }
    Ok(SweepTable::assemble(
        group,
        header.engine,
        rows,
        header.complete,
    ))
}

/// Load a table written by [`save_table`].
pub fn load_table(path: &Path) -> Result<SweepTable> {
    let bytes = std::fs::read(path)?;
    table_from_bytes(&bytes, path)
}

/// Lossless CSV export: integers verbatim, reals with 17 significant
/// digits.
pub fn write_csv<W: Write>(table: &SweepTable, out: &mut W) -> std::io::Result<()> {
    writeln!(
        out,
        "index,exponents,parity,conductor,m,n,s_half_re,s_half_im"
    )?;
    for (r, row) in table.rows().iter().enumerate() {
        let exps = table
            .exponents(r)
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(":");
        writeln!(
            out,
            "{},{},{},{},{:.16e},{},{:.16e},{:.16e}",
            r + 1,
            exps,
            match row.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            },
            row.conductor,
            row.m,
            row.n,
            row.s_half.re,
            row.s_half.im
        )?;
    }
    Ok(())
}
