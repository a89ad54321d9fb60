//! Matrix files, run manifests and the CSV/PGM/JSON writers.
//!
//! Matrix files are JSON: `{"n": N, "rows": [[[re, im], ...], ...]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::shadow::{CrossSection, ShadowHistogram};
use crate::{Matrix, C64};

use super::registry;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_to_json(a: &Matrix) -> String {
    let n = a.order();
    let file = MatrixFile { n, rows: (0..n).map(|i| a.row(i).iter().map(|z| [z.re, z.im]).collect()).collect() };
    serde_json::to_string(&file).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
    if file.rows.len() != file.n {
        return Err(Error::dim(format!("matrix file declares n = {} but has {} rows", file.n, file.rows.len())));
    }
    let mut data = Vec::with_capacity(file.n * file.n);
    for (i, row) in file.rows.iter().enumerate() {
        if row.len() != file.n {
            return Err(Error::dim(format!("row {i} has {} entries, expected {}", row.len(), file.n)));
        }
        data.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
    }
    Matrix::new(file.n, data).map_err(|e| match e {
        Error::Domain(m) => Error::Parse(format!("matrix file: {m}")),
        other => other,
    })
}

pub fn read_matrix_file(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read matrix file {}: {e}", path.display())))?;
    matrix_from_json(&text)
}

/// A registry name, or else a path to a matrix file.
pub fn parse_matrix(spec: &str) -> Result<Matrix> {
    if let Some(m) = registry::builtin(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if path.exists() {
        return read_matrix_file(path);
    }
    Err(Error::Parse(format!("'{spec}' is neither a builtin matrix nor an existing file")))
}

/// SHA-256 of the canonical JSON encoding, hex.
pub fn matrix_hash(a: &Matrix) -> String {
    hex(&Sha256::digest(matrix_to_json(a).as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub matrix_sha256: Option<String>,
    pub version: String,
}

pub fn histogram_csv(h: &ShadowHistogram) -> String {
    let density = h.density();
    let mut out = String::from("re_center,im_center,density\n");
    for j in 0..h.bins_im {
        for i in 0..h.bins_re {
            let c = h.bin_center(i, j);
            let _ = writeln!(out, "{},{},{}", c.re, c.im, density[j * h.bins_re + i]);
        }
    }
    out
}

/// Binary 16-bit PGM, top row = largest imaginary part, scaled to the
/// largest density (or `ln(1 + count)` with `log`).
pub fn histogram_pgm(h: &ShadowHistogram, log: bool) -> Vec<u8> {
    let value = |c: u64| if log { (c as f64).ln_1p() } else { c as f64 };
    let max = h.counts.iter().map(|&c| value(c)).fold(0.0, f64::max);
    let mut out = format!("P5\n{} {}\n65535\n", h.bins_re, h.bins_im).into_bytes();
    for j in (0..h.bins_im).rev() {
        for i in 0..h.bins_re {
            let v = if max > 0.0 { (value(h.count(i, j)) / max * 65535.0).round() as u16 } else { 0 };
            out.extend_from_slice(&v.to_be_bytes());
        }
    }
    out
}

pub fn section_csv(cs: &CrossSection) -> String {
    let mut out = String::from("s_center,density\n");
    for (k, d) in cs.density.iter().enumerate() {
        let mid = 0.5 * (cs.bin_edges[k] + cs.bin_edges[k + 1]);
        let _ = writeln!(out, "{mid},{d}");
    }
    out
}
