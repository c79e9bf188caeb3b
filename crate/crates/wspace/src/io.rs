//! Readers and writers for the on-disk exchange formats.
//!
//! Four formats are supported, all plain text and fully deterministic for a
//! given input (floats are printed in shortest round-trip form, so a
//! write/read cycle reproduces every bit):
//!
//! * **Signal CSV** — header `x,re,im` or `w,re,im` depending on the grid
//!   representation, one row per node. Readers rebuild the grid from the
//!   first column and therefore require strictly increasing nodes.
//! * **Spectrum CSV** — header `p,re,im`; the momentum axis must come back
//!   uniform for the result to be a valid [`Spectrum`].
//! * **Spectrogram / Wigner CSV** — matrix layouts whose first row carries
//!   the momentum axis and whose first column carries the window centers
//!   (spectrogram) or the warped-position axis (Wigner map).
//! * **Fock JSON** — a JSON array of `[re, im]` pairs, one per coefficient.
//!
//! Every writer stages its output in a sibling temporary file and renames it
//! into place, so readers never observe a half-written artifact.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::grids::{Grid, GridError, Representation, SampledSignal};
use crate::phase_space::{FockVector, PhaseSpaceError, WignerGrid};
use crate::wtransform::{Spectrogram, Spectrum, TransformError};

/// Errors produced while reading or writing exchange files.
#[derive(Debug, Error)]
pub enum IoError {
    /// Underlying filesystem failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed CSV framing (quoting, ragged rows, …).
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// Malformed JSON payload.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// The file's header row does not announce a supported layout.
    #[error("unsupported CSV header {found:?}; expected {expected}")]
    BadHeader {
        /// Header row actually present.
        found: String,
        /// Human-readable description of what is accepted.
        expected: &'static str,
    },
    /// A data cell failed to parse as a finite number.
    #[error("row {row}: could not parse {field:?} as a number")]
    BadNumber {
        /// 1-based data row index (excluding the header).
        row: usize,
        /// Offending cell contents.
        field: String,
    },
    /// The file parsed but contained no data rows.
    #[error("file contains a header but no data rows")]
    Empty,
    /// The recovered nodes do not form a valid grid.
    #[error(transparent)]
    Grid(#[from] GridError),
    /// The recovered axis does not form a valid spectrum.
    #[error(transparent)]
    Transform(#[from] TransformError),
    /// The recovered coefficients do not form a valid Fock vector.
    #[error(transparent)]
    Fock(#[from] PhaseSpaceError),
}

/// Writes `bytes` to `path` atomically (stage in a sibling file, then rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_field(record: &csv::StringRecord, row: usize, col: usize) -> Result<f64, IoError> {
    let field = record.get(col).unwrap_or("").trim();
    f64::from_str(field).map_err(|_| IoError::BadNumber {
        row,
        field: field.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Signal CSV
// ---------------------------------------------------------------------------

/// Writes a sampled signal as `x,re,im` (or `w,re,im`) rows.
pub fn write_signal_csv(path: &Path, signal: &SampledSignal) -> Result<(), IoError> {
    let label = match signal.grid().rep() {
        Representation::XDomain => "x",
        Representation::WDomain => "w",
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([label, "re", "im"])?;
    for (node, value) in signal.grid().nodes().iter().zip(signal.values()) {
        w.write_record([
            node.to_string(),
            value.re.to_string(),
            value.im.to_string(),
        ])?;
    }
    let bytes = w.into_inner().expect("in-memory CSV writer cannot fail");
    atomic_write(path, &bytes)
}

/// Reads a signal CSV, inferring grid and representation from the file.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal, IoError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let rep = match headers.get(0).map(str::trim) {
        Some("x") => Representation::XDomain,
        Some("w") => Representation::WDomain,
        _ => {
            return Err(IoError::BadHeader {
                found: headers.iter().collect::<Vec<_>>().join(","),
                expected: "\"x,re,im\" or \"w,re,im\"",
            });
        }
    };
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let row = idx + 1;
        nodes.push(parse_field(&record, row, 0)?);
        values.push(Complex64::new(
            parse_field(&record, row, 1)?,
            parse_field(&record, row, 2)?,
        ));
    }
    if nodes.is_empty() {
        return Err(IoError::Empty);
    }
    let grid = Grid::from_nodes(nodes, rep)?;
    Ok(SampledSignal::new(values, grid)?)
}

// ---------------------------------------------------------------------------
// Spectrum CSV
// ---------------------------------------------------------------------------

/// Writes a spectrum as `p,re,im` rows.
pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "re", "im"])?;
    for (node, value) in spectrum.p_grid().nodes().iter().zip(spectrum.values()) {
        w.write_record([
            node.to_string(),
            value.re.to_string(),
            value.im.to_string(),
        ])?;
    }
    let bytes = w.into_inner().expect("in-memory CSV writer cannot fail");
    atomic_write(path, &bytes)
}

/// Reads a spectrum CSV, rebuilding the momentum axis from the first column.
pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum, IoError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.get(0).map(str::trim) != Some("p") {
        return Err(IoError::BadHeader {
            found: headers.iter().collect::<Vec<_>>().join(","),
            expected: "\"p,re,im\"",
        });
    }
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let row = idx + 1;
        nodes.push(parse_field(&record, row, 0)?);
        values.push(Complex64::new(
            parse_field(&record, row, 1)?,
            parse_field(&record, row, 2)?,
        ));
    }
    if nodes.is_empty() {
        return Err(IoError::Empty);
    }
    let p_grid = Grid::from_nodes(nodes, Representation::WDomain)?;
    Ok(Spectrum::new(values, p_grid)?)
}

// ---------------------------------------------------------------------------
// Matrix CSV layouts
// ---------------------------------------------------------------------------

fn write_matrix_csv(
    path: &Path,
    corner: &str,
    col_axis: &[f64],
    row_axis: &[f64],
    cell: impl Fn(usize, usize) -> f64,
) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = Vec::with_capacity(col_axis.len() + 1);
    header.push(corner.to_string());
    header.extend(col_axis.iter().map(|p| p.to_string()));
    w.write_record(&header)?;
    for (r, label) in row_axis.iter().enumerate() {
        let mut record = Vec::with_capacity(col_axis.len() + 1);
        record.push(label.to_string());
        record.extend((0..col_axis.len()).map(|c| cell(r, c).to_string()));
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().expect("in-memory CSV writer cannot fail");
    atomic_write(path, &bytes)
}

/// Writes a spectrogram: first row the momentum axis, first column the
/// window centers, body the ridge magnitudes.
pub fn write_spectrogram_csv(path: &Path, gram: &Spectrogram) -> Result<(), IoError> {
    write_matrix_csv(
        path,
        "center",
        gram.p_grid().nodes(),
        gram.centers(),
        |r, c| gram.magnitudes()[(r, c)],
    )
}

/// Writes a Wigner map: first row the momentum axis, first column the
/// warped-position axis, body the distribution values.
pub fn write_wigner_csv(path: &Path, map: &WignerGrid) -> Result<(), IoError> {
    write_matrix_csv(
        path,
        "u",
        map.p_axis().nodes(),
        map.u_axis().nodes(),
        |r, c| map.values()[(r, c)],
    )
}

// ---------------------------------------------------------------------------
// Fock JSON
// ---------------------------------------------------------------------------

/// Writes Fock coefficients as a JSON array of `[re, im]` pairs.
pub fn write_fock_json(path: &Path, v: &FockVector) -> Result<(), IoError> {
    let pairs: Vec<[f64; 2]> = v.coeffs().iter().map(|c| [c.re, c.im]).collect();
    let bytes = serde_json::to_vec_pretty(&pairs)?;
    atomic_write(path, &bytes)
}

/// Reads Fock coefficients from a JSON array of `[re, im]` pairs.
pub fn read_fock_json(path: &Path) -> Result<FockVector, IoError> {
    let bytes = fs::read(path)?;
    let pairs: Vec<[f64; 2]> = serde_json::from_slice(&bytes)?;
    let coeffs = pairs
        .into_iter()
        .map(|[re, im]| Complex64::new(re, im))
        .collect();
    Ok(FockVector::new(coeffs)?)
}
