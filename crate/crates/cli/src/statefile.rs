//! JSON interchange for density matrices and witness operators.
//!
//! A state file is `{"dims":[m,n],"matrix":[{"re":..,"im":..},...]}` with the
//! (mn)² entries in row-major order. Floats are written in the shortest form
//! that parses back to the same double, so save → load → save is
//! byte-identical.

use std::fs;
use std::path::Path;

use conbound::bipartite::{BipartiteDensity, BipartiteDims};
use conbound::error::Error;
use conbound::linalg::ComplexMatrix;
use conbound::witness::WitnessOperator;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        Complex64::new(e.re, e.im)
    }
}

pub fn entries(x: &ComplexMatrix) -> Vec<Entry> {
    x.to_row_major().into_iter().map(Entry::from).collect()
}

pub fn matrix_from_entries(
    rows: usize,
    cols: usize,
    entries: &[Entry],
) -> conbound::error::Result<ComplexMatrix> {
    ComplexMatrix::from_row_major(
        rows,
        cols,
        entries.iter().copied().map(Complex64::from).collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Entry>,
}

impl StateFile {
    pub fn from_state(s: &BipartiteDensity) -> Self {
        let d = s.dims();
        Self {
            dims: [d.m, d.n],
            matrix: entries(s.rho()),
        }
    }

    /// Validates shape, finiteness and the density-matrix invariants.
    pub fn to_state(&self) -> conbound::error::Result<BipartiteDensity> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        let d = dims.total();
        if self.matrix.len() != d * d {
            return Err(Error::Dimension(format!(
                "dims {:?} need {} matrix entries, found {}",
                self.dims,
                d * d,
                self.matrix.len()
            )));
        }
        BipartiteDensity::new(dims, matrix_from_entries(d, d, &self.matrix)?)
    }

    pub fn to_json(&self) -> String {
        to_json_line(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub dims: [usize; 2],
    pub w_raw: Vec<Entry>,
    pub w_hermitian: Vec<Entry>,
    pub source_hash: String,
    pub expectation: f64,
    pub trace_norm: f64,
    pub degenerate: bool,
}

impl WitnessFile {
    pub fn from_witness(w: &WitnessOperator) -> Self {
        Self {
            dims: [w.dims.m, w.dims.n],
            w_raw: entries(&w.w_raw),
            w_hermitian: entries(&w.w_hermitian),
            source_hash: w.source_state_hash.clone(),
            expectation: w.expectation,
            trace_norm: w.trace_norm,
            degenerate: w.degenerate,
        }
    }

    pub fn to_witness(&self) -> conbound::error::Result<WitnessOperator> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        let d = dims.total();
        Ok(WitnessOperator {
            w_raw: matrix_from_entries(d, d, &self.w_raw)?,
            w_hermitian: matrix_from_entries(d, d, &self.w_hermitian)?,
            source_state_hash: self.source_hash.clone(),
            dims,
            trace_norm: self.trace_norm,
            expectation: self.expectation,
            degenerate: self.degenerate,
        })
    }

    pub fn to_json(&self) -> String {
        to_json_line(self)
    }
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_state(path: &Path) -> Result<BipartiteDensity> {
    read_json::<StateFile>(path)?
        .to_state()
        .map_err(CliError::InvalidState)
}

pub fn save_state(s: &BipartiteDensity, path: &Path) -> Result<()> {
    write_text(path, &StateFile::from_state(s).to_json())
}

pub fn load_witness(path: &Path) -> Result<WitnessOperator> {
    read_json::<WitnessFile>(path)?
        .to_witness()
        .map_err(CliError::InvalidState)
}
