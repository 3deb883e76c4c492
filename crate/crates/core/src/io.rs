//! File formats.
//!
//! A sampled distribution is a CSV file with header `theta,phi,re,im` (sphere)
//! or `re_alpha,im_alpha,re,im` (plane), one quadrature node per row, every
//! number written with 17 significant digits so that parsing reproduces the
//! in-memory values bit for bit. Next to it sits a JSON manifest with the same
//! stem recording the system, `s`, the grid parameters and the SHA-256 of the
//! CSV bytes; [`read_grid`] refuses a CSV whose hash does not match.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernel::SValue;
use crate::linalg::{hermiticity_defect, OperatorMatrix};
use crate::qpd::{GridSpec, QpdGrid, System};

pub const SOFTWARE_VERSION: &str = concat!("swqpd ", env!("CARGO_PKG_VERSION"));
pub const FORMAT_VERSION: u32 = 1;

const SPHERE_HEADER: [&str; 4] = ["theta", "phi", "re", "im"];
const PLANE_HEADER: [&str; 4] = ["re_alpha", "im_alpha", "re", "im"];

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(system: &System) -> [&'static str; 4] {
    match system {
        System::Su2 { .. } => SPHERE_HEADER,
        System::Hw { .. } => PLANE_HEADER,
    }
}

/// Sidecar metadata for a grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridManifest {
    pub format_version: u32,
    pub software: String,
    pub system: System,
    pub s: SValue,
    /// `s` of the distribution this one was converted from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_s: Option<SValue>,
    pub grid: GridSpec,
    pub n_nodes: usize,
    pub data_file: String,
    pub sha256: String,
}

pub fn grid_to_csv(grid: &QpdGrid) -> Result<Vec<u8>> {
    if grid.nodes.len() != grid.values.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.nodes.len(),
            found: grid.values.len(),
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(&grid.system)).map_err(csv_err)?;
    for (node, v) in grid.nodes.iter().zip(&grid.values) {
        w.write_record([fmt_f64(node[0]), fmt_f64(node[1]), fmt_f64(v.re), fmt_f64(v.im)])
            .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Parse(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Parses the CSV body of a grid; the metadata comes from its manifest.
pub fn grid_from_csv(bytes: &[u8], system: System, s: SValue, spec: GridSpec) -> Result<QpdGrid> {
    let mut r = csv::Reader::from_reader(bytes);
    let expected = header(&system);
    let found = r.headers().map_err(csv_err)?;
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header {}, found {}",
            expected.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 4 {
            return Err(Error::Parse(format!("row {}: expected 4 fields", line + 2)));
        }
        let mut x = [0.0; 4];
        for (slot, field) in x.iter_mut().zip(rec.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: {field:?}: {e}", line + 2)))?;
        }
        nodes.push([x[0], x[1]]);
        values.push(Complex64::new(x[2], x[3]));
    }
    Ok(QpdGrid {
        system,
        s,
        grid: spec,
        nodes,
        values,
    })
}

/// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.json`; returns both paths.
pub fn write_grid(dir: &Path, stem: &str, grid: &QpdGrid, source_s: Option<SValue>) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    let bytes = grid_to_csv(grid)?;
    let manifest = GridManifest {
        format_version: FORMAT_VERSION,
        software: SOFTWARE_VERSION.to_string(),
        system: grid.system,
        s: grid.s,
        source_s,
        grid: grid.grid,
        n_nodes: grid.values.len(),
        data_file: format!("{stem}.csv"),
        sha256: sha256_hex(&bytes),
    };
    fs::write(&csv_path, &bytes)?;
    write_json(&json_path, &manifest)?;
    Ok((csv_path, json_path))
}

/// Reads a grid given either its CSV or its manifest path, checking the hash
/// and that the stored nodes match the quadrature rule in the manifest.
pub fn read_grid(path: &Path) -> Result<(QpdGrid, GridManifest)> {
    let json_path = path.with_extension("json");
    let manifest: GridManifest = read_json(&json_path)?;
    let csv_path = json_path.with_file_name(&manifest.data_file);
    let bytes = fs::read(&csv_path)?;
    let digest = sha256_hex(&bytes);
    if digest != manifest.sha256 {
        return Err(Error::Parse(format!(
            "{} does not match its manifest SHA-256 checksum",
            csv_path.display()
        )));
    }
    let grid = grid_from_csv(&bytes, manifest.system, manifest.s, manifest.grid)?;
    if grid.values.len() != manifest.n_nodes {
        return Err(Error::Parse(format!(
            "manifest lists {} nodes, file has {}",
            manifest.n_nodes,
            grid.values.len()
        )));
    }
    grid.quadrature()?;
    Ok((grid, manifest))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// One file produced by a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<SValue>,
    pub sha256: String,
}

/// Summary of a command invocation, written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub command: String,
    pub system: System,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<serde_json::Value>,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(command: &str, system: System) -> Self {
        Self {
            software: SOFTWARE_VERSION.to_string(),
            command: command.to_string(),
            system,
            state: None,
            outputs: Vec::new(),
        }
    }

    /// Records a file already written to disk.
    pub fn record(&mut self, path: &Path, s: Option<SValue>) -> Result<()> {
        let bytes = fs::read(path)?;
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.outputs.push(OutputEntry {
            file,
            s,
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_s: Option<SValue>,
}

/// A matrix in JSON form, row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub software: String,
    pub system: System,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub diagnostics: OperatorDiagnostics,
}

impl OperatorFile {
    pub fn new(system: System, a: &OperatorMatrix, source_s: Option<SValue>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..a.nrows()).map(|r| (0..a.ncols()).map(|c| f(&a[(r, c)])).collect()).collect()
        };
        let tr = a.trace();
        Self {
            software: SOFTWARE_VERSION.to_string(),
            system,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            diagnostics: OperatorDiagnostics {
                hermiticity_defect: hermiticity_defect(a),
                trace_re: tr.re,
                trace_im: tr.im,
                source_s,
            },
        }
    }

    pub fn matrix(&self) -> Result<OperatorMatrix> {
        let d = self.system.dim();
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Parse(format!("operator file is not {d}×{d}")));
        }
        Ok(OperatorMatrix::from_fn(d, d, |r, c| Complex64::new(self.re[r][c], self.im[r][c])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{weyl_map, KernelData};
    use crate::linalg::random_hermitian;
    use crate::su2::SpinRep;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_grid() -> QpdGrid {
        let kd = KernelData::new(SpinRep::new(2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(&mut rng, 3);
        weyl_map(&kd, &a, SValue::new(0.3).unwrap(), kd.grid()).unwrap()
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let g = sample_grid();
        let bytes = grid_to_csv(&g).unwrap();
        assert!(bytes.starts_with(b"theta,phi,re,im\n"));
        let back = grid_from_csv(&bytes, g.system, g.s, g.grid).unwrap();
        assert_eq!(back, g);
        assert_eq!(grid_to_csv(&back).unwrap(), bytes);
    }

    #[test]
    fn awkward_values_survive() {
        for x in [f64::MIN_POSITIVE, -0.0, 1.0 / 3.0, 6.02214076e23, -5e-324, f64::MAX] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn header_mismatch_rejected() {
        let g = sample_grid();
        let bytes = grid_to_csv(&g).unwrap();
        let plane = System::Hw { n_max: 4 };
        assert!(grid_from_csv(&bytes, plane, g.s, g.grid).is_err());
    }

    #[test]
    fn operator_file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_hermitian(&mut rng, 4);
        let sys = System::Su2 { twice_j: 3 };
        let f = OperatorFile::new(sys, &a, Some(SValue::W));
        let text = serde_json::to_string(&f).unwrap();
        let back: OperatorFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.matrix().unwrap(), a);
    }
}
