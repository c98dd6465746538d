//! CSV/JSON export, sample ingestion and run manifests.
//!
//! CSV output always uses `.` decimals and `\n` line endings; floats are
//! written with Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boundary::RegionBoundary;
use crate::channel::Scenario;
use crate::power::PowerTargets;
use crate::search::GridSpec;
use crate::similarity::SimilaritySample;
use crate::{Error, Result, Scheme};

pub const SAMPLE_HEADER: [&str; 3] = ["k", "snr_db", "similarity"];

/// Reads `k,snr_db,similarity` rows. Errors carry the 1-based line number.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<SimilaritySample>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Csv { line: 1, message: e.to_string() })?.clone();
    if headers.is_empty() {
        return Err(Error::Csv { line: 1, message: "empty input".into() });
    }
    if headers.iter().collect::<Vec<_>>() != SAMPLE_HEADER {
        return Err(Error::Csv { line: 1, message: format!("expected header `k,snr_db,similarity`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")) });
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let k: u32 = field(0).parse().map_err(|_| Error::Csv { line, message: format!("bad k `{}`", field(0)) })?;
        let snr_db: f64 = field(1).parse().map_err(|_| Error::Csv { line, message: format!("bad snr_db `{}`", field(1)) })?;
        let similarity: f64 =
            field(2).parse().map_err(|_| Error::Csv { line, message: format!("bad similarity `{}`", field(2)) })?;
        if k == 0 || !snr_db.is_finite() || !(0.0..=1.0).contains(&similarity) {
            return Err(Error::Csv { line, message: "k must be positive, snr_db finite, similarity in [0, 1]".into() });
        }
        out.push(SimilaritySample { k, snr_db, similarity });
    }
    if out.is_empty() {
        return Err(Error::Csv { line: 1, message: "no sample rows".into() });
    }
    Ok(out)
}

pub fn samples_csv(samples: &[SimilaritySample]) -> String {
    let mut s = String::from("k,snr_db,similarity\n");
    for x in samples {
        let _ = writeln!(s, "{},{},{}", x.k, x.snr_db, x.similarity);
    }
    s
}

/// `sigma,bit_rate,similarity` rows.
pub fn boundary_csv(boundary: &RegionBoundary) -> String {
    let mut s = String::from("sigma,bit_rate,similarity\n");
    for p in &boundary.points {
        let _ = writeln!(s, "{},{},{}", p.sem_rate_norm, p.bit_rate, p.similarity);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMeta {
    pub scheme: Scheme,
    pub grid_spec: GridSpec,
    pub n_points: usize,
    pub power_limited: bool,
    pub seed: Option<u64>,
}

impl BoundaryMeta {
    pub fn new(boundary: &RegionBoundary, seed: Option<u64>) -> Self {
        BoundaryMeta {
            scheme: boundary.scheme,
            grid_spec: boundary.grid,
            n_points: boundary.points.len(),
            power_limited: boundary.power_limited,
            seed,
        }
    }
}

/// One row of the power-region export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub targets: PowerTargets,
    pub scheme: Scheme,
    /// `None` when the targets are infeasible for this scheme.
    pub min_power_w: Option<f64>,
}

/// `sigma_target,min_similarity,bit_target,scheme,min_power_w`; infeasible
/// rows carry `inf`.
pub fn power_csv(rows: &[PowerRow]) -> String {
    let mut s = String::from("sigma_target,min_similarity,bit_target,scheme,min_power_w\n");
    for r in rows {
        let p = r.min_power_w.map_or_else(|| "inf".to_string(), |p| p.to_string());
        let _ = writeln!(s, "{},{},{},{},{}", r.targets.sigma_target, r.targets.min_similarity, r.targets.bit_target, r.scheme, p);
    }
    s
}

/// Everything needed to rerun a command and reproduce its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name.
    pub args: Vec<String>,
    pub scenario_hash: Option<String>,
    pub seeds: Vec<u64>,
    pub grid: Option<GridSpec>,
    pub tool_version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    /// Command-specific inputs (e.g. the sweep spec).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunManifest {
            command: command.to_string(),
            args,
            scenario_hash: None,
            seeds: Vec::new(),
            grid: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            inputs: None,
        }
    }
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// SHA-256 of the scenario's canonical JSON.
pub fn scenario_hash(scenario: &Scenario) -> String {
    sha256_hex(scenario.to_json().as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))
}
