//! Gap tables as CSV or JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chern::{gap_labels, Regime};
use crate::error::{Error, Result};
use crate::rationals::farey_sequence;
use crate::spectrum::SpectrumAtFlux;

use super::round_sig;

/// One gap at one flux, with both regimes' labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub p: i64,
    pub q: i64,
    pub j: usize,
    pub e_lo: f64,
    pub e_hi: f64,
    pub width: f64,
    pub sigma_tb: i64,
    /// Empty at `p = 0`, where the Landau label is undefined.
    pub sigma_landau: Option<i64>,
    pub ambiguous_landau: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl ExportFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Ok(ExportFormat::Csv),
            Some("json") => Ok(ExportFormat::Json),
            _ => Err(Error::invalid(format!(
                "cannot infer export format from `{}` (use .csv or .json)",
                path.display()
            ))),
        }
    }
}

/// Records for every gap of every fraction in the Farey sequence of order
/// `q_max`, sorted by `(q, p, j)`.
pub fn gap_records(q_max: i64) -> Result<Vec<GapRecord>> {
    let mut fractions = farey_sequence(q_max)?;
    fractions.sort_by_key(|f| (f.q(), f.p()));
    let mut records = Vec::new();
    for f in fractions {
        let spectrum = SpectrumAtFlux::<f64>::compute(f)?;
        let tb = gap_labels(f, Regime::TightBinding)?;
        let landau = if f.p() > 0 {
            Some(gap_labels(f, Regime::LandauSplit)?)
        } else {
            None
        };
        for (i, gap) in spectrum.gaps.iter().enumerate() {
            let ll = landau.as_ref().map(|l| l[i]);
            records.push(GapRecord {
                p: f.p(),
                q: f.q(),
                j: gap.index,
                e_lo: round_sig(gap.lo),
                e_hi: round_sig(gap.hi),
                width: round_sig(gap.width),
                sigma_tb: tb[i].sigma,
                sigma_landau: ll.map(|l| l.sigma),
                ambiguous_landau: ll.map(|l| l.ambiguous),
            });
        }
    }
    Ok(records)
}

pub fn to_csv(records: &[GapRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)
            .map_err(|e| Error::Encoding(format!("csv: {e}")))?;
    }
    if records.is_empty() {
        // serde only emits the header alongside the first row
        w.write_record([
            "p",
            "q",
            "j",
            "e_lo",
            "e_hi",
            "width",
            "sigma_tb",
            "sigma_landau",
            "ambiguous_landau",
        ])
        .map_err(|e| Error::Encoding(format!("csv: {e}")))?;
    }
    w.into_inner()
        .map_err(|e| Error::Encoding(format!("csv: {e}")))
}

pub fn to_json(records: &[GapRecord]) -> Result<Vec<u8>> {
    let mut bytes =
        serde_json::to_vec_pretty(records).map_err(|e| Error::Encoding(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn from_csv(bytes: &[u8]) -> Result<Vec<GapRecord>> {
    csv::Reader::from_reader(bytes)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Encoding(format!("csv: {e}")))
}

pub fn from_json(bytes: &[u8]) -> Result<Vec<GapRecord>> {
    serde_json::from_slice(bytes).map_err(|e| Error::Encoding(format!("json: {e}")))
}
