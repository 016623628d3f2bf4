use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::OpenOptions;
use std::path::Path;

use super::{ZeroMethod, ZeroRecord};
use crate::error::Result;

/// Two cached zeros of one kernel closer than this are the same zero.
pub const DEDUP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Row {
    kernel: String,
    re: f64,
    im: f64,
    residual: f64,
    #[serde(rename = "E_re")]
    e_re: f64,
    #[serde(rename = "E_im")]
    e_im: f64,
    method: ZeroMethod,
    verified_count: i64,
}

impl From<&ZeroRecord> for Row {
    fn from(r: &ZeroRecord) -> Self {
        Row {
            kernel: r.kernel.clone(),
            re: r.z.re,
            im: r.z.im,
            residual: r.residual,
            e_re: r.eigenvalue.re,
            e_im: r.eigenvalue.im,
            method: r.method,
            verified_count: r.verified_count,
        }
    }
}

impl From<Row> for ZeroRecord {
    fn from(r: Row) -> Self {
        ZeroRecord {
            kernel: r.kernel,
            z: Complex64::new(r.re, r.im),
            residual: r.residual,
            eigenvalue: Complex64::new(r.e_re, r.e_im),
            method: r.method,
            verified_count: r.verified_count,
        }
    }
}

/// Reads every record of a cache file; a missing file is an empty cache.
pub fn read_cache(path: impl AsRef<Path>) -> Result<Vec<ZeroRecord>> {
    let path = path.as_ref();
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut rd = csv::Reader::from_path(path)?;
    rd.deserialize::<Row>().map(|r| Ok(r?.into())).collect()
}

/// Appends the records not already cached; returns how many were written.
pub fn append_cache(path: impl AsRef<Path>, records: &[ZeroRecord]) -> Result<usize> {
    let path = path.as_ref();
    let mut known = read_cache(path)?;
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut wr = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    let mut written = 0;
    for r in records {
        if known.iter().any(|k| k.kernel == r.kernel && (k.z - r.z).norm() < DEDUP_TOL) {
            continue;
        }
        wr.serialize(Row::from(r))?;
        known.push(r.clone());
        written += 1;
    }
    wr.flush()?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn append_deduplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.csv");
        let a = ZeroRecord::new("riemann", c(0.5, 14.134725141734693), 1e-12, ZeroMethod::ScanNewton, 1);
        let b = ZeroRecord::new("riemann", c(0.5, 21.022039638771555), 2e-12, ZeroMethod::ScanNewton, 1);
        assert_eq!(append_cache(&path, &[a.clone()]).unwrap(), 1);
        assert_eq!(append_cache(&path, &[a.clone(), b.clone()]).unwrap(), 1);
        let mut shifted = a.clone();
        shifted.kernel = "lambda".into();
        assert_eq!(append_cache(&path, &[shifted]).unwrap(), 1);
        let back = read_cache(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[0], a);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("kernel,re,im,residual,E_re,E_im,method,verified_count\n"));
        assert_eq!(text.matches("kernel,").count(), 1);
        assert!(text.contains("scan+newton"));
    }
}
