//! Experiment reports: per-instance rows, optional log-fit, and the
//! canonical body used for reproducibility checks (wall times excluded).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub size: usize,
    pub lower: f64,
    /// Certified upper bound; `None` when no finite certified upper exists.
    pub upper: Option<f64>,
    /// Ratio field used by the inclusion and open-problem experiments.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub witness_digest: String,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: serde_json::Value,
    pub rows: Vec<ReportRow>,
    pub fit: Option<Fit>,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: serde_json::Value) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.to_string(),
            params,
            rows: Vec::new(),
            fit: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Full JSON including wall times.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The reproducible body: the report with every `wall_ms` removed.
    /// Identical commands with identical seeds produce byte-identical
    /// canonical bodies.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(rows) = v.get_mut("rows").and_then(|r| r.as_array_mut()) {
            for row in rows {
                if let Some(obj) = row.as_object_mut() {
                    obj.remove("wall_ms");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("canonical body serializes")
    }

    /// SHA-256 of the canonical body, hex-encoded.
    pub fn body_digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        hex_string(&h.finalize())
    }

    /// CSV export of the rows (17 significant digits; lossless for f64).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,size,lower,upper,ratio,witness_digest,wall_ms\n");
        for r in &self.rows {
            let upper = r.upper.map_or(String::from("inf"), fmt17);
            let ratio = r.ratio.map_or(String::new(), fmt17);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.label,
                r.size,
                fmt17(r.lower),
                upper,
                ratio,
                r.witness_digest,
                fmt17(r.wall_ms)
            ));
        }
        out
    }
}

/// 17 significant digits: enough for bit-exact f64 round trips.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Short digest of a matrix (its shape and 17-digit entries).
pub fn matrix_digest(m: &schur_core::Matrix) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}x{}", m.rows(), m.cols()).as_bytes());
    for v in m.data() {
        h.update(fmt17(*v).as_bytes());
    }
    hex_string(&h.finalize())[..16].to_string()
}

/// Least-squares fit of `values` against `ln(sizes)`, skipping `size < 2`.
pub fn fit_log(sizes: &[usize], values: &[f64]) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = sizes
        .iter()
        .zip(values)
        .filter(|(&n, _)| n >= 2)
        .map(|(&n, &v)| ((n as f64).ln(), v))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    Some(Fit { slope, intercept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_body_drops_wall_times() {
        let mut rep = ExperimentReport::new("demo", serde_json::json!({"seed": 1}));
        rep.rows.push(ReportRow {
            label: "n=2".into(),
            size: 2,
            lower: 1.0,
            upper: None,
            ratio: None,
            witness_digest: "abc".into(),
            wall_ms: 12.5,
        });
        let body = rep.canonical_json();
        assert!(!body.contains("wall_ms"));
        let mut rep2 = rep.clone();
        rep2.rows[0].wall_ms = 99.0;
        assert_eq!(body, rep2.canonical_json());
        assert_eq!(rep.body_digest(), rep2.body_digest());
    }

    #[test]
    fn fmt17_roundtrips() {
        for v in [1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17] {
            let s = fmt17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back);
        }
    }

    #[test]
    fn fit_recovers_line() {
        let sizes = [2usize, 4, 8, 16];
        let values: Vec<f64> = sizes.iter().map(|&n| 0.5 * (n as f64).ln() + 1.0).collect();
        let f = fit_log(&sizes, &values).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
    }
}
