//! Fixed-width report tables and their machine-readable twins.
//!
//! Every number is formatted once (WER to 2 decimals, ratios to 3, both with
//! ties rounded to even) and the very same strings feed both the table and
//! the JSON emission, so the two always byte-compare equal.

use serde::Serialize;

use crate::align::Metrics;
use crate::lattice_ops::DepthStats;
use crate::oracle::AggregateCurvePoint;

/// Percent with two decimals; infinities print as `inf`.
pub fn fmt_wer(v: f64) -> String {
    format!("{v:.2}")
}

/// Ratio with three decimals.
pub fn fmt_ratio(v: f64) -> String {
    format!("{v:.3}")
}

/// Format an alternative depth request; `usize::MAX` stands for "all".
pub fn fmt_n(n: usize) -> String {
    if n == usize::MAX {
        "inf".to_string()
    } else {
        n.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreRow {
    pub label: String,
    pub correct: u64,
    pub substituted: u64,
    pub deleted: u64,
    pub inserted: u64,
    pub wer: String,
    pub precision: String,
    pub recall: String,
}

impl ScoreRow {
    pub fn from_counts(label: impl Into<String>, c: u64, s: u64, d: u64, i: u64) -> ScoreRow {
        let m = Metrics::from_counts(c, s, d, i);
        ScoreRow {
            label: label.into(),
            correct: c,
            substituted: s,
            deleted: d,
            inserted: i,
            wer: fmt_wer(m.wer),
            precision: fmt_ratio(m.precision),
            recall: fmt_ratio(m.recall),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
}

impl ScoreReport {
    pub fn render_table(&self) -> String {
        let label_width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max("LABEL".len());
        let mut out = String::new();
        out.push_str(&format!(
            "{:<label_width$} {:>7} {:>7} {:>7} {:>7} {:>8} {:>10} {:>8}\n",
            "LABEL", "C", "S", "D", "I", "WER", "PRECISION", "RECALL"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<label_width$} {:>7} {:>7} {:>7} {:>7} {:>8} {:>10} {:>8}\n",
                r.label, r.correct, r.substituted, r.deleted, r.inserted, r.wer, r.precision,
                r.recall
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub label: String,
    pub wer: String,
    pub n: String,
    pub n_max: usize,
    pub n_90: usize,
    pub n_50: usize,
    pub bytes: usize,
}

impl CurveRow {
    pub fn new(label: impl Into<String>, point: &AggregateCurvePoint) -> CurveRow {
        let m = Metrics::from_counts(
            point.correct,
            point.substituted,
            point.deleted,
            point.inserted,
        );
        CurveRow {
            label: label.into(),
            wer: fmt_wer(m.wer),
            n: fmt_n(point.n),
            n_max: point.depths.max,
            n_90: point.depths.p90,
            n_50: point.depths.p50,
            bytes: point.serialized_bytes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub rows: Vec<CurveRow>,
}

impl CurveReport {
    pub fn render_table(&self) -> String {
        let label_width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max("LABEL".len());
        let mut out = String::new();
        out.push_str(&format!(
            "{:<label_width$} {:>8} {:>6} {:>6} {:>6} {:>6} {:>9}\n",
            "LABEL", "WER", "N", "N_MAX", "N_90", "N_50", "BYTES"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<label_width$} {:>8} {:>6} {:>6} {:>6} {:>6} {:>9}\n",
                r.label, r.wer, r.n, r.n_max, r.n_90, r.n_50, r.bytes
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsRow {
    pub label: String,
    pub units: usize,
    pub n_max: usize,
    pub n_90: usize,
    pub n_50: usize,
    pub raw_bytes: usize,
    pub gzip_bytes: usize,
}

impl StatsRow {
    pub fn new(
        label: impl Into<String>,
        units: usize,
        depths: DepthStats,
        raw_bytes: usize,
        gzip_bytes: usize,
    ) -> StatsRow {
        StatsRow {
            label: label.into(),
            units,
            n_max: depths.max,
            n_90: depths.p90,
            n_50: depths.p50,
            raw_bytes,
            gzip_bytes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub rows: Vec<StatsRow>,
}

impl StatsReport {
    pub fn render_table(&self) -> String {
        let label_width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max("LABEL".len());
        let mut out = String::new();
        out.push_str(&format!(
            "{:<label_width$} {:>7} {:>6} {:>6} {:>6} {:>10} {:>10}\n",
            "LABEL", "UNITS", "N_MAX", "N_90", "N_50", "RAW", "GZIP"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<label_width$} {:>7} {:>6} {:>6} {:>6} {:>10} {:>10}\n",
                r.label, r.units, r.n_max, r.n_90, r.n_50, r.raw_bytes, r.gzip_bytes
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wer_formatting() {
        assert_eq!(fmt_wer(0.0), "0.00");
        assert_eq!(fmt_wer(100.0 / 3.0), "33.33");
        assert_eq!(fmt_wer(f64::INFINITY), "inf");
        assert_eq!(fmt_ratio(0.95), "0.950");
        assert_eq!(fmt_n(usize::MAX), "inf");
        assert_eq!(fmt_n(100), "100");
    }

    #[test]
    fn json_and_table_share_formatted_values() {
        let report = ScoreReport {
            rows: vec![ScoreRow::from_counts("rec01 A", 3, 1, 1, 1)],
        };
        let table = report.render_table();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let row = &json["rows"][0];
        assert!(table.contains(row["wer"].as_str().unwrap()));
        assert!(table.contains(row["precision"].as_str().unwrap()));
        assert!(table.contains(row["recall"].as_str().unwrap()));
    }

    #[test]
    fn table_is_aligned() {
        let report = ScoreReport {
            rows: vec![
                ScoreRow::from_counts("a", 1, 0, 0, 0),
                ScoreRow::from_counts("much-longer-label", 100000, 2, 3, 4),
            ],
        };
        let table = report.render_table();
        let widths: Vec<usize> = table.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }
}
