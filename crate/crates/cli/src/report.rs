//! Per-pair rows of a verification run and their CSV/JSON encodings.

use std::io::Write;

use lempert_core::numerics::{GapSummary, PairOutcome};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::Result;
use crate::input::point_to_json;

pub const CSV_COLUMNS: [&str; 8] = ["z", "w", "c_lower", "l_upper", "gap", "sigma", "witness_lambda", "seconds"];

/// One pair. Numeric fields are empty when the pair failed; the reason is
/// kept in `error` (JSON only, the CSV columns are fixed).
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub index: usize,
    pub z: String,
    pub w: String,
    pub c_lower: Option<f64>,
    pub l_upper: Option<f64>,
    pub gap: Option<f64>,
    pub sigma: Option<f64>,
    pub witness_lambda: Option<[f64; 2]>,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
}

impl Row {
    /// `seconds` is the measured wall time; pass 0 for reproducible output.
    pub fn new(outcome: &PairOutcome, seconds: f64, tolerance: f64, closed_form: Option<f64>) -> Self {
        let mut row = Row {
            index: outcome.index,
            z: point_to_json(&outcome.z),
            w: point_to_json(&outcome.w),
            c_lower: None,
            l_upper: None,
            gap: None,
            sigma: None,
            witness_lambda: None,
            seconds,
            closed_form,
            error: None,
            passed: false,
        };
        match &outcome.result {
            Ok(d) => {
                row.c_lower = Some(d.c_lower);
                row.l_upper = Some(d.l_upper);
                row.gap = Some(d.gap);
                row.sigma = Some(d.sigma);
                row.witness_lambda = d.lower.witness.lambda().map(|l| [l.re, l.im]);
                row.passed = d.is_sound() && d.gap <= tolerance;
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row
    }

    /// `max(|c_lower − exact|, |l_upper − exact|)` when both are known.
    pub fn closed_form_deviation(&self) -> Option<f64> {
        let exact = self.closed_form?;
        Some((self.c_lower? - exact).abs().max((self.l_upper? - exact).abs()))
    }

    fn csv_record(&self) -> [String; 8] {
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.z.clone(),
            self.w.clone(),
            num(self.c_lower),
            num(self.l_upper),
            num(self.gap),
            num(self.sigma),
            self.witness_lambda.map(|[re, im]| format!("[{re},{im}]")).unwrap_or_default(),
            self.seconds.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct SummaryJson {
    pairs: usize,
    failures: usize,
    unsound: usize,
    failing_rows: usize,
    max_gap: Option<f64>,
    median_gap: Option<f64>,
    max_closed_form_deviation: Option<f64>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    config: &'a RunConfig,
    summary: SummaryJson,
    rows: &'a [Row],
}

pub fn max_closed_form_deviation(rows: &[Row]) -> Option<f64> {
    rows.iter().filter_map(Row::closed_form_deviation).reduce(f64::max)
}

pub fn write_report<W: Write>(out: W, format: Format, cfg: &RunConfig, summary: &GapSummary, rows: &[Row]) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for row in rows {
                w.write_record(row.csv_record())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let finite = |x: f64| x.is_finite().then_some(x);
            let report = ReportJson {
                config: cfg,
                summary: SummaryJson {
                    pairs: summary.pairs,
                    failures: summary.failures,
                    unsound: summary.unsound,
                    failing_rows: rows.iter().filter(|r| !r.passed).count(),
                    max_gap: finite(summary.max_gap),
                    median_gap: finite(summary.median_gap),
                    max_closed_form_deviation: max_closed_form_deviation(rows),
                },
                rows,
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
