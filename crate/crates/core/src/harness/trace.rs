//! Trace CSV and JSON report serialization.
//!
//! The CSV schema is fixed: `k,t,j,norm_v,theta,f_1..f_m[,dist_ref]`, header
//! row mandatory, '.' decimal separator, floats printed with 17 significant
//! digits so parsing reconstructs every f64 bit for bit.

use crate::error::{Error, Result};
use crate::geometry::{ManifoldDescriptor, Point};
use crate::harness::diagnostics::DiagnosticsReport;
use crate::scalar::Real;
use crate::solver::{SolveReport, SolverConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// 17 significant digits: enough to round-trip any finite f64.
pub fn format_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row of a solve trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub t: f64,
    pub j: u32,
    pub norm_v: f64,
    pub theta: f64,
    pub f: Vec<f64>,
    pub dist_ref: Option<f64>,
}

/// Flattens a report into CSV rows, one per retained iteration record.
/// `every` thins the trace (keep k % every == 0); `ref_point` adds the
/// dist_ref column.
pub fn trace_rows<T: Real>(
    report: &SolveReport<T>,
    m_desc: &ManifoldDescriptor,
    ref_point: Option<&Point<T>>,
    every: usize,
) -> Result<Vec<TraceRow>> {
    if every == 0 {
        return Err(Error::Usage(
            "trace thinning interval must be at least 1".into(),
        ));
    }
    let mut rows = Vec::new();
    for r in report.records.iter().filter(|r| r.k % every == 0) {
        let dist_ref = match ref_point {
            Some(q) => Some(m_desc.distance(&r.p, q)?.to_f64_lossy()),
            None => None,
        };
        rows.push(TraceRow {
            k: r.k,
            t: r.t.to_f64_lossy(),
            j: r.j,
            norm_v: r.norm_v.to_f64_lossy(),
            theta: r.theta.to_f64_lossy(),
            f: r.f.values.iter().map(|x| x.to_f64_lossy()).collect(),
            dist_ref,
        });
    }
    Ok(rows)
}

/// Renders rows to CSV text. All rows must agree on the objective count and
/// on the presence of the dist_ref column.
pub fn render_trace_csv(rows: &[TraceRow], m: usize, with_ref: bool) -> String {
    let mut header: Vec<String> = vec![
        "k".into(),
        "t".into(),
        "j".into(),
        "norm_v".into(),
        "theta".into(),
    ];
    header.extend((1..=m).map(|i| format!("f_{i}")));
    if with_ref {
        header.push("dist_ref".into());
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let mut fields = vec![
            row.k.to_string(),
            format_g17(row.t),
            row.j.to_string(),
            format_g17(row.norm_v),
            format_g17(row.theta),
        ];
        fields.extend(row.f.iter().map(|&x| format_g17(x)));
        if with_ref {
            fields.push(format_g17(row.dist_ref.unwrap_or(f64::NAN)));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow], m: usize, with_ref: bool) -> Result<()> {
    std::fs::write(path, render_trace_csv(rows, m, with_ref))
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parses CSV text produced by [`render_trace_csv`] back into rows.
pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Usage("empty trace file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 6 || columns[..5] != ["k", "t", "j", "norm_v", "theta"] {
        return Err(Error::Usage(format!("unexpected trace header '{header}'")));
    }
    let with_ref = *columns.last().expect("nonempty header") == "dist_ref";
    let m = columns.len() - 5 - usize::from(with_ref);
    if m == 0 {
        return Err(Error::Usage(
            "trace header carries no objective columns".into(),
        ));
    }

    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::Usage(format!(
                "trace line {}: expected {} fields, got {}",
                lineno + 2,
                columns.len(),
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| {
                Error::Usage(format!("trace line {}: bad float '{s}': {e}", lineno + 2))
            })
        };
        let k = fields[0]
            .parse::<usize>()
            .map_err(|e| Error::Usage(format!("trace line {}: bad k: {e}", lineno + 2)))?;
        let j = fields[2]
            .parse::<u32>()
            .map_err(|e| Error::Usage(format!("trace line {}: bad j: {e}", lineno + 2)))?;
        let mut f = Vec::with_capacity(m);
        for s in &fields[5..5 + m] {
            f.push(parse_f(s)?);
        }
        let dist_ref = if with_ref {
            Some(parse_f(fields[5 + m])?)
        } else {
            None
        };
        rows.push(TraceRow {
            k,
            t: parse_f(fields[1])?,
            j,
            norm_v: parse_f(fields[3])?,
            theta: parse_f(fields[4])?,
            f,
            dist_ref,
        });
    }
    Ok(rows)
}

/// The machine-readable run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub status: String,
    pub iterations: usize,
    pub final_point: Vec<f64>,
    pub final_f: Vec<f64>,
    pub final_criticality: f64,
    pub config: JsonConfig,
    pub diagnostics: JsonDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonConfig {
    pub beta: f64,
    pub eps_crit: f64,
    pub max_iters: usize,
    pub max_halvings: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonDiagnostics {
    pub monotone_ok: bool,
    /// Worst Fejér slack, present when a reference point was in play.
    pub fejer_max_slack: Option<f64>,
    pub summability: JsonSummability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonSummability {
    pub lhs: f64,
    pub rhs: f64,
}

/// Builds the JSON report payload from a run and its diagnostics.
pub fn json_report<T: Real>(
    report: &SolveReport<T>,
    cfg: &SolverConfig<T>,
    diag: &DiagnosticsReport<T>,
) -> JsonReport {
    JsonReport {
        status: report.status.name().into(),
        iterations: report.records.len(),
        final_point: report
            .final_point
            .coords
            .iter()
            .map(|x| x.to_f64_lossy())
            .collect(),
        final_f: report
            .final_f
            .values
            .iter()
            .map(|x| x.to_f64_lossy())
            .collect(),
        final_criticality: report.final_criticality.to_f64_lossy(),
        config: JsonConfig {
            beta: cfg.beta.to_f64_lossy(),
            eps_crit: cfg.eps_crit.to_f64_lossy(),
            max_iters: cfg.max_iters,
            max_halvings: cfg.max_halvings,
        },
        diagnostics: JsonDiagnostics {
            monotone_ok: diag.monotone_ok,
            // Zero-iteration runs have no slacks; omit rather than emit a
            // non-finite fold that JSON cannot carry.
            fejer_max_slack: diag
                .fejer
                .as_ref()
                .filter(|f| !f.slacks.is_empty())
                .map(|f| f.max_slack().to_f64_lossy()),
            summability: JsonSummability {
                lhs: diag.summability.lhs.to_f64_lossy(),
                rhs: diag.summability.rhs.to_f64_lossy(),
            },
        },
    }
}

pub fn write_json_report(path: &Path, report: &JsonReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Io(format!("cannot serialize report: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn read_json_report(path: &Path) -> Result<JsonReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Usage(format!("malformed report {}: {e}", path.display())))
}
