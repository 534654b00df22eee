//! CSV reports: per-signal evaluation, sweep tables and selections.

use std::fmt::Write as _;
use std::path::Path;

use ecg_lab_core::doe::{kernel_len_from_label, DoeRow, Selection};
use ecg_lab_core::metrics::EvalReport;

use crate::error::{LabError, Result};

pub const DOE_HEADER: &str = "sim_id,filters,kernel,rms,snr,time_s";

/// One row per signal, then a `mean` row with the averages and pass fraction.
pub fn eval_csv(report: &EvalReport) -> String {
    let mut out = String::from("signal,rms_mv,snr_db,pass\n");
    for (i, m) in report.per_signal.iter().enumerate() {
        let pass = m.passes(report.rms_limit_mv, report.snr_threshold_db);
        let _ = writeln!(out, "{i},{},{},{}", m.rms_mv, m.snr_db, u8::from(pass));
    }
    let _ = writeln!(
        out,
        "mean,{},{},{}",
        report.avg_rms_mv, report.avg_snr_db, report.pass_fraction
    );
    out
}

pub fn doe_csv(rows: &[DoeRow]) -> String {
    let mut out = format!("{DOE_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sim_id, r.filters, r.kernel, r.avg_rms_mv, r.avg_snr_db, r.wall_time_s
        );
    }
    out
}

/// Parses a sweep table with the [`DOE_HEADER`] columns.
pub fn parse_doe_csv(text: &str, path: &Path) -> Result<Vec<DoeRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| LabError::format(path, "empty table"))?;
    if header.trim() != DOE_HEADER {
        return Err(LabError::format(path, format!("expected header `{DOE_HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| LabError::format(path, format!("row {}: bad {what}", i + 1));
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 6 {
                return Err(bad("column count"));
            }
            let row = DoeRow {
                sim_id: f[0].parse().map_err(|_| bad("sim_id"))?,
                filters: f[1].parse().map_err(|_| bad("filters"))?,
                kernel: f[2].to_string(),
                kernel_len: kernel_len_from_label(f[2]).map_err(|_| bad("kernel"))?,
                avg_rms_mv: f[3].parse().map_err(|_| bad("rms"))?,
                avg_snr_db: f[4].parse().map_err(|_| bad("snr"))?,
                wall_time_s: f[5].parse().map_err(|_| bad("time_s"))?,
            };
            row.validate().map_err(|e| LabError::format(path, e.to_string()))?;
            Ok(row)
        })
        .collect()
}

/// Every row tagged `best`, `shortlist` or `row`. Without a selection all
/// rows are plain `row`s.
pub fn selection_csv(rows: &[DoeRow], selection: Option<&Selection>) -> String {
    let mut out = format!("role,{DOE_HEADER}\n");
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| r.sim_id);
    for r in &sorted {
        let role = match selection {
            Some(s) if s.best.sim_id == r.sim_id => "best",
            Some(s) if s.shortlist.iter().any(|x| x.sim_id == r.sim_id) => "shortlist",
            _ => "row",
        };
        let line = doe_csv(std::slice::from_ref(r));
        let _ = write!(out, "{role},{}", line.lines().nth(1).unwrap_or_default());
        out.push('\n');
    }
    out
}
