use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::experiment::SweepReport;

pub const CSV_HEADER: [&str; 7] = [
    "h",
    "I_exact",
    "I_weyl_leading",
    "I_tauberian",
    "abs_err",
    "rel_err",
    "runtime_seconds",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `sweep.csv` and `report.json` into `dir`, returning their paths.
pub fn write_report(report: &SweepReport, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("sweep.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        w.write_record([
            num(r.h),
            num(r.i_exact),
            num(r.i_weyl_leading),
            r.i_tauberian.map(num).unwrap_or_default(),
            num(r.abs_err),
            num(r.rel_err),
            format!("{:.6}", r.runtime_seconds),
        ])?;
    }
    w.flush()?;

    let json_path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(&json_path, text)?;
    Ok((csv_path, json_path))
}

/// Reads one numeric column of a sweep CSV as `(h, value)` pairs, skipping empty cells.
pub fn read_column(path: &Path, column: &str) -> io::Result<Vec<(f64, f64)>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("no column `{name}` in {}", path.display()),
            )
        })
    };
    let (hi, ci) = (find("h")?, find(column)?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let cell = rec.get(ci).unwrap_or("").trim();
        if cell.is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("`{s}`: {e}")))
        };
        out.push((parse(rec.get(hi).unwrap_or(""))?, parse(cell)?));
    }
    Ok(out)
}
