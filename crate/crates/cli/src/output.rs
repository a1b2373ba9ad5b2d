//! JSON and CSV emitters. Floats in CSV are written with 17 significant
//! digits, which parse back to the same `f64`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use varlp::conditions::{ConditionParams, ConditionReport, Verdict};
use varlp::Cube;

use crate::error::CliResult;

pub const REPORT_HEADER: [&str; 10] =
    ["condition", "cube_corner", "cube_side", "lam", "tau", "r", "gamma0", "term", "aggregate", "verdict"];

/// Extra columns of scan rows, which also vary the remaining parameters.
pub const SCAN_EXTRA: [&str; 6] = ["level", "K", "c", "p_inf", "alpha", "N_cutoff"];

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_corner(c: &Cube) -> String {
    c.corner.iter().map(|&x| fmt_f(x)).collect::<Vec<_>>().join(";")
}

/// Opens `--out`, or stdout. Everything is written through this one writer.
pub fn sink(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            crate::error::CliError::Io(format!("{}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| crate::error::CliError::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn report_row(label: &str, r: &ConditionReport, cube: &Cube, term: f64) -> Vec<String> {
    vec![
        label.to_string(),
        fmt_corner(cube),
        fmt_f(cube.side),
        fmt_f(r.params.lam),
        fmt_f(r.params.tau),
        fmt_f(r.params.r),
        fmt_f(r.params.gamma0),
        fmt_f(term),
        fmt_f(r.aggregate),
        r.verdict.as_str().to_string(),
    ]
}

/// One row per cube of every report, preceded by a `# seed=` line.
pub fn write_reports_csv(w: &mut dyn Write, seed: u64, reports: &[(String, &ConditionReport)]) -> CliResult<()> {
    writeln!(w, "# seed={seed}")?;
    let mut csv = csv::Writer::from_writer(&mut *w);
    csv.write_record(REPORT_HEADER)?;
    for (label, r) in reports {
        for t in &r.per_cube {
            csv.write_record(report_row(label, r, &t.cube, t.term))?;
        }
    }
    csv.flush()?;
    drop(csv);
    w.flush()?;
    Ok(())
}

/// One row of a scan: a parameter tuple at one nesting level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub condition: String,
    pub params: ConditionParams,
    pub level: usize,
    /// Smallest cube containing the cubes that enter at this level.
    pub cube: Cube,
    /// Aggregate over levels `0..=level`.
    pub term: f64,
    pub aggregate: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub params: ConditionParams,
    pub levels: Vec<f64>,
    pub aggregate: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub condition: String,
    pub seed: u64,
    pub rows: Vec<ScanRow>,
    pub summary: Vec<ScanSummary>,
}

pub fn hull(cubes: &[&Cube]) -> Option<Cube> {
    let first = cubes.first()?;
    let n = first.dim();
    let lo: Vec<f64> = (0..n).map(|i| cubes.iter().map(|c| c.corner[i]).fold(f64::INFINITY, f64::min)).collect();
    let side = (0..n)
        .map(|i| cubes.iter().map(|c| c.corner[i] + c.side).fold(f64::NEG_INFINITY, f64::max) - lo[i])
        .fold(0.0, f64::max);
    Some(Cube { corner: lo, side })
}

impl ScanOutput {
    pub fn from_reports(condition: &str, seed: u64, reports: &[ConditionReport]) -> Self {
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        for r in reports {
            for (level, &term) in r.levels.iter().enumerate() {
                let cubes: Vec<&Cube> = r.per_cube.iter().filter(|t| t.level == level).map(|t| &t.cube).collect();
                let Some(cube) = hull(&cubes) else { continue };
                rows.push(ScanRow {
                    condition: condition.to_string(),
                    params: r.params,
                    level,
                    cube,
                    term,
                    aggregate: r.aggregate,
                    verdict: r.verdict,
                });
            }
            summary.push(ScanSummary { params: r.params, levels: r.levels.clone(), aggregate: r.aggregate, verdict: r.verdict });
        }
        ScanOutput { condition: condition.to_string(), seed, rows, summary }
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> CliResult<()> {
        writeln!(w, "# seed={}", self.seed)?;
        let mut csv = csv::Writer::from_writer(&mut *w);
        csv.write_record(REPORT_HEADER.iter().chain(SCAN_EXTRA.iter()))?;
        for row in &self.rows {
            let p = &row.params;
            csv.write_record([
                row.condition.clone(),
                fmt_corner(&row.cube),
                fmt_f(row.cube.side),
                fmt_f(p.lam),
                fmt_f(p.tau),
                fmt_f(p.r),
                fmt_f(p.gamma0),
                fmt_f(row.term),
                fmt_f(row.aggregate),
                row.verdict.as_str().to_string(),
                row.level.to_string(),
                fmt_f(p.k),
                fmt_f(p.c),
                fmt_f(p.p_inf),
                fmt_f(p.alpha),
                fmt_f(p.n_cutoff),
            ])?;
        }
        csv.flush()?;
        drop(csv);
        w.flush()?;
        Ok(())
    }
}

/// Writes a small table with its own header.
pub fn write_table(w: &mut dyn Write, seed: u64, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    writeln!(w, "# seed={seed}")?;
    let mut csv = csv::Writer::from_writer(&mut *w);
    csv.write_record(header)?;
    for r in rows {
        csv.write_record(r)?;
    }
    csv.flush()?;
    drop(csv);
    w.flush()?;
    Ok(())
}
