//! Result serialization: V.csv / D.csv (time rows, x-grid header),
//! boundary.csv, meta.json, plus the Volterra outputs.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! reloading a CSV reproduces the in-memory matrices bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{ExperimentConfig, SolverSpec};
use crate::error::{Error, Result};
use crate::mc::{Boundary, SolveResult};
use crate::timechange::TimeChange;
use crate::volterra::BoundarySolution;

fn write_row(out: &mut String, first: &str, values: impl Iterator<Item = f64>) {
    out.push_str(first);
    for v in values {
        out.push(',');
        out.push_str(&format!("{v}"));
    }
    out.push('\n');
}

/// V.csv / D.csv: header `t,x0,x1,...`; one row per time node.
pub fn matrix_csv(result: &SolveResult, decisions: bool) -> String {
    let grid = &result.grid;
    let mut out = String::new();
    write_row(&mut out, "t", grid.x.iter().copied());
    for i in 0..=grid.n {
        let t = grid.t[i];
        if decisions {
            let vals = (0..=grid.m).map(|j| if result.stopped(i, j) { 1.0 } else { 0.0 });
            write_row(&mut out, &format!("{t}"), vals);
        } else {
            write_row(&mut out, &format!("{t}"), result.v.row(i).iter().copied());
        }
    }
    out
}

/// boundary.csv: one row per (time slice, stopping interval).
pub fn boundary_csv(boundary: &Boundary) -> String {
    let mut out = String::from("t,interval_low,interval_high\n");
    for slice in &boundary.slices {
        for (lo, hi) in &slice.intervals {
            out.push_str(&format!("{},{},{}\n", slice.t, lo, hi));
        }
    }
    out
}

/// Parsed matrix CSV: time column, x header, cell values.
pub struct MatrixCsv {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn parse_matrix_csv(text: &str) -> Result<MatrixCsv> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty matrix CSV".into()))?;
    let x: Vec<f64> = header
        .split(',')
        .skip(1)
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad x header entry '{v}'")))
        })
        .collect::<Result<_>>()?;
    let mut t = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let t_val = fields
            .next()
            .unwrap()
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("row {}: bad time value", i + 2)))?;
        let row: Vec<f64> = fields
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("row {}: bad cell '{v}'", i + 2)))
            })
            .collect::<Result<_>>()?;
        if row.len() != x.len() {
            return Err(Error::Config(format!(
                "row {}: expected {} cells, got {}",
                i + 2,
                x.len(),
                row.len()
            )));
        }
        t.push(t_val);
        values.push(row);
    }
    Ok(MatrixCsv { t, x, values })
}

pub fn load_matrix_csv(path: &Path) -> Result<MatrixCsv> {
    parse_matrix_csv(&std::fs::read_to_string(path)?)
}

/// meta.json payload for a solve.
pub fn solve_meta_json(result: &SolveResult, config: Option<&ExperimentConfig>) -> String {
    let mut meta = json!({
        "model": result.model,
        "prior": result.prior,
        "grid": {
            "n": result.grid.n,
            "m": result.grid.m,
            "k": result.grid.k,
            "x_min": result.grid.x_lo(),
            "x_max": result.grid.x_hi(),
            "seed": result.grid.seed,
        },
        "meta": result.meta,
        "package_version": env!("CARGO_PKG_VERSION"),
    });
    if let Some(cfg) = config {
        meta["solver"] = serde_json::to_value(&cfg.solver).unwrap_or_default();
        meta["notes"] = serde_json::to_value(&cfg.notes).unwrap_or_default();
    }
    serde_json::to_string_pretty(&meta).expect("meta serialization cannot fail")
}

/// Writes V.csv, D.csv, boundary.csv and meta.json into `dir`.
pub fn write_solve_outputs(
    dir: &Path,
    result: &SolveResult,
    boundary: &Boundary,
    config: Option<&ExperimentConfig>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("V.csv"), matrix_csv(result, false))?;
    std::fs::write(dir.join("D.csv"), matrix_csv(result, true))?;
    std::fs::write(dir.join("boundary.csv"), boundary_csv(boundary))?;
    std::fs::write(dir.join("meta.json"), solve_meta_json(result, config))?;
    Ok(())
}

/// Volterra boundary CSV: s, t, b in gain, y and x coordinates.
pub fn volterra_boundary_csv(sol: &BoundarySolution, tc: &TimeChange) -> String {
    let mut out = String::from("s,t,b_gain,b_y,b_x\n");
    let ts = sol.t_of(tc);
    let ys = sol.b_y(tc);
    let xs = sol.b_x(tc);
    for i in 0..sol.s.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sol.s[i], ts[i], sol.b_gain[i], ys[i], xs[i]
        ));
    }
    out
}

pub fn convergence_log(sol: &BoundarySolution) -> String {
    let mut out = String::from("iteration,residual\n");
    for (iter, res) in &sol.log {
        out.push_str(&format!("{iter},{res}\n"));
    }
    out
}

/// Writes boundary.csv (or the given filename) and convergence.log.
pub fn write_volterra_outputs(
    dir: &Path,
    sol: &BoundarySolution,
    tc: &TimeChange,
    boundary_name: &str,
    solver: &SolverSpec,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(boundary_name), volterra_boundary_csv(sol, tc))?;
    std::fs::write(dir.join("convergence.log"), convergence_log(sol))?;
    let meta = json!({
        "iterations": sol.iterations,
        "residual": sol.residual,
        "nodes": sol.s.len(),
        "solver": solver,
    });
    std::fs::write(
        dir.join("volterra_meta.json"),
        serde_json::to_string_pretty(&meta).unwrap(),
    )?;
    Ok(())
}

/// One validation check outcome; `details` is free-form JSON evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: serde_json::Value,
}

pub fn report_json(checks: &[CheckOutcome]) -> String {
    let all = checks.iter().all(|c| c.passed);
    serde_json::to_string_pretty(&json!({
        "all_passed": all,
        "checks": checks,
    }))
    .unwrap()
}
