//! Serializes a run report as CSV tables (one per analysis) or one JSON
//! object. Output is deterministic: floats print in shortest round-trip
//! form, infinities as `inf`, and lines end with `\n`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::runner::{AnalysisOutcome, RunReport};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("csv output needs `--out <directory>`")]
    CsvNeedsDir,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> EmitError {
    EmitError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

// ------------------------------------------------------------------- CSV

/// One CSV table per analysis, in run order.
pub fn csv_tables(report: &RunReport) -> Vec<(String, String)> {
    report
        .results
        .iter()
        .map(|(name, outcome)| (name.clone(), csv_for(outcome)))
        .collect()
}

fn csv_for(outcome: &AnalysisOutcome) -> String {
    let mut out = String::new();
    match outcome {
        AnalysisOutcome::Norm(norm) => {
            out.push_str("operator_norm,growth\n");
            out.push_str(&format!(
                "{},{}\n",
                fmt_f64(norm.operator_norm),
                norm.growth.as_str()
            ));
        }
        AnalysisOutcome::Invert(inv) => {
            out.push_str("invertible,point,entry,min_modulus,inverse_norm\n");
            let inverse = inv.inverse_norm.map(fmt_f64).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                inv.invertible,
                csv_field(&inv.point),
                inv.entry,
                fmt_f64(inv.min_modulus),
                inverse
            ));
        }
        AnalysisOutcome::Spectrum(report) => {
            out.push_str("lambda_re,lambda_im,min_distance,resolvent_sup,class\n");
            for p in &report.points {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f64(p.lambda.re),
                    fmt_f64(p.lambda.im),
                    fmt_f64(p.min_distance),
                    fmt_f64(p.resolvent_sup),
                    p.class.as_str()
                ));
            }
        }
        AnalysisOutcome::Evolve(rows) => {
            out.push_str("t,semigroup_norm,evolved_norm\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(r.t),
                    fmt_f64(r.semigroup_norm),
                    fmt_f64(r.evolved_norm)
                ));
            }
        }
        AnalysisOutcome::Continuity(report) => {
            // The witness scan is part of the JSON form only; the table keeps
            // the profile columns.
            out.push_str("t,strong_profile,uniform_profile\n");
            for ((t, s), u) in report
                .t_grid
                .iter()
                .zip(&report.strong)
                .zip(&report.uniform)
            {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(*t),
                    fmt_f64(*s),
                    fmt_f64(*u)
                ));
            }
        }
        AnalysisOutcome::Generator(rows) => {
            out.push_str("h,error\n");
            for r in rows {
                out.push_str(&format!("{},{}\n", fmt_f64(r.h), fmt_f64(r.error)));
            }
        }
        AnalysisOutcome::T0(report) => {
            out.push_str("t0,value,finite,growth\n");
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(report.t0),
                fmt_f64(report.value),
                report.finite,
                report.growth.as_str()
            ));
        }
        AnalysisOutcome::Recover(rows) => {
            out.push_str("point,entry,recovered_re,recovered_im,deviation\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(&r.point),
                    r.entry,
                    fmt_f64(r.recovered.re),
                    fmt_f64(r.recovered.im),
                    fmt_f64(r.deviation)
                ));
            }
        }
    }
    out
}

/// Writes `<analysis>.csv` per analysis into `dir`, creating it if needed.
pub fn emit_csv_dir(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, EmitError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    for (name, table) in csv_tables(report) {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, table).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

// ------------------------------------------------------------------ JSON

fn num(v: f64) -> Value {
    match Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None if v.is_infinite() && v > 0.0 => Value::String("inf".into()),
        None if v.is_infinite() => Value::String("-inf".into()),
        None => Value::String("nan".into()),
    }
}

/// The whole report as one object keyed by analysis name.
pub fn json_value(report: &RunReport) -> Value {
    let mut root = Map::new();
    for (name, outcome) in &report.results {
        root.insert(name.clone(), json_for(outcome));
    }
    Value::Object(root)
}

fn rows_of<I: IntoIterator<Item = Value>>(rows: I) -> Value {
    Value::Array(rows.into_iter().collect())
}

fn json_for(outcome: &AnalysisOutcome) -> Value {
    match outcome {
        AnalysisOutcome::Norm(norm) => {
            let mut m = Map::new();
            m.insert("operator_norm".into(), num(norm.operator_norm));
            m.insert("growth".into(), Value::String(norm.growth.as_str().into()));
            Value::Object(m)
        }
        AnalysisOutcome::Invert(inv) => {
            let mut m = Map::new();
            m.insert("invertible".into(), Value::Bool(inv.invertible));
            m.insert("point".into(), Value::String(inv.point.clone()));
            m.insert("entry".into(), Value::from(inv.entry));
            m.insert("min_modulus".into(), num(inv.min_modulus));
            m.insert(
                "inverse_norm".into(),
                inv.inverse_norm.map_or(Value::Null, num),
            );
            Value::Object(m)
        }
        AnalysisOutcome::Spectrum(report) => {
            let mut m = Map::new();
            m.insert("threshold".into(), num(report.threshold));
            m.insert("pole_tol".into(), num(report.pole_tol));
            m.insert(
                "points".into(),
                rows_of(report.points.iter().map(|p| {
                    let mut row = Map::new();
                    row.insert("lambda_re".into(), num(p.lambda.re));
                    row.insert("lambda_im".into(), num(p.lambda.im));
                    row.insert("min_distance".into(), num(p.min_distance));
                    row.insert("resolvent_sup".into(), num(p.resolvent_sup));
                    row.insert("class".into(), Value::String(p.class.as_str().into()));
                    Value::Object(row)
                })),
            );
            Value::Object(m)
        }
        AnalysisOutcome::Evolve(rows) => rows_of(rows.iter().map(|r| {
            let mut row = Map::new();
            row.insert("t".into(), num(r.t));
            row.insert("semigroup_norm".into(), num(r.semigroup_norm));
            row.insert("evolved_norm".into(), num(r.evolved_norm));
            Value::Object(row)
        })),
        AnalysisOutcome::Continuity(report) => {
            let mut m = Map::new();
            m.insert(
                "rows".into(),
                rows_of(
                    report
                        .t_grid
                        .iter()
                        .zip(&report.strong)
                        .zip(&report.uniform)
                        .map(|((t, s), u)| {
                            let mut row = Map::new();
                            row.insert("t".into(), num(*t));
                            row.insert("strong_profile".into(), num(*s));
                            row.insert("uniform_profile".into(), num(*u));
                            Value::Object(row)
                        }),
                ),
            );
            let witness = report.witness.as_ref().map_or(Value::Null, |w| {
                let mut wm = Map::new();
                wm.insert("delta".into(), num(w.delta));
                wm.insert("constant_t".into(), Value::Bool(w.constant_t));
                wm.insert(
                    "points".into(),
                    rows_of(w.points.iter().map(|p| {
                        let mut row = Map::new();
                        row.insert("point".into(), Value::String(p.label.clone()));
                        row.insert("t".into(), num(p.t));
                        row.insert("lower_bound".into(), num(p.lower_bound));
                        Value::Object(row)
                    })),
                );
                Value::Object(wm)
            });
            m.insert("witness".into(), witness);
            Value::Object(m)
        }
        AnalysisOutcome::Generator(rows) => rows_of(rows.iter().map(|r| {
            let mut row = Map::new();
            row.insert("h".into(), num(r.h));
            row.insert("error".into(), num(r.error));
            Value::Object(row)
        })),
        AnalysisOutcome::T0(report) => {
            let mut m = Map::new();
            m.insert("t0".into(), num(report.t0));
            m.insert("value".into(), num(report.value));
            m.insert("finite".into(), Value::Bool(report.finite));
            m.insert("growth".into(), Value::String(report.growth.as_str().into()));
            Value::Object(m)
        }
        AnalysisOutcome::Recover(rows) => rows_of(rows.iter().map(|r| {
            let mut row = Map::new();
            row.insert("point".into(), Value::String(r.point.clone()));
            row.insert("entry".into(), Value::from(r.entry));
            row.insert("recovered_re".into(), num(r.recovered.re));
            row.insert("recovered_im".into(), num(r.recovered.im));
            row.insert("deviation".into(), num(r.deviation));
            Value::Object(row)
        })),
    }
}

pub fn json_text(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(&json_value(report))
        .expect("report values are always serializable");
    text.push('\n');
    text
}

/// Writes JSON to `out`, or stdout when no path is given.
pub fn emit_json(report: &RunReport, out: Option<&Path>) -> Result<(), EmitError> {
    let text = json_text(report);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| io_err(Path::new("<stdout>"), e))
        }
    }
}
