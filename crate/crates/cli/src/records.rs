//! Output records and their JSON / CSV renderings.
//!
//! Every record carries the method that produced each number, the seed
//! and sample count where sampling was involved, and the package
//! version. JSON field order is alphabetical (serde_json's map order)
//! and CSV numbers use 17 significant digits, so identical runs render
//! byte-identical output; the timestamp is the only run-dependent field
//! and is omitted entirely when suppressed.

use formfactor::studies::{AuditReport, StudyRow};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17-significant-digit rendering: round-trips every finite f64.
pub fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn csv_lines(header: &[&str], rows: &[Vec<String>], timestamp: Option<u64>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.push_str(&format!("# version={VERSION}\n"));
    if let Some(ts) = timestamp {
        out.push_str(&format!("# timestamp_unix={ts}\n"));
    }
    out
}

fn finish_json(mut value: Value, timestamp: Option<u64>) -> String {
    let obj = value.as_object_mut().expect("records are objects");
    obj.insert("version".into(), json!(VERSION));
    if let Some(ts) = timestamp {
        obj.insert("timestamp_unix".into(), json!(ts));
    }
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}

/// A single form-factor evaluation of a geometry pair.
#[derive(Serialize)]
pub struct EvalRecord {
    pub lambda: f64,
    pub std_error: Option<f64>,
    pub method: &'static str,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub redraws: Option<u64>,
    pub direction: [f64; 3],
    pub volume: f64,
}

impl EvalRecord {
    pub fn json(&self, timestamp: Option<u64>) -> String {
        finish_json(serde_json::to_value(self).expect("serializable"), timestamp)
    }

    pub fn csv(&self, timestamp: Option<u64>) -> String {
        let header = [
            "lambda",
            "std_error",
            "method",
            "seed",
            "samples",
            "redraws",
            "direction_x",
            "direction_y",
            "direction_z",
            "volume",
        ];
        let opt_f = |v: Option<f64>| v.map(csv_float).unwrap_or_default();
        let opt_u = |v: Option<u64>| v.map(|n| n.to_string()).unwrap_or_default();
        let row = vec![
            csv_float(self.lambda),
            opt_f(self.std_error),
            self.method.to_string(),
            opt_u(self.seed),
            opt_u(self.samples),
            opt_u(self.redraws),
            csv_float(self.direction[0]),
            csv_float(self.direction[1]),
            csv_float(self.direction[2]),
            csv_float(self.volume),
        ];
        csv_lines(&header, &[row], timestamp)
    }
}

/// Closed-form comb evaluation with its four partial integrals.
#[derive(Serialize)]
pub struct CombRecord {
    #[serde(rename = "H")]
    pub tooth_height: f64,
    #[serde(rename = "h")]
    pub slab_thickness: f64,
    #[serde(rename = "N")]
    pub teeth: u32,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub lambda: f64,
    pub method: &'static str,
}

impl CombRecord {
    pub fn json(&self, timestamp: Option<u64>) -> String {
        finish_json(serde_json::to_value(self).expect("serializable"), timestamp)
    }

    pub fn csv(&self, timestamp: Option<u64>) -> String {
        let header = ["H", "h", "N", "i1", "i2", "i3", "i4", "lambda", "method"];
        let row = vec![
            csv_float(self.tooth_height),
            csv_float(self.slab_thickness),
            self.teeth.to_string(),
            csv_float(self.i1),
            csv_float(self.i2),
            csv_float(self.i3),
            csv_float(self.i4),
            csv_float(self.lambda),
            self.method.to_string(),
        ];
        csv_lines(&header, &[row], timestamp)
    }
}

/// Alternating-lattice partial sum and the toy form factor built on it.
#[derive(Serialize)]
pub struct LatticeRecord {
    pub cutoff: u32,
    pub sum: f64,
    pub toy_lambda: f64,
    pub method: &'static str,
}

impl LatticeRecord {
    pub fn json(&self, timestamp: Option<u64>) -> String {
        finish_json(serde_json::to_value(self).expect("serializable"), timestamp)
    }

    pub fn csv(&self, timestamp: Option<u64>) -> String {
        let header = ["cutoff", "sum", "toy_lambda", "method"];
        let row = vec![
            self.cutoff.to_string(),
            csv_float(self.sum),
            csv_float(self.toy_lambda),
            self.method.to_string(),
        ];
        csv_lines(&header, &[row], timestamp)
    }
}

fn study_row_value(row: &StudyRow) -> Value {
    let mut obj = Map::new();
    for (name, value) in &row.params {
        obj.insert(name.clone(), json!(value));
    }
    obj.insert("lambda".into(), json!(row.lambda));
    obj.insert("std_error".into(), json!(row.std_error));
    obj.insert("method".into(), json!(row.method.as_str()));
    Value::Object(obj)
}

fn study_row_cells(row: &StudyRow) -> Vec<String> {
    let mut cells: Vec<String> = row.params.iter().map(|(_, v)| csv_float(*v)).collect();
    cells.push(csv_float(row.lambda));
    cells.push(row.std_error.map(csv_float).unwrap_or_default());
    cells.push(row.method.as_str().to_string());
    cells
}

fn study_header(rows: &[StudyRow]) -> Vec<&str> {
    let mut header: Vec<&str> = rows
        .first()
        .map(|r| r.params.iter().map(|(n, _)| n.as_str()).collect())
        .unwrap_or_default();
    header.extend(["lambda", "std_error", "method"]);
    header
}

/// A parameter-scan table (slab limit, comb convergence, sphere curve,
/// cylinder sweep). The best row is carried only by sweeps that select
/// one; sampling provenance only by sampled sweeps.
pub struct TableRecord {
    pub rows: Vec<StudyRow>,
    pub best: Option<StudyRow>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl TableRecord {
    pub fn closed_form(rows: Vec<StudyRow>) -> TableRecord {
        TableRecord {
            rows,
            best: None,
            samples: None,
            seed: None,
        }
    }

    pub fn json(&self, timestamp: Option<u64>) -> String {
        let mut obj = Map::new();
        obj.insert(
            "rows".into(),
            Value::Array(self.rows.iter().map(study_row_value).collect()),
        );
        if let Some(best) = &self.best {
            obj.insert("best".into(), study_row_value(best));
        }
        if let Some(samples) = self.samples {
            obj.insert("samples".into(), json!(samples));
        }
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), json!(seed));
        }
        finish_json(Value::Object(obj), timestamp)
    }

    pub fn csv(&self, timestamp: Option<u64>) -> String {
        let header = study_header(&self.rows);
        let rows: Vec<Vec<String>> = self.rows.iter().map(study_row_cells).collect();
        csv_lines(&header, &rows, timestamp)
    }
}

/// Rendering of a supremum-bound audit across a geometry corpus.
pub struct AuditRecord {
    pub report: AuditReport,
    pub samples: u64,
    pub seed: u64,
}

impl AuditRecord {
    pub fn json(&self, timestamp: Option<u64>) -> String {
        let entries: Vec<Value> = self
            .report
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "lambda": e.lambda,
                    "std_error": e.std_error,
                    "method": e.method.as_str(),
                    "bound": e.bound,
                    "pass": e.pass,
                })
            })
            .collect();
        let invalid: Vec<Value> = self
            .report
            .invalid
            .iter()
            .map(|(name, reason)| json!({ "name": name, "reason": reason }))
            .collect();
        let value = json!({
            "entries": entries,
            "invalid": invalid,
            "max_lambda": self.report.max_lambda,
            "all_pass": self.report.all_pass,
            "samples": self.samples,
            "seed": self.seed,
        });
        finish_json(value, timestamp)
    }

    pub fn csv(&self, timestamp: Option<u64>) -> String {
        let header = ["name", "lambda", "std_error", "method", "bound", "pass"];
        let rows: Vec<Vec<String>> = self
            .report
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.name.clone(),
                    csv_float(e.lambda),
                    e.std_error.map(csv_float).unwrap_or_default(),
                    e.method.as_str().to_string(),
                    csv_float(e.bound),
                    e.pass.to_string(),
                ]
            })
            .collect();
        let mut out = csv_lines(&header, &rows, timestamp);
        for (name, reason) in &self.report.invalid {
            out.push_str(&format!("# invalid {name}: {reason}\n"));
        }
        out
    }
}
