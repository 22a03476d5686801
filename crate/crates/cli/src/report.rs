//! Report documents. Object keys are sorted and rationals are written as
//! `"p/q"` strings, so identical inputs give identical bytes.

use std::collections::BTreeMap;

use massey_core::exact::{format_scalar, Scalar};
use massey_core::massey::{stage_equations, MasseyProblem, MasseyResult, StageRecord, Status};
use serde_json::{json, Map, Value};

use crate::error::exit;

pub struct Report {
    pub body: Value,
    pub exit: i32,
}

impl Report {
    pub fn new(command: &str, exit: i32, fields: Map<String, Value>) -> Self {
        let mut body = fields;
        body.insert("command".into(), json!(command));
        Report {
            body: Value::Object(body),
            exit,
        }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.body).expect("values serialize");
        s.push('\n');
        s
    }

    /// One line per top-level field; logs are summarized by length.
    pub fn text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(m) = &self.body {
            for (k, v) in m {
                let line = match v {
                    Value::String(s) => s.clone(),
                    Value::Array(a) if k == "log" => format!("{} stages", a.len()),
                    Value::Array(a) if a.iter().all(Value::is_string) => {
                        let items: Vec<&str> = a.iter().filter_map(Value::as_str).collect();
                        if k == "stage_equations" {
                            format!("\n  {}", items.join("\n  "))
                        } else {
                            format!("[{}]", items.join(", "))
                        }
                    }
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {line}\n"));
            }
        }
        out
    }
}

pub fn status_exit(s: Status) -> i32 {
    match s {
        Status::Verified | Status::Found => exit::OK,
        Status::Violated | Status::Obstructed => exit::NEGATIVE,
        Status::Inconclusive => exit::INCONCLUSIVE,
    }
}

pub fn status_name(s: Status) -> Value {
    serde_json::to_value(s).expect("status serializes")
}

pub fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(format_scalar(c))).collect())
}

pub fn vector_map(m: &BTreeMap<String, Vec<Scalar>>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), vector(v))).collect())
}

fn record(r: &StageRecord) -> Value {
    json!({
        "generator": r.generator,
        "degree": r.degree,
        "kind": r.kind,
        "freedom": r.freedom,
        "offsets_tried": r.offsets_tried,
        "offset": r.offset.iter().map(|(i, c)| json!({"index": i, "coef": format_scalar(c)})).collect::<Vec<_>>(),
        "class": r.class.as_deref().map(vector),
        "used_by": r.used_by,
    })
}

/// Generators, stage equations and the search outcome.
pub fn massey_fields(problem: &MasseyProblem, r: &MasseyResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("status".into(), status_name(r.status));
    m.insert(
        "generators".into(),
        Value::Array(
            problem
                .stage_order()
                .iter()
                .chain(problem.outside_f1().iter().filter(|k| !problem.stage_order().contains(k)))
                .map(|&k| {
                    json!({
                        "name": problem.name(k),
                        "degree": problem.degree(k),
                        "f0": problem.in_f0(k),
                        "f1": problem.in_f1(k),
                    })
                })
                .collect(),
        ),
    );
    m.insert(
        "stage_equations".into(),
        Value::Array(stage_equations(problem).iter().map(|e| json!(e.to_string())).collect()),
    );
    let witness = r.witness.as_ref().map(|w| {
        let named: BTreeMap<String, Vec<Scalar>> = w
            .values
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.as_ref().map(|v| (problem.name(k).to_string(), v.clone())))
            .collect();
        vector_map(&named)
    });
    m.insert("witness".into(), witness.unwrap_or(Value::Null));
    m.insert("products".into(), vector_map(&r.products));
    m.insert(
        "obstruction".into(),
        r.obstruction
            .as_ref()
            .map(|o| json!({"generator": o.generator, "stage": o.stage, "class": vector(&o.coords)}))
            .unwrap_or(Value::Null),
    );
    m.insert("violation".into(), json!(r.violation));
    m.insert("nodes".into(), json!(r.nodes));
    m.insert("log".into(), Value::Array(r.log.iter().map(record).collect()));
    m
}
