//! JSON model documents.
//!
//! ```json
//! {
//!   "dimensions": {"m": 3, "n": 4, "l": 2, "r": 2, "K": 2},
//!   "costs":    [t][p][i][j][k] records,
//!   "supply":   [p][i] records,
//!   "demand":   [p][j] records,
//!   "capacity": [k] records,
//!   "confidence": {"gamma": [p][i], "beta": [p][j], "delta": [k]},
//!   "forbidden": [[p, i, j, k], ...]
//! }
//! ```
//!
//! A record is `{"family": "linear" | "zigzag" | "normal", "params": [...]}`
//! with params `[a, b]`, `[a, b, c]` or `[e, sigma]`. Forbidden routes are
//! 1-based.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{format_diagnostics, Diagnostic, Dimensions, MmstpModel, Route};
use crate::uncertain::{Family, UncertainValue};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueRecord {
    pub family: Family,
    pub params: Vec<f64>,
}

impl From<&UncertainValue> for ValueRecord {
    fn from(v: &UncertainValue) -> Self {
        Self {
            family: v.family(),
            params: v.params(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceDoc {
    pub gamma: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub dimensions: Dimensions,
    pub costs: Vec<Vec<Vec<Vec<Vec<ValueRecord>>>>>,
    pub supply: Vec<Vec<ValueRecord>>,
    pub demand: Vec<Vec<ValueRecord>>,
    pub capacity: Vec<ValueRecord>,
    pub confidence: ConfidenceDoc,
    #[serde(default)]
    pub forbidden: Vec<[usize; 4]>,
}

struct Collector {
    diags: Vec<Diagnostic>,
}

impl Collector {
    fn len_ok<T>(&mut self, path: &str, items: &[T], expected: usize, what: &str) -> bool {
        if items.len() == expected {
            true
        } else {
            self.diags.push(Diagnostic::new(
                path,
                format!("dimension mismatch: expected {expected} {what}, found {}", items.len()),
            ));
            false
        }
    }

    fn value(&mut self, path: String, rec: &ValueRecord, out: &mut Vec<UncertainValue>) {
        match UncertainValue::from_params(rec.family, &rec.params) {
            Ok(v) => out.push(v),
            Err(e) => self.diags.push(Diagnostic::new(format!("{path}.params"), e.to_string())),
        }
    }

    fn level(&mut self, path: String, a: f64, out: &mut Vec<f64>) {
        if !(a > 0.0 && a < 1.0) {
            self.diags.push(Diagnostic::new(
                path,
                format!("confidence level must lie in (0,1), got {a}"),
            ));
        }
        out.push(a);
    }
}

impl ModelDocument {
    /// Converts to a model, reporting every problem with its key path.
    pub fn to_model(&self) -> Result<MmstpModel, Vec<Diagnostic>> {
        let d = self.dimensions;
        let mut c = Collector { diags: Vec::new() };
        for (name, size) in [
            ("dimensions.m", d.sources),
            ("dimensions.n", d.destinations),
            ("dimensions.l", d.conveyances),
            ("dimensions.r", d.items),
            ("dimensions.K", d.objectives),
        ] {
            if size == 0 {
                c.diags.push(Diagnostic::new(name, "must be a positive integer"));
            }
        }
        if !c.diags.is_empty() {
            return Err(c.diags);
        }

        let mut cost = Vec::with_capacity(d.cost_count());
        if c.len_ok("costs", &self.costs, d.objectives, "objectives") {
            for (t, per_t) in self.costs.iter().enumerate() {
                let pt = format!("costs[t={}]", t + 1);
                if !c.len_ok(&pt, per_t, d.items, "items") {
                    continue;
                }
                for (p, per_p) in per_t.iter().enumerate() {
                    let pp = format!("costs[t={},p={}]", t + 1, p + 1);
                    if !c.len_ok(&pp, per_p, d.sources, "sources") {
                        continue;
                    }
                    for (i, per_i) in per_p.iter().enumerate() {
                        let pi = format!("costs[t={},p={},i={}]", t + 1, p + 1, i + 1);
                        if !c.len_ok(&pi, per_i, d.destinations, "destinations") {
                            continue;
                        }
                        for (j, per_j) in per_i.iter().enumerate() {
                            let pj = format!("costs[t={},p={},i={},j={}]", t + 1, p + 1, i + 1, j + 1);
                            if !c.len_ok(&pj, per_j, d.conveyances, "conveyances") {
                                continue;
                            }
                            for (k, rec) in per_j.iter().enumerate() {
                                let path = format!(
                                    "costs[t={},p={},i={},j={},k={}]",
                                    t + 1,
                                    p + 1,
                                    i + 1,
                                    j + 1,
                                    k + 1
                                );
                                c.value(path, rec, &mut cost);
                            }
                        }
                    }
                }
            }
        }

        let matrix = |c: &mut Collector, name: &str, rows: &[Vec<ValueRecord>], width: usize, what: &str, label: &str| {
            let mut out = Vec::new();
            if c.len_ok(name, rows, d.items, "items") {
                for (p, row) in rows.iter().enumerate() {
                    let path = format!("{name}[p={}]", p + 1);
                    if c.len_ok(&path, row, width, what) {
                        for (idx, rec) in row.iter().enumerate() {
                            c.value(format!("{name}[p={},{label}={}]", p + 1, idx + 1), rec, &mut out);
                        }
                    }
                }
            }
            out
        };
        let supply = matrix(&mut c, "supply", &self.supply, d.sources, "sources", "i");
        let demand = matrix(&mut c, "demand", &self.demand, d.destinations, "destinations", "j");

        let mut capacity = Vec::new();
        if c.len_ok("capacity", &self.capacity, d.conveyances, "conveyances") {
            for (k, rec) in self.capacity.iter().enumerate() {
                c.value(format!("capacity[k={}]", k + 1), rec, &mut capacity);
            }
        }

        let levels = |c: &mut Collector, name: &str, rows: &[Vec<f64>], width: usize, what: &str, label: &str| {
            let mut out = Vec::new();
            let base = format!("confidence.{name}");
            if c.len_ok(&base, rows, d.items, "items") {
                for (p, row) in rows.iter().enumerate() {
                    if c.len_ok(&format!("{base}[p={}]", p + 1), row, width, what) {
                        for (idx, &a) in row.iter().enumerate() {
                            c.level(format!("{base}[p={},{label}={}]", p + 1, idx + 1), a, &mut out);
                        }
                    }
                }
            }
            out
        };
        let gamma = levels(&mut c, "gamma", &self.confidence.gamma, d.sources, "sources", "i");
        let beta = levels(&mut c, "beta", &self.confidence.beta, d.destinations, "destinations", "j");
        let mut delta = Vec::new();
        if c.len_ok("confidence.delta", &self.confidence.delta, d.conveyances, "conveyances") {
            for (k, &a) in self.confidence.delta.iter().enumerate() {
                c.level(format!("confidence.delta[k={}]", k + 1), a, &mut delta);
            }
        }

        let mut forbidden = BTreeSet::new();
        for (n, &pijk) in self.forbidden.iter().enumerate() {
            match Route::from_one_based(pijk) {
                Some(r) if d.contains(r) => {
                    forbidden.insert(r);
                }
                _ => c.diags.push(Diagnostic::new(
                    format!("forbidden[{}]", n + 1),
                    format!("route {pijk:?} lies outside the 1-based index set"),
                )),
            }
        }

        if !c.diags.is_empty() {
            return Err(c.diags);
        }
        let model = MmstpModel {
            dims: d,
            cost,
            supply,
            demand,
            capacity,
            gamma,
            beta,
            delta,
            forbidden,
        };
        let diags = model.validate();
        if diags.is_empty() {
            Ok(model)
        } else {
            Err(diags)
        }
    }

    pub fn from_model(model: &MmstpModel) -> Self {
        let d = model.dims;
        let rc = d.route_count();
        let records = |vals: &[UncertainValue], width: usize| -> Vec<Vec<ValueRecord>> {
            vals.chunks(width).map(|row| row.iter().map(ValueRecord::from).collect()).collect()
        };
        let costs = (0..d.objectives)
            .map(|t| {
                let block = &model.cost[t * rc..(t + 1) * rc];
                block
                    .chunks(d.sources * d.destinations * d.conveyances)
                    .map(|per_p| {
                        per_p
                            .chunks(d.destinations * d.conveyances)
                            .map(|per_i| records(per_i, d.conveyances))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            dimensions: d,
            costs,
            supply: records(&model.supply, d.sources),
            demand: records(&model.demand, d.destinations),
            capacity: model.capacity.iter().map(ValueRecord::from).collect(),
            confidence: ConfidenceDoc {
                gamma: model.gamma.chunks(d.sources).map(<[f64]>::to_vec).collect(),
                beta: model.beta.chunks(d.destinations).map(<[f64]>::to_vec).collect(),
                delta: model.delta.clone(),
            },
            forbidden: model.forbidden.iter().map(Route::one_based).collect(),
        }
    }
}

/// Parses and validates a model from JSON text.
pub fn parse_model(text: &str) -> Result<MmstpModel, LoadError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_model().map_err(LoadError::Invalid)
}

/// Reads, parses and validates a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<MmstpModel, LoadError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&text)
}

/// Pretty-printed JSON for a model.
pub fn model_to_json(model: &MmstpModel) -> String {
    serde_json::to_string_pretty(&ModelDocument::from_model(model)).expect("model documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "dimensions": {"m": 1, "n": 2, "l": 1, "r": 1, "K": 1},
        "costs": [[[[[{"family": "normal", "params": [3, 1]}], [{"family": "linear", "params": [1, 2]}]]]]],
        "supply": [[{"family": "normal", "params": [20, 1]}]],
        "demand": [[{"family": "zigzag", "params": [1, 2, 4]}, {"family": "normal", "params": [5, 1]}]],
        "capacity": [{"family": "normal", "params": [40, 2]}],
        "confidence": {"gamma": [[0.9]], "beta": [[0.9, 0.8]], "delta": [0.95]},
        "forbidden": [[1, 1, 2, 1]]
    }"#;

    #[test]
    fn parses_tiny_model() {
        let m = parse_model(TINY).unwrap();
        assert_eq!(m.dims.route_count(), 2);
        assert_eq!(m.cost[1], UncertainValue::Linear { a: 1.0, b: 2.0 });
        assert!(m.is_forbidden(Route::new(0, 0, 1, 0)));
        assert_eq!(m.beta, vec![0.9, 0.8]);
    }

    #[test]
    fn round_trip_is_exact() {
        let m = parse_model(TINY).unwrap();
        let again = parse_model(&model_to_json(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn negative_sigma_names_key_path() {
        let bad = TINY.replace("[40, 2]", "[40, -1]");
        let Err(LoadError::Invalid(diags)) = parse_model(&bad) else {
            panic!("expected diagnostics");
        };
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].path, "capacity[k=1].params");
        assert!(diags[0].message.contains("sigma > 0"));
    }

    #[test]
    fn empty_and_garbage_are_parse_errors() {
        assert!(matches!(parse_model(""), Err(LoadError::Parse { .. })));
        assert!(matches!(parse_model("{\"dimensions\": 3"), Err(LoadError::Parse { line: 1, .. })));
    }

    #[test]
    fn truncated_tensor_is_dimension_mismatch() {
        let bad = TINY.replace(r#", [{"family": "linear", "params": [1, 2]}]]]]]"#, "]]]]");
        let Err(LoadError::Invalid(diags)) = parse_model(&bad) else {
            panic!("expected diagnostics");
        };
        assert_eq!(diags[0].path, "costs[t=1,p=1,i=1]");
        assert!(diags[0].message.contains("dimension mismatch"));
    }

    #[test]
    fn bad_confidence_and_forbidden() {
        let bad = TINY.replace("\"delta\": [0.95]", "\"delta\": [1.0]").replace("[1, 1, 2, 1]", "[1, 1, 3, 1]");
        let Err(LoadError::Invalid(diags)) = parse_model(&bad) else {
            panic!("expected diagnostics");
        };
        let paths: Vec<&str> = diags.iter().map(|d| d.path.as_str()).collect();
        assert_eq!(paths, vec!["confidence.delta[k=1]", "forbidden[1]"]);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(load_model("/definitely/not/here.json"), Err(LoadError::Io { .. })));
    }
}
