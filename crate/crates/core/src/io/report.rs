//! Rendering of solve and sweep results as text tables, JSON or CSV.

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::model::DecisionTensor;
use crate::pareto::FrontierPoint;
use crate::scalarize::{Method, SolveReport, SolveStatus};

/// Entries at or below this are not listed as shipments.
pub const SHIPMENT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected table, json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shipment {
    pub item: usize,
    pub source: usize,
    pub destination: usize,
    pub conveyance: usize,
    pub amount: f64,
}

pub fn shipments(x: &DecisionTensor) -> Vec<Shipment> {
    x.shipments(SHIPMENT_THRESHOLD)
        .into_iter()
        .map(|(r, amount)| {
            let [item, source, destination, conveyance] = r.one_based();
            Shipment {
                item,
                source,
                destination,
                conveyance,
                amount,
            }
        })
        .collect()
}

#[derive(Serialize)]
struct SolveJson<'a> {
    method: Method,
    status: SolveStatus,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ideal: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
    objective_values: &'a [f64],
    scalar_value: f64,
    shipments: Vec<Shipment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<&'a str>,
}

#[derive(Serialize)]
struct SweepJson<'a> {
    weights: &'a [f64],
    objective_values: &'a [f64],
    scalar_value: f64,
    dominated: bool,
    shipments: Vec<Shipment>,
}

fn join3(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", ")
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Weighted => "weighted",
        Method::Distance => "distance",
    }
}

fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::IterationLimit => "iteration_limit",
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

pub fn render_solve(report: &SolveReport, format: Format) -> String {
    let weights = report.weights.as_ref().map(|w| w.as_slice());
    let ideal = report.ideal.as_ref().map(|i| i.e_star.as_slice());
    match format {
        Format::Json => {
            let doc = SolveJson {
                method: report.method,
                status: report.status,
                iterations: report.iterations,
                weights,
                ideal,
                gap: report.gap,
                objective_values: &report.objective_values,
                scalar_value: report.scalar_value,
                shipments: shipments(&report.x),
                diagnostic: report.diagnostic.as_deref(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut rows = vec![
                vec!["key".to_string(), "value".to_string()],
                vec!["method".into(), method_name(report.method).into()],
                vec!["status".into(), status_name(report.status).into()],
                vec!["iterations".into(), report.iterations.to_string()],
            ];
            for (t, v) in weights.unwrap_or(&[]).iter().enumerate() {
                rows.push(vec![format!("lambda_{}", t + 1), format!("{v:?}")]);
            }
            for (t, v) in ideal.unwrap_or(&[]).iter().enumerate() {
                rows.push(vec![format!("ideal_{}", t + 1), format!("{v:?}")]);
            }
            if let Some(g) = report.gap {
                rows.push(vec!["gap".into(), format!("{g:?}")]);
            }
            for (t, v) in report.objective_values.iter().enumerate() {
                rows.push(vec![format!("E[f_{}]", t + 1), format!("{v:?}")]);
            }
            rows.push(vec!["scalar".into(), format!("{:?}", report.scalar_value)]);
            for s in shipments(&report.x) {
                rows.push(vec![
                    format!("x_p{}_i{}_j{}_k{}", s.item, s.source, s.destination, s.conveyance),
                    format!("{:?}", s.amount),
                ]);
            }
            csv_text(rows)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "method      {}", method_name(report.method));
            let _ = writeln!(out, "status      {}", status_name(report.status));
            let _ = writeln!(out, "iterations  {}", report.iterations);
            if let Some(w) = weights {
                let _ = writeln!(out, "weights     {}", join3(w));
            }
            if let Some(e) = ideal {
                let _ = writeln!(out, "ideal       {}", join3(e));
            }
            if let Some(g) = report.gap {
                let _ = writeln!(out, "gap         {g:.3e}");
            }
            for (t, v) in report.objective_values.iter().enumerate() {
                let _ = writeln!(out, "{:<11} {v:.3}", format!("E[f_{}]", t + 1));
            }
            let label = match report.method {
                Method::Weighted => "weighted",
                Method::Distance => "distance",
            };
            let _ = writeln!(out, "{label:<11} {:.3}", report.scalar_value);
            if let Some(d) = &report.diagnostic {
                let _ = writeln!(out, "note        {d}");
            }
            let _ = writeln!(out, "\n{:<24} {:>12}", "route (p, i, j, k)", "amount");
            for s in shipments(&report.x) {
                let route = format!("({}, {}, {}, {})", s.item, s.source, s.destination, s.conveyance);
                let _ = writeln!(out, "{route:<24} {:>12.3}", s.amount);
            }
            out
        }
    }
}

pub fn render_sweep(points: &[FrontierPoint], format: Format) -> String {
    let k = points.first().map_or(0, |p| p.objective_values.len());
    let mut header: Vec<String> = (1..=k).map(|t| format!("lambda_{t}")).collect();
    header.extend((1..=k).map(|t| format!("E[f_{t}]")));
    header.push("scalar".into());
    header.push("dominated".into());
    match format {
        Format::Json => {
            let doc: Vec<SweepJson> = points
                .iter()
                .map(|p| SweepJson {
                    weights: p.weights.as_slice(),
                    objective_values: &p.objective_values,
                    scalar_value: p.scalar_value,
                    dominated: p.dominated,
                    shipments: shipments(&p.x),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&doc).expect("sweep serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut rows = vec![header];
            for p in points {
                let mut row: Vec<String> = p.weights.as_slice().iter().map(|v| format!("{v:?}")).collect();
                row.extend(p.objective_values.iter().map(|v| format!("{v:?}")));
                row.push(format!("{:?}", p.scalar_value));
                row.push(p.dominated.to_string());
                rows.push(row);
            }
            csv_text(rows)
        }
        Format::Table => {
            let mut out = String::new();
            for h in &header {
                let _ = write!(out, "{h:>12}");
            }
            out.push('\n');
            for p in points {
                for v in p.weights.as_slice().iter().chain(&p.objective_values) {
                    let _ = write!(out, "{v:>12.3}");
                }
                let _ = writeln!(out, "{:>12.3}{:>12}", p.scalar_value, p.dominated);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Dimensions, Route};
    use crate::scalarize::WeightVector;

    fn sample() -> SolveReport {
        let dims = Dimensions {
            sources: 1,
            destinations: 2,
            conveyances: 1,
            items: 1,
            objectives: 2,
        };
        let mut x = DecisionTensor::zeros(dims);
        x.set(Route::new(0, 0, 1, 0), 10.3185);
        SolveReport {
            x,
            objective_values: vec![551.1512345, 1571.78],
            scalar_value: 1061.46,
            method: Method::Weighted,
            status: SolveStatus::Optimal,
            iterations: 7,
            weights: Some(WeightVector::uniform(2)),
            ideal: None,
            gap: None,
            diagnostic: None,
        }
    }

    #[test]
    fn table_rounds_to_three_decimals() {
        let t = render_solve(&sample(), Format::Table);
        assert!(t.contains("E[f_1]      551.151"));
        assert!(t.contains("(1, 1, 2, 1)"));
        assert!(t.contains("10.319"));
    }

    #[test]
    fn json_keeps_full_precision_and_one_based_routes() {
        let j: serde_json::Value = serde_json::from_str(&render_solve(&sample(), Format::Json)).unwrap();
        assert_eq!(j["objective_values"][0], 551.1512345);
        assert_eq!(j["shipments"][0]["destination"], 2);
        assert_eq!(j["method"], "weighted");
        assert!(j.get("ideal").is_none());
    }

    #[test]
    fn csv_parses_back() {
        let text = render_solve(&sample(), Format::Csv);
        let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert!(rows.iter().any(|row| &row[0] == "x_p1_i1_j2_k1" && &row[1] == "10.3185"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
        assert!("xml".parse::<Format>().is_err());
    }
}
