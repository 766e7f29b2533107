//! CPLEX LP-format export of the deterministic equivalent.

use std::fmt::Write;

use crate::lp::Relation;
use crate::transform::DeterministicModel;

const TERMS_PER_LINE: usize = 6;

fn expression(out: &mut String, prefix: &str, terms: &[(f64, String)]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (n, (coef, name)) in terms.iter().enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push('\n');
            out.push_str(prefix);
        }
        let sign = if *coef < 0.0 { '-' } else { '+' };
        if n == 0 && sign == '+' {
            write!(out, " {:?} {name}", coef.abs()).unwrap();
        } else {
            write!(out, " {sign} {:?} {name}", coef.abs()).unwrap();
        }
    }
}

fn terms(det: &DeterministicModel, costs: &[f64]) -> Vec<(f64, String)> {
    det.columns()
        .iter()
        .zip(costs)
        .filter(|(_, c)| **c != 0.0)
        .map(|(r, c)| (*c, r.column_name()))
        .collect()
}

/// Renders `min Σ_t weights[t]·E[f_t]` subject to the crisp constraints.
/// Each individual objective is written as a comment above the model.
/// Numbers use the shortest representation that parses back exactly.
pub fn export_lp(det: &DeterministicModel, weights: &[f64]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "\\ {} objectives, {} columns, {} rows",
        det.objectives(),
        det.columns().len(),
        det.constraint_rows().len()
    )
    .unwrap();
    for t in 0..det.objectives() {
        let mut unit = vec![0.0; det.objectives()];
        unit[t] = 1.0;
        let mut line = format!("\\ E[f{}]:", t + 1);
        expression(&mut line, "\\   ", &terms(det, &det.weighted_column_costs(&unit)));
        writeln!(out, "{line}").unwrap();
    }
    let w: Vec<String> = weights.iter().map(|v| format!("{v:?}")).collect();
    writeln!(out, "\\ weights: {}", w.join(", ")).unwrap();

    out.push_str("Minimize\n obj:");
    let mut obj = terms(det, &det.weighted_column_costs(weights));
    if obj.is_empty() {
        if let Some(first) = det.columns().first() {
            obj.push((0.0, first.column_name()));
        }
    }
    expression(&mut out, "  ", &obj);
    out.push_str("\nSubject To\n");
    for row in det.constraint_rows() {
        write!(out, " {}:", row.name).unwrap();
        let t: Vec<(f64, String)> = row.routes().iter().map(|r| (1.0, r.column_name())).collect();
        expression(&mut out, "  ", &t);
        let op = match row.kind.relation() {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        writeln!(out, " {op} {:?}", row.rhs).unwrap();
    }
    out.push_str("End\n");
    out
}
