#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use mmstp::io::load_model;
use mmstp::lp::{Relation, StandardLp};
use mmstp::{DecisionTensor, Dimensions, MmstpModel, Route, UncertainValue};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Instance whose published weighted-sum and ideal-point values are reproduced.
pub fn reference_model() -> MmstpModel {
    load_model(data_path("reference_instance.json")).expect("bundled model loads")
}

/// The same instance with every cost exactly as tabulated.
pub fn tabulated_model() -> MmstpModel {
    load_model(data_path("reference_instance_as_tabulated.json")).expect("bundled model loads")
}

/// Published compromise solution, 1-based `(p, i, j, k, amount)`.
pub const PUBLISHED_COMPROMISE: [(usize, usize, usize, usize, f64); 13] = [
    (1, 1, 2, 1, 10.319),
    (1, 1, 2, 2, 2.893),
    (1, 2, 3, 2, 0.874),
    (1, 2, 4, 1, 14.423),
    (1, 3, 1, 1, 11.817),
    (1, 3, 3, 1, 14.549),
    (2, 1, 1, 2, 2.337),
    (2, 1, 2, 1, 3.817),
    (2, 1, 2, 2, 3.0),
    (2, 1, 4, 2, 10.423),
    (2, 2, 3, 2, 13.634),
    (2, 3, 1, 1, 2.650),
    (2, 3, 1, 2, 2.435),
];

pub fn published_compromise(dims: Dimensions) -> DecisionTensor {
    let mut x = DecisionTensor::zeros(dims);
    for (p, i, j, k, v) in PUBLISHED_COMPROMISE {
        x.set(Route::from_one_based([p, i, j, k]).unwrap(), v);
    }
    x
}

/// Writes straight to the process stderr so the line survives test capture.
pub fn report_line(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

pub fn random_value(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> UncertainValue {
    let centre = rng.gen_range(lo..hi);
    match rng.gen_range(0..3) {
        0 => {
            let w = rng.gen_range(0.5..4.0);
            UncertainValue::linear(centre - w, centre + w).unwrap()
        }
        1 => {
            let l = rng.gen_range(0.5..3.0);
            let r = rng.gen_range(0.5..3.0);
            UncertainValue::zigzag(centre - l, centre, centre + r).unwrap()
        }
        _ => UncertainValue::normal(centre, rng.gen_range(0.2..3.0)).unwrap(),
    }
}

/// A model whose crisp equivalent is feasible by construction: every source
/// alone can cover all demand of an item and every conveyance alone can carry
/// everything.
pub fn random_feasible_model(rng: &mut ChaCha8Rng, dims: Dimensions) -> MmstpModel {
    let per_item_demand = 20.0 * dims.destinations as f64;
    let total = per_item_demand * dims.items as f64;
    let cost = (0..dims.cost_count()).map(|_| random_value(rng, 5.0, 40.0)).collect();
    let supply = (0..dims.items * dims.sources)
        .map(|_| random_value(rng, per_item_demand + 10.0, per_item_demand + 40.0))
        .collect();
    let demand = (0..dims.items * dims.destinations)
        .map(|_| random_value(rng, 5.0, 12.0))
        .collect();
    let capacity = (0..dims.conveyances)
        .map(|_| random_value(rng, total + 10.0, total + 40.0))
        .collect();
    let mut level = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(0.55..0.95)).collect() };
    MmstpModel {
        dims,
        cost,
        supply,
        demand,
        capacity,
        gamma: level(dims.items * dims.sources),
        beta: level(dims.items * dims.destinations),
        delta: level(dims.conveyances),
        forbidden: BTreeSet::new(),
    }
}

/// Small LP with integer data; a mix of optimal, infeasible and unbounded.
pub fn random_small_lp(rng: &mut ChaCha8Rng, max_columns: usize, max_rows: usize) -> StandardLp {
    let columns = rng.gen_range(1..=max_columns);
    let rows = rng.gen_range(1..=max_rows);
    let objective = (0..columns).map(|_| rng.gen_range(-5..=5) as f64).collect();
    let mut lp = StandardLp::new(objective);
    for _ in 0..rows {
        let coeffs = (0..columns).map(|_| rng.gen_range(-4..=6) as f64).collect();
        let relation = match rng.gen_range(0..5) {
            0 | 1 => Relation::Le,
            2 | 3 => Relation::Ge,
            _ => Relation::Eq,
        };
        lp = lp.with_row(coeffs, relation, rng.gen_range(-6..=15) as f64);
    }
    lp
}
