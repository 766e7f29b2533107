//! The uncertain multi-objective multi-item solid transportation model.
//!
//! Rust-side indices are 0-based. Everything a user reads (diagnostics, file
//! formats, LP column names) is rendered 1-based.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::uncertain::UncertainValue;

/// Index-set sizes of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    /// Sources `i`.
    #[serde(rename = "m")]
    pub sources: usize,
    /// Destinations `j`.
    #[serde(rename = "n")]
    pub destinations: usize,
    /// Conveyances `k`.
    #[serde(rename = "l")]
    pub conveyances: usize,
    /// Items `p`.
    #[serde(rename = "r")]
    pub items: usize,
    /// Objectives `t`.
    #[serde(rename = "K")]
    pub objectives: usize,
}

impl Dimensions {
    pub fn route_count(&self) -> usize {
        self.items * self.sources * self.destinations * self.conveyances
    }

    pub fn cost_count(&self) -> usize {
        self.objectives * self.route_count()
    }

    /// Position of a route in `[p][i][j][k]` row-major order.
    pub fn route_index(&self, r: Route) -> usize {
        ((r.item * self.sources + r.source) * self.destinations + r.destination) * self.conveyances
            + r.conveyance
    }

    pub fn contains(&self, r: Route) -> bool {
        r.item < self.items
            && r.source < self.sources
            && r.destination < self.destinations
            && r.conveyance < self.conveyances
    }

    /// All routes in `[p][i][j][k]` row-major order.
    pub fn routes(&self) -> impl Iterator<Item = Route> + '_ {
        let d = *self;
        (0..d.items).flat_map(move |item| {
            (0..d.sources).flat_map(move |source| {
                (0..d.destinations).flat_map(move |destination| {
                    (0..d.conveyances).map(move |conveyance| Route {
                        item,
                        source,
                        destination,
                        conveyance,
                    })
                })
            })
        })
    }
}

/// A `(p, i, j, k)` tuple: item `p` from source `i` to destination `j` on conveyance `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Route {
    pub item: usize,
    pub source: usize,
    pub destination: usize,
    pub conveyance: usize,
}

impl Route {
    pub fn new(item: usize, source: usize, destination: usize, conveyance: usize) -> Self {
        Self {
            item,
            source,
            destination,
            conveyance,
        }
    }

    /// Builds a route from 1-based `[p, i, j, k]`; `None` if any index is 0.
    pub fn from_one_based(pijk: [usize; 4]) -> Option<Self> {
        if pijk.contains(&0) {
            return None;
        }
        Some(Self::new(pijk[0] - 1, pijk[1] - 1, pijk[2] - 1, pijk[3] - 1))
    }

    pub fn one_based(&self) -> [usize; 4] {
        [
            self.item + 1,
            self.source + 1,
            self.destination + 1,
            self.conveyance + 1,
        ]
    }

    /// Column name used in exports: `x_p{p}_i{i}_j{j}_k{k}`.
    pub fn column_name(&self) -> String {
        let [p, i, j, k] = self.one_based();
        format!("x_p{p}_i{i}_j{j}_k{k}")
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, i, j, k] = self.one_based();
        write!(f, "(p={p}, i={i}, j={j}, k={k})")
    }
}

/// One validation finding, located by a key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("objective index {index} out of range (model has {count} objectives)")]
    ObjectiveOutOfRange { index: usize, count: usize },
    #[error("decision tensor has {got} entries, model has {expected} routes")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("invalid model:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

pub(crate) fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A complete uncertain instance.
///
/// Tensors are stored flat in row-major order: `cost` is `[t][p][i][j][k]`,
/// `supply` and `gamma` are `[p][i]`, `demand` and `beta` are `[p][j]`,
/// `capacity` and `delta` are `[k]`. Fields are public so that malformed
/// instances can be represented and reported by [`MmstpModel::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct MmstpModel {
    pub dims: Dimensions,
    pub cost: Vec<UncertainValue>,
    pub supply: Vec<UncertainValue>,
    pub demand: Vec<UncertainValue>,
    pub capacity: Vec<UncertainValue>,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta: Vec<f64>,
    /// Routes whose shipment is fixed to zero.
    pub forbidden: BTreeSet<Route>,
}

impl MmstpModel {
    /// Returns one diagnostic per violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let d = self.dims;
        let mut diags = Vec::new();

        for (name, size) in [
            ("dimensions.m", d.sources),
            ("dimensions.n", d.destinations),
            ("dimensions.l", d.conveyances),
            ("dimensions.r", d.items),
            ("dimensions.K", d.objectives),
        ] {
            if size == 0 {
                diags.push(Diagnostic::new(name, "must be a positive integer"));
            }
        }

        let shapes = [
            ("cost", self.cost.len(), d.cost_count()),
            ("supply", self.supply.len(), d.items * d.sources),
            ("demand", self.demand.len(), d.items * d.destinations),
            ("capacity", self.capacity.len(), d.conveyances),
            ("gamma", self.gamma.len(), d.items * d.sources),
            ("beta", self.beta.len(), d.items * d.destinations),
            ("delta", self.delta.len(), d.conveyances),
        ];
        let mut shapes_ok = true;
        for (name, got, expected) in shapes {
            if got != expected {
                shapes_ok = false;
                diags.push(Diagnostic::new(
                    name,
                    format!("dimension mismatch: {got} entries, expected {expected}"),
                ));
            }
        }

        if shapes_ok {
            let rc = d.route_count();
            for (idx, v) in self.cost.iter().enumerate() {
                if let Err(e) = v.check() {
                    let t = idx / rc;
                    let r = d.routes().nth(idx % rc).expect("index within route count");
                    let [p, i, j, k] = r.one_based();
                    diags.push(Diagnostic::new(
                        format!("cost[t={},p={p},i={i},j={j},k={k}]", t + 1),
                        e.to_string(),
                    ));
                }
            }
            let pair = |a: usize, b: usize, n: usize| (a / n + 1, a % n + 1, b);
            for (idx, v) in self.supply.iter().enumerate() {
                if let Err(e) = v.check() {
                    let (p, i, _) = pair(idx, 0, d.sources);
                    diags.push(Diagnostic::new(format!("supply[p={p},i={i}]"), e.to_string()));
                }
            }
            for (idx, v) in self.demand.iter().enumerate() {
                if let Err(e) = v.check() {
                    let (p, j, _) = pair(idx, 0, d.destinations);
                    diags.push(Diagnostic::new(format!("demand[p={p},j={j}]"), e.to_string()));
                }
            }
            for (k, v) in self.capacity.iter().enumerate() {
                if let Err(e) = v.check() {
                    diags.push(Diagnostic::new(format!("capacity[k={}]", k + 1), e.to_string()));
                }
            }
            let levels = [
                ("gamma", &self.gamma, d.sources, "i"),
                ("beta", &self.beta, d.destinations, "j"),
            ];
            for (name, values, width, label) in levels {
                for (idx, &a) in values.iter().enumerate() {
                    if !(a > 0.0 && a < 1.0) {
                        diags.push(Diagnostic::new(
                            format!("{name}[p={},{label}={}]", idx / width + 1, idx % width + 1),
                            format!("confidence level must lie in (0,1), got {a}"),
                        ));
                    }
                }
            }
            for (k, &a) in self.delta.iter().enumerate() {
                if !(a > 0.0 && a < 1.0) {
                    diags.push(Diagnostic::new(
                        format!("delta[k={}]", k + 1),
                        format!("confidence level must lie in (0,1), got {a}"),
                    ));
                }
            }
        }

        for r in &self.forbidden {
            if !d.contains(*r) {
                diags.push(Diagnostic::new(
                    "forbidden",
                    format!("route {r} lies outside the index set"),
                ));
            }
        }
        diags
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(diags))
        }
    }

    pub fn cost(&self, objective: usize, route: Route) -> &UncertainValue {
        &self.cost[objective * self.dims.route_count() + self.dims.route_index(route)]
    }

    pub fn supply(&self, item: usize, source: usize) -> &UncertainValue {
        &self.supply[item * self.dims.sources + source]
    }

    pub fn demand(&self, item: usize, destination: usize) -> &UncertainValue {
        &self.demand[item * self.dims.destinations + destination]
    }

    pub fn is_forbidden(&self, route: Route) -> bool {
        self.forbidden.contains(&route)
    }

    /// `E[f_t(x, ξ)] = Σ E[ξ^{tp}_{ijk}]·x^p_{ijk}`, by linearity of expectation.
    pub fn objective_expectation(&self, objective: usize, x: &DecisionTensor) -> Result<f64, ModelError> {
        if objective >= self.dims.objectives {
            return Err(ModelError::ObjectiveOutOfRange {
                index: objective,
                count: self.dims.objectives,
            });
        }
        let rc = self.dims.route_count();
        if x.values.len() != rc {
            return Err(ModelError::ShapeMismatch {
                expected: rc,
                got: x.values.len(),
            });
        }
        let costs = &self.cost[objective * rc..(objective + 1) * rc];
        Ok(costs
            .iter()
            .zip(&x.values)
            .map(|(c, q)| c.expected_value() * q)
            .sum())
    }
}

/// A shipment plan `x^p_{ijk}`, stored flat in `[p][i][j][k]` order.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTensor {
    pub dims: Dimensions,
    pub values: Vec<f64>,
}

impl DecisionTensor {
    pub fn zeros(dims: Dimensions) -> Self {
        Self {
            dims,
            values: vec![0.0; dims.route_count()],
        }
    }

    pub fn get(&self, route: Route) -> f64 {
        self.values[self.dims.route_index(route)]
    }

    pub fn set(&mut self, route: Route, amount: f64) {
        let idx = self.dims.route_index(route);
        self.values[idx] = amount;
    }

    /// Routes carrying more than `threshold`, with their amounts.
    pub fn shipments(&self, threshold: f64) -> Vec<(Route, f64)> {
        self.dims
            .routes()
            .zip(&self.values)
            .filter(|(_, &q)| q > threshold)
            .map(|(r, &q)| (r, q))
            .collect()
    }

    /// Smallest entry; a plan is sign-feasible when this is `>= -tol`.
    pub fn min_entry(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> MmstpModel {
        let dims = Dimensions {
            sources: 1,
            destinations: 2,
            conveyances: 1,
            items: 1,
            objectives: 2,
        };
        let n = |e| UncertainValue::normal(e, 1.0).unwrap();
        MmstpModel {
            dims,
            cost: vec![n(1.0), n(2.0), n(3.0), n(4.0)],
            supply: vec![n(10.0)],
            demand: vec![n(2.0), n(3.0)],
            capacity: vec![n(20.0)],
            gamma: vec![0.9],
            beta: vec![0.9, 0.9],
            delta: vec![0.9],
            forbidden: BTreeSet::new(),
        }
    }

    #[test]
    fn route_order_is_row_major() {
        let dims = Dimensions {
            sources: 3,
            destinations: 4,
            conveyances: 2,
            items: 2,
            objectives: 2,
        };
        for (idx, r) in dims.routes().enumerate() {
            assert_eq!(dims.route_index(r), idx);
        }
        assert_eq!(dims.routes().count(), 48);
        assert_eq!(Route::new(0, 2, 0, 0).column_name(), "x_p1_i3_j1_k1");
        assert_eq!(Route::from_one_based([1, 3, 1, 1]), Some(Route::new(0, 2, 0, 0)));
        assert_eq!(Route::from_one_based([0, 3, 1, 1]), None);
    }

    #[test]
    fn valid_model_has_no_diagnostics() {
        assert!(tiny().validate().is_empty());
    }

    #[test]
    fn confidence_out_of_range() {
        let mut m = tiny();
        m.gamma[0] = 1.0;
        let diags = m.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].path, "gamma[p=1,i=1]");
        assert!(diags[0].message.contains("confidence level must lie in (0,1)"));
    }

    #[test]
    fn dimension_mismatch() {
        let mut m = tiny();
        m.cost.pop();
        let diags = m.validate();
        assert!(diags.iter().any(|d| d.path == "cost" && d.message.contains("dimension mismatch")));
    }

    #[test]
    fn bad_parameter_and_forbidden_out_of_bounds() {
        let mut m = tiny();
        m.capacity[0] = UncertainValue::Normal { e: 1.0, sigma: -1.0 };
        m.forbidden.insert(Route::new(0, 0, 5, 0));
        let diags = m.validate();
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].path, "capacity[k=1]");
        assert_eq!(diags[1].path, "forbidden");
    }

    #[test]
    fn expectation_is_linear_in_costs_means() {
        let m = tiny();
        let mut x = DecisionTensor::zeros(m.dims);
        assert_eq!(m.objective_expectation(0, &x).unwrap(), 0.0);
        x.set(Route::new(0, 0, 1, 0), 2.0);
        assert_eq!(m.objective_expectation(0, &x).unwrap(), 4.0);
        assert_eq!(m.objective_expectation(1, &x).unwrap(), 8.0);
        assert!(matches!(
            m.objective_expectation(2, &x),
            Err(ModelError::ObjectiveOutOfRange { index: 2, count: 2 })
        ));
    }
}
