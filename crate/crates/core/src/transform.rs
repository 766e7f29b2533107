//! Deterministic equivalent of the uncertain model.
//!
//! Objectives are replaced by their expected values and each chance
//! constraint by a crisp bound at the matching quantile:
//!
//! * supply:   `Σ_{j,k} x^p_{ijk} ≤ Φ⁻¹_{a^p_i}(1 − γ^p_i)`
//! * demand:   `Σ_{i,k} x^p_{ijk} ≥ Φ⁻¹_{b^p_j}(β^p_j)`
//! * capacity: `Σ_{p,i,j} x^p_{ijk} ≤ Φ⁻¹_{e_k}(1 − δ_k)`
//!
//! Forbidden routes never become LP columns.

use crate::lp::{LpRow, Relation, StandardLp};
use crate::model::{DecisionTensor, Dimensions, MmstpModel, ModelError, Route};
use crate::uncertain::{ConfidenceLevel, UncertainValue};

/// Half-width of the band in which [`chance_holds`] treats a boundary as met.
pub const CHANCE_TOL: f64 = 1e-9;

/// Which side of the uncertain parameter the shipped total sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `M{total − ã ≤ 0} ≥ γ`
    Supply,
    /// `M{b̃ − total ≤ 0} ≥ β`
    Demand,
    /// `M{total − ẽ ≤ 0} ≥ δ`
    Capacity,
}

impl ConstraintKind {
    pub fn relation(self) -> Relation {
        match self {
            ConstraintKind::Demand => Relation::Ge,
            ConstraintKind::Supply | ConstraintKind::Capacity => Relation::Le,
        }
    }
}

/// Crisp right-hand side equivalent to the chance constraint.
pub fn crisp_bound(kind: ConstraintKind, param: &UncertainValue, alpha: ConfidenceLevel) -> f64 {
    match kind {
        ConstraintKind::Demand => param.inv_cdf(alpha),
        ConstraintKind::Supply | ConstraintKind::Capacity => param.inv_cdf(alpha.complement()),
    }
}

/// Evaluates the chance constraint directly from `Φ`, without quantiles.
pub fn chance_holds(kind: ConstraintKind, param: &UncertainValue, lhs_total: f64, alpha: ConfidenceLevel) -> bool {
    let measure = match kind {
        ConstraintKind::Demand => param.cdf(lhs_total),
        ConstraintKind::Supply | ConstraintKind::Capacity => 1.0 - param.cdf(lhs_total),
    };
    measure >= alpha.get() - CHANCE_TOL
}

/// A labelled crisp constraint row over the full route tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub kind: ConstraintKind,
    /// 1-based label, e.g. `supply_p1_i2`.
    pub name: String,
    pub rhs: f64,
    routes: Vec<Route>,
}

impl ConstraintRow {
    /// Routes summed by this row (forbidden ones excluded).
    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn lhs(&self, x: &DecisionTensor) -> f64 {
        self.routes.iter().map(|r| x.get(*r)).sum()
    }

    pub fn violation(&self, x: &DecisionTensor) -> f64 {
        let lhs = self.lhs(x);
        match self.kind {
            ConstraintKind::Demand => (self.rhs - lhs).max(0.0),
            _ => (lhs - self.rhs).max(0.0),
        }
    }
}

/// The crisp multi-objective LP.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicModel {
    pub dims: Dimensions,
    /// `E[ξ^{tp}_{ijk}]`, one `[p][i][j][k]` block per objective.
    pub obj_coeffs: Vec<Vec<f64>>,
    /// `[p][i]`
    pub supply_rhs: Vec<f64>,
    /// `[p][j]`
    pub demand_rhs: Vec<f64>,
    /// `[k]`
    pub capacity_rhs: Vec<f64>,
    columns: Vec<Route>,
    column_of: Vec<Option<usize>>,
}

/// Builds the deterministic equivalent of a validated model.
pub fn transform(model: &MmstpModel) -> Result<DeterministicModel, ModelError> {
    model.ensure_valid()?;
    let d = model.dims;
    let rc = d.route_count();
    let level = |a: f64| ConfidenceLevel::new(a).expect("validated confidence level");

    let obj_coeffs = (0..d.objectives)
        .map(|t| model.cost[t * rc..(t + 1) * rc].iter().map(UncertainValue::expected_value).collect())
        .collect();
    let supply_rhs = model
        .supply
        .iter()
        .zip(&model.gamma)
        .map(|(v, &g)| crisp_bound(ConstraintKind::Supply, v, level(g)))
        .collect();
    let demand_rhs = model
        .demand
        .iter()
        .zip(&model.beta)
        .map(|(v, &b)| crisp_bound(ConstraintKind::Demand, v, level(b)))
        .collect();
    let capacity_rhs = model
        .capacity
        .iter()
        .zip(&model.delta)
        .map(|(v, &a)| crisp_bound(ConstraintKind::Capacity, v, level(a)))
        .collect();

    let mut columns = Vec::with_capacity(rc);
    let mut column_of = vec![None; rc];
    for r in d.routes() {
        if !model.is_forbidden(r) {
            column_of[d.route_index(r)] = Some(columns.len());
            columns.push(r);
        }
    }

    Ok(DeterministicModel {
        dims: d,
        obj_coeffs,
        supply_rhs,
        demand_rhs,
        capacity_rhs,
        columns,
        column_of,
    })
}

impl DeterministicModel {
    pub fn objectives(&self) -> usize {
        self.dims.objectives
    }

    /// Active routes, in LP column order.
    pub fn columns(&self) -> &[Route] {
        &self.columns
    }

    pub fn column_of(&self, route: Route) -> Option<usize> {
        self.column_of[self.dims.route_index(route)]
    }

    /// Supply rows `[p][i]`, then demand rows `[p][j]`, then capacity rows `[k]`.
    pub fn constraint_rows(&self) -> Vec<ConstraintRow> {
        let d = self.dims;
        let active = |r: &Route| self.column_of(*r).is_some();
        let mut rows = Vec::new();
        for p in 0..d.items {
            for i in 0..d.sources {
                rows.push(ConstraintRow {
                    kind: ConstraintKind::Supply,
                    name: format!("supply_p{}_i{}", p + 1, i + 1),
                    rhs: self.supply_rhs[p * d.sources + i],
                    routes: d.routes().filter(|r| r.item == p && r.source == i).filter(active).collect(),
                });
            }
        }
        for p in 0..d.items {
            for j in 0..d.destinations {
                rows.push(ConstraintRow {
                    kind: ConstraintKind::Demand,
                    name: format!("demand_p{}_j{}", p + 1, j + 1),
                    rhs: self.demand_rhs[p * d.destinations + j],
                    routes: d.routes().filter(|r| r.item == p && r.destination == j).filter(active).collect(),
                });
            }
        }
        for k in 0..d.conveyances {
            rows.push(ConstraintRow {
                kind: ConstraintKind::Capacity,
                name: format!("capacity_k{}", k + 1),
                rhs: self.capacity_rhs[k],
                routes: d.routes().filter(|r| r.conveyance == k).filter(active).collect(),
            });
        }
        rows
    }

    /// `Σ_t weights[t]·E[f_t]` restricted to active columns.
    pub fn weighted_column_costs(&self, weights: &[f64]) -> Vec<f64> {
        self.columns
            .iter()
            .map(|r| {
                let idx = self.dims.route_index(*r);
                weights
                    .iter()
                    .zip(&self.obj_coeffs)
                    .map(|(w, c)| w * c[idx])
                    .sum()
            })
            .collect()
    }

    /// The LP `min objective·x` over the deterministic feasible region.
    pub fn standard_lp(&self, objective: Vec<f64>) -> StandardLp {
        let mut lp = StandardLp::new(objective);
        for row in self.constraint_rows() {
            let mut coeffs = vec![0.0; self.columns.len()];
            for r in row.routes() {
                coeffs[self.column_of(*r).expect("row routes are active")] = 1.0;
            }
            lp.rows.push(LpRow::new(coeffs, row.kind.relation(), row.rhs));
        }
        lp
    }

    /// Scatters LP column values back onto the full route tensor.
    pub fn decision_from_columns(&self, values: &[f64]) -> DecisionTensor {
        let mut x = DecisionTensor::zeros(self.dims);
        for (r, &v) in self.columns.iter().zip(values) {
            x.set(*r, v);
        }
        x
    }

    /// Gathers the active-column values of a full tensor.
    pub fn columns_from_decision(&self, x: &DecisionTensor) -> Vec<f64> {
        self.columns.iter().map(|r| x.get(*r)).collect()
    }

    /// `E[f_t]` at `x` for every objective.
    pub fn objective_values(&self, x: &DecisionTensor) -> Vec<f64> {
        self.obj_coeffs
            .iter()
            .map(|c| c.iter().zip(&x.values).map(|(a, v)| a * v).sum())
            .collect()
    }

    /// Largest violation over all rows, negative entries and forbidden routes.
    pub fn max_violation(&self, x: &DecisionTensor) -> f64 {
        let rows = self
            .constraint_rows()
            .iter()
            .map(|r| r.violation(x))
            .fold(0.0, f64::max);
        let sign = (-x.min_entry()).max(0.0);
        let forbidden = self
            .dims
            .routes()
            .filter(|r| self.column_of(*r).is_none())
            .map(|r| x.get(r).abs())
            .fold(0.0, f64::max);
        rows.max(sign).max(forbidden)
    }
}
