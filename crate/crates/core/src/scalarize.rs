//! Weighted-sum and ideal-point distance scalarizations.
//!
//! The weighted method is a single LP. The distance method minimizes
//! `F(x) = Σ_t (E[f_t](x) − E*_t)²` over the same polyhedron with a
//! fully-corrective Frank–Wolfe scheme: the LP solver is the linear
//! minimization oracle, and after every oracle call the iterate is
//! re-optimized over the convex hull of all vertices found so far. Since `F`
//! only depends on `x` through the `K` objective values, that inner problem is
//! a nearest-point problem in `R^K`, solved exactly with Wolfe's algorithm.
//! The reported certificate is the Frank–Wolfe duality gap `∇F(x)·(x − s)`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lp::{gauss_solve, solve_lp, solve_lp_lexicographic, LpError, LpStatus};
use crate::model::DecisionTensor;
use crate::transform::DeterministicModel;

/// Allowed deviation of a weight vector's sum from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Oracle-call cap for the distance method.
pub const MAX_ORACLE_CALLS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("deterministic model is infeasible")]
    Infeasible,
    #[error("internal inconsistency: LP reported unbounded on a bounded transportation polytope")]
    Unbounded,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("expected {expected} objectives, got {got}")]
    ObjectiveCount { expected: usize, got: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self, SolveError> {
        if lambda.is_empty() {
            return Err(SolveError::InvalidWeights("no weights given".into()));
        }
        if let Some(w) = lambda.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(SolveError::InvalidWeights(format!("weight {w} is not a nonnegative number")));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(SolveError::InvalidWeights(format!("weights must sum to 1, got {sum}")));
        }
        Ok(Self(lambda))
    }

    pub fn uniform(k: usize) -> Self {
        Self(vec![1.0 / k as f64; k])
    }

    /// All weight on objective `t`.
    pub fn unit(k: usize, t: usize) -> Self {
        let mut w = vec![0.0; k];
        w[t] = 1.0;
        Self(w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&w| w > 0.0)
    }

    /// `Σ λ_t·values[t]`.
    pub fn combine(&self, values: &[f64]) -> f64 {
        self.0.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Individual objective minima `(E*_1, …, E*_K)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealPoint {
    pub e_star: Vec<f64>,
}

impl IdealPoint {
    /// Euclidean distance from `values` to the ideal point.
    pub fn distance(&self, values: &[f64]) -> f64 {
        self.e_star
            .iter()
            .zip(values)
            .map(|(e, v)| (v - e).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Weighted,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// The distance method hit its oracle-call cap; the report holds the best iterate.
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: DecisionTensor,
    /// `E[f_t]` at `x`.
    pub objective_values: Vec<f64>,
    /// Weighted sum, or Euclidean distance to the ideal point.
    pub scalar_value: f64,
    pub method: Method,
    pub status: SolveStatus,
    /// Simplex pivots (weighted) or oracle calls (distance).
    pub iterations: usize,
    pub weights: Option<WeightVector>,
    pub ideal: Option<IdealPoint>,
    /// Final Frank–Wolfe duality gap (distance only).
    pub gap: Option<f64>,
    pub diagnostic: Option<String>,
}

fn lp_columns(det: &DeterministicModel, weights: &[f64]) -> Result<(Vec<f64>, usize), SolveError> {
    let lp = det.standard_lp(det.weighted_column_costs(weights));
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok((sol.x, sol.iterations)),
        LpStatus::Infeasible => Err(SolveError::Infeasible),
        LpStatus::Unbounded => Err(SolveError::Unbounded),
    }
}

/// Minimizes `Σ_t λ_t·E[f_t]` over the deterministic feasible region.
pub fn solve_weighted(det: &DeterministicModel, w: &WeightVector) -> Result<SolveReport, SolveError> {
    if w.len() != det.objectives() {
        return Err(SolveError::ObjectiveCount {
            expected: det.objectives(),
            got: w.len(),
        });
    }
    // Alternate optima: take the lexicographically smallest (E[f_1], E[f_2], …)
    // point of the optimal face, which is Pareto optimal even for zero weights.
    let lp = det.standard_lp(det.weighted_column_costs(w.as_slice()));
    let tie_breakers: Vec<Vec<f64>> = (0..det.objectives())
        .map(|t| det.weighted_column_costs(WeightVector::unit(det.objectives(), t).as_slice()))
        .collect();
    let sol = solve_lp_lexicographic(&lp, &tie_breakers)?;
    let (cols, pivots) = match sol.status {
        LpStatus::Optimal => (sol.x, sol.iterations),
        LpStatus::Infeasible => return Err(SolveError::Infeasible),
        LpStatus::Unbounded => return Err(SolveError::Unbounded),
    };
    let x = det.decision_from_columns(&cols);
    let objective_values = det.objective_values(&x);
    Ok(SolveReport {
        scalar_value: w.combine(&objective_values),
        x,
        objective_values,
        method: Method::Weighted,
        status: SolveStatus::Optimal,
        iterations: pivots,
        weights: Some(w.clone()),
        ideal: None,
        gap: None,
        diagnostic: None,
    })
}

/// Solves each single-objective LP; the `K` solves run in parallel.
pub fn ideal_point(det: &DeterministicModel) -> Result<IdealPoint, SolveError> {
    let k = det.objectives();
    let e_star = (0..k)
        .into_par_iter()
        .map(|t| {
            let costs = det.weighted_column_costs(WeightVector::unit(k, t).as_slice());
            lp_columns(det, WeightVector::unit(k, t).as_slice()).map(|(cols, _)| dot(&costs, &cols))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdealPoint { e_star })
}

/// Minimizes the Euclidean distance to `ideal`, stopping once the duality gap is `<= tol`.
pub fn solve_distance(det: &DeterministicModel, ideal: &IdealPoint, tol: f64) -> Result<SolveReport, SolveError> {
    solve_distance_capped(det, ideal, tol, MAX_ORACLE_CALLS)
}

/// [`solve_distance`] with an explicit oracle-call cap.
pub fn solve_distance_capped(
    det: &DeterministicModel,
    ideal: &IdealPoint,
    tol: f64,
    max_oracle_calls: usize,
) -> Result<SolveReport, SolveError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SolveError::InvalidTolerance(tol));
    }
    let k = det.objectives();
    if ideal.e_star.len() != k {
        return Err(SolveError::ObjectiveCount {
            expected: k,
            got: ideal.e_star.len(),
        });
    }

    // Shifted objective image of a column vector: E[f](x) − E*.
    let image = |cols: &[f64]| -> Vec<f64> {
        let x = det.decision_from_columns(cols);
        det.objective_values(&x)
            .iter()
            .zip(&ideal.e_star)
            .map(|(v, e)| v - e)
            .collect()
    };

    let (start, _) = lp_columns(det, WeightVector::uniform(k).as_slice())?;
    let mut atoms: Vec<(Vec<f64>, Vec<f64>)> = vec![(image(&start), start)];
    let mut weights = vec![1.0];
    let mut calls = 1;
    let mut gap;
    let converged = loop {
        let y = combine(atoms.iter().map(|a| a.0.as_slice()), &weights, k);
        let (vertex, _) = lp_columns(det, &y)?;
        calls += 1;
        let ys = image(&vertex);
        gap = 2.0 * y.iter().zip(&ys).map(|(a, b)| a * (a - b)).sum::<f64>();
        if gap <= tol {
            break true;
        }
        if calls >= max_oracle_calls {
            break false;
        }
        if !atoms.iter().any(|a| a.1 == vertex) {
            atoms.push((ys, vertex));
        }
        let points: Vec<&[f64]> = atoms.iter().map(|a| a.0.as_slice()).collect();
        weights = min_norm_point(&points);
        let kept: Vec<usize> = (0..atoms.len()).filter(|&i| weights[i] > 0.0).collect();
        atoms = kept.iter().map(|&i| atoms[i].clone()).collect();
        weights = kept.iter().map(|&i| weights[i]).collect();
    };

    let n_cols = det.columns().len();
    let mut cols = vec![0.0; n_cols];
    for ((_, v), w) in atoms.iter().zip(&weights) {
        for (c, a) in cols.iter_mut().zip(v) {
            *c += w * a;
        }
    }
    let x = det.decision_from_columns(&cols);
    let objective_values = det.objective_values(&x);
    Ok(SolveReport {
        scalar_value: ideal.distance(&objective_values),
        x,
        objective_values,
        method: Method::Distance,
        status: if converged {
            SolveStatus::Optimal
        } else {
            SolveStatus::IterationLimit
        },
        iterations: calls,
        weights: None,
        ideal: Some(ideal.clone()),
        gap: Some(gap),
        diagnostic: (!converged).then(|| {
            format!("oracle-call cap {max_oracle_calls} reached with duality gap {gap:e} > tol {tol:e}")
        }),
    })
}

fn combine<'a>(points: impl Iterator<Item = &'a [f64]>, weights: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (p, w) in points.zip(weights) {
        for (o, v) in out.iter_mut().zip(p) {
            *o += w * v;
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Wolfe's algorithm: convex weights of the point of minimum norm in `conv(points)`.
fn min_norm_point(points: &[&[f64]]) -> Vec<f64> {
    let n = points.len();
    let dim = points[0].len();
    let scale = points.iter().map(|p| dot(p, p)).fold(1.0, f64::max);
    let zero = 1e-12;

    let first = (0..n)
        .min_by(|&a, &b| dot(points[a], points[a]).total_cmp(&dot(points[b], points[b])))
        .expect("at least one point");
    let mut support = vec![first];
    let mut w = vec![1.0];

    for _ in 0..(10 * n + 10) {
        let x = combine(support.iter().map(|&i| points[i]), &w, dim);
        let xx = dot(&x, &x);
        let j = (0..n)
            .min_by(|&a, &b| dot(&x, points[a]).total_cmp(&dot(&x, points[b])))
            .expect("at least one point");
        if dot(&x, points[j]) >= xx - zero * scale || support.contains(&j) {
            break;
        }
        support.push(j);
        w.push(0.0);
        loop {
            let Some(u) = affine_min_norm(&support.iter().map(|&i| points[i]).collect::<Vec<_>>()) else {
                // affinely dependent support: drop the newcomer
                support.pop();
                w.pop();
                break;
            };
            if u.iter().all(|&v| v > zero) {
                w = u;
                break;
            }
            let theta = w
                .iter()
                .zip(&u)
                .filter(|(_, &ui)| ui <= zero)
                .map(|(&wi, &ui)| wi / (wi - ui))
                .fold(1.0, f64::min);
            for (wi, ui) in w.iter_mut().zip(&u) {
                *wi = (1.0 - theta) * *wi + theta * ui;
            }
            let keep: Vec<usize> = (0..support.len()).filter(|&i| w[i] > zero).collect();
            support = keep.iter().map(|&i| support[i]).collect();
            w = keep.iter().map(|&i| w[i]).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= total);
        }
    }

    let mut full = vec![0.0; n];
    for (&i, &wi) in support.iter().zip(&w) {
        full[i] = wi;
    }
    full
}

/// Minimum-norm point of the affine hull: solves `[G 1; 1ᵀ 0][u; μ] = [0; 1]`.
fn affine_min_norm(points: &[&[f64]]) -> Option<Vec<f64>> {
    let s = points.len();
    let n = s + 1;
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n];
    for r in 0..s {
        for c in 0..s {
            a[r * n + c] = dot(points[r], points[c]);
        }
        a[r * n + s] = 1.0;
        a[s * n + r] = 1.0;
    }
    b[s] = 1.0;
    let sol = gauss_solve(n, &mut a, &mut b)?;
    Some(sol[..s].to_vec())
}
