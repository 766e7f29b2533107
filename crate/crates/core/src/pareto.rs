//! Weight-simplex sweeps and Pareto dominance checks.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::DecisionTensor;
use crate::scalarize::{solve_weighted, SolveError, WeightVector};
use crate::transform::DeterministicModel;

/// Differences at or below this are ties for dominance purposes.
pub const DOMINANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParetoError {
    #[error("sweep needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("objective vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub weights: WeightVector,
    pub objective_values: Vec<f64>,
    /// Weighted-sum optimum at `weights`.
    pub scalar_value: f64,
    pub x: DecisionTensor,
    /// Set when another point of the same sweep dominates this one.
    pub dominated: bool,
}

/// `a` dominates `b`: no worse in every objective and strictly better in one.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, ParetoError> {
    if a.len() != b.len() {
        return Err(ParetoError::LengthMismatch(a.len(), b.len()));
    }
    let no_worse = a.iter().zip(b).all(|(x, y)| *x <= y + DOMINANCE_TOL);
    let better = a.iter().zip(b).any(|(x, y)| *x < y - DOMINANCE_TOL);
    Ok(no_worse && better)
}

/// True when no pool member dominates the candidate.
pub fn certify_nondominated(candidate: &FrontierPoint, pool: &[FrontierPoint]) -> bool {
    !pool
        .iter()
        .any(|p| dominates(&p.objective_values, &candidate.objective_values).unwrap_or(false))
}

/// Weight vectors of the simplex lattice with `steps` points per edge,
/// ordered with the first weight descending (for two objectives:
/// `(1, 0), …, (0, 1)`).
pub fn simplex_lattice(objectives: usize, steps: usize) -> Result<Vec<WeightVector>, ParetoError> {
    if steps < 2 {
        return Err(ParetoError::TooFewSteps(steps));
    }
    let resolution = steps - 1;
    let mut out = Vec::new();
    let mut parts = vec![0usize; objectives];
    compositions(resolution, 0, &mut parts, &mut |c| {
        let w: Vec<f64> = c.iter().map(|&n| n as f64 / resolution as f64).collect();
        out.push(w);
    });
    Ok(out
        .into_iter()
        .map(|w| WeightVector::new(w).expect("lattice weights lie on the simplex"))
        .collect())
}

fn compositions(remaining: usize, pos: usize, parts: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        emit(parts);
        return;
    }
    for n in (0..=remaining).rev() {
        parts[pos] = n;
        compositions(remaining - n, pos + 1, parts, emit);
    }
}

/// Solves the weighted problem at every lattice weight. Points come back in
/// lattice order, unfiltered, with dominated ones flagged.
pub fn sweep(det: &DeterministicModel, steps: usize) -> Result<Vec<FrontierPoint>, ParetoError> {
    let grid = simplex_lattice(det.objectives(), steps)?;
    let mut points = grid
        .into_par_iter()
        .map(|w| {
            solve_weighted(det, &w).map(|r| FrontierPoint {
                weights: w,
                objective_values: r.objective_values,
                scalar_value: r.scalar_value,
                x: r.x,
                dominated: false,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let flags: Vec<bool> = points
        .iter()
        .map(|p| !certify_nondominated(p, &points))
        .collect();
    for (p, f) in points.iter_mut().zip(flags) {
        p.dominated = f;
    }
    Ok(points)
}
