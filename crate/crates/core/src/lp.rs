//! Dense two-phase primal simplex.
//!
//! Problems have the form `min c·x` subject to rows `a·x {≤,≥,=} b` and
//! `x ≥ 0`. Entering and leaving variables follow Bland's rule, so the method
//! terminates on the highly degenerate polytopes transportation problems
//! produce. A brute-force basis enumerator is provided as a test oracle.

use thiserror::Error;

/// Smallest magnitude treated as a usable pivot / negative reduced cost.
pub const PIVOT_TOL: f64 = 1e-9;
/// Row residual and phase-one objective allowed at a feasible point.
pub const FEASIBILITY_TOL: f64 = 1e-7;

const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LpRow {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self { coeffs, relation, rhs }
    }

    /// How far `x` is from satisfying the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `min objective·x` over the rows, with every column bounded below by 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardLp {
    pub columns: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl StandardLp {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            columns: objective.len(),
            objective,
            rows: Vec::new(),
        }
    }

    pub fn with_row(mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.rows.push(LpRow::new(coeffs, relation, rhs));
        self
    }

    pub fn check(&self) -> Result<(), LpError> {
        if self.objective.len() != self.columns {
            return Err(LpError::ObjectiveLength {
                expected: self.columns,
                got: self.objective.len(),
            });
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.columns {
                return Err(LpError::RowLength {
                    row: r,
                    expected: self.columns,
                    got: row.coeffs.len(),
                });
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::NonFinite(format!("row {r}")));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows.iter().map(|r| r.violation(x)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("objective has {got} coefficients, expected {expected}")]
    ObjectiveLength { expected: usize, got: usize },
    #[error("row {row} has {got} coefficients, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("pivot limit of {0} reached")]
    PivotLimit(usize),
    #[error("brute-force enumeration limited to {max_columns} columns and {max_rows} rows, got {columns}x{rows}")]
    TooLarge {
        columns: usize,
        rows: usize,
        max_columns: usize,
        max_rows: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal vertex; empty unless `Optimal`.
    pub x: Vec<f64>,
    /// `objective·x`; NaN unless `Optimal`.
    pub objective_value: f64,
    /// Pivots over both phases.
    pub iterations: usize,
    /// Final reduced costs of structural then slack columns; empty unless `Optimal`.
    pub reduced_costs: Vec<f64>,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            x: Vec::new(),
            objective_value: f64::NAN,
            iterations,
            reduced_costs: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    width: usize,
    // rows + 1 objective row, each of width + 1 (last entry is the rhs)
    cells: Vec<f64>,
    basis: Vec<usize>,
    n_rows: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * (self.width + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn obj_row(&self) -> usize {
        self.n_rows
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width + 1;
        let p = self.at(pr, pc);
        for c in 0..w {
            self.cells[pr * w + c] /= p;
        }
        self.cells[pr * w + pc] = 1.0;
        for r in 0..=self.n_rows {
            if r == pr {
                continue;
            }
            let f = self.cells[r * w + pc];
            if f == 0.0 {
                continue;
            }
            for c in 0..w {
                let v = self.cells[pr * w + c];
                if v != 0.0 {
                    self.cells[r * w + c] -= f * v;
                }
            }
            self.cells[r * w + pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Loads `costs` into the objective row, priced out against the basis.
    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width + 1;
        let o = self.obj_row();
        for c in 0..w {
            self.cells[o * w + c] = if c < self.width { costs[c] } else { 0.0 };
        }
        for r in 0..self.n_rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    self.cells[o * w + c] -= cb * self.cells[r * w + c];
                }
            }
        }
    }

    /// Bland's rule iterations. Returns `Ok(true)` when optimal, `Ok(false)` when unbounded.
    fn run(&mut self, allowed: &[bool], pivots: &mut usize) -> Result<bool, LpError> {
        let o = self.obj_row();
        loop {
            let Some(enter) = (0..self.width).find(|&c| allowed[c] && self.at(o, c) < -PIVOT_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.n_rows {
                let a = self.at(r, enter);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if (ratio < best && !tie) || (tie && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, best))
                        }
                    }
                };
            }
            let Some((pr, _)) = leave else {
                return Ok(false);
            };
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::PivotLimit(MAX_PIVOTS));
            }
            self.pivot(pr, enter);
        }
    }
}

/// Solves the LP with a two-phase dense tableau and Bland's pivoting rule.
///
/// Infeasibility and unboundedness are reported through [`LpStatus`]; an
/// `Err` means the input itself was malformed.
pub fn solve_lp(lp: &StandardLp) -> Result<LpSolution, LpError> {
    solve_lp_lexicographic(lp, &[])
}

/// Like [`solve_lp`], then breaks ties among optimal vertices by minimizing
/// each of `tie_breakers` in turn over the optimal face of the objectives
/// before it.
///
/// The face is fixed exactly by complementary slackness: every column whose
/// reduced cost is positive is held at zero for the later stages. The
/// returned point is therefore a vertex of the original polyhedron, and
/// `objective_value` refers to `lp.objective`.
pub fn solve_lp_lexicographic(lp: &StandardLp, tie_breakers: &[Vec<f64>]) -> Result<LpSolution, LpError> {
    lp.check()?;
    let n = lp.columns;
    for c in tie_breakers {
        if c.len() != n {
            return Err(LpError::ObjectiveLength { expected: n, got: c.len() });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("tie-breaking objective".into()));
        }
    }

    // Normalize to rhs >= 0; `>= 0` rows become `<= 0` so their slack can start basic.
    let rows: Vec<(Vec<f64>, Relation, f64)> = lp
        .rows
        .iter()
        .map(|row| {
            let negate = row.rhs < 0.0 || (row.rhs == 0.0 && row.relation == Relation::Ge);
            if negate {
                (
                    row.coeffs.iter().map(|a| -a).collect(),
                    row.relation.flipped(),
                    -row.rhs,
                )
            } else {
                (row.coeffs.clone(), row.relation, row.rhs)
            }
        })
        .collect();

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = n + n_slack;
    let width = art_start + n_art;

    let mut t = Tableau {
        width,
        cells: vec![0.0; (m + 1) * (width + 1)],
        basis: vec![0; m],
        n_rows: m,
    };
    let w = width + 1;
    let (mut slack, mut art) = (n, art_start);
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        t.cells[r * w..r * w + n].copy_from_slice(coeffs);
        t.cells[r * w + width] = *rhs;
        match rel {
            Relation::Le => {
                t.cells[r * w + slack] = 1.0;
                t.basis[r] = slack;
                slack += 1;
            }
            Relation::Ge => {
                t.cells[r * w + slack] = -1.0;
                slack += 1;
                t.cells[r * w + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
            Relation::Eq => {
                t.cells[r * w + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
        }
    }

    let initial = t.cells[..m * w].to_vec();
    let mut pivots = 0;
    if n_art > 0 {
        let mut phase1 = vec![0.0; width];
        phase1[art_start..].iter_mut().for_each(|c| *c = 1.0);
        t.set_costs(&phase1);
        t.run(&vec![true; width], &mut pivots)?;
        let infeasibility = -t.rhs(t.obj_row());
        if infeasibility > FEASIBILITY_TOL {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, pivots));
        }
        // Drive zero-level artificials out; rows with no usable column are redundant.
        for r in 0..m {
            if t.basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&c| t.at(r, c).abs() > PIVOT_TOL) {
                    pivots += 1;
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut allowed: Vec<bool> = (0..width).map(|c| c < art_start).collect();
    let mut costs = vec![0.0; width];
    costs[..n].copy_from_slice(&lp.objective);
    t.set_costs(&costs);
    if !t.run(&allowed, &mut pivots)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, pivots));
    }
    let reduced_costs = (0..art_start).map(|c| t.at(t.obj_row(), c)).collect();
    for tb in tie_breakers {
        for (c, ok) in allowed.iter_mut().enumerate() {
            *ok &= t.at(t.obj_row(), c) <= PIVOT_TOL;
        }
        costs[..n].copy_from_slice(tb);
        t.set_costs(&costs);
        // an unbounded tie-breaker stops refinement at the current vertex
        if !t.run(&allowed, &mut pivots)? {
            break;
        }
    }

    // Recompute the basic values from the original data so that the same
    // basis always yields the same point, whatever pivot path led to it.
    let mut basis_matrix: Vec<f64> = (0..m)
        .flat_map(|r| t.basis.iter().map(move |&c| (r, c)))
        .map(|(r, c)| initial[r * w + c])
        .collect();
    let mut b: Vec<f64> = (0..m).map(|r| initial[r * w + width]).collect();
    let tableau_values: Vec<f64> = (0..m).map(|r| t.rhs(r)).collect();
    let basic_values = match gauss_solve(m, &mut basis_matrix, &mut b) {
        Some(v) if v.iter().zip(&tableau_values).all(|(p, q)| (p - q).abs() <= FEASIBILITY_TOL) => v,
        _ => tableau_values,
    };
    let mut x = vec![0.0; n];
    for (r, &v) in basic_values.iter().enumerate() {
        let c = t.basis[r];
        if c < n {
            x[c] = if v < 0.0 && v > -FEASIBILITY_TOL { 0.0 } else { v };
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: lp.value(&x),
        x,
        iterations: pivots,
        reduced_costs,
    })
}

/// Column guard for [`enumerate_vertices_bruteforce`].
pub const BRUTE_MAX_COLUMNS: usize = 8;
/// Row guard for [`enumerate_vertices_bruteforce`].
pub const BRUTE_MAX_ROWS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub x: Vec<f64>,
    pub value: f64,
}

/// Every basic feasible solution, found by trying each choice of `columns`
/// active constraints among the rows and the bounds `x ≥ 0`.
pub fn enumerate_vertices_bruteforce(lp: &StandardLp) -> Result<Vec<Vertex>, LpError> {
    lp.check()?;
    if lp.columns > BRUTE_MAX_COLUMNS || lp.rows.len() > BRUTE_MAX_ROWS {
        return Err(LpError::TooLarge {
            columns: lp.columns,
            rows: lp.rows.len(),
            max_columns: BRUTE_MAX_COLUMNS,
            max_rows: BRUTE_MAX_ROWS,
        });
    }
    Ok(vertices_of(lp.columns, &lp.rows)
        .into_iter()
        .map(|x| Vertex {
            value: lp.value(&x),
            x,
        })
        .collect())
}

/// Outcome of the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BruteOutcome {
    Infeasible,
    Unbounded,
    Optimal(f64),
}

/// Classifies an LP by enumeration: no vertex means infeasible; a recession
/// direction `d ≥ 0` with `objective·d < 0` means unbounded; otherwise the
/// best vertex value.
pub fn bruteforce_optimum(lp: &StandardLp) -> Result<BruteOutcome, LpError> {
    let vertices = enumerate_vertices_bruteforce(lp)?;
    if vertices.is_empty() {
        return Ok(BruteOutcome::Infeasible);
    }
    // Recession cone {d >= 0, homogeneous rows} normalized by Σd = 1.
    let mut cone: Vec<LpRow> = lp
        .rows
        .iter()
        .map(|r| LpRow::new(r.coeffs.clone(), r.relation, 0.0))
        .collect();
    cone.push(LpRow::new(vec![1.0; lp.columns], Relation::Eq, 1.0));
    let descending = vertices_of(lp.columns, &cone)
        .iter()
        .any(|d| lp.value(d) < -1e-9);
    if descending {
        return Ok(BruteOutcome::Unbounded);
    }
    let best = vertices
        .iter()
        .map(|v| v.value)
        .fold(f64::INFINITY, f64::min);
    Ok(BruteOutcome::Optimal(best))
}

fn vertices_of(n: usize, rows: &[LpRow]) -> Vec<Vec<f64>> {
    let eq: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].relation == Relation::Eq).collect();
    let ineq: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].relation != Relation::Eq).collect();
    // Candidate active constraints: inequality rows, then bounds (encoded as rows.len() + j).
    let candidates: Vec<usize> = ineq.iter().copied().chain((0..n).map(|j| rows.len() + j)).collect();
    if eq.len() > n {
        return Vec::new();
    }
    let pick = n - eq.len();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut combo: Vec<usize> = (0..pick).collect();
    if pick > candidates.len() {
        return found;
    }
    loop {
        let active: Vec<usize> = eq.iter().copied().chain(combo.iter().map(|&c| candidates[c])).collect();
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n];
        for (r, &c) in active.iter().enumerate() {
            if c < rows.len() {
                a[r * n..(r + 1) * n].copy_from_slice(&rows[c].coeffs);
                b[r] = rows[c].rhs;
            } else {
                a[r * n + (c - rows.len())] = 1.0;
            }
        }
        if let Some(x) = gauss_solve(n, &mut a, &mut b) {
            let feasible = x.iter().all(|&v| v >= -1e-9) && rows.iter().all(|r| r.violation(&x) <= 1e-9);
            if feasible && !found.iter().any(|y| y.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9)) {
                found.push(x.iter().map(|&v| v.max(0.0)).collect());
            }
        }
        // next combination
        let mut i = pick;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            if combo[i] < candidates.len() - pick + i {
                combo[i] += 1;
                for j in i + 1..pick {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn gauss_solve(n: usize, a: &mut [f64], b: &mut [f64]) -> Option<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))?;
        if a[piv * n + col].abs() < 1e-10 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r * n + c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lower_bound() {
        let lp = StandardLp::new(vec![1.0]).with_row(vec![1.0], Relation::Ge, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![3.0]);
        assert_eq!(s.objective_value, 3.0);
    }

    #[test]
    fn box_maximum() {
        let lp = StandardLp::new(vec![-1.0]).with_row(vec![1.0], Relation::Le, 5.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.objective_value, -5.0);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = StandardLp::new(vec![1.0]).with_row(vec![1.0], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
        assert!(enumerate_vertices_bruteforce(&lp).unwrap().is_empty());
        assert_eq!(bruteforce_optimum(&lp).unwrap(), BruteOutcome::Infeasible);

        let lp = StandardLp::new(vec![-1.0, 0.0]).with_row(vec![1.0, -1.0], Relation::Le, 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
        assert_eq!(bruteforce_optimum(&lp).unwrap(), BruteOutcome::Unbounded);
    }

    #[test]
    fn simplex_face() {
        let lp = StandardLp::new(vec![1.0, 1.0]).with_row(vec![1.0, 1.0], Relation::Ge, 1.0);
        let verts = enumerate_vertices_bruteforce(&lp).unwrap();
        assert_eq!(verts.len(), 2);
        let best = verts.iter().map(|v| v.value).fold(f64::INFINITY, f64::min);
        assert_eq!(best, 1.0);
        assert_eq!(solve_lp(&lp).unwrap().objective_value, 1.0);
    }

    #[test]
    fn transportation_toy_matches_enumeration() {
        // one source (supply 10), two destinations (demand 3 and 4)
        let lp = StandardLp::new(vec![2.0, 5.0])
            .with_row(vec![1.0, 1.0], Relation::Le, 10.0)
            .with_row(vec![1.0, 0.0], Relation::Ge, 3.0)
            .with_row(vec![0.0, 1.0], Relation::Ge, 4.0);
        let s = solve_lp(&lp).unwrap();
        let BruteOutcome::Optimal(v) = bruteforce_optimum(&lp).unwrap() else {
            panic!("expected optimum");
        };
        assert!((s.objective_value - v).abs() <= 1e-9);
        assert!((v - 26.0).abs() <= 1e-12);
    }

    #[test]
    fn equality_rows_and_redundancy() {
        // x + y = 2 twice (redundant), minimize x - y
        let lp = StandardLp::new(vec![1.0, -1.0])
            .with_row(vec![1.0, 1.0], Relation::Eq, 2.0)
            .with_row(vec![2.0, 2.0], Relation::Eq, 4.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_costs_certify_optimality() {
        let lp = StandardLp::new(vec![3.0, 1.0, 2.0])
            .with_row(vec![1.0, 1.0, 1.0], Relation::Ge, 4.0)
            .with_row(vec![1.0, -1.0, 0.0], Relation::Ge, 1.0)
            .with_row(vec![0.0, 1.0, 1.0], Relation::Le, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert!(s.is_optimal());
        assert!(s.reduced_costs.iter().all(|&d| d >= -1e-9));
        assert!(lp.max_violation(&s.x) <= 1e-7);
    }

    #[test]
    fn malformed_input_is_an_error() {
        let lp = StandardLp::new(vec![1.0, 2.0]).with_row(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::RowLength { row: 0, .. })));
        let lp = StandardLp::new(vec![1.0; 9]);
        assert!(matches!(enumerate_vertices_bruteforce(&lp), Err(LpError::TooLarge { .. })));
    }
}
