//! Dense two-phase simplex for small equality-constrained LPs with box bounds.
//!
//! Problems are stated as `maximize c·x  s.t.  A·x = b,  lower ≤ x ≤ upper`.
//! Internally every variable is shifted or split so that the working problem
//! is `A'·y = b', y ≥ 0`; finite upper bounds become rows `y + s = u − l`.
//! Phase one minimizes the sum of artificial variables, phase two optimizes
//! the real objective. Long degenerate stretches fall back to Bland's rule,
//! and a pivot budget turns any remaining stall into an error.

use std::fmt;

use thiserror::Error;

use crate::scalar::Real;

const PIVOT_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-9;
const HARRIS_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("variable {name} has lower bound above upper bound")]
    InvalidBounds { name: String },
    #[error("no convergence after {pivots} pivots")]
    IterationLimit { pivots: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub eq_matrix: Vec<Vec<T>>,
    pub eq_rhs: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub names: Vec<String>,
}

impl<T: Real> Default for LinearProgram<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> LinearProgram<T> {
    pub fn new() -> Self {
        Self {
            objective: Vec::new(),
            eq_matrix: Vec::new(),
            eq_rhs: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            names: Vec::new(),
        }
    }

    /// Adds a variable with zero objective coefficient; returns its index.
    pub fn add_variable(&mut self, name: impl Into<String>, lower: T, upper: T) -> usize {
        self.objective.push(T::zero());
        self.lower.push(lower);
        self.upper.push(upper);
        self.names.push(name.into());
        for row in &mut self.eq_matrix {
            row.push(T::zero());
        }
        self.names.len() - 1
    }

    pub fn num_variables(&self) -> usize {
        self.names.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set_objective(&mut self, var: usize, coef: T) {
        self.objective[var] = coef;
    }

    /// Adds `Σ coef·x_var = rhs`; repeated indices accumulate.
    pub fn add_equality(&mut self, terms: &[(usize, T)], rhs: T) {
        let mut row = vec![T::zero(); self.num_variables()];
        for &(var, coef) in terms {
            row[var] = row[var] + coef;
        }
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.lower.len() != n || self.upper.len() != n || self.names.len() != n {
            return Err(LpError::Dimension(format!(
                "objective has {n} entries, bounds {}/{}, names {}",
                self.lower.len(),
                self.upper.len(),
                self.names.len()
            )));
        }
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(LpError::Dimension(format!(
                "{} equality rows but {} right-hand sides",
                self.eq_matrix.len(),
                self.eq_rhs.len()
            )));
        }
        if let Some(i) = self.eq_matrix.iter().position(|r| r.len() != n) {
            return Err(LpError::Dimension(format!(
                "row {i} has {} coefficients, expected {n}",
                self.eq_matrix[i].len()
            )));
        }
        for j in 0..n {
            if self.lower[j] > self.upper[j] || self.lower[j].is_nan() || self.upper[j].is_nan() {
                return Err(LpError::InvalidBounds {
                    name: self.names[j].clone(),
                });
            }
        }
        Ok(())
    }

    /// Max-abs violation of the equality rows at `x`.
    pub fn equality_residual(&self, x: &[T]) -> T {
        self.eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .map(|(row, &b)| (dot(row, x) - b).abs())
            .fold(T::zero(), T::max)
    }

    /// Max-abs violation of the box bounds at `x`.
    pub fn bound_violation(&self, x: &[T]) -> T {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(T::zero()))
            .fold(T::zero(), T::max)
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }

    /// Plain-text audit dump: objective, one line per equality, then bounds.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<T: Real> fmt::Display for LinearProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term_list = |coefs: &[T]| -> String {
            let terms: Vec<String> = coefs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{:+} {}", c, self.names[j]))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" ")
            }
        };
        writeln!(f, "maximize: {}", term_list(&self.objective))?;
        for (i, (row, rhs)) in self.eq_matrix.iter().zip(&self.eq_rhs).enumerate() {
            writeln!(f, "c{i}: {} = {}", term_list(row), rhs)?;
        }
        for j in 0..self.num_variables() {
            writeln!(f, "bound: {} <= {} <= {}", self.lower[j], self.names[j], self.upper[j])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub value: T,
    pub x: Vec<T>,
    /// Max-abs equality violation of `x`.
    pub residual: T,
    /// Sum of artificials at the end of phase one; positive iff infeasible.
    pub phase_one_objective: T,
    pub pivots: usize,
}

impl<T: Real> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// How an original variable is recovered from working columns.
#[derive(Debug, Clone, Copy)]
enum Recover<T> {
    /// x = shift + y[col]
    Shifted { col: usize, shift: T },
    /// x = shift − y[col]
    Mirrored { col: usize, shift: T },
    /// x = y[pos] − y[neg]
    Split { pos: usize, neg: usize },
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced-cost row; last entry is minus the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
    pivot_tol: T,
}

impl<T: Real> Tableau<T> {
    fn rhs(&self, i: usize) -> T {
        self.rows[i][self.width]
    }

    /// Installs `objective` (maximize) as the cost row for the current basis.
    fn set_objective(&mut self, objective: &[T]) {
        let mut cost: Vec<T> = objective.to_vec();
        cost.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = objective[b];
            if cb.is_zero() {
                continue;
            }
            for (c, &r) in cost.iter_mut().zip(&self.rows[i]) {
                *c = *c - cb * r;
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            *v = *v * inv;
        }
        self.rows[row][col] = T::one();
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f.is_zero() {
                continue;
            }
            for (v, &p) in r.iter_mut().zip(&pivot_row) {
                *v = *v - f * p;
            }
            r[col] = T::zero();
            if r[w] < T::zero() && r[w] > -self.pivot_tol {
                r[w] = T::zero();
            }
        }
        let f = self.cost[col];
        if !f.is_zero() {
            for (v, &p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = *v - f * p;
            }
            self.cost[col] = T::zero();
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs primal simplex on the installed cost row over columns `< allowed`.
    /// Returns `Ok(false)` when the objective is unbounded.
    ///
    /// Pricing is Dantzig's largest reduced cost; after a long run of
    /// degenerate pivots it switches to Bland's rule until progress resumes.
    /// The ratio test is Harris's two-pass test, which trades a feasibility
    /// slack of `feas_tol` for larger, better-conditioned pivots.
    fn optimize(&mut self, allowed: usize, cost_tol: T, feas_tol: T) -> Result<bool, LpError> {
        let limit = self.pivots + 10_000 + 20 * (self.rows.len() + self.width);
        let bland_after = 50 + self.rows.len();
        let mut degenerate = 0usize;
        loop {
            if self.pivots >= limit {
                return Err(LpError::IterationLimit { pivots: self.pivots });
            }
            let bland = degenerate > bland_after;
            let col = if bland {
                (0..allowed).find(|&j| self.cost[j] > cost_tol)
            } else {
                (0..allowed)
                    .filter(|&j| self.cost[j] > cost_tol)
                    .max_by(|&a, &b| self.cost[a].partial_cmp(&self.cost[b]).unwrap().then(b.cmp(&a)))
            };
            let Some(col) = col else {
                return Ok(true);
            };
            let eligible = |i: usize| self.rows[i][col] > self.pivot_tol;
            let bound = (0..self.rows.len())
                .filter(|&i| eligible(i))
                .map(|i| (self.rhs(i).max(T::zero()) + feas_tol) / self.rows[i][col])
                .fold(T::infinity(), T::min);
            if !bound.is_finite() {
                return Ok(false);
            }
            let candidates = (0..self.rows.len())
                .filter(|&i| eligible(i) && self.rhs(i).max(T::zero()) / self.rows[i][col] <= bound);
            let row = if bland {
                candidates.min_by_key(|&i| self.basis[i])
            } else {
                candidates.max_by(|&a, &b| self.rows[a][col].partial_cmp(&self.rows[b][col]).unwrap())
            }
            .expect("the row attaining the bound is a candidate");
            let step = self.rhs(row).max(T::zero()) / self.rows[row][col];
            if step * self.cost[col] > feas_tol {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            self.pivot(row, col);
        }
    }
}

/// Solves `lp` to optimality, or reports infeasibility/unboundedness.
pub fn solve<T: Real>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    lp.validate()?;
    let n = lp.num_variables();
    let pivot_tol = T::lit(PIVOT_TOL).max(T::epsilon() * T::lit(64.0));
    let feas_tol = T::lit(FEASIBILITY_TOL).max(T::epsilon() * T::lit(1e4));
    let harris_tol = T::lit(HARRIS_TOL).max(T::epsilon() * T::lit(64.0));

    // Working columns for each original variable.
    let mut recover = Vec::with_capacity(n);
    // (working column, coefficient) contributions per original variable
    let mut columns: Vec<Vec<(usize, T)>> = Vec::with_capacity(n);
    let mut working_cost: Vec<T> = Vec::new();
    let mut shift_rhs = vec![T::zero(); lp.num_equalities()];
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for j in 0..n {
        let (l, u, c) = (lp.lower[j], lp.upper[j], lp.objective[j]);
        let col = working_cost.len();
        if l.is_finite() {
            working_cost.push(c);
            recover.push(Recover::Shifted { col, shift: l });
            columns.push(vec![(col, T::one())]);
            for (i, row) in lp.eq_matrix.iter().enumerate() {
                shift_rhs[i] = shift_rhs[i] + row[j] * l;
            }
            if u.is_finite() {
                bound_rows.push((col, u - l));
            }
        } else if u.is_finite() {
            working_cost.push(-c);
            recover.push(Recover::Mirrored { col, shift: u });
            columns.push(vec![(col, -T::one())]);
            for (i, row) in lp.eq_matrix.iter().enumerate() {
                shift_rhs[i] = shift_rhs[i] + row[j] * u;
            }
        } else {
            working_cost.push(c);
            working_cost.push(-c);
            recover.push(Recover::Split { pos: col, neg: col + 1 });
            columns.push(vec![(col, T::one()), (col + 1, -T::one())]);
        }
    }
    let structural = working_cost.len();
    let num_slacks = bound_rows.len();
    let m = lp.num_equalities() + num_slacks;

    // Rows without artificials first get a sign so that rhs ≥ 0.
    let real_cols = structural + num_slacks;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for (i, orig) in lp.eq_matrix.iter().enumerate() {
        let mut row = vec![T::zero(); real_cols];
        for (j, &a) in orig.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(col, sign) in &columns[j] {
                row[col] = row[col] + a * sign;
            }
        }
        let mut rhs = lp.eq_rhs[i] - shift_rhs[i];
        if rhs < T::zero() {
            row.iter_mut().for_each(|v| *v = -*v);
            rhs = -rhs;
        }
        row.push(rhs);
        rows.push(row);
    }
    for (k, &(col, range)) in bound_rows.iter().enumerate() {
        let mut row = vec![T::zero(); real_cols];
        row[col] = T::one();
        row[structural + k] = T::one();
        row.push(range);
        rows.push(row);
    }
    working_cost.extend(std::iter::repeat(T::zero()).take(num_slacks));

    // Crash basis: any column that is a positive singleton in a row can start basic there.
    let mut basis: Vec<Option<usize>> = vec![None; m];
    let mut used = vec![false; real_cols];
    for col in 0..real_cols {
        let mut hit = None;
        let mut count = 0;
        for (i, row) in rows.iter().enumerate() {
            if !row[col].is_zero() {
                count += 1;
                hit = Some(i);
            }
        }
        if count != 1 {
            continue;
        }
        let i = hit.unwrap();
        if basis[i].is_none() && rows[i][col] > pivot_tol && !used[col] {
            let inv = rows[i][col].recip();
            rows[i].iter_mut().for_each(|v| *v = *v * inv);
            basis[i] = Some(col);
            used[col] = true;
        }
    }

    let artificial_rows: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();
    let width = real_cols + artificial_rows.len();
    for row in rows.iter_mut() {
        let rhs = row.pop().unwrap();
        row.resize(width, T::zero());
        row.push(rhs);
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        rows[i][real_cols + k] = T::one();
        basis[i] = Some(real_cols + k);
    }
    let mut tab = Tableau {
        rows,
        cost: Vec::new(),
        basis: basis.into_iter().map(Option::unwrap).collect(),
        width,
        pivots: 0,
        pivot_tol,
    };

    // Phase one.
    let mut phase_one_objective = T::zero();
    if !artificial_rows.is_empty() {
        let mut phase_one = vec![T::zero(); width];
        for c in phase_one.iter_mut().skip(real_cols) {
            *c = -T::one();
        }
        tab.set_objective(&phase_one);
        tab.optimize(width, pivot_tol, harris_tol)?;
        phase_one_objective = tab.cost[width];
        if phase_one_objective > feas_tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                value: T::nan(),
                x: vec![T::nan(); n],
                residual: T::nan(),
                phase_one_objective,
                pivots: tab.pivots,
            });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= real_cols {
                let entering = (0..real_cols)
                    .filter(|&j| tab.rows[i][j].abs() > pivot_tol)
                    .max_by(|&a, &b| {
                        tab.rows[i][a]
                            .abs()
                            .partial_cmp(&tab.rows[i][b].abs())
                            .unwrap()
                    });
                match entering {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase two.
    let mut objective = working_cost.clone();
    objective.resize(width, T::zero());
    tab.set_objective(&objective);
    let bounded = tab.optimize(real_cols, pivot_tol, harris_tol)?;

    let mut y = vec![T::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rhs(i).max(T::zero());
    }
    let x: Vec<T> = recover
        .iter()
        .map(|r| match *r {
            Recover::Shifted { col, shift } => shift + y[col],
            Recover::Mirrored { col, shift } => shift - y[col],
            Recover::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect();
    let status = if bounded {
        LpStatus::Optimal
    } else {
        LpStatus::Unbounded
    };
    let value = if bounded {
        lp.objective_value(&x)
    } else {
        T::infinity()
    };
    Ok(LpSolution {
        status,
        value,
        residual: lp.equality_residual(&x),
        x,
        phase_one_objective,
        pivots: tab.pivots,
    })
}
