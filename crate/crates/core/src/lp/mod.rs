//! Dense two-phase primal simplex, used as the independent oracle.
//!
//! Programs have nonnegative variables and rows `a·x {≤,=,≥} b`. The solver
//! uses Bland's rule throughout, so it terminates on degenerate programs, and
//! reads dual values off the final tableau. It runs over any [`Scalar`]:
//! `f64` for everyday use and `BigRational` for exact answers.

mod programs;
mod scalar;

pub use programs::*;
pub use scalar::{ratio, rational_approx, Scalar};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coefficients: Vec<T>,
    pub relation: Relation,
    pub bound: T,
}

/// `optimize c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve`].
///
/// For `Optimal`, `dual` holds the optimal dual solution in the convention of
/// the original sense (see [`LinearProgram::dual_violation`]). For
/// `Infeasible`, `dual` holds a Farkas certificate
/// ([`LinearProgram::certifies_infeasibility`]). For `Unbounded` it is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub status: Status,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    pub objective: T,
    pub pivots: usize,
}

/// Outcome of [`feasible`].
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility<T> {
    Feasible(Vec<T>),
    Infeasible(Vec<T>),
}

impl<T> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(sense: Sense, vars: usize) -> LinearProgram<T> {
        LinearProgram { sense, objective: vec![T::zero(); vars], constraints: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_objective(&mut self, j: usize, c: T) {
        self.objective[j] = c;
    }

    pub fn add(&mut self, coefficients: Vec<T>, relation: Relation, bound: T) {
        assert_eq!(coefficients.len(), self.vars(), "row length must equal variable count");
        self.constraints.push(Constraint { coefficients, relation, bound });
    }

    /// Add a row given as sparse `(index, coefficient)` terms.
    pub fn add_sparse(&mut self, terms: &[(usize, T)], relation: Relation, bound: T) {
        let mut row = vec![T::zero(); self.vars()];
        for (j, c) in terms {
            row[*j] = row[*j].clone() + c.clone();
        }
        self.add(row, relation, bound);
    }

    fn row_value(&self, i: usize, x: &[T]) -> T {
        dot(&self.constraints[i].coefficients, x)
    }

    /// Largest violation of rows or nonnegativity by `x`.
    pub fn max_violation(&self, x: &[T]) -> f64 {
        let mut worst = x.iter().map(|v| (-v.to_f64()).max(0.0)).fold(0.0, f64::max);
        for (i, c) in self.constraints.iter().enumerate() {
            let lhs = self.row_value(i, x).to_f64();
            let b = c.bound.to_f64();
            let v = match c.relation {
                Relation::Le => lhs - b,
                Relation::Ge => b - lhs,
                Relation::Eq => (lhs - b).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }

    /// `Σ b_i y_i`.
    pub fn dual_objective(&self, y: &[T]) -> T {
        self.constraints
            .iter()
            .zip(y)
            .fold(T::zero(), |acc, (c, v)| acc + c.bound.clone() * v.clone())
    }

    fn column_value(&self, j: usize, y: &[T]) -> T {
        self.constraints
            .iter()
            .zip(y)
            .fold(T::zero(), |acc, (c, v)| acc + c.coefficients[j].clone() * v.clone())
    }

    /// Largest violation of dual feasibility. For maximization the dual is
    /// `Aᵀy ≥ c` with `y ≥ 0` on `≤` rows and `y ≤ 0` on `≥` rows; for
    /// minimization all inequalities flip.
    pub fn dual_violation(&self, y: &[T]) -> f64 {
        let flip = if self.sense == Sense::Maximize { 1.0 } else { -1.0 };
        let mut worst: f64 = 0.0;
        for (c, v) in self.constraints.iter().zip(y) {
            let v = flip * v.to_f64();
            worst = worst.max(match c.relation {
                Relation::Le => -v,
                Relation::Ge => v,
                Relation::Eq => 0.0,
            });
        }
        for j in 0..self.vars() {
            let slack = self.column_value(j, y).to_f64() - self.objective[j].to_f64();
            worst = worst.max(-flip * slack);
        }
        worst
    }

    /// `|c·x − b·y|` for an optimal solution.
    pub fn duality_gap(&self, sol: &Solution<T>) -> f64 {
        (self.objective_value(&sol.primal).to_f64() - self.dual_objective(&sol.dual).to_f64()).abs()
    }

    /// Largest complementary-slackness product `|y_i (a_i·x − b_i)|` or
    /// `|x_j (Aᵀy − c)_j|`.
    pub fn complementary_slackness(&self, sol: &Solution<T>) -> f64 {
        let (x, y) = (&sol.primal, &sol.dual);
        let mut worst: f64 = 0.0;
        for (i, c) in self.constraints.iter().enumerate() {
            let r = self.row_value(i, x).to_f64() - c.bound.to_f64();
            worst = worst.max((r * y[i].to_f64()).abs());
        }
        for (j, xj) in x.iter().enumerate() {
            let r = self.column_value(j, y).to_f64() - self.objective[j].to_f64();
            worst = worst.max((r * xj.to_f64()).abs());
        }
        worst
    }

    /// Checks a Farkas certificate: `y ≥ 0` on `≤` rows, `y ≤ 0` on `≥`
    /// rows, `Aᵀy ≥ 0` and `b·y < 0`. The certificate is normalized so
    /// that `b·y = −1` before comparing violations with `tol`.
    pub fn certifies_infeasibility(&self, y: &[T], tol: f64) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let by = self.dual_objective(y).to_f64();
        if by >= -1e-12 {
            return false;
        }
        let s = -by;
        let sign_ok = self.constraints.iter().zip(y).all(|(c, v)| {
            let v = v.to_f64() / s;
            match c.relation {
                Relation::Le => v >= -tol,
                Relation::Ge => v <= tol,
                Relation::Eq => true,
            }
        });
        sign_ok && (0..self.vars()).all(|j| self.column_value(j, y).to_f64() / s >= -tol)
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
}

/// Solve to optimality (or detect infeasibility/unboundedness).
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<Solution<T>> {
    let sol = Tableau::build(lp).run(lp, true)?;
    audit::record(lp, &sol);
    Ok(sol)
}

/// Optional per-thread bookkeeping of optimality certificates.
///
/// Inside [`audit::watch`], every optimal [`solve`] on the current thread
/// contributes its duality gap and complementary-slackness residual.
pub mod audit {
    use std::cell::RefCell;

    use super::{LinearProgram, Scalar, Solution, Status};

    #[derive(Debug, Clone, Copy, Default, PartialEq)]
    pub struct Stats {
        pub optimal_solves: usize,
        pub worst_gap: f64,
        pub worst_slackness: f64,
        pub worst_dual_violation: f64,
    }

    thread_local! {
        static ACTIVE: RefCell<Option<Stats>> = const { RefCell::new(None) };
    }

    pub(super) fn record<T: Scalar>(lp: &LinearProgram<T>, sol: &Solution<T>) {
        if sol.status != Status::Optimal {
            return;
        }
        ACTIVE.with(|a| {
            if let Some(s) = a.borrow_mut().as_mut() {
                s.optimal_solves += 1;
                s.worst_gap = s.worst_gap.max(lp.duality_gap(sol));
                s.worst_slackness = s.worst_slackness.max(lp.complementary_slackness(sol));
                s.worst_dual_violation = s.worst_dual_violation.max(lp.dual_violation(&sol.dual));
            }
        });
    }

    /// Run `f` and return its result with the statistics it produced.
    pub fn watch<R>(f: impl FnOnce() -> R) -> (R, Stats) {
        let previous = ACTIVE.with(|a| a.replace(Some(Stats::default())));
        let out = f();
        let stats = ACTIVE.with(|a| a.replace(previous)).unwrap_or_default();
        (out, stats)
    }
}

/// Phase one only: a feasible point or a Farkas certificate.
pub fn feasible<T: Scalar>(lp: &LinearProgram<T>) -> Result<Feasibility<T>> {
    let sol = Tableau::build(lp).run(lp, false)?;
    Ok(match sol.status {
        Status::Infeasible => Feasibility::Infeasible(sol.dual),
        _ => Feasibility::Feasible(sol.primal),
    })
}

struct Tableau<T> {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Column carrying `+e_i` for row `i` (slack or artificial).
    unit: Vec<usize>,
    /// Whether row `i` was negated to make its right-hand side nonnegative.
    negated: Vec<bool>,
    n: usize,
    art_start: usize,
    cols: usize,
    /// Reduced costs `c_j − c_Bᵀ B⁻¹ a_j` and the current objective.
    d: Vec<T>,
    obj: T,
    pivots: usize,
    cap: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Tableau<T> {
        let n = lp.vars();
        let m = lp.constraints.len();
        let mut rels = Vec::with_capacity(m);
        let mut negated = Vec::with_capacity(m);
        for c in &lp.constraints {
            let neg = c.bound < T::zero();
            negated.push(neg);
            rels.push(match (c.relation, neg) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
        let art_start = n + n_slack;
        let cols = art_start + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut unit = Vec::with_capacity(m);
        let (mut s, mut a) = (n, art_start);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![T::zero(); cols + 1];
            for (j, v) in c.coefficients.iter().enumerate() {
                row[j] = if negated[i] { -v.clone() } else { v.clone() };
            }
            row[cols] = if negated[i] { -c.bound.clone() } else { c.bound.clone() };
            match rels[i] {
                Relation::Le => {
                    row[s] = T::one();
                    unit.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -T::one();
                    s += 1;
                    row[a] = T::one();
                    unit.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = T::one();
                    unit.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        let side = m + cols;
        Tableau {
            rows,
            basis: unit.clone(),
            unit,
            negated,
            n,
            art_start,
            cols,
            d: Vec::new(),
            obj: T::zero(),
            pivots: 0,
            cap: 10 * side * side,
        }
    }

    fn set_costs(&mut self, c: &[T]) {
        let mut d = c.to_vec();
        let mut obj = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b].clone();
            if cb.is_pos() || cb.is_neg() {
                for (dj, a) in d.iter_mut().zip(&self.rows[i]) {
                    *dj = dj.clone() - cb.clone() * a.clone();
                }
                obj = obj + cb * self.rows[i][self.cols].clone();
            }
        }
        self.d = d;
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.cap {
            return Err(Error::Solver(format!(
                "pivot cap {} exceeded ({} rows, {} columns)",
                self.cap,
                self.rows.len(),
                self.cols
            )));
        }
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = (v.clone() / piv.clone()).snap();
        }
        self.rows[r][c] = T::one();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_pos() || f.is_neg() {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = (v.clone() - f.clone() * p.clone()).snap();
                }
            }
            row[c] = T::zero();
        }
        let f = self.d[c].clone();
        for (dj, p) in self.d.iter_mut().zip(&pivot_row) {
            *dj = (dj.clone() - f.clone() * p.clone()).snap();
        }
        self.d[c] = T::zero();
        self.obj = self.obj.clone() + f * pivot_row[self.cols].clone();
        self.basis[r] = c;
        Ok(())
    }

    /// Bland's-rule iterations over columns `< limit`. Returns `false` if
    /// the objective is unbounded.
    fn optimize(&mut self, limit: usize) -> Result<bool> {
        loop {
            let Some(enter) = (0..limit).find(|&j| self.d[j].is_pos()) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_pos() {
                    continue;
                }
                let ratio = row[self.cols].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        let slack = T::eps() * (T::one() + best.abs_val());
                        ratio < best.clone() - slack.clone()
                            || (ratio <= best.clone() + slack && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, enter)?,
            }
        }
    }

    fn duals(&self, costs: &[T]) -> Vec<T> {
        (0..self.rows.len())
            .map(|i| {
                let u = self.unit[i];
                let y = costs[u].clone() - self.d[u].clone();
                if self.negated[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn primal(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rows[i][self.cols].clone();
            }
        }
        x
    }

    fn run(mut self, lp: &LinearProgram<T>, phase_two: bool) -> Result<Solution<T>> {
        let mut c1 = vec![T::zero(); self.cols];
        for v in c1.iter_mut().skip(self.art_start) {
            *v = -T::one();
        }
        self.set_costs(&c1);
        self.optimize(self.cols)?;
        if self.obj < -T::feasibility_eps() {
            return Ok(Solution {
                status: Status::Infeasible,
                primal: Vec::new(),
                dual: self.duals(&c1),
                objective: T::zero(),
                pivots: self.pivots,
            });
        }
        // Drive zero-level artificials out of the basis where possible; rows
        // where that fails are redundant and keep their artificial.
        for r in 0..self.rows.len() {
            if self.basis[r] < self.art_start {
                continue;
            }
            let best = (0..self.art_start)
                .filter(|&j| self.rows[r][j].is_pos() || self.rows[r][j].is_neg())
                .max_by(|&a, &b| {
                    let (x, y) = (self.rows[r][a].abs_val(), self.rows[r][b].abs_val());
                    x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
                });
            if let Some(j) = best {
                self.pivot(r, j)?;
            }
        }
        let flip = lp.sense == Sense::Minimize;
        let mut c2 = vec![T::zero(); self.cols];
        if phase_two {
            for (j, c) in lp.objective.iter().enumerate() {
                c2[j] = if flip { -c.clone() } else { c.clone() };
            }
        }
        self.set_costs(&c2);
        let bounded = self.optimize(self.art_start)?;
        let primal = self.primal();
        if !bounded {
            return Ok(Solution {
                status: Status::Unbounded,
                objective: lp.objective_value(&primal),
                primal,
                dual: Vec::new(),
                pivots: self.pivots,
            });
        }
        let mut dual = self.duals(&c2);
        if flip {
            dual = dual.into_iter().map(|v| -v).collect();
        }
        Ok(Solution {
            status: Status::Optimal,
            objective: lp.objective_value(&primal),
            primal,
            dual,
            pivots: self.pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn lp1(sense: Sense, c: f64) -> LinearProgram<f64> {
        let mut lp = LinearProgram::new(sense, 1);
        lp.set_objective(0, c);
        lp
    }

    #[test]
    fn trivial_programs() {
        let mut lp = lp1(Sense::Maximize, 1.0);
        lp.add(vec![1.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.primal[0] - 1.0).abs() < 1e-12);
        assert!((sol.dual[0] - 1.0).abs() < 1e-12);
        assert_eq!(feasible(&lp).unwrap(), Feasibility::Feasible(vec![0.0]));

        let mut bad = lp1(Sense::Maximize, 1.0);
        bad.add(vec![1.0], Relation::Le, -1.0);
        let sol = solve(&bad).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert!(bad.certifies_infeasibility(&sol.dual, 1e-9));

        let mut unb = lp1(Sense::Maximize, 1.0);
        unb.add(vec![1.0], Relation::Ge, 1.0);
        assert_eq!(solve(&unb).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn duality_on_a_small_program() {
        // max 3x + 2y s.t. x + y ≤ 4, x + 3y ≤ 6, x ≤ 3, x − y = 1 (all ≥ 0).
        let mut lp = LinearProgram::new(Sense::Maximize, 2);
        lp.set_objective(0, 3.0);
        lp.set_objective(1, 2.0);
        lp.add(vec![1.0, 1.0], Relation::Le, 4.0);
        lp.add(vec![1.0, 3.0], Relation::Le, 6.0);
        lp.add(vec![1.0, 0.0], Relation::Le, 3.0);
        lp.add(vec![1.0, -1.0], Relation::Eq, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 9.25).abs() < 1e-9);
        assert!(lp.duality_gap(&sol) < 1e-9);
        assert!(lp.dual_violation(&sol.dual) < 1e-9);
        assert!(lp.complementary_slackness(&sol) < 1e-9);

        let mut min = lp.clone();
        min.sense = Sense::Minimize;
        min.add(vec![1.0, 1.0], Relation::Ge, 2.0);
        let sol = solve(&min).unwrap();
        assert!((sol.objective - 5.5).abs() < 1e-9);
        assert!(min.duality_gap(&sol) < 1e-9);
        assert!(min.dual_violation(&sol.dual) < 1e-9);
        assert!(min.complementary_slackness(&sol) < 1e-9);
    }

    #[test]
    fn exact_mode_matches() {
        let mut lp: LinearProgram<BigRational> = LinearProgram::new(Sense::Maximize, 2);
        lp.set_objective(0, ratio(1, 1));
        lp.set_objective(1, ratio(1, 1));
        lp.add(vec![ratio(3, 1), ratio(1, 1)], Relation::Le, ratio(2, 1));
        lp.add(vec![ratio(1, 1), ratio(3, 1)], Relation::Le, ratio(2, 1));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.objective, ratio(1, 1));
        assert_eq!(sol.primal, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(lp.dual_objective(&sol.dual), ratio(1, 1));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook rule.
        let mut lp = LinearProgram::new(Sense::Minimize, 4);
        for (j, c) in [-0.75, 150.0, -0.02, 6.0].into_iter().enumerate() {
            lp.set_objective(j, c);
        }
        lp.add(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-9);
        assert!(lp.complementary_slackness(&sol) < 1e-9);
    }
}
