//! Builders for the feasibility and optimization programs of the pair
//! calculus. Matrix unknowns `M` (shape `n′ × n`) are flattened row-major:
//! `M[j][i]` is variable `j·n + i`. Scalar unknowns follow the matrix.

use super::{LinearProgram, Relation, Scalar, Sense};

/// Index of `M[j][i]` for an `n′ × n` matrix.
pub fn mat_index(n: usize, j: usize, i: usize) -> usize {
    j * n + i
}

struct MatrixProgram<T> {
    lp: LinearProgram<T>,
    n: usize,
    m: usize,
}

impl<T: Scalar> MatrixProgram<T> {
    fn new(sense: Sense, n: usize, m: usize, extra: usize) -> MatrixProgram<T> {
        MatrixProgram { lp: LinearProgram::new(sense, n * m + extra), n, m }
    }

    fn extra(&self, k: usize) -> usize {
        self.n * self.m + k
    }

    /// Rows `(M v)_j − Σ_k c_k · w_k[j]  rel  rhs_j`, one per output index.
    fn image_rows(&mut self, v: &[T], scaled: &[(usize, &[T], T)], rel: Relation, rhs: &[T]) {
        for j in 0..self.m {
            let mut terms: Vec<(usize, T)> =
                (0..self.n).map(|i| (mat_index(self.n, j, i), v[i].clone())).collect();
            for (var, w, c) in scaled {
                terms.push((*var, -(c.clone() * w[j].clone())));
            }
            self.lp.add_sparse(&terms, rel, rhs[j].clone());
        }
    }

    /// Column sums of `M`, `rel 1`.
    fn column_rows(&mut self, rel: Relation) {
        for i in 0..self.n {
            let terms: Vec<(usize, T)> =
                (0..self.m).map(|j| (mat_index(self.n, j, i), T::one())).collect();
            self.lp.add_sparse(&terms, rel, T::one());
        }
    }
}

fn zeros<T: Scalar>(k: usize) -> Vec<T> {
    vec![T::zero(); k]
}

/// `β_x(p,q) = min t·q` s.t. `t·p ≥ x`, `0 ≤ t ≤ 1`.
pub fn beta_program<T: Scalar>(p: &[T], q: &[T], x: T) -> LinearProgram<T> {
    let n = p.len();
    let mut lp = LinearProgram::new(Sense::Minimize, n);
    lp.objective = q.to_vec();
    lp.add(p.to_vec(), Relation::Ge, x);
    for i in 0..n {
        lp.add_sparse(&[(i, T::one())], Relation::Le, T::one());
    }
    lp
}

/// `δ(a,b) = max t·(a−b)` over `0 ≤ t ≤ 1`.
pub fn variational_program<T: Scalar>(a: &[T], b: &[T]) -> LinearProgram<T> {
    let n = a.len();
    let mut lp = LinearProgram::new(Sense::Maximize, n);
    lp.objective = a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect();
    for i in 0..n {
        lp.add_sparse(&[(i, T::one())], Relation::Le, T::one());
    }
    lp
}

/// Relative majorization: stochastic `M` with `Mp = p′`, `Mq = q′`.
pub fn majorization_program<T: Scalar>(p: &[T], q: &[T], p2: &[T], q2: &[T]) -> LinearProgram<T> {
    let mut mp = MatrixProgram::new(Sense::Maximize, p.len(), p2.len(), 0);
    mp.image_rows(p, &[], Relation::Eq, p2);
    mp.image_rows(q, &[], Relation::Eq, q2);
    mp.column_rows(Relation::Eq);
    mp.lp
}

/// Relative submajorization: substochastic `M`, `Mp ≥ p′`, `Mq ≤ q′`.
pub fn submajorization_program<T: Scalar>(
    p: &[T],
    q: &[T],
    p2: &[T],
    q2: &[T],
) -> LinearProgram<T> {
    let mut mp = MatrixProgram::new(Sense::Maximize, p.len(), p2.len(), 0);
    mp.image_rows(p, &[], Relation::Ge, p2);
    mp.image_rows(q, &[], Relation::Le, q2);
    mp.column_rows(Relation::Le);
    mp.lp
}

/// The equality form of submajorization: `Mp = p′`, `Mq ≤ q′`.
pub fn equality_submajorization_program<T: Scalar>(
    p: &[T],
    q: &[T],
    p2: &[T],
    q2: &[T],
) -> LinearProgram<T> {
    let mut mp = MatrixProgram::new(Sense::Maximize, p.len(), p2.len(), 0);
    mp.image_rows(p, &[], Relation::Eq, p2);
    mp.image_rows(q, &[], Relation::Le, q2);
    mp.column_rows(Relation::Le);
    mp.lp
}

/// Approximate submajorization: `Mp ≥ p′ − a`, `Mq ≤ q′ + b`, `1·a ≤ ε`,
/// `1·b ≤ η`. Variables: `M`, then `a` (n′), then `b` (n′).
pub fn approx_program<T: Scalar>(
    p: &[T],
    q: &[T],
    p2: &[T],
    q2: &[T],
    eps: T,
    eta: T,
) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = approx_base(Sense::Maximize, p, q, p2, q2, true, true);
    let a: Vec<(usize, T)> = (0..m).map(|k| (mp.extra(k), T::one())).collect();
    let b: Vec<(usize, T)> = (0..m).map(|k| (mp.extra(m + k), T::one())).collect();
    mp.lp.add_sparse(&a, Relation::Le, eps);
    mp.lp.add_sparse(&b, Relation::Le, eta);
    mp.lp
}

fn approx_base<T: Scalar>(
    sense: Sense,
    p: &[T],
    q: &[T],
    p2: &[T],
    q2: &[T],
    with_a: bool,
    with_b: bool,
) -> MatrixProgram<T> {
    let m = p2.len();
    let mut mp = MatrixProgram::new(sense, p.len(), m, 2 * m);
    let n = p.len();
    for j in 0..m {
        let mut terms: Vec<(usize, T)> = (0..n).map(|i| (mat_index(n, j, i), p[i].clone())).collect();
        if with_a {
            terms.push((mp.extra(j), T::one()));
        }
        mp.lp.add_sparse(&terms, Relation::Ge, p2[j].clone());
    }
    for j in 0..m {
        let mut terms: Vec<(usize, T)> = (0..n).map(|i| (mat_index(n, j, i), q[i].clone())).collect();
        if with_b {
            terms.push((mp.extra(m + j), -T::one()));
        }
        mp.lp.add_sparse(&terms, Relation::Le, q2[j].clone());
    }
    mp.column_rows(Relation::Le);
    mp
}

/// `ε* = min 1·a` with the second-kind error fixed to zero. Same variable
/// layout as [`approx_program`].
pub fn eps_program<T: Scalar>(p: &[T], q: &[T], p2: &[T], q2: &[T]) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = approx_base(Sense::Minimize, p, q, p2, q2, true, false);
    for k in 0..m {
        let j = mp.extra(k);
        mp.lp.set_objective(j, T::one());
    }
    mp.lp
}

/// `η̂* = min 1·b` with the first-kind error fixed to zero (the reduced η
/// program, before battery scaling). Same layout as [`approx_program`].
pub fn eta_program<T: Scalar>(p: &[T], q: &[T], p2: &[T], q2: &[T]) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = approx_base(Sense::Minimize, p, q, p2, q2, false, true);
    for k in 0..m {
        let j = mp.extra(m + k);
        mp.lp.set_objective(j, T::one());
    }
    mp.lp
}

/// `max λ` s.t. `(p,q) ≻ (λp′, zq′)`. Variables: `M`, then `λ`.
pub fn lambda_program<T: Scalar>(p: &[T], q: &[T], p2: &[T], q2: &[T], z: T) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = MatrixProgram::new(Sense::Maximize, p.len(), m, 1);
    let lam = mp.extra(0);
    mp.lp.set_objective(lam, T::one());
    mp.image_rows(p, &[(lam, p2, T::one())], Relation::Ge, &zeros(m));
    let zq: Vec<T> = q2.iter().map(|v| v.clone() * z.clone()).collect();
    mp.image_rows(q, &[], Relation::Le, &zq);
    mp.column_rows(Relation::Le);
    mp.lp
}

/// `min z` s.t. `(p,q) ≻ (λp′, zq′)`. Variables: `M`, then `z`.
pub fn z_program<T: Scalar>(p: &[T], q: &[T], p2: &[T], q2: &[T], lambda: T) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = MatrixProgram::new(Sense::Minimize, p.len(), m, 1);
    let z = mp.extra(0);
    mp.lp.set_objective(z, T::one());
    let lp2: Vec<T> = p2.iter().map(|v| v.clone() * lambda.clone()).collect();
    mp.image_rows(p, &[], Relation::Ge, &lp2);
    mp.image_rows(q, &[(z, q2, T::one())], Relation::Le, &zeros(m));
    mp.column_rows(Relation::Le);
    mp.lp
}

/// `max λ` s.t. `(p,q) ⪰ (λp′ + s, q′)` for some `s ≥ 0` (exact
/// majorization into a heralded mixture). Variables: `M`, `λ`, `s` (n′).
pub fn heralded_lambda_program<T: Scalar>(
    p: &[T],
    q: &[T],
    p2: &[T],
    q2: &[T],
) -> LinearProgram<T> {
    let m = p2.len();
    let mut mp = MatrixProgram::new(Sense::Maximize, p.len(), m, 1 + m);
    let lam = mp.extra(0);
    mp.lp.set_objective(lam, T::one());
    let n = p.len();
    for j in 0..m {
        let mut terms: Vec<(usize, T)> = (0..n).map(|i| (mat_index(n, j, i), p[i].clone())).collect();
        terms.push((lam, -p2[j].clone()));
        terms.push((mp.extra(1 + j), -T::one()));
        mp.lp.add_sparse(&terms, Relation::Eq, T::zero());
    }
    mp.image_rows(q, &[], Relation::Eq, q2);
    mp.column_rows(Relation::Eq);
    mp.lp
}

/// Read the matrix part of a flattened solution as `n′` rows of length `n`.
pub fn unflatten<T: Scalar>(x: &[T], n: usize, m: usize) -> Vec<Vec<T>> {
    (0..m).map(|j| x[j * n..(j + 1) * n].to_vec()).collect()
}
