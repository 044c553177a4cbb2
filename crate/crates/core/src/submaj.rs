//! Relative majorization, relative submajorization and their approximate
//! and probabilistic relaxations.
//!
//! Every decision and optimum has a geometric evaluation (from the elbows of
//! the two lower boundaries) and an LP evaluation; the two are kept in
//! separate functions so that tests can play them against each other.

use crate::curve::{Elbows, Pair, Weights};
use crate::error::{domain, input, Result};
use crate::ext::Ext;
use crate::lp::{self, Feasibility, Status};
use crate::{LP_TOL, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticClass {
    Stochastic,
    Substochastic,
}

/// Nonnegative `n′ × n` matrix certifying a (sub)majorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub matrix: Vec<Vec<f64>>,
    pub class: StochasticClass,
}

impl Witness {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|i| self.matrix.iter().map(|row| row[i]).sum())
            .collect()
    }

    /// Entries nonnegative and column sums consistent with the class, all
    /// within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let nonneg = self.matrix.iter().flatten().all(|v| *v >= -tol);
        let cols = self.column_sums().into_iter().all(|s| match self.class {
            StochasticClass::Stochastic => (s - 1.0).abs() <= tol,
            StochasticClass::Substochastic => s <= 1.0 + tol,
        });
        nonneg && cols
    }

    pub fn identity(n: usize) -> Witness {
        let matrix = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Witness { matrix, class: StochasticClass::Stochastic }
    }

    fn from_flat(x: &[f64], n: usize, m: usize, class: StochasticClass) -> Witness {
        let matrix = lp::unflatten(x, n, m)
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.max(0.0)).collect())
            .collect();
        Witness { matrix, class }
    }
}

/// A yes/no answer with an optional certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Decision {
    fn no() -> Decision {
        Decision { holds: false, witness: None }
    }
}

/// Error budget for approximate submajorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxParams {
    pub epsilon: f64,
    pub eta: f64,
}

impl ApproxParams {
    pub fn new(epsilon: f64, eta: f64) -> Result<ApproxParams> {
        if !(epsilon >= 0.0 && eta >= 0.0 && epsilon.is_finite() && eta.is_finite()) {
            return input(format!("errors must be finite and nonnegative, got ({epsilon}, {eta})"));
        }
        Ok(ApproxParams { epsilon, eta })
    }
}

/// Samples `(z, λ*_z)` of the boundary of the feasible `(λ, z)` region.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleBoundary {
    pub samples: Vec<(f64, f64)>,
}

/// `(p,q) ⪰ (p′,q′)`: a stochastic `M` with `Mp = p′` and `Mq = q′`.
pub fn relatively_majorizes(a: &Pair, b: &Pair) -> Result<Decision> {
    if (a.total_p() - b.total_p()).abs() > TOL || (a.total_q() - b.total_q()).abs() > TOL {
        return Ok(Decision::no());
    }
    let prog = lp::majorization_program(a.p(), a.q(), b.p(), b.q());
    Ok(match lp::feasible(&prog)? {
        Feasibility::Feasible(x) => Decision {
            holds: true,
            witness: Some(Witness::from_flat(&x, a.len(), b.len(), StochasticClass::Stochastic)),
        },
        Feasibility::Infeasible(_) => Decision::no(),
    })
}

/// `(p,q) ≻ (p′,q′)`: a substochastic `M` with `Mp ≥ p′` and `Mq ≤ q′`.
pub fn submajorizes(a: &Pair, b: &Pair, method: Method) -> Result<Decision> {
    match method {
        Method::Geometric => Ok(Decision { holds: geometric_submajorizes(a, b), witness: None }),
        Method::Lp => {
            let prog = lp::submajorization_program(a.p(), a.q(), b.p(), b.q());
            Ok(match lp::feasible(&prog)? {
                Feasibility::Feasible(x) => Decision {
                    holds: true,
                    witness: Some(Witness::from_flat(
                        &x,
                        a.len(),
                        b.len(),
                        StochasticClass::Substochastic,
                    )),
                },
                Feasibility::Infeasible(_) => Decision::no(),
            })
        }
    }
}

/// `β_x(p,q) ≤ β_x(p′,q′)` at the elbow abscissae of both pairs (those of
/// `(p′,q′)` alone suffice; the others are checked for free).
pub fn geometric_submajorizes(a: &Pair, b: &Pair) -> bool {
    let (ea, eb) = (a.elbows(), b.elbows());
    let holds = std::iter::once(0.0)
        .chain(ea.xs())
        .chain(eb.xs())
        .all(|x| ea.beta(x).le_tol(eb.beta(x), TOL));
    holds
}

/// A stochastic dilation of a submajorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    /// `(p ⊕ 0, q ⊕ z q)`.
    pub a_tilde: Pair,
    /// `(p′ ⊕ s′, q′ ⊕ q′/z)`.
    pub b_tilde: Pair,
    pub s_prime: Vec<f64>,
    pub witness: Witness,
    /// `|q′| / |q|`.
    pub z: f64,
}

/// Embed `(p,q) ≻ (p′,q′)` into a relative majorization of padded pairs
/// with the explicit block matrix
/// `[[F, u1ᵀ/|q′|], [q′vᵀ/|q′|, (1ᵀFq) q′1ᵀ/|q′|²]]`, where `Fp = p′`,
/// `Fq ≤ q′`, `u = q′ − Fq` and `vᵀ = 1ᵀ − 1ᵀF`.
pub fn dilate(a: &Pair, b: &Pair) -> Result<Dilation> {
    let (qa, qb) = (a.total_q(), b.total_q());
    if qa <= 0.0 || qb <= 0.0 {
        return domain("dilation needs |q| > 0 and |q′| > 0");
    }
    let sub = submajorizes(a, b, Method::Lp)?;
    let Some(m) = sub.witness else {
        return domain("dilation needs (p,q) to submajorize (p′,q′)");
    };
    let f = equality_form(&m, a.p(), b.p());
    let (n, n2) = (a.len(), b.len());
    let fq = f.apply(a.q());
    let u: Vec<f64> = b.q().iter().zip(&fq).map(|(x, y)| (x - y).max(0.0)).collect();
    let v: Vec<f64> = f.column_sums().iter().map(|s| (1.0 - s).max(0.0)).collect();
    let one_fq: f64 = fq.iter().sum();
    let z = qb / qa;

    let mut matrix = vec![vec![0.0; 2 * n]; 2 * n2];
    for j in 0..n2 {
        for i in 0..n {
            matrix[j][i] = f.matrix[j][i];
            matrix[j][n + i] = u[j] / qb;
            matrix[n2 + j][i] = b.q()[j] * v[i] / qb;
            matrix[n2 + j][n + i] = one_fq * b.q()[j] / (qb * qb);
        }
    }
    let vp: f64 = v.iter().zip(a.p()).map(|(x, y)| x * y).sum();
    let s_prime: Vec<f64> = b.q().iter().map(|x| x * vp / qb).collect();

    let pad = |u: &[f64], w: Vec<f64>| [u.to_vec(), w].concat();
    let a_tilde = Pair::new(pad(a.p(), vec![0.0; n]), pad(a.q(), a.q().iter().map(|x| z * x).collect()))?;
    let b_tilde = Pair::new(
        pad(b.p(), s_prime.clone()),
        pad(b.q(), b.q().iter().map(|x| x / z).collect()),
    )?;
    Ok(Dilation {
        a_tilde,
        b_tilde,
        s_prime,
        witness: Witness { matrix, class: StochasticClass::Stochastic },
        z,
    })
}

/// Scale the rows of a submajorization witness so that `Mp = p′` exactly.
fn equality_form(m: &Witness, p: &[f64], p2: &[f64]) -> Witness {
    let mp = m.apply(p);
    let matrix = m
        .matrix
        .iter()
        .zip(mp.iter().zip(p2))
        .map(|(row, (&have, &want))| {
            let s = if have > 0.0 { (want / have).min(1.0) } else { 0.0 };
            row.iter().map(|v| v * s).collect()
        })
        .collect();
    Witness { matrix, class: StochasticClass::Substochastic }
}

/// Build `M` with `Mp = p′`, `Mq ≤ q′` directly from the two lower
/// boundaries: a nested sequence of tests, each step moving along a ray of
/// the target's slope until it meets the source boundary. Rows of `M` are
/// consecutive test differences, placed at the target's indices.
pub fn witness_from_curves(a: &Pair, b: &Pair) -> Result<Witness> {
    if !geometric_submajorizes(a, b) {
        return domain("witness construction needs (p,q) to submajorize (p′,q′)");
    }
    let ea = a.elbows();
    let eb = b.elbows();
    let (px, _) = ea.end();
    let mut matrix = vec![vec![0.0; a.len()]; b.len()];
    let mut t_prev = vec![0.0; a.len()];
    let (mut xc, mut yc) = (0.0, 0.0);
    let mut saturated = false;
    for &k in &eb.permutation {
        let (dp, dq) = (b.p()[k], b.q()[k]);
        if dp <= 0.0 {
            continue;
        }
        let slope = dq / dp;
        let target = (xc + dp).min(px);
        let xhat = if saturated {
            px
        } else {
            ray_exit(&ea, xc, yc, slope, target)
        };
        if xhat >= px {
            saturated = true;
        }
        let that = ea.optimal_test(xhat);
        let span = xhat - xc;
        let theta = if span > 0.0 { (dp / span).min(1.0) } else { 1.0 };
        let t: Vec<f64> = t_prev
            .iter()
            .zip(&that)
            .map(|(u, v)| (u + theta * (v - u)).max(*u))
            .collect();
        for i in 0..a.len() {
            matrix[k][i] = (t[i] - t_prev[i]).max(0.0);
        }
        xc += dp;
        yc += t.iter().zip(a.q()).map(|(u, v)| u * v).sum::<f64>()
            - t_prev.iter().zip(a.q()).map(|(u, v)| u * v).sum::<f64>();
        t_prev = t;
    }
    Ok(Witness { matrix, class: StochasticClass::Substochastic })
}

/// Largest `x ∈ [target, |p|]` with `β(x) ≤ y0 + s(x − x0)`. The ray is
/// above the convex boundary at `target`, so the feasible set is an interval
/// and its right end is found segment by segment.
fn ray_exit(e: &Elbows, x0: f64, y0: f64, s: f64, target: f64) -> f64 {
    let (px, _) = e.end();
    let h = |x: f64| y0 + s * (x - x0) - e.beta(x).finite().unwrap_or(f64::INFINITY);
    let mut left = target;
    let mut h_left = h(left);
    for &(x, _) in &e.points {
        if x <= left {
            continue;
        }
        let h_right = h(x);
        if h_right < 0.0 {
            if h_left <= 0.0 {
                return left;
            }
            return left + (x - left) * h_left / (h_left - h_right);
        }
        left = x;
        h_left = h_right;
    }
    px
}

/// `(p,q) ≻_{ε,η} (p′,q′)`.
pub fn approx_submajorizes(a: &Pair, b: &Pair, params: ApproxParams, method: Method) -> Result<bool> {
    match method {
        Method::Lp => {
            let prog = lp::approx_program(a.p(), a.q(), b.p(), b.q(), params.epsilon, params.eta);
            Ok(lp::feasible(&prog)?.is_feasible())
        }
        Method::Geometric => Ok(geometric_approx(a, b, params)),
    }
}

/// `β_x(p,q) ≤ β_{x+ε}(p′,q′) + η` for all real `x`; both sides are
/// piecewise linear, so breakpoints of either side suffice.
fn geometric_approx(a: &Pair, b: &Pair, params: ApproxParams) -> bool {
    let ApproxParams { epsilon: eps, eta } = params;
    let (ea, eb) = (a.elbows(), b.elbows());
    let (pa, _) = ea.end();
    let (pb, _) = eb.end();
    // x just past |p|: the left side is +∞ while the right stays finite.
    if pb - eps > pa + TOL {
        return false;
    }
    let candidates = std::iter::once(0.0)
        .chain(ea.xs())
        .chain(eb.xs().map(|x| x - eps))
        .filter(|x| *x >= 0.0 && *x <= pa);
    for x in candidates {
        let rhs = eb.beta(x + eps).add(Ext::Finite(eta)).unwrap_or(Ext::PosInf);
        if !ea.beta(x).le_tol(rhs, TOL) {
            return false;
        }
    }
    true
}

fn union_coords(mut v: Vec<f64>) -> Vec<f64> {
    v.push(0.0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `(ε*, η̂*)`: the smallest first-kind error with no second-kind error, and
/// vice versa. `ε*` is the largest horizontal and `η̂*` the largest vertical
/// excess of the target boundary over the source boundary.
pub fn optimal_errors(a: &Pair, b: &Pair) -> (f64, Ext) {
    let (ea, eb) = (a.elbows(), b.elbows());
    let ys = union_coords(ea.ys().chain(eb.ys()).collect());
    let eps = ys
        .iter()
        .map(|&y| eb.alpha(y).unwrap() - ea.alpha(y).unwrap())
        .fold(0.0, f64::max);
    let xs = union_coords(ea.xs().chain(eb.xs()).collect());
    let mut eta = Ext::Finite(0.0);
    for &x in &xs {
        let d = match (ea.beta(x), eb.beta(x)) {
            (_, Ext::PosInf) => continue,
            (Ext::PosInf, _) => Ext::PosInf,
            (u, v) => Ext::Finite(u.unwrap() - v.unwrap()),
        };
        eta = eta.max(d);
    }
    (eps, eta)
}

/// LP optima of the two error programs (infeasible η program → `+∞`).
pub fn optimal_errors_lp(a: &Pair, b: &Pair) -> Result<(f64, Ext)> {
    let e = lp::solve(&lp::eps_program(a.p(), a.q(), b.p(), b.q()))?;
    let h = lp::solve(&lp::eta_program(a.p(), a.q(), b.p(), b.q()))?;
    let eta = match h.status {
        Status::Optimal => Ext::Finite(h.objective),
        _ => Ext::PosInf,
    };
    Ok((e.objective, eta))
}

fn require_normalized(a: &Pair, b: &Pair) -> Result<()> {
    if !a.is_normalized() || !b.is_normalized() {
        return input("both pairs must be normalized (|p| = |q| = 1)");
    }
    Ok(())
}

/// `λ*_z`: the largest `λ` with `(p,q) ≻ (λp′, zq′)`, from the elbows of
/// the target: `min_k α_{z y_k}(p,q) / x_k`, clamped to `[0,1]`.
pub fn lambda_star(a: &Pair, b: &Pair, z: f64) -> Result<f64> {
    require_normalized(a, b)?;
    if !(z > 0.0 && z.is_finite()) {
        return input(format!("z must be positive, got {z}"));
    }
    let ea = a.elbows();
    let v = b
        .elbows()
        .points
        .iter()
        .filter(|pt| pt.0 > 0.0)
        .map(|&(x, y)| ea.alpha(z * y).unwrap() / x)
        .fold(f64::INFINITY, f64::min);
    Ok(v.clamp(0.0, 1.0))
}

/// `λ*_z` as the optimum of the joint program in `(M, λ)`.
pub fn lambda_star_lp(a: &Pair, b: &Pair, z: f64) -> Result<f64> {
    let sol = lp::solve(&lp::lambda_program(a.p(), a.q(), b.p(), b.q(), z))?;
    Ok(sol.objective.clamp(0.0, 1.0))
}

/// `z*_λ`: the smallest `z` with `(p,q) ≻ (λp′, zq′)`, from the elbows of
/// the target: `max_k β_{λ x_k}(p,q) / y_k`. `+∞` when no `z` works.
pub fn z_star(a: &Pair, b: &Pair, lambda: f64) -> Result<Ext> {
    require_normalized(a, b)?;
    if !(lambda > 0.0 && lambda <= 1.0 + TOL) {
        return input(format!("λ must lie in (0,1], got {lambda}"));
    }
    Ok(z_star_from_elbows(&a.elbows(), &b.elbows(), lambda))
}

/// [`z_star`] on precomputed boundaries (used for tensor powers, whose
/// elbows are built without expanding the pair).
pub fn z_star_from_elbows(ea: &Elbows, eb: &Elbows, lambda: f64) -> Ext {
    // Near |p| the source boundary can be extremely steep (tensor powers),
    // so an abscissa that differs from |p| only by rounding is snapped to it.
    let end = ea.end().0;
    let snap = |x: f64| if (x - end).abs() <= 1e-12 * end.max(1.0) { end } else { x };
    let mut best = Ext::Finite(0.0);
    for &(x, y) in eb.points.iter().filter(|pt| pt.0 > 0.0) {
        let r = match ea.beta(snap(lambda * x)) {
            Ext::Finite(v) if y > 0.0 => Ext::Finite(v / y),
            Ext::Finite(v) if v <= TOL => continue,
            _ => Ext::PosInf,
        };
        best = best.max(r);
    }
    best
}

/// `z*_λ` as the optimum of the joint program in `(M, z)`.
pub fn z_star_lp(a: &Pair, b: &Pair, lambda: f64) -> Result<Ext> {
    let sol = lp::solve(&lp::z_program(a.p(), a.q(), b.p(), b.q(), lambda))?;
    Ok(match sol.status {
        Status::Optimal => Ext::Finite(sol.objective),
        _ => Ext::PosInf,
    })
}

/// `λ*_z` by bisection on `[0,1]` with one feasibility LP per step.
pub fn lambda_star_bisection(a: &Pair, b: &Pair, z: f64, iterations: u32) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    if feasible_point(a, b, 1.0, z)? {
        return Ok(1.0);
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if feasible_point(a, b, mid, z)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `z*_λ` by bisection with one feasibility LP per step. The bracket is
/// `[0, 2·hint]`, grown until its upper end is feasible.
pub fn z_star_bisection(a: &Pair, b: &Pair, lambda: f64, hint: f64, iterations: u32) -> Result<Ext> {
    let mut hi = (2.0 * hint).max(1.0);
    let mut grow = 0;
    while !feasible_point(a, b, lambda, hi)? {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Ok(Ext::PosInf);
        }
    }
    let mut lo = 0.0;
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if feasible_point(a, b, lambda, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Ext::Finite(0.5 * (lo + hi)))
}

/// `(z, λ*_z)` on a grid.
pub fn region_boundary(a: &Pair, b: &Pair, z_grid: &[f64]) -> Result<FeasibleBoundary> {
    if z_grid.is_empty() {
        return input("z grid must be nonempty");
    }
    let samples = z_grid
        .iter()
        .map(|&z| lambda_star(a, b, z).map(|l| (z, l)))
        .collect::<Result<_>>()?;
    Ok(FeasibleBoundary { samples })
}

/// Whether the pair `(λ, z)` is feasible: `(p,q) ≻ (λp′, zq′)` (LP).
pub fn feasible_point(a: &Pair, b: &Pair, lambda: f64, z: f64) -> Result<bool> {
    let scaled = b.scaled(lambda, z)?;
    Ok(submajorizes(a, &scaled, Method::Lp)?.holds)
}

/// Check that a witness certifies `(p,q) ⪰ (p′,q′)` (stochastic) or
/// `(p,q) ≻ (p′,q′)` (substochastic) within [`LP_TOL`].
pub fn verify_witness(w: &Witness, a: &Pair, b: &Pair) -> bool {
    if w.rows() != b.len() || w.cols() != a.len() || !w.is_valid(LP_TOL) {
        return false;
    }
    let (mp, mq) = (w.apply(a.p()), w.apply(a.q()));
    let close = |u: &[f64], v: &[f64], cmp: fn(f64, f64) -> bool| u.iter().zip(v).all(|(x, y)| cmp(*x, *y));
    match w.class {
        StochasticClass::Stochastic => {
            close(&mp, b.p(), |x, y| (x - y).abs() <= LP_TOL)
                && close(&mq, b.q(), |x, y| (x - y).abs() <= LP_TOL)
        }
        StochasticClass::Substochastic => {
            close(&mp, b.p(), |x, y| x >= y - LP_TOL) && close(&mq, b.q(), |x, y| x <= y + LP_TOL)
        }
    }
}

/// `s′` as weights (for callers that need the type).
impl Dilation {
    pub fn s_prime_weights(&self) -> Result<Weights> {
        Weights::new(self.s_prime.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: &[f64], q: &[f64]) -> Pair {
        Pair::new(p.to_vec(), q.to_vec()).unwrap()
    }

    fn u2() -> Vec<f64> {
        vec![0.5, 0.5]
    }

    #[test]
    fn majorization_examples() {
        let a = pair(&[0.7, 0.3], &u2());
        let b = pair(&[0.6, 0.4], &u2());
        let d = relatively_majorizes(&a, &a).unwrap();
        assert!(d.holds && verify_witness(d.witness.as_ref().unwrap(), &a, &a));
        let d = relatively_majorizes(&a, &b).unwrap();
        assert!(d.holds && verify_witness(d.witness.as_ref().unwrap(), &a, &b));
        assert!(!relatively_majorizes(&b, &a).unwrap().holds);
    }

    #[test]
    fn submajorization_examples() {
        let a = pair(&[0.7, 0.3], &u2());
        let b = pair(&[0.6, 0.4], &u2());
        let c = pair(&[0.9, 0.1], &u2());
        for m in [Method::Lp, Method::Geometric] {
            assert!(submajorizes(&a, &a, m).unwrap().holds);
            assert!(submajorizes(&a, &b, m).unwrap().holds);
            assert!(!submajorizes(&a, &c, m).unwrap().holds);
        }
        let w = submajorizes(&a, &b, Method::Lp).unwrap().witness.unwrap();
        assert!(verify_witness(&w, &a, &b));
    }

    #[test]
    fn dilation_examples() {
        let a = pair(&[0.7, 0.3], &u2());
        let d = dilate(&a, &a).unwrap();
        assert!((d.z - 1.0).abs() < 1e-12);
        assert!(d.s_prime.iter().all(|v| v.abs() < 1e-9));
        assert!(verify_witness(&d.witness, &d.a_tilde, &d.b_tilde));

        let b = pair(&[0.6 * 0.9, 0.4 * 0.9], &u2());
        let d = dilate(&a, &b).unwrap();
        assert!(verify_witness(&d.witness, &d.a_tilde, &d.b_tilde));
        assert!(relatively_majorizes(&d.a_tilde, &d.b_tilde).unwrap().holds);
        let total: f64 = d.s_prime.iter().sum::<f64>() + b.total_p();
        assert!((total - a.total_p()).abs() < 1e-9);

        assert!(dilate(&a, &pair(&[0.9, 0.1], &u2())).is_err());
    }

    #[test]
    fn curve_witness_examples() {
        let a = pair(&[0.7, 0.3], &u2());
        let w = witness_from_curves(&a, &a).unwrap();
        assert!(verify_witness(&w, &a, &a));
        let mp = w.apply(a.p());
        assert!((mp[0] - 0.7).abs() < 1e-12 && (mp[1] - 0.3).abs() < 1e-12);

        let b = pair(&[0.6, 0.4], &u2());
        let w = witness_from_curves(&a, &b).unwrap();
        assert!(verify_witness(&w, &a, &b));
        let mp = w.apply(a.p());
        assert!((mp[0] - 0.6).abs() < 1e-12 && (mp[1] - 0.4).abs() < 1e-12);

        // Target with a zero p′ entry and small total: the tests saturate.
        let src = pair(&[0.5, 0.5], &[0.1, 0.9]);
        let dst = pair(&[0.5, 0.0, 0.2], &[0.2, 0.5, 0.8]);
        let w = witness_from_curves(&src, &dst).unwrap();
        assert!(verify_witness(&w, &src, &dst));
        let mp = w.apply(src.p());
        assert!(mp.iter().zip(dst.p()).all(|(x, y)| (x - y).abs() < 1e-12));
        assert!(witness_from_curves(&a, &pair(&[0.9, 0.1], &u2())).is_err());
    }

    #[test]
    fn worked_instance() {
        let a = pair(&[0.7, 0.3], &u2());
        let b = pair(&[0.9, 0.1], &u2());
        assert!((lambda_star(&a, &b, 1.0).unwrap() - 7.0 / 9.0).abs() < 1e-12);
        assert!((z_star(&a, &b, 1.0).unwrap().unwrap() - 5.0 / 3.0).abs() < 1e-12);
        let (eps, eta) = optimal_errors(&a, &b);
        assert!((eps - 0.2).abs() < 1e-12);
        assert!((eta.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        for m in [Method::Lp, Method::Geometric] {
            assert!(approx_submajorizes(&a, &b, ApproxParams::new(0.2, 0.0).unwrap(), m).unwrap());
            assert!(!approx_submajorizes(&a, &b, ApproxParams::new(0.19, 0.0).unwrap(), m).unwrap());
            assert!(approx_submajorizes(&a, &b, ApproxParams::new(0.0, 0.0).unwrap(), m).unwrap() == false);
        }
        assert!((lambda_star_lp(&a, &b, 1.0).unwrap() - 7.0 / 9.0).abs() < 1e-9);
        assert!((z_star_lp(&a, &b, 1.0).unwrap().unwrap() - 5.0 / 3.0).abs() < 1e-9);
        let (e2, h2) = optimal_errors_lp(&a, &b).unwrap();
        assert!((e2 - 0.2).abs() < 1e-9 && (h2.unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn self_transformation_law() {
        let a = pair(&[0.7, 0.3], &u2());
        let fb = region_boundary(&a, &a, &[0.5, 1.0, 2.0]).unwrap();
        let want = [(0.5, 0.5), (1.0, 1.0), (2.0, 1.0)];
        for (got, want) in fb.samples.iter().zip(want) {
            assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12);
        }
        assert!((z_star(&a, &a, 1.0).unwrap().unwrap() - 1.0).abs() < 1e-12);
        let one = Pair::trivial();
        for lam in [0.3, 0.8, 1.0] {
            let z = z_star(&a, &one, lam).unwrap().unwrap();
            assert!((z - a.beta(lam).unwrap()).abs() < 1e-12);
        }
        assert!(region_boundary(&a, &a, &[]).is_err());
        assert_eq!(region_boundary(&a, &a, &[1.0]).unwrap().samples.len(), 1);
    }

    #[test]
    fn single_elbow_target() {
        // Target ((1,0),(g1,g2)): one elbow at (1, g1).
        let a = pair(&[0.6, 0.3, 0.1], &[0.2, 0.3, 0.5]);
        let b = pair(&[1.0, 0.0], &[0.25, 0.75]);
        for z in [0.5, 1.0, 2.0] {
            let want = a.alpha(z * 0.25).unwrap().min(1.0);
            assert!((lambda_star(&a, &b, z).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_is_required() {
        let a = pair(&[0.7, 0.2], &u2());
        assert!(lambda_star(&a, &a, 1.0).is_err());
        assert!(z_star(&a, &a, 1.0).is_err());
        let b = pair(&[0.7, 0.3], &u2());
        assert!(z_star(&b, &b, 0.0).is_err());
    }
}
