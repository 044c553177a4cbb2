//! Pure bipartite states, through their Schmidt coefficients. A state with
//! coefficients `p` corresponds to the pair `(p, 1_m)`; LOCC can take
//! `ψ_q` to `ψ_p` exactly when `p ⪰ q`. The same calculus applies verbatim
//! to squared amplitudes under strictly incoherent operations.

use crate::curve::{shannon_entropy, variational_distance, Elbows, Pair, Weights};
use crate::error::{input, Error, Result};
use crate::ext::Ext;
use crate::lp::{self, LinearProgram, Relation, Sense, Status};
use crate::submaj::{optimal_errors, relatively_majorizes};
use crate::{NORM_TOL, TOL};

/// Normalized Schmidt coefficients, in any order.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    coefficients: Weights,
}

impl SchmidtVector {
    pub fn new(coefficients: Vec<f64>) -> Result<SchmidtVector> {
        let coefficients = Weights::new(coefficients)?;
        if (coefficients.sum() - 1.0).abs() > NORM_TOL {
            return input(format!("Schmidt coefficients must sum to 1, got {}", coefficients.sum()));
        }
        Ok(SchmidtVector { coefficients })
    }

    /// The maximally entangled state of rank `n`.
    pub fn maximally_entangled(n: usize) -> SchmidtVector {
        SchmidtVector::new(vec![1.0 / n as f64; n.max(1)]).expect("valid")
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|v| **v > 0.0).count()
    }

    /// Coefficients in nonincreasing order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.coefficients.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Sorted and zero-padded to length `m ≥ len`.
    pub fn padded(&self, m: usize) -> Vec<f64> {
        let mut v = self.sorted();
        v.resize(m.max(v.len()), 0.0);
        v
    }

    /// `(p, 1_m)`.
    pub fn pair(&self, m: usize) -> Pair {
        let p = self.padded(m);
        let n = p.len();
        Pair::new(p, vec![1.0; n]).expect("valid pair")
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.coefficients).expect("normalized")
    }
}

fn common(a: &SchmidtVector, b: &SchmidtVector) -> usize {
    a.len().max(b.len())
}

/// `Σ_{j≤k} p↓_j ≥ Σ_{j≤k} q↓_j` for every `k` (padded to equal length).
pub fn majorizes_by_partial_sums(p: &[f64], q: &[f64]) -> bool {
    let mut ps = p.to_vec();
    let mut qs = q.to_vec();
    ps.sort_by(|a, b| b.total_cmp(a));
    qs.sort_by(|a, b| b.total_cmp(a));
    let m = ps.len().max(qs.len());
    ps.resize(m, 0.0);
    qs.resize(m, 0.0);
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..m {
        sp += ps[k];
        sq += qs[k];
        if sp < sq - TOL {
            return false;
        }
    }
    true
}

/// Whether LOCC can take `source` to `target` with certainty. Decided by the
/// relative-majorization LP and by partial sums; a disagreement is reported
/// as a solver error.
pub fn locc_possible(source: &SchmidtVector, target: &SchmidtVector) -> Result<bool> {
    let m = common(source, target);
    let lp = relatively_majorizes(&target.pair(m), &source.pair(m))?.holds;
    let sums = majorizes_by_partial_sums(&target.padded(m), &source.padded(m));
    if lp != sums {
        return Err(Error::Solver(format!(
            "majorization LP ({lp}) and partial sums ({sums}) disagree"
        )));
    }
    Ok(sums)
}

/// Optimal success probability `min_k Σ_{j≥k} q↓_j / Σ_{j≥k} p↓_j`.
pub fn vidal_probability(source: &SchmidtVector, target: &SchmidtVector) -> f64 {
    let m = common(source, target);
    let (q, p) = (source.padded(m), target.padded(m));
    let (mut tq, mut tp) = (0.0, 0.0);
    let mut best: f64 = 1.0;
    for k in (0..m).rev() {
        tq += q[k];
        tp += p[k];
        if tp > 0.0 {
            best = best.min(tq / tp);
        }
    }
    best.clamp(0.0, 1.0)
}

/// The same probability as the optimum of `max λ` subject to
/// `(1, λp) ≻ (1, q)`, linearized with `N = λM`:
/// `N1 ≥ λ1`, `Np ≤ q`, `1ᵀN ≤ λ1ᵀ`.
pub fn vidal_probability_lp(source: &SchmidtVector, target: &SchmidtVector) -> Result<f64> {
    let m = common(source, target);
    let (q, p) = (source.padded(m), target.padded(m));
    let lam = m * m;
    let mut prog = LinearProgram::new(Sense::Maximize, m * m + 1);
    prog.set_objective(lam, 1.0);
    for j in 0..m {
        let mut row: Vec<(usize, f64)> = (0..m).map(|i| (lp::mat_index(m, j, i), 1.0)).collect();
        row.push((lam, -1.0));
        prog.add_sparse(&row, Relation::Ge, 0.0);
        let row: Vec<(usize, f64)> = (0..m).map(|i| (lp::mat_index(m, j, i), p[i])).collect();
        prog.add_sparse(&row, Relation::Le, q[j]);
    }
    for i in 0..m {
        let mut col: Vec<(usize, f64)> = (0..m).map(|j| (lp::mat_index(m, j, i), 1.0)).collect();
        col.push((lam, -1.0));
        prog.add_sparse(&col, Relation::Le, 0.0);
    }
    let sol = lp::solve(&prog)?;
    match sol.status {
        Status::Optimal => Ok(sol.objective.clamp(0.0, 1.0)),
        _ => Err(Error::Solver("probability program not optimal".into())),
    }
}

/// Entanglement cost `z* = max_{x∈(0,1]} β_x(p,1)/β_x(q,1)`: the smallest
/// battery ratio `n_b/n′_b` enabling `ψ_q ⊗ φ_{n_b} → ψ_p ⊗ φ_{n′_b}`
/// (as an infimum over rationals). The gain is `−ln z*`.
pub fn entanglement_cost(source: &SchmidtVector, target: &SchmidtVector) -> f64 {
    let m = common(source, target);
    let (ep, eq) = (target.pair(m).elbows(), source.pair(m).elbows());
    cost_from_elbows(&ep, &eq)
}

fn cost_from_elbows(ep: &Elbows, eq: &Elbows) -> f64 {
    let mut xs: Vec<f64> = ep.xs().chain(eq.xs()).filter(|x| *x > 0.0).map(|x| x.min(1.0)).collect();
    xs.push(1.0);
    xs.iter()
        .map(|&x| ep.beta(x).unwrap() / eq.beta(x).unwrap())
        .fold(0.0, f64::max)
}

pub fn entanglement_gain(source: &SchmidtVector, target: &SchmidtVector) -> f64 {
    -entanglement_cost(source, target).ln()
}

/// Battery sizes found by [`battery_cost_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryRatio {
    pub initial: u32,
    pub final_: u32,
}

impl BatteryRatio {
    pub fn ratio(&self) -> f64 {
        self.initial as f64 / self.final_ as f64
    }
}

/// Brute force over battery sizes `n_b, n′_b ≤ max`: the smallest
/// `n_b/n′_b` with `p ⊗ w_{n′_b} ⪰ q ⊗ w_{n_b}`, checked by partial sums.
pub fn battery_cost_search(source: &SchmidtVector, target: &SchmidtVector, max: u32) -> Option<BatteryRatio> {
    let (q, p) = (source.sorted(), target.sorted());
    let expand = |v: &[f64], n: u32| -> Vec<f64> {
        v.iter().flat_map(|x| std::iter::repeat(x / n as f64).take(n as usize)).collect()
    };
    let mut best: Option<BatteryRatio> = None;
    for fin in 1..=max {
        let big_p = expand(&p, fin);
        // Feasibility is monotone in n_b: a larger initial battery only helps.
        let ok = |init: u32| majorizes_by_partial_sums(&big_p, &expand(&q, init));
        if !ok(max) {
            continue;
        }
        let (mut lo, mut hi) = (1u32, max);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let cand = BatteryRatio { initial: lo, final_: fin };
        if best.map_or(true, |b| cand.ratio() < b.ratio()) {
            best = Some(cand);
        }
    }
    best
}

/// Lower bounds on the best achievable fidelity `F*_z(source → target)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityBounds {
    /// `1 − ε*` with `ε* = min{ε : (p,1) ≻_{ε,0} (q, z1)}`.
    pub shift: f64,
    /// `1 − √((H(target) − H(source))/2)` for `z = 1`, when `source ⪰ target`.
    pub entropy: Option<f64>,
    /// `z / z*` when `z ≤ z*`.
    pub cost: Option<f64>,
    /// `B(source, target)`.
    pub bhattacharyya: f64,
}

pub fn fidelity_bounds(source: &SchmidtVector, target: &SchmidtVector, z: f64) -> Result<FidelityBounds> {
    if !(z > 0.0 && z.is_finite()) {
        return input(format!("z must be positive, got {z}"));
    }
    let m = common(source, target);
    let eps = optimal_errors(&target.pair(m), &source.pair(m).scaled(1.0, z)?).0;
    let entropy = if majorizes_by_partial_sums(&source.padded(m), &target.padded(m)) {
        Some(1.0 - ((target.entropy() - source.entropy()).max(0.0) / 2.0).sqrt())
    } else {
        None
    };
    let zs = entanglement_cost(source, target);
    let cost = (z <= zs + TOL).then(|| z / zs);
    Ok(FidelityBounds {
        shift: 1.0 - eps,
        entropy,
        cost,
        bhattacharyya: bhattacharyya(&source.padded(m), &target.padded(m))?,
    })
}

/// `B(p,p′) = Σ √(p_k p′_k)`, componentwise as given.
pub fn bhattacharyya(p: &[f64], p2: &[f64]) -> Result<f64> {
    if p.len() != p2.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: p2.len() });
    }
    Ok(p.iter().zip(p2).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `(1 − B, δ, √(1 − B²))`: the variational distance sits between the outer
/// two for normalized inputs.
pub fn sandwich(p: &[f64], p2: &[f64]) -> Result<(f64, f64, f64)> {
    let b = bhattacharyya(p, p2)?;
    let d = variational_distance(p, p2)?;
    Ok((1.0 - b, d, (1.0 - b * b).max(0.0).sqrt()))
}

/// `ε*` of `(p,1) → (q,z1)` if needed as an extended value.
pub fn shift_error(source: &SchmidtVector, target: &SchmidtVector, z: f64) -> Result<Ext> {
    let m = common(source, target);
    Ok(Ext::Finite(optimal_errors(&target.pair(m), &source.pair(m).scaled(1.0, z)?).0))
}
