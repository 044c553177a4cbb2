//! Quasiclassical thermodynamics: a resource is a state `r` together with
//! its Gibbs reference `g`, and thermal operations act on `(r,g)` exactly
//! as relative majorization does. Work enters through `z = e^{−βW}`
//! (`W > 0` is extraction).

use std::fmt;

use crate::curve::{
    relative_entropy, tensor_power_with_cap, Pair, Weights, DEFAULT_CAP,
};
use crate::error::{domain, input, Error, Result};
use crate::ext::Ext;
use crate::lp::{self, LinearProgram, Relation, Sense, Status};
use crate::submaj::{
    self, lambda_star, optimal_errors, relatively_majorizes, submajorizes, z_star,
    z_star_from_elbows, Decision, Method, StochasticClass, Witness,
};
use crate::{NORM_TOL, TOL};

/// A normalized state with a strictly positive Gibbs reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Resource {
    r: Weights,
    g: Weights,
    label: String,
}

impl Resource {
    pub fn new(r: Vec<f64>, g: Vec<f64>, label: impl Into<String>) -> Result<Resource> {
        let (r, g) = (Weights::new(r)?, Weights::new(g)?);
        if r.len() != g.len() {
            return Err(Error::LengthMismatch { left: r.len(), right: g.len() });
        }
        if (r.sum() - 1.0).abs() > NORM_TOL {
            return input(format!("state must be normalized, |r| = {}", r.sum()));
        }
        if (g.sum() - 1.0).abs() > NORM_TOL {
            return input(format!("Gibbs state must be normalized, |g| = {}", g.sum()));
        }
        if let Some(k) = g.iter().position(|v| *v <= 0.0) {
            return input(format!("Gibbs state must be strictly positive (g[{k}] = {})", g[k]));
        }
        Ok(Resource { r, g, label: label.into() })
    }

    /// State `population` at inverse temperature `beta` over `energies`.
    pub fn thermal(
        population: Vec<f64>,
        energies: &[f64],
        beta: f64,
        label: impl Into<String>,
    ) -> Result<Resource> {
        let g = gibbs(energies, beta)?;
        Resource::new(population, g.into_vec(), label)
    }

    /// The one-level resource `r = g = (1)`: no output.
    pub fn trivial() -> Resource {
        Resource::new(vec![1.0], vec![1.0], "trivial").expect("valid")
    }

    /// Equilibrium state `r = g`.
    pub fn equilibrium(g: Vec<f64>) -> Result<Resource> {
        Resource::new(g.clone(), g, "equilibrium")
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn pair(&self) -> Pair {
        Pair::new(self.r.to_vec(), self.g.to_vec()).expect("resource is a valid pair")
    }

    /// `(r′, z g′)`.
    pub fn scaled_pair(&self, z: f64) -> Result<Pair> {
        self.pair().scaled(1.0, z)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Resource {
        self.label = label.into();
        self
    }

    /// `D(r‖g)`, finite since `g > 0`.
    pub fn free_energy_divergence(&self) -> f64 {
        relative_entropy(&self.r, &self.g).expect("same length").unwrap()
    }

    /// `D(g‖r)`; `+∞` when `r` has a zero entry.
    pub fn reverse_divergence(&self) -> Ext {
        relative_entropy(&self.g, &self.r).expect("same length")
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: r = {:?}, g = {:?}", self.label, &*self.r, &*self.g)
    }
}

/// Battery bookkeeping for second-kind errors: only `e^{−βE}/Z_B` matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryContext {
    pub beta: f64,
    pub energy: f64,
    pub partition: f64,
}

impl BatteryContext {
    pub fn new(beta: f64, energy: f64, partition: f64) -> Result<BatteryContext> {
        if !(beta > 0.0 && beta.is_finite()) {
            return input(format!("β must be positive, got {beta}"));
        }
        if !(partition > 0.0 && partition.is_finite()) || !energy.is_finite() {
            return input(format!("battery needs Z_B > 0 and finite E, got ({energy}, {partition})"));
        }
        Ok(BatteryContext { beta, energy, partition })
    }

    /// Battery with the given level energies, initially at `levels[start]`.
    pub fn from_levels(beta: f64, levels: &[f64], start: usize) -> Result<BatteryContext> {
        let Some(&energy) = levels.get(start) else {
            return input("battery start level out of range");
        };
        let z: f64 = levels.iter().map(|e| (-beta * e).exp()).sum();
        BatteryContext::new(beta, energy, z)
    }

    /// `e^{−βE}/Z_B`.
    pub fn scale(&self) -> f64 {
        (-self.beta * self.energy).exp() / self.partition
    }

    /// Physical second-kind error from the battery-free one.
    pub fn physical_eta(&self, eta_hat: Ext) -> Ext {
        eta_hat.scale(self.scale())
    }
}

/// `z = e^{−βW}`.
pub fn work_to_z(work: f64, beta: f64) -> f64 {
    (-beta * work).exp()
}

/// `W = −ln(z)/β`.
pub fn z_to_work(z: f64, beta: f64) -> f64 {
    -z.ln() / beta
}

/// Boltzmann weights `e^{−βE_k}/Z`, shifted by the ground energy so that
/// no exponent is positive.
pub fn gibbs(energies: &[f64], beta: f64) -> Result<Weights> {
    if energies.is_empty() {
        return input("energies must be nonempty");
    }
    if !(beta > 0.0 && beta.is_finite()) || energies.iter().any(|e| !e.is_finite()) {
        return input("β must be positive and energies finite");
    }
    let ground = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - ground)).exp()).collect();
    let z: f64 = w.iter().sum();
    Weights::new(w.into_iter().map(|v| v / z).collect())
}

/// Exact thermal transformability `R → R′`.
pub fn can_transform(a: &Resource, b: &Resource) -> Result<Decision> {
    relatively_majorizes(&a.pair(), &b.pair())
}

/// `R → R′` while extracting work `W` (negative `W` is work spent).
pub fn work_assisted_feasible(a: &Resource, b: &Resource, work: f64, beta: f64) -> Result<Decision> {
    if !(beta > 0.0) {
        return input(format!("β must be positive, got {beta}"));
    }
    let z = work_to_z(work, beta);
    submajorizes(&a.pair(), &b.scaled_pair(z)?, Method::Lp)
}

/// Optimal probabilities and errors of `R → R′` along grids.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    pub lambda_star_at_z: Vec<(f64, f64)>,
    pub z_star_at_lambda: Vec<(f64, Ext)>,
    pub eps_star_at_z: Vec<(f64, f64)>,
    pub eta_hat_star_at_z: Vec<(f64, Ext)>,
}

impl TransformReport {
    /// `η̂*` scaled to the physical error of a given battery.
    pub fn physical_eta(&self, battery: &BatteryContext) -> Vec<(f64, Ext)> {
        self.eta_hat_star_at_z.iter().map(|&(z, e)| (z, battery.physical_eta(e))).collect()
    }
}

/// `ε*_z(R→R′)` and `η̂*_z(R→R′)`.
pub fn errors_at(a: &Resource, b: &Resource, z: f64) -> Result<(f64, Ext)> {
    if !(z > 0.0 && z.is_finite()) {
        return input(format!("z must be positive, got {z}"));
    }
    Ok(optimal_errors(&a.pair(), &b.scaled_pair(z)?))
}

pub fn transform_report(
    a: &Resource,
    b: &Resource,
    z_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<TransformReport> {
    if z_grid.is_empty() || lambda_grid.is_empty() {
        return input("grids must be nonempty");
    }
    let (pa, pb) = (a.pair(), b.pair());
    let mut report = TransformReport {
        lambda_star_at_z: Vec::new(),
        z_star_at_lambda: Vec::new(),
        eps_star_at_z: Vec::new(),
        eta_hat_star_at_z: Vec::new(),
    };
    for &z in z_grid {
        report.lambda_star_at_z.push((z, lambda_star(&pa, &pb, z)?));
        let (eps, eta) = errors_at(a, b, z)?;
        report.eps_star_at_z.push((z, eps));
        report.eta_hat_star_at_z.push((z, eta));
    }
    for &l in lambda_grid {
        report.z_star_at_lambda.push((l, z_star(&pa, &pb, l)?));
    }
    Ok(report)
}

/// Work value of `R` (transformation `R → 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkValue {
    /// `z*_λ(R→1) = β_λ(r,g)`.
    pub z_star: f64,
    /// `λ*_z(R→1) = α_z(r,g)`.
    pub lambda_star: f64,
    /// `η̂*_z(R→1)`.
    pub eta_hat: f64,
}

pub fn work_value(a: &Resource, z: f64, lambda: f64) -> Result<WorkValue> {
    check_unit("z", z)?;
    check_unit("λ", lambda)?;
    let e = a.pair().elbows();
    // β_1(r,g) is the Gibbs weight of the support of r; it is 1 for
    // full-support states, giving the familiar 1 − z.
    let support = e.beta(1.0).unwrap();
    Ok(WorkValue {
        z_star: e.beta(lambda).unwrap(),
        lambda_star: e.alpha(z).unwrap().min(1.0),
        eta_hat: (support - z).max(0.0),
    })
}

/// Work cost of `R` (transformation `1 → R`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkCost {
    /// `z*_λ(1→R) = λ max_k r_k/g_k`.
    pub z_star: f64,
    /// `ε*_z(1→R) = φ_z(R)`.
    pub eps_star: f64,
    /// `η̂*_z(1→R) = φ_z(R)`.
    pub eta_star: f64,
}

pub fn work_cost(a: &Resource, lambda: f64, z: f64) -> Result<WorkCost> {
    check_unit("λ", lambda)?;
    if !(z >= 1.0 - TOL && z.is_finite()) {
        return input(format!("work-cost errors are given by φ only for z ≥ 1, got {z}"));
    }
    let ratio = a.r().iter().zip(a.g()).map(|(r, g)| r / g).fold(0.0, f64::max);
    let f = phi(a, z)?;
    Ok(WorkCost { z_star: lambda * ratio, eps_star: f, eta_star: f })
}

/// `φ_z(R) = Σ_k (r_k − z g_k)₊`.
pub fn phi(a: &Resource, z: f64) -> Result<f64> {
    if !(z >= 0.0 && z.is_finite()) {
        return input(format!("z must be finite and nonnegative, got {z}"));
    }
    Ok(a.r().iter().zip(a.g()).map(|(r, g)| (r - z * g).max(0.0)).sum())
}

/// `β_λ(r,g)` through its conjugate: `max_{μ ≥ 0} (μλ − μ φ_{1/μ}(R))`,
/// evaluated at the breakpoints `μ = g_k / r_k` (where the maximum sits)
/// together with `μ = 0`.
pub fn beta_from_conjugate(a: &Resource, lambda: f64) -> f64 {
    let mut best: f64 = 0.0;
    for (r, g) in a.r().iter().zip(a.g()) {
        if *r > 0.0 {
            let mu = g / r;
            let v = mu * lambda - mu * phi(a, 1.0 / mu).unwrap();
            best = best.max(v);
        }
    }
    best
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0 + TOL) {
        return input(format!("{name} must lie in (0,1], got {v}"));
    }
    Ok(())
}

/// Outcome of one inequality in a [`BoundsReport`].
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Holds,
    Violated,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub id: &'static str,
    pub lhs: Ext,
    pub rhs: Ext,
    pub outcome: Outcome,
}

impl BoundEntry {
    /// Entry for `lhs ≤ rhs`.
    fn le(id: &'static str, lhs: Ext, rhs: Ext) -> BoundEntry {
        let outcome = if lhs.le_tol(rhs, TOL) { Outcome::Holds } else { Outcome::Violated };
        BoundEntry { id, lhs, rhs, outcome }
    }

    /// Entry for `lhs ≥ rhs`.
    fn ge(id: &'static str, lhs: Ext, rhs: Ext) -> BoundEntry {
        let outcome = if rhs.le_tol(lhs, TOL) { Outcome::Holds } else { Outcome::Violated };
        BoundEntry { id, lhs, rhs, outcome }
    }

    fn skipped(id: &'static str, why: impl Into<String>) -> BoundEntry {
        BoundEntry { id, lhs: Ext::NegInf, rhs: Ext::NegInf, outcome: Outcome::Skipped(why.into()) }
    }

    pub fn satisfied(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.outcome == Outcome::Violated)
    }

    pub fn get(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Identifiers of the inequalities evaluated by [`bounds_report`].
pub mod bound_ids {
    /// `ε*_z(R→1) + ε*_{z′}(1→R) ≥ 1 − zz′`.
    pub const FENCHEL: &str = "fenchel";
    /// `λ*_z z*_λ ≤ λz` for feasible `(λ,z)`.
    pub const FEASIBLE_PRODUCT: &str = "feasible-product";
    /// `λ*_z z*_λ ≥ λz` for infeasible `(λ,z)`.
    pub const INFEASIBLE_PRODUCT: &str = "infeasible-product";
    /// `(1 − η̂*_z) z* ≥ z` for `z ≤ z*`.
    pub const ETA_WORK: &str = "eta-work";
    /// `z*_{λλ′}(R→R) ≤ z*_λ(R→R′) z*_{λ′}(R′→R)`.
    pub const WORK_CHAIN: &str = "work-chain";
    /// `λ*_{zz′}(R→R) ≥ λ*_z(R→R′) λ*_{z′}(R′→R)`.
    pub const PROBABILITY_CHAIN: &str = "probability-chain";
    /// `z*_λ(R→R′) z*_λ(R′→R) ≥ λ²`.
    pub const REVERSE_WORK: &str = "reverse-work";
    /// `λ λ*_z(R′→R) ≤ z z*_λ(R→R′)`.
    pub const REVERSE_PROBABILITY: &str = "reverse-probability";
    /// `η̂*_z(R′→R) ≥ β_1(r′,g′)(1 − z z*(R→R′))`.
    pub const REVERSE_ETA: &str = "reverse-eta";
    /// `ε*_{1/z}(R′→R) ≤ √((D(r‖g) − D(r′‖g′) + ln z)/2)` when `R → R′`
    /// extracting `W` is possible.
    pub const RECOVERY_EPS: &str = "recovery-eps";
    /// `η̂*_1(R′→R) ≤ √((D(g‖r) − D(g′‖r′))/2)` when `R → R′`.
    pub const RECOVERY_ETA: &str = "recovery-eta";
    /// `ε*_z ≤ 1 − λ*_z`.
    pub const EPS_PROBABILITY: &str = "eps-probability";
}

/// Evaluate the bound suite for `R = a`, `R′ = b`. Gated inequalities whose
/// preconditions fail are reported as skipped.
pub fn bounds_report(a: &Resource, b: &Resource, lambda: f64, z: f64, z_prime: f64) -> Result<BoundsReport> {
    use bound_ids::*;
    check_unit("λ", lambda)?;
    for (name, v) in [("z", z), ("z′", z_prime)] {
        if !(v > 0.0 && v.is_finite()) {
            return input(format!("{name} must be positive, got {v}"));
        }
    }
    let (pa, pb) = (a.pair(), b.pair());
    let one = Pair::trivial();
    let mut entries = Vec::new();

    let eps_value = optimal_errors(&pa, &one.scaled(1.0, z)?).0;
    let eps_cost = optimal_errors(&one, &pa.scaled(1.0, z_prime)?).0;
    entries.push(BoundEntry::ge(FENCHEL, Ext::Finite(eps_value + eps_cost), Ext::Finite(1.0 - z * z_prime)));

    let lam_z = lambda_star(&pa, &pb, z)?;
    let z_lam = z_star(&pa, &pb, lambda)?;
    let product = Ext::Finite(lam_z).mul(z_lam);
    let target = Ext::Finite(lambda * z);
    let feasible = lambda <= lam_z;
    let (used, unused) = if feasible {
        (FEASIBLE_PRODUCT, INFEASIBLE_PRODUCT)
    } else {
        (INFEASIBLE_PRODUCT, FEASIBLE_PRODUCT)
    };
    entries.push(match product {
        None => BoundEntry::skipped(used, "product 0·∞"),
        Some(p) if feasible => BoundEntry::le(used, p, target),
        Some(p) => BoundEntry::ge(used, p, target),
    });
    entries.push(BoundEntry::skipped(unused, if feasible { "(λ,z) feasible" } else { "(λ,z) infeasible" }));

    let z1 = z_star(&pa, &pb, 1.0)?;
    entries.push(match z1 {
        Ext::Finite(zs) if z <= zs => {
            let eta = errors_at(a, b, z)?.1;
            let lhs = Ext::Finite(1.0).add(eta.neg()).and_then(|v| v.mul(Ext::Finite(zs)));
            BoundEntry::ge(ETA_WORK, lhs.unwrap_or(Ext::NegInf), Ext::Finite(z))
        }
        Ext::Finite(_) => BoundEntry::skipped(ETA_WORK, "z > z*"),
        _ => BoundEntry::skipped(ETA_WORK, "z* infinite"),
    });

    let chain = chain_bounds(a, b, a, lambda, lambda, z, z_prime)?;
    entries.extend(chain.entries);

    let back = z_star(&pb, &pa, lambda)?;
    entries.push(match z_lam.mul(back) {
        Some(p) => BoundEntry::ge(REVERSE_WORK, p, Ext::Finite(lambda * lambda)),
        None => BoundEntry::skipped(REVERSE_WORK, "product 0·∞"),
    });
    let lam_back = lambda_star(&pb, &pa, z)?;
    entries.push(BoundEntry::le(
        REVERSE_PROBABILITY,
        Ext::Finite(lambda * lam_back),
        z_lam.scale(z),
    ));

    let eta_back = errors_at(b, a, z)?.1;
    let support = pb.beta(1.0).unwrap();
    let rhs = match z1 {
        Ext::Finite(v) => Ext::Finite(support * (1.0 - z * v)),
        _ => Ext::NegInf,
    };
    entries.push(BoundEntry::ge(REVERSE_ETA, eta_back, rhs));

    if submajorizes(&pa, &pb.scaled(1.0, z)?, Method::Geometric)?.holds {
        let lhs = errors_at(b, a, 1.0 / z)?.0;
        let gap = a.free_energy_divergence() - b.free_energy_divergence() + z.ln();
        entries.push(BoundEntry::le(RECOVERY_EPS, Ext::Finite(lhs), Ext::Finite(pinsker(gap))));
    } else {
        entries.push(BoundEntry::skipped(RECOVERY_EPS, "work-assisted transformation impossible"));
    }

    entries.push(match (a.reverse_divergence(), b.reverse_divergence()) {
        (Ext::Finite(da), Ext::Finite(db)) if relatively_majorizes(&pa, &pb)?.holds => {
            let lhs = errors_at(b, a, 1.0)?.1;
            BoundEntry::le(RECOVERY_ETA, lhs, Ext::Finite(pinsker(da - db)))
        }
        (Ext::Finite(_), _) => BoundEntry::skipped(RECOVERY_ETA, "R does not majorize R′"),
        _ => BoundEntry::skipped(RECOVERY_ETA, "D(g‖r) infinite"),
    });

    let eps = errors_at(a, b, z)?.0;
    entries.push(BoundEntry::le(EPS_PROBABILITY, Ext::Finite(eps), Ext::Finite(1.0 - lam_z)));
    Ok(BoundsReport { entries })
}

/// Pinsker: `δ ≤ √(D/2)` (natural logarithm).
pub fn pinsker(divergence: f64) -> f64 {
    (divergence.max(0.0) / 2.0).sqrt()
}

/// The two chain inequalities for `R₁ → R₂ → R₃`.
pub fn chain_bounds(
    r1: &Resource,
    r2: &Resource,
    r3: &Resource,
    lambda: f64,
    lambda_prime: f64,
    z: f64,
    z_prime: f64,
) -> Result<BoundsReport> {
    use bound_ids::*;
    let (p1, p2, p3) = (r1.pair(), r2.pair(), r3.pair());
    let direct = z_star(&p1, &p3, lambda * lambda_prime)?;
    let via = z_star(&p1, &p2, lambda)?.mul(z_star(&p2, &p3, lambda_prime)?);
    let work = match via {
        Some(v) => BoundEntry::le(WORK_CHAIN, direct, v),
        None => BoundEntry::skipped(WORK_CHAIN, "product 0·∞"),
    };
    let direct = lambda_star(&p1, &p3, z * z_prime)?;
    let via = lambda_star(&p1, &p2, z)? * lambda_star(&p2, &p3, z_prime)?;
    let prob = BoundEntry::ge(PROBABILITY_CHAIN, Ext::Finite(direct), Ext::Finite(via));
    Ok(BoundsReport { entries: vec![work, prob] })
}

/// The canonical reversal of a column-stochastic `T` relative to `q`:
/// `T̂[i][j] = q_i T[j][i] / (Tq)_j`. It maps `Tq` back to `q`.
pub fn petz_recovery(t: &Witness, q: &[f64]) -> Result<Witness> {
    if t.class != StochasticClass::Stochastic || !t.is_valid(1e-9) {
        return input("Petz recovery needs a column-stochastic map");
    }
    if t.cols() != q.len() {
        return Err(Error::LengthMismatch { left: t.cols(), right: q.len() });
    }
    if q.iter().any(|v| *v <= 0.0) {
        return domain("reference must be strictly positive");
    }
    let tq = t.apply(q);
    if let Some(j) = tq.iter().position(|v| *v <= 0.0) {
        return domain(format!("(Tq)[{j}] = 0"));
    }
    let matrix = (0..q.len())
        .map(|i| (0..t.rows()).map(|j| q[i] * t.matrix[j][i] / tq[j]).collect())
        .collect();
    let out = Witness { matrix, class: StochasticClass::Stochastic };
    if !out.is_valid(1e-9) {
        return Err(Error::Solver("recovered map is not column-stochastic".into()));
    }
    Ok(out)
}

/// One row of an asymptotic table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub n: u32,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub points: Vec<RatePoint>,
    pub limit: Ext,
}

impl RateTable {
    pub fn at(&self, n: u32) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.rate)
    }
}

/// `−(1/N) ln z*_λ(Rᴺ → R′ᴺ)` for the given block lengths, with the limit
/// `D(r‖g) − D(r′‖g′)`. Powers are aggregated by type class.
pub fn asymptotic_work_rate(a: &Resource, b: &Resource, ns: &[u32], lambda: f64) -> Result<RateTable> {
    asymptotic_work_rate_with_cap(a, b, ns, lambda, DEFAULT_CAP)
}

pub fn asymptotic_work_rate_with_cap(
    a: &Resource,
    b: &Resource,
    ns: &[u32],
    lambda: f64,
    cap: usize,
) -> Result<RateTable> {
    check_unit("λ", lambda)?;
    let (pa, pb) = (a.pair(), b.pair());
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let ea = tensor_power_with_cap(&pa, n, cap)?.elbows();
        let eb = tensor_power_with_cap(&pb, n, cap)?.elbows();
        let rate = match z_star_from_elbows(&ea, &eb, lambda) {
            Ext::Finite(z) if z > 0.0 => -z.ln() / n as f64,
            Ext::Finite(_) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        points.push(RatePoint { n, rate });
    }
    let limit = Ext::Finite(a.free_energy_divergence() - b.free_energy_divergence());
    Ok(RateTable { points, limit })
}

/// `−(1/N) ln β_{1/2}(gᴺ, rᴺ)`: the exponent of the smallest error in
/// erasing `Rᴺ` to a single bit; the limit is `D(g‖r)`.
pub fn erasure_cooling_rates(a: &Resource, ns: &[u32]) -> Result<RateTable> {
    let swapped = a.pair().swapped();
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let e = tensor_power_with_cap(&swapped, n, DEFAULT_CAP)?.elbows();
        let eps = e.beta(0.5).unwrap();
        let rate = if eps > 0.0 { -eps.ln() / n as f64 } else { f64::INFINITY };
        points.push(RatePoint { n, rate });
    }
    Ok(RateTable { points, limit: a.reverse_divergence() })
}

/// A conditional map `M̂(j, w | k)` stored as `m[k][j][w]`.
pub type WorkConditional = [Vec<Vec<f64>>];

/// Whether `M̂` can be implemented by thermal operations with work values
/// `w`: `Σ_{k,w} e^{βw} M̂(j,w|k) e^{−βE_k} = e^{−βE′_j}` for every `j`.
pub fn gibbs_stochastic_check(
    mhat: &WorkConditional,
    energies_in: &[f64],
    energies_out: &[f64],
    work: &[f64],
    beta: f64,
) -> Result<bool> {
    if mhat.len() != energies_in.len() {
        return Err(Error::LengthMismatch { left: mhat.len(), right: energies_in.len() });
    }
    for (k, block) in mhat.iter().enumerate() {
        if block.len() != energies_out.len() || block.iter().any(|row| row.len() != work.len()) {
            return input(format!("conditional for input {k} has the wrong shape"));
        }
        if block.iter().flatten().any(|v| !(*v >= 0.0)) {
            return input(format!("conditional for input {k} has a negative entry"));
        }
        let s: f64 = block.iter().flatten().sum();
        if (s - 1.0).abs() > 1e-9 {
            return input(format!("conditional for input {k} sums to {s}"));
        }
    }
    Ok(energies_out.iter().enumerate().all(|(j, ej)| {
        let lhs: f64 = mhat
            .iter()
            .zip(energies_in)
            .map(|(block, ek)| {
                block[j]
                    .iter()
                    .zip(work)
                    .map(|(m, w)| (beta * w).exp() * m * (-beta * ek).exp())
                    .sum::<f64>()
            })
            .sum();
        (lhs - (-beta * ej).exp()).abs() <= 1e-9
    }))
}

/// Indicator of battery level `level` among `count` levels.
pub fn battery_level(count: usize, level: usize) -> Vec<f64> {
    (0..count).map(|i| if i == level { 1.0 } else { 0.0 }).collect()
}

/// The full system-plus-battery transformation
/// `(r ⊗ a(E), g ⊗ g_B) ⪰ (r′ ⊗ a(E′), g′ ⊗ g_B)` as an exact relative
/// majorization, where `g_B` is the Gibbs state of the battery levels.
pub fn battery_transform_feasible(
    a: &Resource,
    b: &Resource,
    levels: &[f64],
    from: usize,
    to: usize,
    beta: f64,
) -> Result<bool> {
    let (src, dst) = battery_pairs(a, b, levels, from, to, beta)?;
    Ok(relatively_majorizes(&src, &dst)?.holds)
}

fn battery_pairs(
    a: &Resource,
    b: &Resource,
    levels: &[f64],
    from: usize,
    to: usize,
    beta: f64,
) -> Result<(Pair, Pair)> {
    if from >= levels.len() || to >= levels.len() {
        return input("battery level out of range");
    }
    let gb = gibbs(levels, beta)?;
    let n = levels.len();
    let kron = |x: &[f64], y: &[f64]| -> Vec<f64> {
        x.iter().flat_map(|u| y.iter().map(move |v| u * v)).collect()
    };
    let src = Pair::new(kron(a.r(), &battery_level(n, from)), kron(a.g(), &gb))?;
    let dst = Pair::new(kron(b.r(), &battery_level(n, to)), kron(b.g(), &gb))?;
    Ok((src, dst))
}

/// Smallest physical second-kind error with the battery included:
/// `min δ(g′ ⊗ g_B, s′)` over stochastic `M` with
/// `M(r ⊗ a(E)) = r′ ⊗ a(E′)` and `M(g ⊗ g_B) = s′`.
pub fn battery_eta(
    a: &Resource,
    b: &Resource,
    levels: &[f64],
    from: usize,
    to: usize,
    beta: f64,
) -> Result<f64> {
    let (src, dst) = battery_pairs(a, b, levels, from, to, beta)?;
    let (n, m) = (src.len(), dst.len());
    // Variables: M (m × n), then d (m) with d ≥ g′⊗g_B − M(g⊗g_B).
    let mut prog = LinearProgram::new(Sense::Minimize, n * m + m);
    for j in 0..m {
        prog.set_objective(n * m + j, 1.0);
        let terms: Vec<(usize, f64)> = (0..n).map(|i| (lp::mat_index(n, j, i), src.p()[i])).collect();
        prog.add_sparse(&terms, Relation::Eq, dst.p()[j]);
        let mut terms: Vec<(usize, f64)> = (0..n).map(|i| (lp::mat_index(n, j, i), src.q()[i])).collect();
        terms.push((n * m + j, 1.0));
        prog.add_sparse(&terms, Relation::Ge, dst.q()[j]);
    }
    for i in 0..n {
        let terms: Vec<(usize, f64)> = (0..m).map(|j| (lp::mat_index(n, j, i), 1.0)).collect();
        prog.add_sparse(&terms, Relation::Eq, 1.0);
    }
    let sol = lp::solve(&prog)?;
    match sol.status {
        Status::Optimal => Ok(sol.objective),
        _ => domain("battery transformation infeasible for every Gibbs output"),
    }
}

/// `max λ` with `(r,g) ⪰ (λr′ + s, g′)` for some `s ≥ 0`: the heralded
/// mixture probability.
pub fn heralded_probability(a: &Resource, b: &Resource) -> Result<f64> {
    let prog = lp::heralded_lambda_program(a.r(), a.g(), b.r(), b.g());
    let sol = lp::solve(&prog)?;
    match sol.status {
        Status::Optimal => Ok(sol.objective),
        _ => Err(Error::Solver("heralded program not optimal".into())),
    }
}

/// One trial of the heralded-mixture search.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedTrial {
    pub source: Resource,
    pub target: Resource,
    /// `λ*_1(R→R′)`.
    pub mixture: f64,
    /// Largest `λ` for which `R` reaches `λ R′ ⊗ |1⟩⟨1| + (1−λ) s′ ⊗ |0⟩⟨0|`
    /// with a flat flag bit and no blank bit supplied.
    pub flagged: f64,
}

/// Compare mixture and flagged-output probabilities on random instances.
/// This is a search harness; it reports the numbers and decides nothing.
pub fn heralded_search(rng: &mut crate::sample::SampleRng, trials: usize, max_len: usize) -> Result<Vec<HeraldedTrial>> {
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let source = crate::sample::resource(rng, 2, max_len);
        let target = crate::sample::resource(rng, 2, max_len);
        let mixture = lambda_star(&source.pair(), &target.pair(), 1.0)?;
        // Flag bit with degenerate energies: output pair (λr′ ⊕ s, g′/2 ⊕ g′/2).
        let n2 = target.len();
        let gflag: Vec<f64> = target.g().iter().chain(target.g()).map(|v| v / 2.0).collect();
        let mut prog = LinearProgram::new(Sense::Maximize, source.len() * 2 * n2 + 1 + n2);
        let (n, m) = (source.len(), 2 * n2);
        let lam = n * m;
        prog.set_objective(lam, 1.0);
        for j in 0..m {
            let mut terms: Vec<(usize, f64)> =
                (0..n).map(|i| (lp::mat_index(n, j, i), source.r()[i])).collect();
            if j < n2 {
                terms.push((lam, -target.r()[j]));
                prog.add_sparse(&terms, Relation::Eq, 0.0);
            } else {
                terms.push((lam + 1 + (j - n2), -1.0));
                prog.add_sparse(&terms, Relation::Eq, 0.0);
            }
            let terms: Vec<(usize, f64)> = (0..n).map(|i| (lp::mat_index(n, j, i), source.g()[i])).collect();
            prog.add_sparse(&terms, Relation::Eq, gflag[j]);
        }
        for i in 0..n {
            let terms: Vec<(usize, f64)> = (0..m).map(|j| (lp::mat_index(n, j, i), 1.0)).collect();
            prog.add_sparse(&terms, Relation::Eq, 1.0);
        }
        let sol = lp::solve(&prog)?;
        let flagged = if sol.status == Status::Optimal { sol.objective } else { 0.0 };
        out.push(HeraldedTrial { source, target, mixture, flagged });
    }
    Ok(out)
}

pub use submaj::FeasibleBoundary;
