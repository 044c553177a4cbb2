//! Weighted vectors, divergences and the lower boundary of the testing region.
//!
//! For a pair `(p, q)` the testing region is `{(t·p, t·q) : t ∈ [0,1]ⁿ}`. Its
//! lower boundary is the graph of `x ↦ β_x(p,q)`, a convex increasing
//! piecewise-linear function whose breakpoints ("elbows") are the cumulative
//! sums of `(p, q)` taken in nonincreasing `p/q` order. `α_y` is its inverse.

use std::ops::Deref;

use crate::error::{input, Error, Result};
use crate::ext::Ext;
use crate::{NORM_TOL, TOL};

/// Slack used when deciding whether an abscissa lies beyond `|p|` (or an
/// ordinate below zero). Keeps round-off in callers from flipping a finite
/// value into an infinite one.
const EDGE_EPS: f64 = 1e-12;

/// Default cap on the number of entries (or type classes) a product may have.
pub const DEFAULT_CAP: usize = 1 << 20;

/// Nonnegative weight vector of length at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(entries: Vec<f64>) -> Result<Weights> {
        if entries.is_empty() {
            return input("weight vector must be nonempty");
        }
        if let Some((k, v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return input(format!("entry {k} = {v} is not a finite nonnegative number"));
        }
        Ok(Weights(entries))
    }

    pub fn ones(n: usize) -> Weights {
        Weights(vec![1.0; n.max(1)])
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.sum() - 1.0).abs() <= NORM_TOL
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn scaled(&self, c: f64) -> Result<Weights> {
        Weights::new(self.0.iter().map(|v| v * c).collect())
    }
}

impl Deref for Weights {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Two weight vectors of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    p: Weights,
    q: Weights,
}

impl Pair {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Pair> {
        Pair::from_weights(Weights::new(p)?, Weights::new(q)?)
    }

    pub fn from_weights(p: Weights, q: Weights) -> Result<Pair> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
        }
        Ok(Pair { p, q })
    }

    /// The one-entry pair `((1),(1))`, the trivial resource.
    pub fn trivial() -> Pair {
        Pair { p: Weights::ones(1), q: Weights::ones(1) }
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_p(&self) -> f64 {
        self.p.sum()
    }

    pub fn total_q(&self) -> f64 {
        self.q.sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.p.is_normalized() && self.q.is_normalized()
    }

    /// `(cp·p, cq·q)`.
    pub fn scaled(&self, cp: f64, cq: f64) -> Result<Pair> {
        Pair::from_weights(self.p.scaled(cp)?, self.q.scaled(cq)?)
    }

    /// The pair with its two vectors exchanged.
    pub fn swapped(&self) -> Pair {
        Pair { p: self.q.clone(), q: self.p.clone() }
    }

    pub fn elbows(&self) -> Elbows {
        let segments = (0..self.len())
            .filter(|&k| self.p[k] > 0.0 || self.q[k] > 0.0)
            .map(|k| {
                let key = if self.q[k] == 0.0 { f64::INFINITY } else { self.p[k] / self.q[k] };
                Segment { key, dx: self.p[k], dy: self.q[k], index: k }
            })
            .collect();
        Elbows::from_segments(self.len(), segments)
    }

    pub fn beta(&self, x: f64) -> Ext {
        self.elbows().beta(x)
    }

    pub fn alpha(&self, y: f64) -> Ext {
        self.elbows().alpha(y)
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// One linear piece of the lower boundary, before sorting.
#[derive(Debug, Clone, Copy)]
struct Segment {
    key: f64,
    dx: f64,
    dy: f64,
    index: usize,
}

/// Extreme points of the lower boundary of a testing region.
///
/// `points[k]` is the cumulative sum over the first `k+1` indices of
/// `permutation`; the origin is implicit. Indices with `p = q = 0` are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Elbows {
    pub points: Vec<(f64, f64)>,
    pub permutation: Vec<usize>,
    dim: usize,
    increments: Vec<(f64, f64)>,
}

impl Elbows {
    fn from_segments(dim: usize, mut segments: Vec<Segment>) -> Elbows {
        // Nonincreasing ratio, ties by ascending index.
        segments.sort_by(|a, b| b.key.total_cmp(&a.key).then(a.index.cmp(&b.index)));
        let mut points = Vec::with_capacity(segments.len());
        // Compensated running sums: tensor powers have many tiny increments.
        let (mut x, mut y) = (Neumaier::default(), Neumaier::default());
        for s in &segments {
            x.add(s.dx);
            y.add(s.dy);
            points.push((x.value(), y.value()));
        }
        Elbows {
            points,
            permutation: segments.iter().map(|s| s.index).collect(),
            dim,
            increments: segments.iter().map(|s| (s.dx, s.dy)).collect(),
        }
    }

    /// `(|p|, |q|)`, the last point.
    pub fn end(&self) -> (f64, f64) {
        self.points.last().copied().unwrap_or((0.0, 0.0))
    }

    /// Points including the origin, as drawn.
    pub fn polyline(&self) -> Vec<(f64, f64)> {
        std::iter::once((0.0, 0.0)).chain(self.points.iter().copied()).collect()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|pt| pt.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|pt| pt.1)
    }

    /// `β_x`: minimal `t·q` over tests with `t·p ≥ x`.
    pub fn beta(&self, x: f64) -> Ext {
        if x <= 0.0 {
            return Ext::Finite(0.0);
        }
        let (px, _) = self.end();
        if x > px + EDGE_EPS * (1.0 + px) {
            return Ext::PosInf;
        }
        if x >= px {
            // At full mass every test with `p > 0` is needed; scanning forward
            // would stop early once the running sum saturates in floating point.
            let last = self.increments.iter().rposition(|d| d.0 > 0.0);
            return Ext::Finite(last.map_or(0.0, |k| self.points[k].1));
        }
        let mut prev = (0.0, 0.0);
        for &pt in &self.points {
            if pt.0 >= x {
                let dx = pt.0 - prev.0;
                if dx <= 0.0 {
                    return Ext::Finite(prev.1);
                }
                let v = prev.1 + (x - prev.0) * (pt.1 - prev.1) / dx;
                return Ext::Finite(v.min(pt.1));
            }
            prev = pt;
        }
        Ext::Finite(prev.1)
    }

    /// `α_y`: maximal `t·p` over tests with `t·q ≤ y`.
    pub fn alpha(&self, y: f64) -> Ext {
        if y < -EDGE_EPS {
            return Ext::NegInf;
        }
        let y = y.max(0.0);
        let (px, qy) = self.end();
        if y >= qy {
            return Ext::Finite(px);
        }
        let mut prev = (0.0, 0.0);
        for &pt in &self.points {
            if pt.1 > y {
                let v = prev.0 + (y - prev.1) * (pt.0 - prev.0) / (pt.1 - prev.1);
                return Ext::Finite(v.min(pt.0));
            }
            prev = pt;
        }
        Ext::Finite(px)
    }

    /// Right derivative of `y ↦ α_y` (zero past `|q|`).
    pub fn alpha_right_slope(&self, y: f64) -> f64 {
        let mut prev = (0.0, 0.0);
        for &pt in &self.points {
            if pt.1 > y {
                return (pt.0 - prev.0) / (pt.1 - prev.1);
            }
            prev = pt;
        }
        0.0
    }

    /// Left derivative of `y ↦ α_y` for `y > 0` (`None` at `y ≤ 0`).
    pub fn alpha_left_slope(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return None;
        }
        let mut prev = (0.0, 0.0);
        for &pt in &self.points {
            if pt.1 >= y && pt.1 > prev.1 {
                return Some((pt.0 - prev.0) / (pt.1 - prev.1));
            }
            prev = pt;
        }
        Some(0.0)
    }

    /// A test `t` attaining `β_x`: ones along the ratio order, one fractional
    /// entry. Indexed like the original vectors.
    pub fn optimal_test(&self, x: f64) -> Vec<f64> {
        let mut t = vec![0.0; self.dim];
        let mut remaining = x.clamp(0.0, self.end().0);
        for (&k, &(dx, _)) in self.permutation.iter().zip(&self.increments) {
            if remaining <= 0.0 {
                break;
            }
            if dx <= 0.0 {
                continue;
            }
            if dx <= remaining {
                t[k] = 1.0;
                remaining -= dx;
            } else {
                t[k] = remaining / dx;
                remaining = 0.0;
            }
        }
        t
    }

    /// Nondecreasing slopes, nondecreasing coordinates: the convexity
    /// invariant of a lower boundary (checked at tolerance [`TOL`]).
    pub fn is_convex(&self) -> bool {
        let mut last_slope = Ext::Finite(0.0);
        for &(dx, dy) in &self.increments {
            if dx < 0.0 || dy < 0.0 {
                return false;
            }
            let slope = if dx == 0.0 { Ext::PosInf } else { Ext::Finite(dy / dx) };
            if !last_slope.le_tol(slope, TOL * (1.0 + slope.finite().unwrap_or(0.0))) {
                return false;
            }
            last_slope = slope;
        }
        true
    }
}

/// `β_x(p,q)`.
pub fn beta_at(pair: &Pair, x: f64) -> Ext {
    pair.beta(x)
}

/// `α_y(p,q)`.
pub fn alpha_at(pair: &Pair, y: f64) -> Ext {
    pair.alpha(y)
}

/// `Σ_k (a_k − b_k)₊`.
pub fn variational_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_len(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).max(0.0)).sum())
}

/// `Σ_k a_k ln(a_k/b_k)` with `0 ln 0 = 0`; `+∞` on a support violation.
pub fn relative_entropy(a: &[f64], b: &[f64]) -> Result<Ext> {
    check_len(a, b)?;
    let mut d = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        if x > 0.0 {
            if y <= 0.0 {
                return Ok(Ext::PosInf);
            }
            d += x * (x / y).ln();
        }
    }
    Ok(Ext::Finite(d))
}

/// `−Σ p_k ln p_k` for a normalized `p`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORM_TOL || p.iter().any(|v| *v < 0.0) {
        return input(format!("entropy needs a normalized distribution, total is {total}"));
    }
    Ok(-p.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>())
}

fn check_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// `(p ⊕ p′, q ⊕ q′)`.
pub fn direct_sum(a: &Pair, b: &Pair) -> Pair {
    let cat = |u: &[f64], v: &[f64]| Weights([u, v].concat());
    Pair { p: cat(a.p(), b.p()), q: cat(a.q(), b.q()) }
}

/// `(p ⊗ p′, q ⊗ q′)`, row-major in `(index of a, index of b)`.
pub fn tensor(a: &Pair, b: &Pair) -> Result<Pair> {
    tensor_with_cap(a, b, DEFAULT_CAP)
}

pub fn tensor_with_cap(a: &Pair, b: &Pair, cap: usize) -> Result<Pair> {
    let size = a.len().saturating_mul(b.len());
    if size > cap {
        return Err(Error::Capacity { size, cap });
    }
    let outer = |u: &[f64], v: &[f64]| {
        Weights(u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect())
    };
    Ok(Pair { p: outer(a.p(), b.p()), q: outer(a.q(), b.q()) })
}

/// One type class of an i.i.d. power: all sequences with the same letter
/// counts share the entry value `(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    pub counts: Vec<u32>,
    /// Number of sequences in the class (may exceed 2⁵³; kept as a float).
    pub multiplicity: f64,
    ln_mult: f64,
    ln_p: f64,
    ln_q: f64,
}

impl TypeClass {
    /// Entry value of a single sequence, `Π p_k^{c_k}`.
    pub fn p(&self) -> f64 {
        self.ln_p.exp()
    }

    pub fn q(&self) -> f64 {
        self.ln_q.exp()
    }

    /// Class totals, computed in the log domain.
    pub fn total_p(&self) -> f64 {
        (self.ln_mult + self.ln_p).exp()
    }

    pub fn total_q(&self) -> f64 {
        (self.ln_mult + self.ln_q).exp()
    }
}

/// The `N`-fold i.i.d. power of a pair, stored by type class.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPair {
    pub base_len: usize,
    pub power: u32,
    pub classes: Vec<TypeClass>,
}

impl PowerPair {
    /// Number of entries of the expanded product, `nᴺ` (saturating).
    pub fn entry_count(&self) -> f64 {
        (self.base_len as f64).powi(self.power as i32)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total_p(&self) -> f64 {
        self.classes.iter().map(TypeClass::total_p).sum()
    }

    pub fn total_q(&self) -> f64 {
        self.classes.iter().map(TypeClass::total_q).sum()
    }

    /// Elbows of the power; one segment per class (a class is collinear).
    pub fn elbows(&self) -> Elbows {
        let segments = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.ln_p > f64::NEG_INFINITY || c.ln_q > f64::NEG_INFINITY)
            .map(|(k, c)| {
                let key = if c.ln_q == f64::NEG_INFINITY {
                    f64::INFINITY
                } else if c.ln_p == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    c.ln_p - c.ln_q
                };
                Segment { key, dx: c.total_p(), dy: c.total_q(), index: k }
            })
            .collect();
        Elbows::from_segments(self.classes.len(), segments)
    }

    /// Materialize every sequence as an entry.
    pub fn expand(&self, cap: usize) -> Result<Pair> {
        let count = self.entry_count();
        if count > cap as f64 {
            return Err(Error::Capacity { size: count.min(usize::MAX as f64) as usize, cap });
        }
        let (mut p, mut q) = (Vec::new(), Vec::new());
        for c in &self.classes {
            let reps = c.multiplicity.round() as usize;
            p.extend(std::iter::repeat(c.p()).take(reps));
            q.extend(std::iter::repeat(c.q()).take(reps));
        }
        Pair::new(p, q)
    }
}

/// `N`-fold tensor power with type-class aggregation.
pub fn tensor_power(a: &Pair, n: u32) -> Result<PowerPair> {
    tensor_power_with_cap(a, n, DEFAULT_CAP)
}

pub fn tensor_power_with_cap(a: &Pair, n: u32, cap: usize) -> Result<PowerPair> {
    if n == 0 {
        return input("tensor power needs N ≥ 1");
    }
    let d = a.len();
    let classes = binomial(n as u64 + d as u64 - 1, d as u64 - 1);
    if classes > cap as f64 {
        return Err(Error::Capacity { size: classes.min(usize::MAX as f64) as usize, cap });
    }
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let ln_p: Vec<f64> = a.p().iter().map(|v| v.ln()).collect();
    let ln_q: Vec<f64> = a.q().iter().map(|v| v.ln()).collect();
    let mut out = Vec::with_capacity(classes as usize);
    let mut counts = vec![0u32; d];
    compositions(n, 0, &mut counts, &mut |c| {
        let ln_mult = ln_fact[n as usize] - c.iter().map(|&k| ln_fact[k as usize]).sum::<f64>();
        let log_prod = |logs: &[f64]| {
            c.iter()
                .zip(logs)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, &l)| k as f64 * l)
                .sum::<f64>()
        };
        out.push(TypeClass {
            counts: c.to_vec(),
            multiplicity: ln_mult.exp().round(),
            ln_mult,
            ln_p: log_prod(&ln_p),
            ln_q: log_prod(&ln_q),
        });
    });
    Ok(PowerPair { base_len: d, power: n, classes: out })
}

fn compositions(left: u32, pos: usize, counts: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        f(counts);
        return;
    }
    for k in (0..=left).rev() {
        counts[pos] = k;
        compositions(left - k, pos + 1, counts, f);
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: &[f64], q: &[f64]) -> Pair {
        Pair::new(p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn divergence_examples() {
        let p = [0.8, 0.2];
        assert_eq!(variational_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(variational_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((variational_distance(&p, &[0.5, 0.5]).unwrap() - 0.3).abs() < 1e-12);
        assert!(variational_distance(&p, &[1.0]).is_err());

        assert_eq!(relative_entropy(&p, &p).unwrap(), Ext::Finite(0.0));
        let d = relative_entropy(&[1.0, 0.0], &[0.5, 0.5]).unwrap().unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-12);
        assert_eq!(relative_entropy(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), Ext::PosInf);

        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((shannon_entropy(&p).unwrap() - 0.500402).abs() < 1e-6);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
    }

    #[test]
    fn elbow_examples() {
        assert_eq!(pair(&[0.5, 0.5], &[0.5, 0.5]).elbows().points, vec![(0.5, 0.5), (1.0, 1.0)]);
        let e = pair(&[0.7, 0.3], &[0.5, 0.5]).elbows();
        assert_eq!(e.points, vec![(0.7, 0.5), (1.0, 1.0)]);
        assert_eq!(e.permutation, vec![0, 1]);
        assert_eq!(pair(&[1.0, 0.0], &[0.5, 0.5]).elbows().points, vec![(1.0, 0.5), (1.0, 1.0)]);
        // q = 0 sorts first, p = q = 0 is dropped, ties keep index order.
        let e = pair(&[0.2, 0.0, 0.1, 0.3], &[0.2, 0.0, 0.0, 0.3]).elbows();
        assert_eq!(e.permutation, vec![2, 0, 3]);
        assert!(e.is_convex());
    }

    #[test]
    fn beta_alpha_examples() {
        let a = pair(&[0.7, 0.3], &[0.5, 0.5]);
        assert_eq!(a.beta(0.0), Ext::Finite(0.0));
        assert!((a.beta(0.35).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(a.beta(1.1), Ext::PosInf);
        assert!((a.beta(0.9).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(a.alpha(1.0), Ext::Finite(1.0));
        assert!((a.alpha(0.25).unwrap() - 0.35).abs() < 1e-12);
        assert_eq!(a.alpha(-0.1), Ext::NegInf);
        // Vertical last segment: β at |p| is the foot of the segment.
        let b = pair(&[1.0, 0.0], &[0.5, 0.5]);
        assert_eq!(b.beta(1.0), Ext::Finite(0.5));
        assert_eq!(b.alpha(0.75), Ext::Finite(1.0));
        // Horizontal first segment: α at 0 is the q-free mass.
        let c = pair(&[0.4, 0.6], &[0.0, 1.0]);
        assert_eq!(c.alpha(0.0), Ext::Finite(0.4));
        assert_eq!(c.beta(0.3), Ext::Finite(0.0));
    }

    #[test]
    fn optimal_test_attains_beta() {
        let a = pair(&[0.1, 0.5, 0.4], &[0.3, 0.2, 0.5]);
        let e = a.elbows();
        for x in [0.0, 0.2, 0.5, 0.77, 1.0] {
            let t = e.optimal_test(x);
            let tp: f64 = t.iter().zip(a.p()).map(|(t, p)| t * p).sum();
            let tq: f64 = t.iter().zip(a.q()).map(|(t, q)| t * q).sum();
            assert!((tp - x).abs() < 1e-12);
            assert!((tq - a.beta(x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_examples() {
        let one = Pair::new(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(direct_sum(&one, &one), pair(&[1.0, 1.0], &[1.0, 1.0]));
        let a = pair(&[0.7, 0.3], &[0.5, 0.5]);
        let ext = direct_sum(&a, &pair(&[0.0], &[0.2]));
        assert!((ext.beta(0.35).unwrap() - 0.25).abs() < 1e-12);

        let t1 = tensor_power(&a, 1).unwrap();
        assert_eq!(t1.expand(16).unwrap(), a);
        let t2 = tensor_power(&a, 2).unwrap();
        assert_eq!(t2.class_count(), 3);
        assert_eq!(t2.entry_count(), 4.0);
        assert!((t2.total_p() - 1.0).abs() < 1e-12);
        let explicit = tensor(&a, &a).unwrap();
        let expanded = t2.expand(16).unwrap();
        assert_eq!(expanded.len(), 4);
        for x in [0.1, 0.3, 0.49, 0.8, 1.0] {
            let (u, v) = (explicit.beta(x).unwrap(), t2.elbows().beta(x).unwrap());
            assert!((u - v).abs() < 1e-12);
            assert!((expanded.beta(x).unwrap() - u).abs() < 1e-12);
        }
        assert!(matches!(tensor_power_with_cap(&a, 10, 5), Err(Error::Capacity { .. })));
    }
}
