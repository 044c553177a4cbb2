//! Seeded random instances. Everything takes an explicit RNG so that test
//! suites and `relmaj verify` are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::Pair;
use crate::entangle::SchmidtVector;
use crate::thermo::Resource;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `[0,1]` entries, not all zero; optionally normalized.
pub fn weights(rng: &mut SampleRng, n: usize, normalize: bool) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let s: f64 = v.iter().sum();
        if s > 1e-6 {
            if normalize {
                v.iter_mut().for_each(|x| *x /= s);
            }
            return v;
        }
    }
}

/// Strictly positive normalized weights, every entry at least `floor / n`.
pub fn positive_weights(rng: &mut SampleRng, n: usize, floor: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| floor + rng.gen::<f64>()).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Sparse-ish weights: each entry zeroed with probability `zero_prob`.
pub fn sparse_weights(rng: &mut SampleRng, n: usize, zero_prob: f64, normalize: bool) -> Vec<f64> {
    loop {
        let mut v = weights(rng, n, false);
        v.iter_mut().for_each(|x| {
            if rng.gen::<f64>() < zero_prob {
                *x = 0.0
            }
        });
        let s: f64 = v.iter().sum();
        if s > 1e-6 {
            if normalize {
                v.iter_mut().for_each(|x| *x /= s);
            }
            return v;
        }
    }
}

pub fn dim(rng: &mut SampleRng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

/// A pair of length in `[1, max_len]`, entries uniform, half the time
/// normalized, occasionally with zero entries.
pub fn pair(rng: &mut SampleRng, max_len: usize) -> Pair {
    let n = dim(rng, 1, max_len);
    let normalize = rng.gen_bool(0.5);
    let zp = if rng.gen_bool(0.3) { 0.3 } else { 0.0 };
    let p = sparse_weights(rng, n, zp, normalize);
    let q = sparse_weights(rng, n, zp, normalize);
    Pair::new(p, q).expect("valid sample")
}

pub fn normalized_pair(rng: &mut SampleRng, lo: usize, hi: usize) -> Pair {
    let n = dim(rng, lo, hi);
    let zp = if rng.gen_bool(0.3) { 0.3 } else { 0.0 };
    let p = sparse_weights(rng, n, zp, true);
    let q = positive_weights(rng, n, 0.05);
    Pair::new(p, q).expect("valid sample")
}

pub fn resource(rng: &mut SampleRng, lo: usize, hi: usize) -> Resource {
    let n = dim(rng, lo, hi);
    let zp = if rng.gen_bool(0.25) { 0.3 } else { 0.0 };
    let r = sparse_weights(rng, n, zp, true);
    let g = positive_weights(rng, n, 0.05);
    Resource::new(r, g, "random").expect("valid sample")
}

/// Resource with strictly positive `r` as well.
pub fn full_support_resource(rng: &mut SampleRng, lo: usize, hi: usize) -> Resource {
    let n = dim(rng, lo, hi);
    let r = positive_weights(rng, n, 0.05);
    let g = positive_weights(rng, n, 0.05);
    Resource::new(r, g, "random").expect("valid sample")
}

pub fn schmidt(rng: &mut SampleRng, lo: usize, hi: usize) -> SchmidtVector {
    let n = dim(rng, lo, hi);
    let zp = if rng.gen_bool(0.2) { 0.3 } else { 0.0 };
    SchmidtVector::new(sparse_weights(rng, n, zp, true)).expect("valid sample")
}

/// Column-stochastic `rows × cols` matrix with strictly positive entries.
pub fn stochastic(rng: &mut SampleRng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| 0.01 + rng.gen::<f64>()).collect())
        .collect();
    for i in 0..cols {
        let s: f64 = m.iter().map(|row| row[i]).sum();
        m.iter_mut().for_each(|row| row[i] /= s);
    }
    m
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}
