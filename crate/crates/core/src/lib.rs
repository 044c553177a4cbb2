//! Relative majorization and submajorization of weighted vector pairs.
//!
//! The crate decides `(p,q) ⪰ (p′,q′)` and its relaxations, computes the
//! optimal probabilities, work values and approximation errors of
//! quasiclassical thermodynamic transformations, handles pure-state
//! entanglement transformations, and cross-checks every closed-form answer
//! against a dense simplex solver.
//!
//! Modules:
//! - [`curve`]: weights, pairs, elbows, `β`/`α`, divergences, products.
//! - [`lp`]: two-phase simplex over `f64` or exact rationals, plus builders.
//! - [`submaj`]: (sub)majorization decisions, witnesses, `λ*`, `z*`, errors.
//! - [`thermo`]: resources, work, the bound suite, Petz recovery, rates.
//! - [`entangle`]: Nielsen, Vidal, entanglement cost, fidelity bounds.
//! - [`sample`]: seeded random instances shared by tests and the CLI.

pub mod curve;
pub mod entangle;
pub mod error;
pub mod ext;
pub mod lp;
pub mod sample;
pub mod submaj;
pub mod thermo;

pub use curve::{Elbows, Pair, Weights};
pub use error::{Error, Result};
pub use ext::Ext;

/// Absolute tolerance for equality comparisons between computed values.
pub const TOL: f64 = 1e-9;
/// Tolerance for agreement between LP optima and geometric formulas.
pub const LP_TOL: f64 = 1e-7;
/// Tolerance on `|p| = 1` for normalized inputs.
pub const NORM_TOL: f64 = 1e-9;
