//! Numerical toolkit for entropic uncertainty bounds of binned position and
//! momentum measurements.
//!
//! A quantum state measured with finite-resolution apparatus yields discrete
//! outcome distributions: bin `i` of a uniform partition of the line carries
//! mass `q_i = ∫_bin |ψ|²` (and `p_k` likewise for the momentum marginal). The
//! Shannon entropies `H(x)` and `H(p)` of those distributions obey lower
//! bounds on `H(x) + H(p)` that depend only on the dimensionless resolution
//! product `ξ = δx·δp/(2π)` (units with ħ = 1). This crate evaluates three
//! such bounds,
//!
//! * `−ln(2ξ/e)`,
//! * `−ln λ₀(ξ)`,
//! * `−ln λ₀(2ξ/e)`,
//!
//! where `λ₀(ξ)` is the largest eigenvalue of the sinc-kernel integral
//! operator on `[−1,1]` with bandwidth `c = πξ/2`, and stress-tests the third
//! (conjectured) bound by minimizing the margin `H(x)+H(p) − bound` over
//! Hermite superpositions and bin offsets.
//!
//! Module layout mirrors the computation chain:
//!
//! * [`numerics`] — quadrature, special functions, symmetric eigensolver;
//! * [`prolate`] — λ₀ and eigenfunctions of the sinc kernel via Nyström;
//! * [`states`] — normalized wave-function families and interval masses;
//! * [`entropy`] — bin probabilities with certified tails, Shannon entropy;
//! * [`bounds`] — the three closed-form bounds and their comparison table;
//! * [`search`] — margin checks, Gaussian scans, and the counterexample hunt.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod entropy;
pub mod numerics;
pub mod prolate;
pub mod search;
pub mod states;

mod error;

pub use error::{Error, Result};
