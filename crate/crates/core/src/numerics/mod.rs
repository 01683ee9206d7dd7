//! Language-agnostic numerical primitives: Gaussian quadrature, adaptive
//! integration, special functions, and dense symmetric eigenvalue extraction.
//!
//! Everything here is a pure function of its inputs; there is no shared
//! mutable state beyond an internal cache of quadrature rules (immutable once
//! built), so all operations are safe to call from concurrent workers.

mod eigen;
mod special;

pub use eigen::{eigen_symmetric, largest_eigenpair, top_k_eigenvalues, EigenDecomposition, SymMatrix};
pub use special::{erf, erfc, sine_integral};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Maximum supported Gauss–Legendre order.
pub const MAX_QUADRATURE_ORDER: usize = 4096;

/// Recursion depth limit for [`adaptive_integrate`].
const MAX_ADAPTIVE_DEPTH: u32 = 50;

/// A Gauss–Legendre rule on the reference interval `[−1, 1]`.
///
/// Invariants (established by construction, checked in tests):
/// * `nodes.len() == weights.len()`,
/// * weights are all positive and sum to 2 within 1e−14,
/// * nodes are strictly increasing and symmetric about 0 within 1e−14.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f` on `[a, b]` via the affine map from `[−1, 1]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// As [`integrate`](Self::integrate), but rejects non-finite samples.
    fn integrate_checked(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let t = mid + half * x;
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::invalid(format!(
                    "integrand is not finite at x = {t:e}"
                )));
            }
            acc += w * v;
        }
        Ok(acc * half)
    }
}

/// Evaluates the Legendre polynomial `P_n` and its derivative at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P'_n(x) = n (x P_n − P_{n−1}) / (x² − 1); |x| < 1 at every Newton iterate.
    let dp = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Builds the `n`-point Gauss–Legendre rule on `[−1, 1]`.
///
/// Nodes are the roots of `P_n`, found by Newton iteration from the
/// asymptotic initial guess `cos(π(i + 3/4)/(n + 1/2))`; weights are
/// `2/((1 − x²) P'_n(x)²)`. The rule is exact for polynomials of degree
/// `≤ 2n − 1`.
///
/// # Errors
///
/// `InvalidArgument` unless `1 ≤ n ≤ 4096`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_QUADRATURE_ORDER {
        return Err(Error::invalid(format!(
            "quadrature order must be in 1..={MAX_QUADRATURE_ORDER}, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for iter in 0.. {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / dp;
            z -= step;
            if step.abs() <= 1e-15 {
                break;
            }
            if iter >= 100 {
                return Err(Error::AccuracyFailure {
                    context: format!("gauss_legendre({n}) Newton iteration"),
                    best: z,
                    est_error: step.abs(),
                });
            }
        }
        // The midpoint root of an odd rule is exactly 0; snap to keep the
        // node set exactly symmetric.
        if z.abs() < 1e-14 {
            z = 0.0;
            let (_, d) = legendre_with_derivative(n, z);
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // Guesses descend from +1, so index i holds the i-th largest root.
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Process-wide cache of Gauss–Legendre rules; hot paths re-request the same
/// handful of orders.
pub(crate) fn shared_rule(n: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_legendre(n)?);
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(rule)))
}

/// An integral value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Estimated absolute error; always ≥ 0.
    pub abs_error: f64,
}

/// Adaptively integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Each panel is evaluated with 10- and 20-point Gauss–Legendre rules; their
/// disagreement estimates the 10-point error. Panels that disagree by more
/// than their local tolerance are bisected, with the tolerance split between
/// the halves, so the accumulated `abs_error` of accepted panels is ≤ `tol`
/// unless roundoff dominates, in which case `abs_error` reports the larger
/// roundoff-limited estimate honestly.
///
/// # Errors
///
/// * `InvalidArgument` if `a ≥ b`, `tol ≤ 0`, or `f` produces a non-finite
///   sample.
/// * `AccuracyFailure` (carrying the best estimate) if a panel still
///   disagrees at recursion depth 50.
pub fn adaptive_integrate(f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<IntegralEstimate> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!(
            "integration interval must satisfy a < b with both finite, got [{a:e}, {b:e}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol:e}")));
    }
    let coarse = shared_rule(10)?;
    let fine = shared_rule(20)?;
    let mut f = f;
    let mut ctx = AdaptiveCtx {
        coarse: &coarse,
        fine: &fine,
        f: &mut f,
    };
    let (value, abs_error) = adaptive_panel(&mut ctx, a, b, tol, 0)?;
    Ok(IntegralEstimate { value, abs_error })
}

struct AdaptiveCtx<'a, F: FnMut(f64) -> f64> {
    coarse: &'a QuadratureRule,
    fine: &'a QuadratureRule,
    f: &'a mut F,
}

fn adaptive_panel<F: FnMut(f64) -> f64>(
    ctx: &mut AdaptiveCtx<'_, F>,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64)> {
    let q10 = ctx.coarse.integrate_checked(a, b, ctx.f)?;
    let q20 = ctx.fine.integrate_checked(a, b, ctx.f)?;
    let err = (q20 - q10).abs();
    // Roundoff floor: once the rules disagree only at machine precision,
    // bisecting cannot help, so accept even if the split tolerance is tighter.
    let floor = 32.0 * f64::EPSILON * q20.abs();
    if err <= tol.max(floor) {
        return Ok((q20, err));
    }
    let mid = 0.5 * (a + b);
    // A panel too narrow to bisect in f64 cannot be improved further.
    if depth >= MAX_ADAPTIVE_DEPTH || mid <= a || mid >= b {
        return Err(Error::AccuracyFailure {
            context: format!("adaptive_integrate panel [{a:e}, {b:e}]"),
            best: q20,
            est_error: err,
        });
    }
    let (lv, le) = adaptive_panel(ctx, a, mid, 0.5 * tol, depth + 1)?;
    let (rv, re) = adaptive_panel(ctx, mid, b, 0.5 * tol, depth + 1)?;
    Ok((lv + rv, le + re))
}
