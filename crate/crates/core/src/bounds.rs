//! Lower bounds on the binned position/momentum entropy sum as functions of
//! the resolution product.
//!
//! Everything here is parameterized by `ξ = δx·δp/(2π)`, the bin-area measure
//! with `h = 2π`. Three bounds are provided:
//!
//! * [`bound_bb`]: the closed form `1 − ln 2 − ln ξ`, tight only for small ξ
//!   and crossing zero at `ξ = e/2`.
//! * [`bound_mu`]: `−ln λ₀(ξ)`, where `λ₀` is the largest eigenvalue of the
//!   sinc-kernel operator at bandwidth `c = πξ/2`. Positive for every ξ but
//!   weaker than [`bound_bb`] as ξ → 0.
//! * [`bound_conjecture`]: `−ln λ₀(2ξ/e)`, the rescaling of [`bound_mu`]
//!   that matches the small-ξ asymptote of [`bound_bb`] while staying
//!   positive everywhere.
//!
//! [`bounds_table`] evaluates all three over a grid in parallel and is the
//! backing store for the CSV output of the command-line `bounds` subcommand.

use rayon::prelude::*;

use crate::prolate::{lambda0_of_xi, MAX_XI};
use crate::{Error, Result};

/// Largest ξ accepted by [`bound_conjecture`]: the rescaled argument `2ξ/e`
/// must stay within the eigenvalue solver's domain.
pub const MAX_CONJECTURE_XI: f64 = MAX_XI * std::f64::consts::E / 2.0;

fn check_xi(xi: f64, max: f64) -> Result<()> {
    if !xi.is_finite() || xi <= 0.0 || xi > max {
        return Err(Error::invalid(format!(
            "xi must lie in (0, {max}], got {xi:e}"
        )));
    }
    Ok(())
}

/// The closed-form bound `1 − ln 2 − ln ξ`.
///
/// Exceeds [`bound_mu`] for small ξ, turns negative (hence vacuous) past
/// `ξ = e/2`.
///
/// # Errors
///
/// `InvalidArgument` unless `xi` is finite and positive.
pub fn bound_bb(xi: f64) -> Result<f64> {
    if !xi.is_finite() || xi <= 0.0 {
        return Err(Error::invalid(format!("xi must be positive, got {xi:e}")));
    }
    Ok(1.0 - std::f64::consts::LN_2 - xi.ln())
}

/// The eigenvalue bound `−ln λ₀(ξ)`.
///
/// # Errors
///
/// `InvalidArgument` unless `0 < xi ≤ 25` and `tol ≥ 1e−13`;
/// `AccuracyFailure` propagates from the eigenvalue solver.
pub fn bound_mu(xi: f64, tol: f64) -> Result<f64> {
    check_xi(xi, MAX_XI)?;
    let r = lambda0_of_xi(xi, tol)?;
    // λ₀ − 1 is exact near 1, so ln_1p avoids cancellation in −ln λ₀.
    Ok(-(r.lambda0 - 1.0).ln_1p())
}

/// The rescaled eigenvalue bound `−ln λ₀(2ξ/e)`.
///
/// # Errors
///
/// `InvalidArgument` unless `0 < xi ≤ 25·e/2` and `tol ≥ 1e−13`;
/// `AccuracyFailure` propagates from the eigenvalue solver.
pub fn bound_conjecture(xi: f64, tol: f64) -> Result<f64> {
    check_xi(xi, MAX_CONJECTURE_XI)?;
    let scaled = 2.0 * xi / std::f64::consts::E;
    let r = lambda0_of_xi(scaled, tol)?;
    Ok(-(r.lambda0 - 1.0).ln_1p())
}

/// Grid spacing for [`bounds_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Linear,
    /// Uniform in ln ξ; the natural choice since every bound is a function
    /// of ln ξ to leading order.
    Geometric,
}

/// One row of a bounds table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub xi: f64,
    pub bb: f64,
    pub mu: f64,
    pub conj: f64,
    /// λ₀ at the unscaled argument (backs `mu`).
    pub lambda0_xi: f64,
    /// λ₀ at the rescaled argument `2ξ/e` (backs `conj`).
    pub lambda0_scaled: f64,
    /// Bound on the eigenvalue-induced error in `mu` and `conj`.
    pub est_error: f64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "xi,bb,mu,conj,lambda0_xi,lambda0_scaled,est_error";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.xi, self.bb, self.mu, self.conj, self.lambda0_xi, self.lambda0_scaled, self.est_error
        )
    }
}

/// All three bounds for a single ξ.
///
/// # Errors
///
/// As [`bound_mu`] / [`bound_conjecture`].
pub fn bound_report(xi: f64, tol: f64) -> Result<BoundReport> {
    check_xi(xi, MAX_XI)?;
    let bb = bound_bb(xi)?;
    let r_xi = lambda0_of_xi(xi, tol)?;
    let r_scaled = lambda0_of_xi(2.0 * xi / std::f64::consts::E, tol)?;
    let mu = -(r_xi.lambda0 - 1.0).ln_1p();
    let conj = -(r_scaled.lambda0 - 1.0).ln_1p();
    // d(−ln λ)/dλ = −1/λ propagates the eigenvalue error estimates.
    let est_error = (r_xi.est_error / r_xi.lambda0).max(r_scaled.est_error / r_scaled.lambda0);
    Ok(BoundReport {
        xi,
        bb,
        mu,
        conj,
        lambda0_xi: r_xi.lambda0,
        lambda0_scaled: r_scaled.lambda0,
        est_error,
    })
}

/// Evaluate [`bound_report`] over `steps` grid points from `xi_min` to
/// `xi_max` inclusive, in parallel. Rows come back in grid order.
///
/// # Errors
///
/// `InvalidArgument` unless `0 < xi_min < xi_max ≤ 25` and `steps ≥ 2`;
/// solver errors propagate from any row.
pub fn bounds_table(
    xi_min: f64,
    xi_max: f64,
    steps: usize,
    tol: f64,
    kind: GridKind,
) -> Result<Vec<BoundReport>> {
    check_xi(xi_min, MAX_XI)?;
    check_xi(xi_max, MAX_XI)?;
    if xi_min >= xi_max {
        return Err(Error::invalid(format!(
            "grid requires xi_min < xi_max, got [{xi_min:e}, {xi_max:e}]"
        )));
    }
    if steps < 2 {
        return Err(Error::invalid(format!("grid requires steps >= 2, got {steps}")));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            if i == 0 {
                xi_min
            } else if i == steps - 1 {
                xi_max
            } else {
                let t = i as f64 / (steps - 1) as f64;
                match kind {
                    GridKind::Linear => xi_min + t * (xi_max - xi_min),
                    GridKind::Geometric => xi_min * (xi_max / xi_min).powf(t),
                }
            }
        })
        .collect();
    grid.par_iter().map(|&xi| bound_report(xi, tol)).collect()
}
