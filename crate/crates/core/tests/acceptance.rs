//! Acceptance gate: nine end-to-end checks of the toolkit's headline claims,
//! one test per criterion, each printing a single PASS/FAIL line with the
//! measured quantities (visible with `--nocapture`).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use entrobound::bounds::{bound_bb, bound_conjecture, bound_mu, bounds_table, GridKind};
use entrobound::entropy::{bin_probabilities, shannon_entropy, BinGrid};
use entrobound::prolate::{lambda0_of_xi, spectrum};
use entrobound::search::{
    check_state, gaussian_scan, hunt, margin_objective, CoefficientField, HuntConfig, OffsetMode,
};
use entrobound::states::{Side, StateModel};

fn report(n: u32, ok: bool, detail: &str) {
    println!("ACCEPTANCE {n} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "acceptance criterion {n} failed: {detail}");
}

#[test]
fn acceptance_1_closed_form_bound_crossing() {
    // Bisect the sign change of the closed-form bound.
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    assert!(bound_bb(lo).unwrap() > 0.0 && bound_bb(hi).unwrap() < 0.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if bound_bb(mid).unwrap() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crossing = 0.5 * (lo + hi);
    let target = std::f64::consts::E / 2.0;
    let at_136 = bound_bb(1.36).unwrap();
    let ok = (crossing - target).abs() < 1e-6 && at_136 < 0.0;
    report(
        1,
        ok,
        &format!(
            "crossing at {crossing:.9} vs e/2 = {target:.9} (|diff| = {:.2e}), bound_bb(1.36) = {at_136:.4e} < 0",
            (crossing - target).abs()
        ),
    );
}

#[test]
fn acceptance_2_small_xi_asymptote() {
    let xi = 1e-3;
    let r = lambda0_of_xi(xi, 1e-12).unwrap();
    let ratio = r.lambda0 / xi;
    let ok = (0.99..=1.01).contains(&ratio);
    report(
        2,
        ok,
        &format!("lambda0({xi:e}) = {:.12e}, ratio to xi = {ratio:.8}", r.lambda0),
    );
}

#[test]
fn acceptance_3_monotone_approach_to_saturation() {
    let xis = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let lambdas: Vec<f64> = xis
        .iter()
        .map(|&xi| lambda0_of_xi(xi, 1e-10).unwrap().lambda0)
        .collect();
    let mus: Vec<f64> = xis.iter().map(|&xi| bound_mu(xi, 1e-10).unwrap()).collect();
    let lambda_increasing = lambdas.windows(2).all(|p| p[1] > p[0]);
    let mu_decreasing = mus.windows(2).all(|p| p[1] < p[0]);
    let mu_positive = mus.iter().all(|&m| m > 0.0);
    let ok = lambda_increasing && mu_decreasing && mu_positive;
    report(
        3,
        ok,
        &format!(
            "lambda0 strictly increasing: {lambda_increasing} ({:.3e} .. {:.12}), bound_mu strictly decreasing: {mu_decreasing}, positive: {mu_positive} (last = {:.3e})",
            lambdas[0],
            lambdas[5],
            mus[5]
        ),
    );
}

#[test]
fn acceptance_4_trace_identity() {
    let mut detail = String::new();
    let mut ok = true;
    for &c in &[0.5, 2.0, 5.0] {
        // Grow k until the spectrum has decayed below 1e-12.
        let mut k = 8;
        let eigs = loop {
            let eigs = spectrum(c, k, 1e-10).unwrap();
            if eigs.last().unwrap() < &1e-12 {
                break eigs;
            }
            k += 8;
        };
        let cut = eigs.iter().position(|&l| l < 1e-12).unwrap();
        let partial: f64 = eigs[..=cut].iter().sum();
        let trace = 2.0 * c / std::f64::consts::PI;
        let gap = (partial - trace).abs();
        ok &= gap < 1e-8;
        detail.push_str(&format!("c={c}: |sum - 2c/pi| = {gap:.2e} (k={}); ", cut + 1));
    }
    report(4, ok, detail.trim_end_matches("; "));
}

#[test]
fn acceptance_5_envelope_dominance() {
    let rows = bounds_table(0.05, 3.0, 60, 1e-10, GridKind::Geometric).unwrap();
    let dominated = rows
        .iter()
        .all(|r| r.conj >= r.bb.max(r.mu) - 1e-9);
    let worst = rows
        .iter()
        .map(|r| r.conj - r.bb.max(r.mu))
        .fold(f64::INFINITY, f64::min);
    let gap_small_xi = bound_conjecture(1e-3, 1e-10).unwrap() - bound_bb(1e-3).unwrap();
    let ok = dominated && gap_small_xi < 0.02;
    report(
        5,
        ok,
        &format!(
            "conj >= max(bb, mu) - 1e-9 at all 60 points (worst slack {worst:.3e}); conj - bb at xi=1e-3 is {gap_small_xi:.3e} < 0.02"
        ),
    );
}

#[test]
fn acceptance_6_gaussian_family_reproduction() {
    let sigma = std::f64::consts::FRAC_1_SQRT_2;
    let dx_list = [0.5, 1.0, 2.0];
    let xi_grid = [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 10.0, 12.0];
    let reports = gaussian_scan(sigma, &dx_list, &xi_grid, OffsetMode::Centered, 1e-12).unwrap();
    let all_positive = reports.iter().all(|r| r.margin > 0.0);
    let min_margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let mut plateau_ok = true;
    let mut worst_plateau = 0.0_f64;
    for r in &reports {
        if r.xi >= 8.0 {
            let gap = (r.sum - r.h_x).abs();
            worst_plateau = worst_plateau.max(gap);
            plateau_ok &= gap < 1e-4;
        }
    }
    let ok = all_positive && plateau_ok;
    report(
        6,
        ok,
        &format!(
            "{} margins all > 0 (min {min_margin:.4e}); |sum - H_x| < 1e-4 for xi >= 8 (worst {worst_plateau:.2e})",
            reports.len()
        ),
    );
}

#[test]
fn acceptance_7_small_bin_entropy_law() {
    let state = StateModel::gaussian(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let diff_entropy = 0.5 * (1.0 + std::f64::consts::PI.ln());
    let mut errors = Vec::new();
    for &delta in &[0.1, 0.05, 0.02] {
        let grid = BinGrid::new(delta, -delta / 2.0).unwrap();
        let pv = bin_probabilities(&state, grid, Side::Position, 1e-12).unwrap();
        let h = shannon_entropy(&pv);
        errors.push((h - (diff_entropy - delta.ln())).abs());
    }
    let decreasing = errors[0] > errors[1] && errors[1] > errors[2];
    let ok = decreasing && errors[2] < 5e-3;
    report(
        7,
        ok,
        &format!(
            "|H - (ln(pi e)/2 - ln delta)| = [{:.3e}, {:.3e}, {:.3e}] decreasing, final < 5e-3",
            errors[0], errors[1], errors[2]
        ),
    );
}

#[test]
fn acceptance_8_hunt_finds_no_counterexample() {
    let config = HuntConfig {
        basis: 8,
        xi_targets: vec![0.5, 1.0, 2.0],
        restarts: 64,
        seed: 42,
        budget: 600,
        field: CoefficientField::Real,
    };
    let result = hunt(&config).unwrap();
    let ok = result.best.margin > -1e-6 && !result.verified;
    if result.verified {
        // A verified counterexample must reproduce deterministically.
        let again = hunt(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&result).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }
    report(
        8,
        ok,
        &format!(
            "best margin {:.6e} > -1e-6 over {} restarts (state {}), verified counterexample: {}",
            result.best.margin,
            result.restarts.len(),
            result.best.state,
            result.verified
        ),
    );
}

#[test]
fn acceptance_9_cross_path_margin_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=10);
        let mut coeffs: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
            .collect();
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut coeffs {
            *c /= norm;
        }
        let xi = rng.random_range(0.3..3.0);
        let w = (std::f64::consts::TAU * xi).sqrt();
        let ox = rng.random_range(0.0..w);
        let op = rng.random_range(0.0..w);
        let via_objective = margin_objective(&coeffs, w, w, ox, op).unwrap();
        let state = StateModel::hermite_normalized(coeffs).unwrap();
        let direct = check_state(&state, w, w, ox, op, 1e-12).unwrap().margin;
        worst = worst.max((via_objective - direct).abs());
    }
    let ok = worst < 1e-10;
    report(
        9,
        ok,
        &format!("100 seeded Hermite states: max |margin_objective - check_state| = {worst:.2e}"),
    );
}
