//! Special functions: the error function pair and the sine integral.
//!
//! Accuracy target is ~1e−14 absolute across the whole real line, which is
//! what Gaussian bin masses and closed-form sinc-density masses need. Both
//! functions switch between a power series near the origin and a continued
//! fraction beyond it; the switch points (3 for erf, 6 for Si) keep either
//! expansion comfortably inside its fast-convergence regime.

use num_complex::Complex64;

/// Convergence threshold for continued fractions (relative step size).
const CF_EPS: f64 = 1e-16;

/// Error function, odd and strictly increasing, `erf(±∞) = ±1`.
///
/// `|x| ≤ 3` uses the scaled Maclaurin series
/// `erf(x) = (2/√π) e^{−x²} Σ (2x²)ⁿ x / (2n+1)!!`,
/// whose terms are all positive (no cancellation); beyond 3 it is
/// `1 − erfc(x)`, with `erfc` from a continued fraction.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 3.0 {
        erf_series(x)
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function, `erfc(x) = 1 − erf(x)`.
///
/// For `x > 3` the Laplace continued fraction
/// `√π e^{x²} erfc(x) = 1/(x + ½/(x + 1/(x + 3/2/(x + …))))`
/// is evaluated by the modified Lentz algorithm; elsewhere the complement of
/// the series branch is used (no cancellation: `erf(3) < 1 − 2e−5`).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < -3.0 {
        return 2.0 - erfc_cf(-x);
    }
    if x <= 3.0 {
        1.0 - erf(x)
    } else {
        erfc_cf(x)
    }
}

/// Series branch, valid for `0 ≤ x ≤ 3`.
fn erf_series(x: f64) -> f64 {
    let t = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= t / (2.0 * n as f64 + 1.0);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 || n > 300 {
            break;
        }
    }
    std::f64::consts::FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

/// Continued-fraction branch for `erfc`, valid for `x > 3`.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..=300u32 {
        let a = if k == 1 { 1.0 } else { (k - 1) as f64 / 2.0 };
        d = x + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    // erfc(x) = e^{−x²}/√π · f; 1/√π = FRAC_2_SQRT_PI / 2.
    (-x * x).exp() * 0.5 * std::f64::consts::FRAC_2_SQRT_PI * f
}

/// Sine integral `Si(x) = ∫₀ˣ sin t / t dt`, odd, `Si(∞) = π/2`.
///
/// `|x| ≤ 6` uses the alternating Maclaurin series
/// `Σ (−1)ⁿ x^{2n+1} / ((2n+1)(2n+1)!)`; beyond 6,
/// `Si(x) = π/2 + Im E₁(ix)` with the exponential integral evaluated by its
/// continued fraction along the imaginary axis.
pub fn sine_integral(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x <= 6.0 {
        si_series(x)
    } else {
        std::f64::consts::FRAC_PI_2 + e1_imag_axis(x).im
    }
}

fn si_series(x: f64) -> f64 {
    let z2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 1u32;
    loop {
        let nf = n as f64;
        term *= -z2 * (2.0 * nf - 1.0) / ((2.0 * nf + 1.0) * (2.0 * nf + 1.0) * (2.0 * nf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1.0) || n > 200 {
            break;
        }
        n += 1;
    }
    sum
}

/// `E₁(ix)` for `x > 0` via the even-contracted continued fraction
/// `E₁(w) = e^{−w} / (w+1 − 1²/(w+3 − 2²/(w+5 − …)))`.
fn e1_imag_axis(x: f64) -> Complex64 {
    let w = Complex64::new(0.0, x);
    // Large enough that norm_sqr(tiny) stays normal in complex division.
    let tiny = Complex64::new(1e-150, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut f = tiny;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..=1000u32 {
        let kf = k as f64;
        let a = if k == 1 {
            one
        } else {
            Complex64::new(-((kf - 1.0) * (kf - 1.0)), 0.0)
        };
        let b = w + Complex64::new(2.0 * kf - 1.0, 0.0);
        d = b + a * d;
        if d.norm_sqr() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm_sqr() == 0.0 {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        f *= delta;
        if (delta - one).norm() < CF_EPS {
            break;
        }
    }
    Complex64::from_polar(1.0, -x) * f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_integrate;
    use proptest::prelude::*;

    /// Alternating Maclaurin series `(2/√π) Σ (−1)ⁿ x^{2n+1}/(n!(2n+1))`,
    /// summed to machine precision. Independent of the production series
    /// (different term structure, no exponential prefactor).
    fn erf_maclaurin_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut num = x; // x^{2n+1} / n!
        let mut n = 0u32;
        loop {
            let term = num / (2.0 * n as f64 + 1.0);
            sum += if n % 2 == 0 { term } else { -term };
            n += 1;
            num *= x * x / n as f64;
            if num / (2.0 * n as f64 + 1.0) < 1e-18 {
                break;
            }
        }
        std::f64::consts::FRAC_2_SQRT_PI * sum
    }

    #[test]
    fn erf_at_zero_and_oddness() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(-0.7), -erf(0.7));
        assert_eq!(erf(-4.2), -erf(4.2));
    }

    #[test]
    fn erf_matches_maclaurin_oracle() {
        for &x in &[0.1, 0.5, 1.0, 1.7, 2.0] {
            let oracle = erf_maclaurin_oracle(x);
            assert!(
                (erf(x) - oracle).abs() < 1e-14,
                "x={x}: erf {:e} vs oracle {oracle:e}",
                erf(x)
            );
        }
    }

    #[test]
    fn erf_frozen_values() {
        assert!((erf(0.5) - 0.5204998778130465).abs() < 1e-14);
        assert!((erf(1.0) - 0.8427007929497149).abs() < 1e-12);
        assert!((erf(2.0) - 0.9953222650189527).abs() < 1e-14);
        assert!((erf(3.0) - 0.9999779095030014).abs() < 1e-14);
    }

    #[test]
    fn erfc_matches_gaussian_integral_oracle() {
        // erfc(x) = (2/√π) ∫ₓ^∞ e^{−t²} dt; the tail past 20 is < 1e−170.
        for &x in &[3.2, 3.5, 4.0, 5.0, 6.0] {
            let oracle = adaptive_integrate(|t| (-t * t).exp(), x, 20.0, 1e-18)
                .map(|e| e.value * std::f64::consts::FRAC_2_SQRT_PI);
            let oracle = oracle.unwrap();
            assert!(
                (erfc(x) - oracle).abs() < 1e-14 && (erfc(x) / oracle - 1.0).abs() < 1e-11,
                "x={x}: erfc {:e} vs oracle {oracle:e}",
                erfc(x)
            );
        }
    }

    #[test]
    fn erf_branches_agree_near_switch_point() {
        // The series remains valid a little past the switch point, so both
        // branches can be compared on the far side of it.
        for &x in &[3.0 + 1e-12, 3.05, 3.2] {
            let via_cf = erfc_cf(x);
            let via_series = 1.0 - erf_series(x);
            assert!(
                (via_cf - via_series).abs() < 2e-15,
                "x={x}: cf {via_cf:e} vs series {via_series:e}"
            );
        }
    }

    #[test]
    fn erf_erfc_round_trip() {
        for &x in &[-6.0, -3.5, -1.0, 0.0, 0.3, 1.0, 2.9, 3.0, 3.1, 4.0, 8.0, 26.0] {
            assert!(
                (erf(x) + erfc(x) - 1.0).abs() < 1e-14,
                "round trip failed at {x}"
            );
        }
    }

    #[test]
    fn erf_saturates_without_overshoot() {
        for &x in &[10.0, 30.0, 100.0, 1e6] {
            assert!(erf(x) <= 1.0);
            assert!(erfc(x) >= 0.0);
        }
        assert!(erf(5.0) < 1.0);
    }

    #[test]
    fn sine_integral_odd_and_zero() {
        assert_eq!(sine_integral(0.0), 0.0);
        assert_eq!(sine_integral(-2.5), -sine_integral(2.5));
        assert_eq!(sine_integral(-9.0), -sine_integral(9.0));
    }

    #[test]
    fn sine_integral_matches_quadrature_oracle() {
        let sinc = |t: f64| if t.abs() < 1e-8 { 1.0 - t * t / 6.0 } else { t.sin() / t };
        for &z in &[0.5, 2.0, std::f64::consts::PI, 5.9, 6.1, 10.0, 30.0] {
            let oracle = adaptive_integrate(sinc, 0.0, z, 1e-14).unwrap().value;
            let got = sine_integral(z);
            assert!(
                (got - oracle).abs() < 1e-12,
                "z={z}: Si {got:e} vs oracle {oracle:e}"
            );
        }
    }

    #[test]
    fn sine_integral_frozen_value_at_pi() {
        assert!((sine_integral(std::f64::consts::PI) - 1.8519370519824661).abs() < 1e-12);
    }

    #[test]
    fn sine_integral_approaches_half_pi() {
        let tail = (sine_integral(1e6) - std::f64::consts::FRAC_PI_2).abs();
        assert!(tail < 2e-6, "tail {tail:e}");
        let closer = (sine_integral(1e8) - std::f64::consts::FRAC_PI_2).abs();
        assert!(closer < 2e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn erf_is_monotone(a in -4.0f64..4.0, b in -4.0f64..4.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(erf(lo) < erf(hi));
        }

        #[test]
        fn erf_bounded(x in -50.0f64..50.0) {
            prop_assert!(erf(x).abs() <= 1.0);
            prop_assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-14);
        }
    }
}
