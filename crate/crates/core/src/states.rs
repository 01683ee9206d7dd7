//! Normalized wave-function families and their interval masses.
//!
//! A state assigns probability mass to intervals on two sides: position,
//! through `|ψ(x)|²`, and momentum, through the density of the unitary
//! Fourier transform `ψ̃(p) = (2π)^{−1/2} ∫ ψ(x) e^{−ipx} dx` (ħ = 1, so
//! h = 2π). Four families are provided:
//!
//! * `Gaussian` — mean-`μ`, width-`σ` minimum-uncertainty packet; the
//!   momentum marginal is the Gaussian with `σ_p = 1/(2σ)`, so both masses
//!   are closed-form error-function differences.
//! * `Slit` — constant amplitude on `[−a/2, a/2]`; the momentum density is
//!   `(a/2π) sinc²(ap/2)`, integrated in closed form through the sine
//!   integral.
//! * `HermiteSuperposition` — `ψ = Σ c_n h_n` over the L²-normalized Hermite
//!   functions; the Fourier transform acts diagonally (`h_n ↦ (−i)ⁿ h_n`),
//!   so the momentum marginal is the same family with rotated coefficients.
//! * `Prolate` — an eigenfunction of the truncated sinc-kernel operator,
//!   Nyström-extended to all of ℝ and L²(ℝ)-normalized; its transform is
//!   supported on `[−c, c]`.
//!
//! Quadrature-based masses (Hermite, prolate) run at a fixed absolute
//! tolerance of 1e−12; the other families are exact up to `erf`/`Si`
//! accuracy. The module also exposes, crate-internally, certified tail
//! bounds per family and side, which the entropy module uses to stop bin
//! enumeration with a controlled un-enumerated residual.

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::numerics::{adaptive_integrate, erf, erfc, sine_integral};
use crate::prolate::{eigenfunction, ProlateEigenfunction};
use crate::{Error, Result};

/// Fixed absolute tolerance for quadrature-based interval masses.
pub const MASS_QUADRATURE_TOL: f64 = 1e-12;
/// Largest Hermite index supported by [`hermite_value`].
pub const MAX_HERMITE_INDEX: usize = 63;
/// Eigenvalue tolerance used when constructing prolate states.
const PROLATE_STATE_TOL: f64 = 1e-10;

/// Which marginal of a state is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Position,
    Momentum,
}

/// A finite interval `[lo, hi)` of the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// # Errors
    ///
    /// `InvalidArgument` unless `lo < hi` with both finite.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!(
                "interval must satisfy lo < hi with both finite, got [{lo:e}, {hi:e})"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Prolate eigenfunction together with its L²(ℝ) normalization constant.
#[derive(Debug)]
pub struct ProlateData {
    fun: ProlateEigenfunction,
    /// Squared L²(ℝ) norm of the raw Nyström extension, computed once on the
    /// compact momentum support by Parseval; analytically `1/λ`.
    norm_sq: f64,
}

impl ProlateData {
    pub fn bandwidth(&self) -> f64 {
        self.fun.c()
    }

    pub fn index(&self) -> usize {
        self.fun.index()
    }

    pub fn eigenvalue(&self) -> f64 {
        self.fun.eigenvalue()
    }
}

/// A normalized pure state with computable interval masses on both sides.
#[derive(Debug, Clone)]
pub enum StateModel {
    Gaussian { mu: f64, sigma: f64 },
    Slit { a: f64 },
    HermiteSuperposition { coeffs: Arc<[Complex64]> },
    Prolate(Arc<ProlateData>),
}

impl StateModel {
    /// Minimum-uncertainty Gaussian with mean `mu` and position width `sigma`.
    ///
    /// # Errors
    ///
    /// `InvalidArgument` unless `sigma > 0` and both arguments are finite.
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::invalid(format!(
                "gaussian state requires finite mu and sigma > 0, got mu={mu:e}, sigma={sigma:e}"
            )));
        }
        Ok(Self::Gaussian { mu, sigma })
    }

    /// Constant amplitude on `[−a/2, a/2]`.
    ///
    /// # Errors
    ///
    /// `InvalidArgument` unless `a > 0` and finite.
    pub fn slit(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::invalid(format!(
                "slit state requires a > 0, got a={a:e}"
            )));
        }
        Ok(Self::Slit { a })
    }

    /// Superposition over the Hermite basis; coefficients must already be
    /// unit-norm (`Σ|c_n|² = 1` within 1e−12).
    ///
    /// # Errors
    ///
    /// `InvalidArgument` for an empty or over-long (> 64) coefficient list,
    /// non-finite entries, or a norm away from 1.
    pub fn hermite(coeffs: Vec<Complex64>) -> Result<Self> {
        let norm_sq = validate_hermite_coeffs(&coeffs)?;
        if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "hermite coefficients must have unit norm within 1e-12, got norm {:e}",
                norm_sq.sqrt()
            )));
        }
        Ok(Self::HermiteSuperposition { coeffs: coeffs.into() })
    }

    /// As [`StateModel::hermite`], but rescales the coefficients to unit norm
    /// first. Used by parsers and optimizers, where inputs carry roundoff.
    ///
    /// # Errors
    ///
    /// `InvalidArgument` as [`StateModel::hermite`], or if the norm is too
    /// small to renormalize (< 1e−8).
    pub fn hermite_normalized(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = validate_hermite_coeffs(&coeffs)?.sqrt();
        if norm < 1e-8 {
            return Err(Error::invalid(format!(
                "hermite coefficients too small to normalize, norm {norm:e}"
            )));
        }
        for c in &mut coeffs {
            *c /= norm;
        }
        Ok(Self::HermiteSuperposition { coeffs: coeffs.into() })
    }

    /// The `n`-th prolate eigenfunction at bandwidth `c`, extended to ℝ and
    /// normalized there.
    ///
    /// # Errors
    ///
    /// Propagates eigenfunction construction errors; the normalization
    /// integral can fail with `AccuracyFailure`.
    pub fn prolate(c: f64, n: usize) -> Result<Self> {
        let fun = eigenfunction(c, n, PROLATE_STATE_TOL)?;
        // ∫_{−c}^{c} |ψ̃|² dp; the position-side norm is the same by Parseval.
        let norm_sq = adaptive_integrate(
            |p| fun.momentum_amplitude(p).norm_sqr(),
            -c,
            c,
            MASS_QUADRATURE_TOL,
        )?
        .value;
        Ok(Self::Prolate(Arc::new(ProlateData { fun, norm_sq })))
    }

    /// Canonical one-line description, parseable back by `FromStr`.
    pub fn describe(&self) -> String {
        match self {
            Self::Gaussian { mu, sigma } => format!("gaussian:sigma={sigma},mu={mu}"),
            Self::Slit { a } => format!("slit:a={a}"),
            Self::HermiteSuperposition { coeffs } => {
                let parts: Vec<String> = coeffs
                    .iter()
                    .map(|c| {
                        if c.im == 0.0 {
                            format!("{}", c.re)
                        } else {
                            format!("{}{}{}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
                        }
                    })
                    .collect();
                format!("hermite:c={}", parts.join(","))
            }
            Self::Prolate(data) => format!("prolate:c={},n={}", data.bandwidth(), data.index()),
        }
    }

    /// Center of the marginal, where bin enumeration starts.
    pub(crate) fn center(&self, side: Side) -> f64 {
        match (self, side) {
            (Self::Gaussian { mu, .. }, Side::Position) => *mu,
            _ => 0.0,
        }
    }
}

fn validate_hermite_coeffs(coeffs: &[Complex64]) -> Result<f64> {
    if coeffs.is_empty() || coeffs.len() > MAX_HERMITE_INDEX + 1 {
        return Err(Error::invalid(format!(
            "hermite superposition needs 1..={} coefficients, got {}",
            MAX_HERMITE_INDEX + 1,
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::invalid("hermite coefficients must be finite"));
    }
    Ok(coeffs.iter().map(|c| c.norm_sqr()).sum())
}

/// Mass of `iv` under the position density `|ψ(x)|²`.
///
/// Gaussian and slit masses are closed-form; Hermite and prolate masses use
/// adaptive quadrature at absolute tolerance 1e−12.
///
/// # Errors
///
/// Quadrature `AccuracyFailure` propagates, carrying its best estimate.
pub fn position_mass(state: &StateModel, iv: Interval) -> Result<f64> {
    position_mass_tol(state, iv, MASS_QUADRATURE_TOL)
}

/// [`position_mass`] with the quadrature tolerance exposed for callers that
/// budget or tighten it.
pub(crate) fn position_mass_tol(state: &StateModel, iv: Interval, tol: f64) -> Result<f64> {
    let mass = match state {
        StateModel::Gaussian { mu, sigma } => {
            gaussian_interval_mass(*mu, *sigma, iv.lo, iv.hi)
        }
        StateModel::Slit { a } => {
            let overlap = (iv.hi.min(a / 2.0) - iv.lo.max(-a / 2.0)).max(0.0);
            overlap / a
        }
        StateModel::HermiteSuperposition { coeffs } => {
            hermite_interval_mass(coeffs, iv, tol)?
        }
        StateModel::Prolate(data) => {
            let norm_sq = data.norm_sq;
            adaptive_integrate(
                |x| data.fun.evaluate(x).powi(2) / norm_sq,
                iv.lo,
                iv.hi,
                tol,
            )?
            .value
        }
    };
    Ok(mass.clamp(0.0, 1.0))
}

/// Mass of `iv` under the momentum density `|ψ̃(p)|²`.
///
/// # Errors
///
/// As [`position_mass`].
pub fn momentum_mass(state: &StateModel, iv: Interval) -> Result<f64> {
    momentum_mass_tol(state, iv, MASS_QUADRATURE_TOL)
}

/// [`momentum_mass`] with the quadrature tolerance exposed.
pub(crate) fn momentum_mass_tol(state: &StateModel, iv: Interval, tol: f64) -> Result<f64> {
    let mass = match state {
        StateModel::Gaussian { sigma, .. } => {
            // A position mean only changes the transform's phase.
            gaussian_interval_mass(0.0, 1.0 / (2.0 * sigma), iv.lo, iv.hi)
        }
        StateModel::Slit { a } => slit_momentum_mass(*a, iv.lo, iv.hi),
        StateModel::HermiteSuperposition { coeffs } => {
            let rotated = rotate_to_momentum(coeffs);
            hermite_interval_mass(&rotated, iv, tol)?
        }
        StateModel::Prolate(data) => {
            let c = data.fun.c();
            let lo = iv.lo.max(-c);
            let hi = iv.hi.min(c);
            if lo >= hi {
                0.0
            } else {
                let norm_sq = data.norm_sq;
                adaptive_integrate(
                    |p| data.fun.momentum_amplitude(p).norm_sqr() / norm_sq,
                    lo,
                    hi,
                    tol,
                )?
                .value
            }
        }
    };
    Ok(mass.clamp(0.0, 1.0))
}

fn gaussian_interval_mass(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    let s = sigma * std::f64::consts::SQRT_2;
    0.5 * (erf((hi - mu) / s) - erf((lo - mu) / s))
}

/// Momentum coefficients under the Fourier eigenrelation `h_n ↦ (−i)ⁿ h_n`.
fn rotate_to_momentum(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| match n % 4 {
            0 => *c,
            1 => Complex64::new(c.im, -c.re),
            2 => -*c,
            _ => Complex64::new(-c.im, c.re),
        })
        .collect()
}

/// Integration window beyond which every Hermite density with `n < len` is
/// below 1e−14 of its peak: the classical turning point plus a wide margin.
fn hermite_window(len: usize) -> f64 {
    (2.0 * len as f64 + 1.0).sqrt() + 10.0
}

fn hermite_interval_mass(coeffs: &[Complex64], iv: Interval, tol: f64) -> Result<f64> {
    let window = hermite_window(coeffs.len());
    let lo = iv.lo.max(-window);
    let hi = iv.hi.min(window);
    if lo >= hi {
        return Ok(0.0);
    }
    let mut buf = vec![0.0; coeffs.len()];
    let coeffs = coeffs.to_vec();
    Ok(adaptive_integrate(
        move |x| hermite_density(&coeffs, x, &mut buf),
        lo,
        hi,
        tol,
    )?
    .value)
}

/// `|Σ c_n h_n(x)|²`; fills `buf` with the Hermite values as a side effect.
fn hermite_density(coeffs: &[Complex64], x: f64, buf: &mut [f64]) -> f64 {
    hermite_values(x, buf);
    let mut re = 0.0;
    let mut im = 0.0;
    for (c, h) in coeffs.iter().zip(buf.iter()) {
        re += c.re * h;
        im += c.im * h;
    }
    re * re + im * im
}

/// Fills `buf` with `h_0(x), …, h_{len−1}(x)` by upward recurrence.
fn hermite_values(x: f64, buf: &mut [f64]) {
    if buf.is_empty() {
        return;
    }
    buf[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if buf.len() > 1 {
        buf[1] = x * std::f64::consts::SQRT_2 * buf[0];
    }
    for n in 1..buf.len().saturating_sub(1) {
        let nf = n as f64;
        buf[n + 1] = x * (2.0 / (nf + 1.0)).sqrt() * buf[n] - (nf / (nf + 1.0)).sqrt() * buf[n - 1];
    }
}

/// Value of the `n`-th L²-normalized Hermite function.
///
/// The upward recurrence
/// `h_{n+1} = x √(2/(n+1)) h_n − √(n/(n+1)) h_{n−1}` is stable because the
/// normalized functions stay O(1).
///
/// # Panics
///
/// If `n > 63` or `x` is not finite; both violate the documented domain.
pub fn hermite_value(n: usize, x: f64) -> f64 {
    assert!(n <= MAX_HERMITE_INDEX, "hermite index {n} exceeds {MAX_HERMITE_INDEX}");
    assert!(x.is_finite(), "hermite argument must be finite");
    let mut buf = vec![0.0; n + 1];
    hermite_values(x, &mut buf);
    buf[n]
}

/// Antiderivative `F(u) = ∫₀ᵘ sinc²(t) dt = Si(2u) − sin²(u)/u`, odd, with
/// `F(±∞) = ±π/2`.
fn sinc_sq_antiderivative(u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    // sin²u/u written as u·(sin u/u)² so extreme underflow keeps the ratio 1.
    let s = u.sin() / u;
    sine_integral(2.0 * u) - u * s * s
}

/// Closed-form slit momentum mass: density `(a/2π) sinc²(ap/2)` integrates
/// to `(F(a·hi/2) − F(a·lo/2))/π`.
fn slit_momentum_mass(a: f64, lo: f64, hi: f64) -> f64 {
    (sinc_sq_antiderivative(a * hi / 2.0) - sinc_sq_antiderivative(a * lo / 2.0))
        / std::f64::consts::PI
}

/// Exact slit momentum tail mass beyond `p ≥ cut > 0` (one side).
fn slit_momentum_tail(a: f64, cut: f64) -> f64 {
    ((std::f64::consts::FRAC_PI_2 - sinc_sq_antiderivative(a * cut / 2.0))
        / std::f64::consts::PI)
        .max(0.0)
}

/// Which unenumerated half-line a tail bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TailDir {
    /// The region `(−∞, cut]`.
    Left,
    /// The region `[cut, ∞)`.
    Right,
}

/// Certified bounds on everything beyond a cut: un-enumerated mass and the
/// Shannon-entropy contribution of that mass when split into bins of the
/// given width.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TailInfo {
    /// Upper bound on the mass beyond the cut (exact for Gaussian, slit, and
    /// the compact supports).
    pub mass: f64,
    /// Upper bound on `−Σ m ln m` over every bin beyond the cut.
    pub entropy_bound: f64,
}

/// Tail bounds for `state`'s `side` marginal beyond `cut`, for bins of width
/// `width`. `None` means the bound is not yet valid at this cut (too close to
/// the bulk); the caller keeps enumerating.
pub(crate) fn tail_info(
    state: &StateModel,
    side: Side,
    cut: f64,
    dir: TailDir,
    width: f64,
) -> Option<TailInfo> {
    match (state, side) {
        (StateModel::Gaussian { mu, sigma }, _) => {
            let (m, s) = match side {
                Side::Position => (*mu, *sigma),
                Side::Momentum => (0.0, 1.0 / (2.0 * sigma)),
            };
            let d = match dir {
                TailDir::Right => cut - m,
                TailDir::Left => m - cut,
            };
            if d < 2.0 * s {
                return None;
            }
            let mass = 0.5 * erfc(d / (s * std::f64::consts::SQRT_2));
            // Log-concavity: density(cut + t) ≤ density(cut)·e^{−(d/s²)t}.
            let f_cut = (-(d * d) / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
            let entropy_bound = exp_tail_entropy(f_cut, d / (s * s), width)?;
            Some(TailInfo { mass, entropy_bound })
        }
        (StateModel::Slit { a }, Side::Position) => {
            compact_support_tail(-a / 2.0, a / 2.0, cut, dir)
        }
        (StateModel::Slit { a }, Side::Momentum) => {
            let t = match dir {
                TailDir::Right => cut,
                TailDir::Left => -cut,
            };
            if t <= 2.0 * width {
                return None;
            }
            let mass = slit_momentum_tail(*a, t);
            // Density ≤ (a/2π)/(ap/2)² = (2/(πa))/p².
            let entropy_bound =
                power_tail_entropy(2.0 / (std::f64::consts::PI * a), t, width)?;
            Some(TailInfo { mass, entropy_bound })
        }
        (StateModel::HermiteSuperposition { coeffs }, _) => {
            let n = coeffs.len();
            let turning = (2.0 * n as f64 - 1.0).sqrt();
            let t = match dir {
                TailDir::Right => cut,
                TailDir::Left => -cut,
            };
            if t < turning + 1.0 {
                return None;
            }
            // Cauchy–Schwarz envelope |ψ|² ≤ S(x) = Σ h_n(x)², which decays
            // at least like e^{−2κ(x−t)} past every turning point.
            let mut buf = vec![0.0; n];
            hermite_values(t, &mut buf);
            let envelope: f64 = buf.iter().map(|h| h * h).sum();
            let kappa = (t * t - (2.0 * n as f64 - 1.0)).sqrt();
            let mass = envelope / (2.0 * kappa);
            let entropy_bound = exp_tail_entropy(envelope, 2.0 * kappa, width)?;
            Some(TailInfo { mass, entropy_bound })
        }
        (StateModel::Prolate(data), Side::Position) => {
            let t = match dir {
                TailDir::Right => cut,
                TailDir::Left => -cut,
            };
            if t <= 1.0 + 2.0 * width {
                return None;
            }
            // |φ(x)| ≤ √2/(λπ(|x|−1)) from the extension formula, so the
            // normalized density sits under c_env/(|x|−1)².
            let lambda = data.fun.eigenvalue();
            let c_env = 2.0
                / (lambda * lambda * std::f64::consts::PI * std::f64::consts::PI * data.norm_sq);
            let mass = c_env / (t - 1.0);
            let entropy_bound = power_tail_entropy(c_env, t - 1.0, width)?;
            Some(TailInfo { mass, entropy_bound })
        }
        (StateModel::Prolate(data), Side::Momentum) => {
            let c = data.fun.c();
            compact_support_tail(-c, c, cut, dir)
        }
    }
}

fn compact_support_tail(lo: f64, hi: f64, cut: f64, dir: TailDir) -> Option<TailInfo> {
    let cleared = match dir {
        TailDir::Right => cut >= hi,
        TailDir::Left => cut <= lo,
    };
    cleared.then_some(TailInfo { mass: 0.0, entropy_bound: 0.0 })
}

/// Entropy of a tail under the exponential envelope
/// `density(cut + t) ≤ f_cut·e^{−κt}`: bin masses sit under the geometric
/// sequence `M qᵏ` with `q = e^{−κw}` and `M = (f_cut/κ)(1−q)`, whose exact
/// entropy sum is `R·[ln(1/M) + q ln(1/q)/(1−q)]`, `R = f_cut/κ`.
///
/// `None` when the leading envelope mass reaches 1/e, where `−m ln m` stops
/// being monotone and the comparison argument fails.
fn exp_tail_entropy(f_cut: f64, kappa: f64, width: f64) -> Option<f64> {
    if !(kappa > 0.0) {
        return None;
    }
    let r = f_cut / kappa;
    let q = (-kappa * width).exp();
    let m = r * (1.0 - q);
    if m <= 0.0 {
        return Some(0.0);
    }
    if m >= std::f64::consts::E.recip() {
        return None;
    }
    // −ln stays finite on subnormals where 1/q and 1/m would overflow.
    let geometric = if q > 0.0 { q * -q.ln() / (1.0 - q) } else { 0.0 };
    Some(r * (-m.ln() + geometric))
}

/// Entropy of a tail under a power-law envelope `density ≤ C/u²` for
/// `u ≥ u0`, bins of width `w`: comparing the bin sums with the integral of
/// `−g ln g`, `g(u) = Cw/u²`, from `T = u0 − w` gives
/// `(C/T)(2 ln T + 2 − ln(Cw))`.
///
/// `None` while the envelope's largest bin mass exceeds 1/e (same
/// monotonicity requirement as above) or `T ≤ 0`.
fn power_tail_entropy(c_env: f64, u0: f64, width: f64) -> Option<f64> {
    let t = u0 - width;
    if t <= 0.0 {
        return None;
    }
    let largest = c_env * width / (t * t);
    if largest >= std::f64::consts::E.recip() {
        return None;
    }
    Some(((c_env / t) * (2.0 * t.ln() + 2.0 - (c_env * width).ln())).max(0.0))
}

/// State specification grammar (also used by the CLI):
///
/// ```text
/// gaussian:sigma=<f>[,mu=<f>]
/// slit:a=<f>
/// hermite:c=<f>,<f>,...          (coefficients are renormalized)
/// prolate:c=<f>,n=<int>
/// ```
impl FromStr for StateModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const HINT: &str = "expected gaussian:sigma=<f>[,mu=<f>] | slit:a=<f> | \
                            hermite:c=<f>,<f>,... | prolate:c=<f>,n=<int>";
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("malformed state spec {s:?}; {HINT}")))?;
        let parse_f64 = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number {v:?} in state spec {s:?}; {HINT}")))
        };
        match kind.trim() {
            "gaussian" => {
                let mut sigma = None;
                let mut mu = 0.0;
                for part in rest.split(',') {
                    match part.split_once('=').map(|(k, v)| (k.trim(), v)) {
                        Some(("sigma", v)) => sigma = Some(parse_f64(v)?),
                        Some(("mu", v)) => mu = parse_f64(v)?,
                        _ => {
                            return Err(Error::invalid(format!(
                                "unknown gaussian field {part:?} in {s:?}; {HINT}"
                            )))
                        }
                    }
                }
                let sigma = sigma
                    .ok_or_else(|| Error::invalid(format!("gaussian spec {s:?} needs sigma=; {HINT}")))?;
                Self::gaussian(mu, sigma)
            }
            "slit" => {
                let v = rest
                    .strip_prefix("a=")
                    .ok_or_else(|| Error::invalid(format!("slit spec {s:?} needs a=; {HINT}")))?;
                Self::slit(parse_f64(v)?)
            }
            "hermite" => {
                let list = rest
                    .strip_prefix("c=")
                    .ok_or_else(|| Error::invalid(format!("hermite spec {s:?} needs c=; {HINT}")))?;
                let coeffs: Vec<Complex64> = list
                    .split(',')
                    .map(|v| Ok(Complex64::new(parse_f64(v)?, 0.0)))
                    .collect::<Result<_>>()?;
                Self::hermite_normalized(coeffs)
            }
            "prolate" => {
                let mut c = None;
                let mut n = None;
                for part in rest.split(',') {
                    match part.split_once('=').map(|(k, v)| (k.trim(), v)) {
                        Some(("c", v)) => c = Some(parse_f64(v)?),
                        Some(("n", v)) => {
                            n = Some(v.trim().parse::<usize>().map_err(|_| {
                                Error::invalid(format!("bad index {v:?} in state spec {s:?}; {HINT}"))
                            })?);
                        }
                        _ => {
                            return Err(Error::invalid(format!(
                                "unknown prolate field {part:?} in {s:?}; {HINT}"
                            )))
                        }
                    }
                }
                match (c, n) {
                    (Some(c), Some(n)) => Self::prolate(c, n),
                    _ => Err(Error::invalid(format!("prolate spec {s:?} needs c= and n=; {HINT}"))),
                }
            }
            other => Err(Error::invalid(format!("unknown state kind {other:?}; {HINT}"))),
        }
    }
}
