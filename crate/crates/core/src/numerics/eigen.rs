//! Dense symmetric eigenvalue extraction.
//!
//! Householder tridiagonalization followed by the implicit-shift QL sweep,
//! with optional eigenvector accumulation. The full decomposition costs
//! ~6n³ flops; the values-only path (used by eigenvalue sweeps over Nyström
//! matrices) skips accumulation and runs ~4× faster.

use crate::{Error, Result};

/// Relative symmetry tolerance accepted by the solvers.
const SYMMETRY_RTOL: f64 = 1e-12;

/// QL iterations allowed per eigenvalue before giving up.
const MAX_QL_ITER: u32 = 50;

/// Dense symmetric matrix, row-major full storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Zero matrix of dimension `n ≥ 1`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        Ok(SymMatrix {
            n,
            data: vec![0.0; n * n],
        })
    }

    /// Builds a symmetric matrix by evaluating `f(i, j)` for `j ≤ i` and
    /// mirroring, so symmetry holds by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = SymMatrix::zeros(n)?;
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds from explicit rows; rejects non-square input. Symmetry is not
    /// enforced here — the solvers check it against their own tolerance.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix rows must form a non-empty square"));
        }
        let mut m = SymMatrix::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Largest entry magnitude; the scale used for symmetry and residual checks.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|&x| x * x).sum::<f64>().sqrt()
    }

    /// `A·v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum()
            })
            .collect()
    }

    fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    fn check_symmetric(&self) -> Result<()> {
        let scale = self.max_abs();
        if !scale.is_finite() {
            return Err(Error::invalid("matrix contains non-finite entries"));
        }
        let tol = SYMMETRY_RTOL * scale.max(f64::MIN_POSITIVE);
        for i in 0..self.n {
            for j in 0..i {
                let defect = (self.get(i, j) - self.get(j, i)).abs();
                if defect > tol {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {defect:e} \
                         exceeds {tol:e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Full spectral decomposition of a symmetric matrix.
///
/// `values` are ascending; `vectors[k]` is the unit eigenvector paired with
/// `values[k]`, sign-fixed so its largest-magnitude component is positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Householder reduction to tridiagonal form (diagonal `d`, subdiagonal `e`
/// with `e[0]` unused). With `accumulate`, `z` is overwritten by the
/// orthogonal transformation matrix; otherwise `z` is scratch.
fn householder(z: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = z[i][..i].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..i {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                let zi = z[i].clone();
                let mut fsum = 0.0;
                for j in 0..i {
                    if accumulate {
                        z[j][i] = zi[j] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j][k] * zi[k];
                    }
                    for k in (j + 1)..i {
                        g += z[k][j] * zi[k];
                    }
                    e[j] = g / h;
                    fsum += e[j] * zi[j];
                }
                let hh = fsum / (h + h);
                for j in 0..i {
                    let f = zi[j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * zi[k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }
    if accumulate {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    for i in 0..n {
        if accumulate {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += z[i][k] * z[k][j];
                    }
                    for k in 0..i {
                        let t = z[k][i];
                        z[k][j] -= g * t;
                    }
                }
            }
            d[i] = z[i][i];
            z[i][i] = 1.0;
            for j in 0..i {
                z[j][i] = 0.0;
                z[i][j] = 0.0;
            }
        } else {
            d[i] = z[i][i];
        }
    }
}

/// Implicit-shift QL on a tridiagonal matrix; on success `d` holds the
/// eigenvalues (unsorted). When `z` is given, its columns are rotated along,
/// turning the Householder accumulation into eigenvectors.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [Vec<f64>]>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0u32;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::AccuracyFailure {
                    context: format!("symmetric QL failed to converge at eigenvalue {l}"),
                    best: d[l],
                    est_error: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate by rounding underflow and retry the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    for row in zz.iter_mut() {
                        let a = row[i];
                        let b2 = row[i + 1];
                        row[i + 1] = s * a + c * b2;
                        row[i] = c * a - s * b2;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn normalize_sign_and_unit(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let flip = if v[best] < 0.0 { -1.0 } else { 1.0 };
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x *= flip / norm;
        }
    }
}

/// Full spectral decomposition, eigenvalues ascending with matched unit
/// eigenvectors.
///
/// # Errors
///
/// `InvalidArgument` for non-symmetric (beyond 1e−12 relative) or non-finite
/// input; `AccuracyFailure` if a QL eigenvalue stalls past 50 iterations.
pub fn eigen_symmetric(a: &SymMatrix) -> Result<EigenDecomposition> {
    a.check_symmetric()?;
    let n = a.dim();
    let mut z = a.to_rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder(&mut z, &mut d, &mut e, true);
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = idx
        .iter()
        .map(|&col| {
            let mut v: Vec<f64> = (0..n).map(|row| z[row][col]).collect();
            normalize_sign_and_unit(&mut v);
            v
        })
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending; skips eigenvector accumulation.
fn eigenvalues_symmetric(a: &SymMatrix) -> Result<Vec<f64>> {
    a.check_symmetric()?;
    let n = a.dim();
    let mut z = a.to_rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder(&mut z, &mut d, &mut e, false);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Largest eigenvalue and its unit eigenvector.
///
/// Post-condition (verified in tests): `‖Av − λv‖ ≤ 1e−12·‖A‖`.
pub fn largest_eigenpair(a: &SymMatrix) -> Result<(f64, Vec<f64>)> {
    let dec = eigen_symmetric(a)?;
    let value = *dec.values.last().expect("non-empty by construction");
    let vector = dec.vectors.into_iter().next_back().expect("non-empty");
    Ok((value, vector))
}

/// The `k` largest eigenvalues, sorted descending.
///
/// # Errors
///
/// `InvalidArgument` unless `1 ≤ k ≤ dim`.
pub fn top_k_eigenvalues(a: &SymMatrix, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > a.dim() {
        return Err(Error::invalid(format!(
            "k must be in 1..={}, got {k}",
            a.dim()
        )));
    }
    let vals = eigenvalues_symmetric(a)?;
    Ok(vals.into_iter().rev().take(k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = SymMatrix::zeros(n).unwrap();
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random_range(-1.0..1.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    /// Number of eigenvalues of `a` strictly below `t`, by Sylvester inertia
    /// of the LDLᵀ factorization of `a − tI`.
    fn eigs_below(a: &SymMatrix, t: f64) -> Option<usize> {
        let n = a.dim();
        let mut l = vec![vec![0.0; n]; n];
        let mut d = vec![0.0; n];
        for j in 0..n {
            let mut dj = a.get(j, j) - t;
            for k in 0..j {
                dj -= l[j][k] * l[j][k] * d[k];
            }
            if dj.abs() < 1e-300 {
                return None; // pivot breakdown: caller nudges t
            }
            d[j] = dj;
            for i in (j + 1)..n {
                let mut v = a.get(i, j);
                for k in 0..j {
                    v -= l[i][k] * l[j][k] * d[k];
                }
                l[i][j] = v / dj;
            }
        }
        Some(d.iter().filter(|&&x| x < 0.0).count())
    }

    /// Bisection oracle for the `m`-th (ascending) eigenvalue.
    fn bisect_eigenvalue(a: &SymMatrix, m: usize) -> f64 {
        let bound = a.max_abs() * a.dim() as f64 + 1.0;
        let (mut lo, mut hi) = (-bound, bound);
        while hi - lo > 1e-13 {
            let mut mid = 0.5 * (lo + hi);
            let mut count = eigs_below(a, mid);
            let mut nudge = 1e-14;
            while count.is_none() {
                mid += nudge;
                nudge *= 2.0;
                count = eigs_below(a, mid);
            }
            if count.unwrap() > m {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn residual(a: &SymMatrix, lambda: f64, v: &[f64]) -> f64 {
        let av = a.mul_vec(v);
        av.iter()
            .zip(v)
            .map(|(&avi, &vi)| (avi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn identity_largest_eigenpair() {
        let a = SymMatrix::from_fn(3, |i, j| if i == j { 1.0 } else { 0.0 }).unwrap();
        let (lambda, v) = largest_eigenpair(&a).unwrap();
        assert!((lambda - 1.0).abs() < 1e-14);
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn analytic_two_by_two() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (lambda, v) = largest_eigenpair(&a).unwrap();
        assert!((lambda - 3.0).abs() < 1e-14);
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((v[0] - s).abs() < 1e-12 && (v[1] - s).abs() < 1e-12, "v = {v:?}");
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let a = SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.2, 1.0]]).unwrap();
        assert!(matches!(largest_eigenpair(&a), Err(Error::InvalidArgument(_))));
        assert!(matches!(top_k_eigenvalues(&a, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_8x8_matches_inertia_bisection_oracle() {
        let a = random_symmetric(8, 0xE16E);
        let got = top_k_eigenvalues(&a, 8).unwrap();
        for m in 0..8 {
            let oracle = bisect_eigenvalue(&a, m);
            let ours = got[8 - 1 - m]; // got is descending
            assert!(
                (ours - oracle).abs() < 1e-10,
                "eigenvalue {m}: {ours} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn identity_top_k() {
        let a = SymMatrix::from_fn(4, |i, j| if i == j { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(top_k_eigenvalues(&a, 4).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn diagonal_top_k() {
        let a = SymMatrix::from_fn(3, |i, j| if i == j { 3.0 - i as f64 } else { 0.0 }).unwrap();
        let top = top_k_eigenvalues(&a, 2).unwrap();
        assert!((top[0] - 3.0).abs() < 1e-14);
        assert!((top[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let a = random_symmetric(3, 7);
        assert!(matches!(top_k_eigenvalues(&a, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(top_k_eigenvalues(&a, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_6x6_trace_identity() {
        let a = random_symmetric(6, 42);
        let sum: f64 = top_k_eigenvalues(&a, 6).unwrap().iter().sum();
        let trace: f64 = (0..6).map(|i| a.get(i, i)).sum();
        assert!((sum - trace).abs() < 1e-12, "sum {sum} vs trace {trace}");
    }

    #[test]
    fn residuals_meet_contract() {
        let a = random_symmetric(8, 0xBEEF);
        let dec = eigen_symmetric(&a).unwrap();
        let scale = a.frobenius_norm();
        for (lambda, v) in dec.values.iter().zip(&dec.vectors) {
            assert!(
                residual(&a, *lambda, v) <= 1e-12 * scale,
                "residual too large for λ = {lambda}"
            );
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let a = random_symmetric(8, 3);
        let dec = eigen_symmetric(&a).unwrap();
        for i in 0..8 {
            for j in 0..=i {
                let dot: f64 = dec.vectors[i].iter().zip(&dec.vectors[j]).map(|(&x, &y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12, "<v{i}, v{j}> = {dot}");
            }
        }
    }

    #[test]
    fn shift_invariance() {
        let a = random_symmetric(8, 11);
        let sigma = 2.375;
        let mut shifted = a.clone();
        for i in 0..8 {
            shifted.set(i, i, a.get(i, i) + sigma);
        }
        let va = top_k_eigenvalues(&a, 8).unwrap();
        let vs = top_k_eigenvalues(&shifted, 8).unwrap();
        for (x, y) in va.iter().zip(&vs) {
            assert!((x + sigma - y).abs() < 1e-12);
        }
    }

    #[test]
    fn one_by_one_matrix() {
        let a = SymMatrix::from_rows(&[vec![-4.25]]).unwrap();
        let (lambda, v) = largest_eigenpair(&a).unwrap();
        assert_eq!(lambda, -4.25);
        assert_eq!(v, vec![1.0]);
    }
}
