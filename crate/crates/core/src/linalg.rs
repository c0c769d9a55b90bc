//! Dense symmetric linear algebra: eigenvalues, Loewner-order comparisons,
//! SPD solves, and the operator-inequality checks used by the proof chain.
//!
//! Sizes here are small (N up to a few hundred), so the implementations favor
//! clarity and reproducibility: cyclic Jacobi sweeps for eigenvalues and an
//! unpivoted Cholesky factorization for solves.

use alloc::vec;
use alloc::vec::Vec;
// In test builds std is linked and the inherent f64 methods shadow these.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::{Error, Result};

/// Absolute tolerance on the smallest eigenvalue for Loewner comparisons.
pub const LOEWNER_TOL: f64 = 1e-9;
/// Looser tolerance for comparisons between inverted matrices.
pub const INVERSE_LOEWNER_TOL: f64 = 1e-8;
/// A matrix counts as PSD when its smallest eigenvalue is above this.
pub const PSD_TOL: f64 = 1e-10;

/// Real symmetric N x N matrix in row-major storage.
///
/// Houses exact kernels K, closed-form noisy kernels, shot estimates, and the
/// regularized operators built from them. Storage is exactly symmetric:
/// entry (i, j) and entry (j, i) are the same stored value by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl KernelMatrix {
    /// Builds a matrix from row-major entries, checking finiteness and exact
    /// storage symmetry.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j].to_bits() != entries[j * n + i].to_bits() {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix by evaluating `f` on the upper triangle (i <= j) and
    /// mirroring, so symmetry holds bit-exactly.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntries);
                }
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// self + c * I.
    pub fn add_scaled_identity(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] += c;
        }
        out
    }

    /// self - other.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            n: self.n,
            entries,
        })
    }

    /// c * self.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let out = self
            .entries
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        Ok(out)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

// ---------------------------------------------------------------------------
// Eigenvalues via cyclic Jacobi
// ---------------------------------------------------------------------------

/// Full eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order together with matching eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
pub fn sym_eigen(a: &KernelMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.n;
    let mut m = a.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let scale = a.max_abs();
    if scale > 0.0 {
        let off_tol = 1e-14 * scale * n as f64;
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(m[i * n + j].abs());
                }
            }
            if off <= off_tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[p * n + q];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (theta * theta + 1.0).sqrt())
                    } else {
                        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);

                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    m[p * n + p] = app - t * apq;
                    m[q * n + q] = aqq + t * apq;
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    for r in 0..n {
                        if r == p || r == q {
                            continue;
                        }
                        let arp = m[r * n + p];
                        let arq = m[r * n + q];
                        let new_rp = arp - s * (arq + tau * arp);
                        let new_rq = arq + s * (arp - tau * arq);
                        m[r * n + p] = new_rp;
                        m[p * n + r] = new_rp;
                        m[r * n + q] = new_rq;
                        m[q * n + r] = new_rq;
                    }
                    for r in 0..n {
                        let vrp = v[r * n + p];
                        let vrq = v[r * n + q];
                        v[r * n + p] = vrp - s * (vrq + tau * vrp);
                        v[r * n + q] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r * n + k]).collect())
        .collect();
    Ok((values, vectors))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigvals(a: &KernelMatrix) -> Result<Vec<f64>> {
    sym_eigen(a).map(|(vals, _)| vals)
}

/// Smallest eigenvalue.
pub fn min_eig(a: &KernelMatrix) -> Result<f64> {
    Ok(sym_eigvals(a)?[0])
}

// ---------------------------------------------------------------------------
// SPD solves via Cholesky
// ---------------------------------------------------------------------------

/// Lower Cholesky factor L with A = L L^T, row-major with zero upper triangle.
///
/// Fails with `NotPositiveDefinite` when a pivot is not strictly positive,
/// which is the positive-definiteness check for the solve path.
pub fn cholesky(a: &KernelMatrix) -> Result<Vec<f64>> {
    let n = a.n;
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn forward_substitute(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    x
}

fn backward_substitute_transposed(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    x
}

/// Solves A x = y for symmetric positive definite A.
pub fn solve_spd(a: &KernelMatrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != a.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: y.len(),
        });
    }
    let l = cholesky(a)?;
    let z = forward_substitute(&l, a.n, y);
    Ok(backward_substitute_transposed(&l, a.n, &z))
}

/// y^T A^{-1} y for symmetric positive definite A; never negative.
pub fn quad_form_inv(y: &[f64], a: &KernelMatrix) -> Result<f64> {
    let x = solve_spd(a, y)?;
    let mut acc = 0.0;
    for (yi, xi) in y.iter().zip(&x) {
        acc += yi * xi;
    }
    Ok(acc.max(0.0))
}

/// Explicit inverse of a symmetric positive definite matrix.
///
/// Computed as L^{-T} L^{-1} from the Cholesky factor; entries (i, j) and
/// (j, i) come from the identical sum, so storage symmetry is exact.
pub fn spd_inverse(a: &KernelMatrix) -> Result<KernelMatrix> {
    let n = a.n;
    let l = cholesky(a)?;
    // Columns of L^{-1}: solve L z = e_k.
    let mut linv = vec![0.0; n * n];
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let z = forward_substitute(&l, n, &e);
        for r in 0..n {
            linv[r * n + k] = z[r];
        }
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut sum = 0.0;
            for k in j..n {
                sum += linv[k * n + i] * linv[k * n + j];
            }
            entries[i * n + j] = sum;
            entries[j * n + i] = sum;
        }
    }
    KernelMatrix::from_entries(n, entries)
}

// ---------------------------------------------------------------------------
// Loewner-order comparisons and proof-chain checks
// ---------------------------------------------------------------------------

/// A >= B in the Loewner order, up to an absolute eigenvalue tolerance.
pub fn loewner_geq(a: &KernelMatrix, b: &KernelMatrix, tol: f64) -> Result<bool> {
    let diff = a.sub(b)?;
    Ok(min_eig(&diff)? >= -tol)
}

/// The concentration event: Khat + (lambda/2) I >= Ktilde >= 0.
pub fn psd_shift_event(
    khat: &KernelMatrix,
    ktilde: &KernelMatrix,
    lambda: f64,
) -> Result<bool> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    if khat.n != ktilde.n {
        return Err(Error::DimensionMismatch {
            expected: ktilde.n,
            found: khat.n,
        });
    }
    let shifted = khat.add_scaled_identity(lambda / 2.0);
    Ok(loewner_geq(&shifted, ktilde, LOEWNER_TOL)?
        && loewner_geq(ktilde, &KernelMatrix::zeros(ktilde.n), LOEWNER_TOL)?)
}

/// The inverse sandwich: (Khat + lambda I)^{-1} <= (2/(1-q)) (K + lambda I)^{-1}.
///
/// Meaningful when the shift event holds; a non-invertible Khat + lambda I is
/// reported as `Ok(false)` (event failed), not as an error.
pub fn sandwich_inequality_check(
    khat: &KernelMatrix,
    k: &KernelMatrix,
    lambda: f64,
    q: f64,
) -> Result<bool> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidNoise { p: q });
    }
    if khat.n != k.n {
        return Err(Error::DimensionMismatch {
            expected: k.n,
            found: khat.n,
        });
    }
    let k_min = min_eig(k)?;
    if k_min < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eig: k_min });
    }
    let khat_reg = khat.add_scaled_identity(lambda);
    let inv_khat = match spd_inverse(&khat_reg) {
        Ok(inv) => inv,
        Err(Error::NotPositiveDefinite) => return Ok(false),
        Err(e) => return Err(e),
    };
    let inv_k = spd_inverse(&k.add_scaled_identity(lambda))?;
    loewner_geq(
        &inv_k.scale(2.0 / (1.0 - q)),
        &inv_khat,
        INVERSE_LOEWNER_TOL,
    )
}

/// The regularizer comparison: W + lambda^2 I <= max{1, lambda} (W + lambda I).
pub fn remark1_operator_check(w: &KernelMatrix, lambda: f64) -> Result<bool> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    let w_min = min_eig(w)?;
    if w_min < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eig: w_min });
    }
    let lambda_prime = lambda.max(1.0);
    let lhs = w.add_scaled_identity(lambda).scale(lambda_prime);
    let rhs = w.add_scaled_identity(lambda * lambda);
    loewner_geq(&lhs, &rhs, LOEWNER_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{standard_normal_pair, stream_rng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> KernelMatrix {
        KernelMatrix::from_fn(n, |_, _| standard_normal_pair(rng).0).unwrap()
    }

    fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> KernelMatrix {
        // G G^T / n for a random square G.
        let g: Vec<f64> = (0..n * n).map(|_| standard_normal_pair(rng).0).collect();
        KernelMatrix::from_fn(n, |i, j| {
            let mut acc = 0.0;
            for k in 0..n {
                acc += g[i * n + k] * g[j * n + k];
            }
            acc / n as f64
        })
        .unwrap()
    }

    // Characteristic polynomial coefficients (monic, ascending powers) via
    // the Faddeev-LeVerrier recurrence. Independent of the Jacobi solver.
    fn char_poly(a: &KernelMatrix) -> Vec<f64> {
        let n = a.size();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut m = KernelMatrix::identity(n);
        for k in 1..=n {
            // m = A * m_prev + c_{n-k+1} I was folded in at the end of the
            // previous iteration; here m holds M_k before the trace step.
            let am = {
                let mut out = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += a.get(i, l) * m.get(l, j);
                        }
                        out[i * n + j] = acc;
                    }
                }
                out
            };
            let trace: f64 = (0..n).map(|i| am[i * n + i]).sum();
            let c = -trace / k as f64;
            coeffs[n - k] = c;
            if k < n {
                let mut next = am;
                for i in 0..n {
                    next[i * n + i] += c;
                }
                // Floating-point products of symmetric factors need not be
                // bit-symmetric; build the wrapper directly.
                m = KernelMatrix { n, entries: next };
            }
        }
        coeffs
    }

    fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    // All real roots of a monic polynomial whose roots are known to be real
    // and distinct: roots of the derivative bracket the roots, recursively.
    fn real_roots(coeffs: &[f64]) -> Vec<f64> {
        let deg = coeffs.len() - 1;
        if deg == 1 {
            return vec![-coeffs[0] / coeffs[1]];
        }
        let mut deriv: Vec<f64> = (1..coeffs.len())
            .map(|i| coeffs[i] * i as f64)
            .collect();
        let lead = *deriv.last().unwrap();
        for c in &mut deriv {
            *c /= lead;
        }
        let crit = real_roots(&deriv);
        let bound = 1.0
            + coeffs[..deg]
                .iter()
                .fold(0.0f64, |m, c| m.max(c.abs()));
        let mut brackets = vec![-bound];
        brackets.extend(crit);
        brackets.push(bound);
        let mut roots = Vec::new();
        for w in brackets.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let flo = poly_eval(coeffs, lo);
            let fhi = poly_eval(coeffs, hi);
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo.signum() == fhi.signum() && fhi != 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if poly_eval(coeffs, mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }

    #[test]
    fn eigvals_identity() {
        let vals = sym_eigvals(&KernelMatrix::identity(3)).unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigvals_diagonal_sorted_ascending() {
        let a = KernelMatrix::from_entries(2, vec![2.0, 0.0, 0.0, -1.0]).unwrap();
        let vals = sym_eigvals(&a).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eigvals_match_characteristic_polynomial_roots() {
        let mut rng = stream_rng(2024);
        let a = random_symmetric(5, &mut rng);
        let mut expected = real_roots(&char_poly(&a));
        expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got = sym_eigvals(&a).unwrap();
        assert_eq!(expected.len(), 5);
        for (e, g) in expected.iter().zip(&got) {
            assert!((e - g).abs() < 1e-8, "expected {e}, got {g}");
        }
    }

    #[test]
    fn eigen_reconstruction_residual() {
        let mut rng = stream_rng(7);
        for n in [3usize, 6, 10] {
            let a = random_symmetric(n, &mut rng);
            let (vals, vecs) = sym_eigen(&a).unwrap();
            let gate = 1e-9 * n as f64 * a.max_abs();
            for (lam, v) in vals.iter().zip(&vecs) {
                let av = a.mat_vec(v).unwrap();
                let mut res = 0.0f64;
                for (avi, vi) in av.iter().zip(v) {
                    res += (avi - lam * vi) * (avi - lam * vi);
                }
                assert!(res.sqrt() <= gate, "residual {} at n={n}", res.sqrt());
            }
        }
    }

    #[test]
    fn min_eig_basics() {
        assert!((min_eig(&KernelMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-14);
        let d = KernelMatrix::from_entries(2, vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!((min_eig(&d).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(min_eig(&KernelMatrix::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn loewner_identity_dominates_zero() {
        let i3 = KernelMatrix::identity(3);
        let z3 = KernelMatrix::zeros(3);
        assert!(loewner_geq(&i3, &z3, LOEWNER_TOL).unwrap());
        assert!(!loewner_geq(&z3, &i3, LOEWNER_TOL).unwrap());
    }

    #[test]
    fn loewner_transitive_on_psd_increments() {
        let mut rng = stream_rng(31);
        for _ in 0..20 {
            let c = random_psd(4, &mut rng);
            let p1 = random_psd(4, &mut rng);
            let p2 = random_psd(4, &mut rng);
            let b = KernelMatrix::from_fn(4, |i, j| c.get(i, j) + p1.get(i, j)).unwrap();
            let a = KernelMatrix::from_fn(4, |i, j| b.get(i, j) + p2.get(i, j)).unwrap();
            assert!(loewner_geq(&a, &b, LOEWNER_TOL).unwrap());
            assert!(loewner_geq(&b, &c, LOEWNER_TOL).unwrap());
            assert!(loewner_geq(&a, &c, LOEWNER_TOL).unwrap());
        }
    }

    #[test]
    fn solve_scaled_identity() {
        let a = KernelMatrix::identity(2).scale(2.0);
        let x = solve_spd(&a, &[4.0, 6.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
        let i = KernelMatrix::identity(3);
        let y = [0.5, -1.25, 3.0];
        let x = solve_spd(&i, &y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn solve_multiply_back_residual() {
        let mut rng = stream_rng(55);
        for _ in 0..25 {
            let a = random_psd(6, &mut rng).add_scaled_identity(0.1);
            let y: Vec<f64> = (0..6).map(|_| standard_normal_pair(&mut rng).0).collect();
            let x = solve_spd(&a, &y).unwrap();
            let ax = a.mat_vec(&x).unwrap();
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for (axi, yi) in ax.iter().zip(&y) {
                num += (axi - yi) * (axi - yi);
                den += yi * yi;
            }
            assert!(num.sqrt() <= 1e-8 * den.sqrt().max(1.0));
        }
    }

    #[test]
    fn solve_rejects_indefinite() {
        let a = KernelMatrix::from_entries(2, vec![1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(
            solve_spd(&a, &[1.0, 1.0]).unwrap_err(),
            Error::NotPositiveDefinite
        );
    }

    #[test]
    fn quad_form_identity_and_scaled() {
        let y = [1.0, 2.0, 3.0];
        let q = quad_form_inv(&y, &KernelMatrix::identity(3)).unwrap();
        assert!((q - 14.0).abs() < 1e-12);
        let q = quad_form_inv(&[2.0], &KernelMatrix::identity(1).scale(4.0)).unwrap();
        assert!((q - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quad_form_matches_explicit_inverse() {
        let mut rng = stream_rng(88);
        for _ in 0..20 {
            let a = random_psd(6, &mut rng).add_scaled_identity(0.2);
            let y: Vec<f64> = (0..6).map(|_| standard_normal_pair(&mut rng).0).collect();
            let inv = spd_inverse(&a).unwrap();
            let iy = inv.mat_vec(&y).unwrap();
            let mut direct = 0.0;
            for (yi, iyi) in y.iter().zip(&iy) {
                direct += yi * iyi;
            }
            let via_solve = quad_form_inv(&y, &a).unwrap();
            assert!((direct - via_solve).abs() <= 1e-8 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn spd_inverse_multiplies_to_identity() {
        let mut rng = stream_rng(90);
        let a = random_psd(5, &mut rng).add_scaled_identity(0.3);
        let inv = spd_inverse(&a).unwrap();
        for i in 0..5 {
            let col: Vec<f64> = (0..5).map(|r| inv.get(r, i)).collect();
            let acol = a.mat_vec(&col).unwrap();
            for (r, v) in acol.iter().enumerate() {
                let want = if r == i { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-9, "entry ({r},{i}) = {v}");
            }
        }
    }

    #[test]
    fn shift_event_trivial_cases() {
        let mut rng = stream_rng(12);
        let ktilde = random_psd(4, &mut rng);
        assert!(psd_shift_event(&ktilde, &ktilde, 0.5).unwrap());
        let adversarial = ktilde.add_scaled_identity(-1.0);
        assert!(!psd_shift_event(&adversarial, &ktilde, 1.0).unwrap());
    }

    #[test]
    fn shift_event_rejects_nonpositive_lambda() {
        let k = KernelMatrix::identity(2);
        assert!(matches!(
            psd_shift_event(&k, &k, 0.0),
            Err(Error::InvalidRegularization { .. })
        ));
    }

    #[test]
    fn shift_event_licenses_spd_solve() {
        let mut rng = stream_rng(47);
        let mut hits = 0;
        for trial in 0..30u64 {
            let ktilde = random_psd(5, &mut rng);
            // Perturb entries mildly to mimic estimation error.
            let khat = KernelMatrix::from_fn(5, |i, j| {
                ktilde.get(i, j) + 0.1 * standard_normal_pair(&mut rng).0
            })
            .unwrap();
            let lambda = 1.0;
            if psd_shift_event(&khat, &ktilde, lambda).unwrap() {
                hits += 1;
                let shifted = khat.add_scaled_identity(lambda);
                let me = min_eig(&shifted).unwrap();
                assert!(
                    me >= min_eig(&ktilde).unwrap() + lambda / 2.0 - 2e-9,
                    "trial {trial}: min eig {me}"
                );
                assert!(solve_spd(&shifted, &[1.0; 5]).is_ok());
            }
        }
        assert!(hits > 0, "perturbation too strong, event never held");
    }

    #[test]
    fn sandwich_trivial_when_estimate_exact() {
        let mut rng = stream_rng(61);
        let k = random_psd(4, &mut rng);
        assert!(sandwich_inequality_check(&k, &k, 1.0, 0.0).unwrap());
        assert!(sandwich_inequality_check(&k, &k, 0.01, 0.0).unwrap());
        assert!(sandwich_inequality_check(&k, &k, 10.0, 0.0).unwrap());
    }

    #[test]
    fn sandwich_reports_false_on_singular_shift() {
        // Khat = -lambda I makes Khat + lambda I singular.
        let k = KernelMatrix::identity(3);
        let khat = KernelMatrix::identity(3).scale(-1.0);
        assert!(!sandwich_inequality_check(&khat, &k, 1.0, 0.0).unwrap());
    }

    #[test]
    fn inversion_is_anti_monotone() {
        let mut rng = stream_rng(73);
        for _ in 0..200 {
            let b = random_psd(8, &mut rng).add_scaled_identity(0.01);
            let incr = random_psd(8, &mut rng);
            let a = KernelMatrix::from_fn(8, |i, j| b.get(i, j) + incr.get(i, j)).unwrap();
            let ainv = spd_inverse(&a).unwrap();
            let binv = spd_inverse(&b).unwrap();
            assert!(loewner_geq(&binv, &ainv, INVERSE_LOEWNER_TOL).unwrap());
        }
    }

    #[test]
    fn remark_check_equality_at_unit_lambda() {
        let mut rng = stream_rng(99);
        let w = random_psd(5, &mut rng);
        assert!(remark1_operator_check(&w, 1.0).unwrap());
        assert!(remark1_operator_check(&KernelMatrix::zeros(3), 2.0).unwrap());
    }

    #[test]
    fn remark_check_random_grid() {
        let mut rng = stream_rng(101);
        for _ in 0..100 {
            let w = random_psd(6, &mut rng);
            for lambda in [0.01, 0.5, 1.0, 3.0, 10.0] {
                assert!(remark1_operator_check(&w, lambda).unwrap());
            }
        }
    }

    #[test]
    fn constructor_rejects_asymmetry_and_nonfinite() {
        assert!(matches!(
            KernelMatrix::from_entries(2, vec![1.0, 0.5, 0.25, 1.0]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            KernelMatrix::from_entries(1, vec![f64::NAN]),
            Err(Error::NonFiniteEntries)
        ));
        assert!(matches!(
            KernelMatrix::from_entries(2, vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            KernelMatrix::from_entries(0, vec![]),
            Err(Error::EmptyDimension)
        ));
    }
}
