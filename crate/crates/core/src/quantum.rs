//! Density-matrix states, angle feature encodings, observables and labels,
//! the depolarizing channel, and exact / closed-form noisy kernel values.
//!
//! Matrices are dense, row-major `Complex64`. Every stored Hermitian matrix
//! is conj-mirrored exactly: entry (r, c) and the conjugate of entry (c, r)
//! are the same stored value, so trace inner products can be accumulated in
//! a form that is bit-symmetric in the two arguments.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// In test builds std is linked and the inherent f64 methods shadow these.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{sym_eigvals, KernelMatrix};
use crate::rng::standard_normal_pair;
use crate::{Error, Result};

/// Entrywise tolerance for |A - A^dagger| on Hermitian inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for |tr(rho) - 1|.
pub const TRACE_TOL: f64 = 1e-10;
/// A Hermitian matrix counts as PSD when its smallest eigenvalue is above this.
pub const PSD_EIG_TOL: f64 = 1e-10;
/// Slack allowed on the operator-norm-at-most-one check.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for purity tr(rho^2) = 1 of encoded pure states.
pub const PURITY_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Shared Hermitian-storage helpers
// ---------------------------------------------------------------------------

fn max_asymmetry(dim: usize, entries: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..dim {
        for c in r..dim {
            let diff = entries[r * dim + c] - entries[c * dim + r].conj();
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// (A + A^dagger)/2 with exact conj-mirrored storage.
fn hermitize(dim: usize, entries: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        out[r * dim + r] = Complex64::new(entries[r * dim + r].re, 0.0);
        for c in (r + 1)..dim {
            let h = 0.5 * (entries[r * dim + c] + entries[c * dim + r].conj());
            out[r * dim + c] = h;
            out[c * dim + r] = h.conj();
        }
    }
    out
}

/// Eigenvalues (ascending) of an exactly conj-mirrored Hermitian matrix,
/// via the real symmetric embedding [[Re, -Im], [Im, Re]] of twice the size,
/// whose spectrum is the Hermitian spectrum with every value doubled.
fn herm_eigvals(dim: usize, entries: &[Complex64]) -> Result<Vec<f64>> {
    let embedded = KernelMatrix::from_fn(2 * dim, |i, j| {
        if i < dim && j < dim {
            entries[i * dim + j].re
        } else if i < dim {
            -entries[i * dim + (j - dim)].im
        } else {
            entries[(i - dim) * dim + (j - dim)].re
        }
    })?;
    let doubled = sym_eigvals(&embedded)?;
    Ok(doubled.into_iter().step_by(2).collect())
}

/// tr(A B) for exactly conj-mirrored Hermitian A, B of equal dim.
///
/// tr(AB) = sum over (r, c) of A[r][c] * conj(B[r][c]), which is real; the
/// per-entry real accumulation below is bit-symmetric in the two arguments.
fn herm_product_trace(dim: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter().take(dim * dim)) {
        acc += x.re * y.re + x.im * y.im;
    }
    acc
}

fn check_finite(entries: &[Complex64]) -> Result<()> {
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFiniteEntries);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Hermitian, PSD, trace-one complex matrix: a quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness,
    /// then stores the Hermitian part with exact conj-mirroring.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries)?;
        let asym = max_asymmetry(dim, &entries);
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry: asym });
        }
        let entries = hermitize(dim, &entries);
        let trace: f64 = (0..dim).map(|r| entries[r * dim + r].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min = herm_eigvals(dim, &entries)?[0];
        if min < -PSD_EIG_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eig: min });
        }
        Ok(Self { dim, entries })
    }

    /// The maximally mixed state I/D.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { dim, entries })
    }

    /// Pure state |psi><psi| from a normalized amplitude vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        check_finite(amplitudes)?;
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { norm: norm_sq.sqrt() });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex64::new(amplitudes[r].norm_sqr(), 0.0);
            for c in (r + 1)..dim {
                let v = amplitudes[r] * amplitudes[c].conj();
                entries[r * dim + c] = v;
                entries[c * dim + r] = v.conj();
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|r| self.entry(r, r).re).sum()
    }

    /// tr(rho^2), equal to one exactly for pure states.
    pub fn purity(&self) -> f64 {
        herm_product_trace(self.dim, &self.entries, &self.entries)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eigvals(self.dim, &self.entries)?[0])
    }

    /// Re-runs the full invariant suite on the stored entries.
    pub fn validate(&self) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let asym = max_asymmetry(self.dim, &self.entries);
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry: asym });
        }
        let min = self.min_eigenvalue()?;
        if min < -PSD_EIG_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eig: min });
        }
        Ok(())
    }
}

/// tr(a b): the Hilbert-Schmidt inner product of two states.
///
/// Always in [0, 1] and bit-identical under argument swap.
pub fn hs_inner(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(herm_product_trace(a.dim, &a.entries, &b.entries).clamp(0.0, 1.0))
}

/// The depolarizing channel rho -> (1-p) rho + p I/D.
pub fn depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidNoise { p });
    }
    let dim = rho.dim;
    let keep = 1.0 - p;
    let mix = p / dim as f64;
    let mut entries: Vec<Complex64> = rho.entries.iter().map(|z| keep * z).collect();
    for r in 0..dim {
        entries[r * dim + r].re += mix;
    }
    Ok(DensityMatrix { dim, entries })
}

/// Effective two-copy noise strength q = 1 - (1-p)^2.
pub fn effective_noise_q(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidNoise { p });
    }
    Ok(1.0 - (1.0 - p) * (1.0 - p))
}

/// Closed form for the kernel of depolarized states: every entry of the
/// exact kernel K moves to (1-q) K_ij + q/D, with q = 1 - (1-p)^2.
///
/// Expanding tr of the product of two depolarized states gives the additive
/// q/D on every entry, diagonal and off-diagonal alike; this entrywise form
/// is what the simulator validates against state-level computation.
pub fn noisy_kernel_closed_form(k: &KernelMatrix, p: f64, dim: usize) -> Result<KernelMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidNoise { p });
    }
    for i in 0..k.size() {
        for j in 0..k.size() {
            let v = k.get(i, j);
            if !(-HERMITIAN_TOL..=1.0 + HERMITIAN_TOL).contains(&v) {
                return Err(Error::InvalidOverlap { t: v });
            }
        }
    }
    let q = effective_noise_q(p)?;
    let mix = q / dim as f64;
    KernelMatrix::from_fn(k.size(), |i, j| (1.0 - q) * k.get(i, j) + mix)
}

// ---------------------------------------------------------------------------
// Feature encoding
// ---------------------------------------------------------------------------

/// Angle feature maps on n qubits (dimension D = 2^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMapKind {
    /// Tensor product of single-qubit rotations cos(x_j/2)|0> + sin(x_j/2)|1>.
    AngleProduct,
    /// The product state followed by controlled-phase(pi/2) on each adjacent
    /// qubit pair, entangling neighbors.
    AngleEntangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMapSpec {
    qubits: usize,
    kind: FeatureMapKind,
}

impl FeatureMapSpec {
    pub fn new(qubits: usize, kind: FeatureMapKind) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { qubits, kind })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn kind(&self) -> FeatureMapKind {
        self.kind
    }

    /// Hilbert-space dimension 2^n.
    pub fn dim(&self) -> usize {
        1usize << self.qubits
    }
}

/// Amplitude vector of the encoded pure state; qubit 0 is the most
/// significant bit of the basis index.
pub fn encode_amplitudes(x: &[f64], spec: &FeatureMapSpec) -> Result<Vec<Complex64>> {
    let n = spec.qubits;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let dim = spec.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (b, amp) in amps.iter_mut().enumerate() {
        let mut real = 1.0f64;
        for (j, &xj) in x.iter().enumerate() {
            let bit = (b >> (n - 1 - j)) & 1;
            let half = 0.5 * xj;
            real *= if bit == 0 { half.cos() } else { half.sin() };
        }
        *amp = Complex64::new(real, 0.0);
    }
    if spec.kind == FeatureMapKind::AngleEntangled {
        // Controlled-phase(pi/2) multiplies each adjacent 11 pair by i.
        for (b, amp) in amps.iter_mut().enumerate() {
            for j in 0..n.saturating_sub(1) {
                let hi = (b >> (n - 1 - j)) & 1;
                let lo = (b >> (n - 2 - j)) & 1;
                if hi == 1 && lo == 1 {
                    *amp *= Complex64::new(0.0, 1.0);
                }
            }
        }
    }
    let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let inv_norm = 1.0 / norm_sq.sqrt();
    for amp in &mut amps {
        *amp *= inv_norm;
    }
    Ok(amps)
}

/// Feature encoding x -> |psi_x><psi_x|.
pub fn encode(x: &[f64], spec: &FeatureMapSpec) -> Result<DensityMatrix> {
    DensityMatrix::pure(&encode_amplitudes(x, spec)?)
}

/// Draws an input uniformly from [-pi, pi]^n, the natural period of the
/// angle encodings.
pub fn sample_input(spec: &FeatureMapSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..spec.qubits)
        .map(|_| core::f64::consts::PI * (2.0 * crate::rng::uniform_f64(rng) - 1.0))
        .collect()
}

// ---------------------------------------------------------------------------
// Observables and labels
// ---------------------------------------------------------------------------

/// Hermitian matrix with operator norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Observable {
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries)?;
        let asym = max_asymmetry(dim, &entries);
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry: asym });
        }
        let entries = hermitize(dim, &entries);
        let eigs = herm_eigvals(dim, &entries)?;
        let norm = eigs[0].abs().max(eigs[eigs.len() - 1].abs());
        if norm > 1.0 + NORM_TOL {
            return Err(Error::OperatorNormExceeded { norm });
        }
        Ok(Self { dim, entries })
    }

    /// The identity observable (norm exactly one).
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { dim, entries })
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Observable::from_entries(self.dim, self.entries.iter().map(|z| c * z).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Operator norm: largest eigenvalue magnitude.
    pub fn operator_norm(&self) -> Result<f64> {
        let eigs = herm_eigvals(self.dim, &self.entries)?;
        Ok(eigs[0].abs().max(eigs[eigs.len() - 1].abs()))
    }

    /// tr(rho O) without clamping; in [-1, 1] up to roundoff.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim,
            });
        }
        Ok(herm_product_trace(self.dim, &rho.entries, &self.entries))
    }
}

/// Gaussian Hermitian matrix normalized to operator norm one.
///
/// Deterministic in the generator state: same seed, same observable.
pub fn random_observable(rng: &mut ChaCha8Rng, dim: usize) -> Result<Observable> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    loop {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        let scale = core::f64::consts::FRAC_1_SQRT_2;
        for r in 0..dim {
            for c in r..dim {
                let (g1, g2) = standard_normal_pair(rng);
                if r == c {
                    entries[r * dim + r] = Complex64::new(g1, 0.0);
                } else {
                    let v = Complex64::new(scale * g1, scale * g2);
                    entries[r * dim + c] = v;
                    entries[c * dim + r] = v.conj();
                }
            }
        }
        let eigs = herm_eigvals(dim, &entries)?;
        let norm = eigs[0].abs().max(eigs[eigs.len() - 1].abs());
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for z in &mut entries {
                *z *= inv;
            }
            return Observable::from_entries(dim, entries);
        }
    }
}

/// The target function y = tr(rho_x O), clamped to [-1, 1].
pub fn label(x: &[f64], observable: &Observable, spec: &FeatureMapSpec) -> Result<f64> {
    if observable.dim != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: observable.dim,
        });
    }
    let rho = encode(x, spec)?;
    Ok(observable.expectation(&rho)?.clamp(-1.0, 1.0))
}

/// Exact kernel matrix K_ij = tr(rho_i rho_j) of a state ensemble.
pub fn exact_kernel(states: &[DensityMatrix]) -> Result<KernelMatrix> {
    if states.is_empty() {
        return Err(Error::EmptyDimension);
    }
    let mut values = vec![0.0; states.len() * states.len()];
    for i in 0..states.len() {
        for j in i..states.len() {
            let v = hs_inner(&states[i], &states[j])?;
            values[i * states.len() + j] = v;
            values[j * states.len() + i] = v;
        }
    }
    KernelMatrix::from_entries(states.len(), values)
}
