use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::spectrum::{hermitian_spectrum, Spectrum};
use crate::error::{Error, Result};

/// Tolerance on the squared norm of a pure state.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance on `|rho_ij - conj(rho_ji)|` for a density matrix.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Tolerance on `tr(rho) - 1`.
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// `d^n` as `u128`, so callers can compare against memory caps without
/// overflowing.
pub fn hilbert_dim_wide(d: usize, n: usize) -> u128 {
    (d as u128).saturating_pow(n as u32)
}

/// `d^n`, or `None` if it does not fit in `usize`.
pub fn hilbert_dim(d: usize, n: usize) -> Option<usize> {
    d.checked_pow(u32::try_from(n).ok()?)
}

/// Local dimension and qudit count of a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditShape {
    pub d: usize,
    pub qudits: usize,
}

impl QuditShape {
    pub fn new(d: usize, qudits: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!(
                "qudit dimension must be >= 2, got {d}"
            )));
        }
        if qudits < 1 {
            return Err(Error::domain("qudit count must be >= 1"));
        }
        if hilbert_dim(d, qudits).is_none() {
            return Err(Error::domain(format!("{d}^{qudits} overflows")));
        }
        Ok(Self { d, qudits })
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.qudits as u32)
    }

    /// Place value of qudit `position`; qudit 0 is the most significant digit.
    pub fn weight(&self, position: usize) -> usize {
        self.d.pow((self.qudits - 1 - position) as u32)
    }

    pub fn digit(&self, index: usize, position: usize) -> usize {
        (index / self.weight(position)) % self.d
    }
}

/// Unit vector in the `d^N` dimensional space of `N` qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    shape: QuditShape,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(d: usize, qudits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let shape = QuditShape::new(d, qudits)?;
        if amplitudes.len() != shape.dim() {
            return Err(Error::domain(format!(
                "expected {} amplitudes, got {}",
                shape.dim(),
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invariant(
                "unit norm",
                format!("squared norm is {norm_sqr}"),
            ));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Normalizes `amplitudes` before validating.
    pub fn from_unnormalized(
        d: usize,
        qudits: usize,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(d, qudits, amplitudes)
    }

    /// Computational basis state with the given digits, qudit 0 first.
    pub fn basis(d: usize, digits: &[usize]) -> Result<Self> {
        let shape = QuditShape::new(d, digits.len())?;
        if let Some(&bad) = digits.iter().find(|&&x| x >= d) {
            return Err(Error::domain(format!(
                "digit {bad} out of range for d = {d}"
            )));
        }
        let index = digits.iter().fold(0, |acc, &x| acc * d + x);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); shape.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(d, digits.len(), amplitudes)
    }

    pub fn shape(&self) -> QuditShape {
        self.shape
    }

    pub fn d(&self) -> usize {
        self.shape.d
    }

    pub fn qudits(&self) -> usize {
        self.shape.qudits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Mixed state of `m` qudits: Hermitian, unit trace, positive semidefinite.
///
/// Construction checks hermiticity and trace. Positivity needs a spectrum, so
/// it is checked lazily by [`DensityMatrix::check_positive`] and by every
/// consumer that diagonalizes the matrix anyway.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: QuditShape,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(d: usize, m: usize, matrix: ComplexMatrix) -> Result<Self> {
        let shape = QuditShape::new(d, m)?;
        if matrix.dim() != shape.dim() {
            return Err(Error::domain(format!(
                "matrix dimension {} does not match {d}^{m}",
                matrix.dim()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::invariant(
                "hermiticity",
                format!("max |rho_ij - conj(rho_ji)| = {defect:e}"),
            ));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::invariant("unit trace", format!("trace = {trace}")));
        }
        Ok(Self { shape, matrix })
    }

    pub fn maximally_mixed(d: usize, m: usize) -> Result<Self> {
        let shape = QuditShape::new(d, m)?;
        let n = shape.dim();
        Self::new(d, m, ComplexMatrix::identity(n).scale(1.0 / n as f64))
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::new(
            state.d(),
            state.qudits(),
            ComplexMatrix::projector(state.amplitudes()),
        )
    }

    /// Diagonal state with the given eigenvalues.
    pub fn diagonal(d: usize, m: usize, eigenvalues: &[f64]) -> Result<Self> {
        Self::new(d, m, ComplexMatrix::from_real_diagonal(eigenvalues))
    }

    pub fn shape(&self) -> QuditShape {
        self.shape
    }

    pub fn d(&self) -> usize {
        self.shape.d
    }

    pub fn qudits(&self) -> usize {
        self.shape.qudits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Positivity tolerance `1e-10 * d^m`.
    pub fn psd_tolerance(&self) -> f64 {
        psd_tolerance(self.dim())
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_spectrum(&self.matrix)
    }

    /// Verifies the smallest eigenvalue is at least `-psd_tolerance()` and
    /// returns the spectrum.
    pub fn check_positive(&self) -> Result<Spectrum> {
        let spectrum = self.spectrum()?;
        let min = spectrum.min();
        if min < -self.psd_tolerance() {
            return Err(Error::invariant(
                "positive semidefinite",
                format!(
                    "minimum eigenvalue {min:e} below -{:e}",
                    self.psd_tolerance()
                ),
            ));
        }
        Ok(spectrum)
    }

    /// Relabels qudits: output qudit `k` is input qudit `perm[k]`.
    pub fn permute_qudits(&self, perm: &[usize]) -> Result<Self> {
        let m = self.qudits();
        let mut seen = vec![false; m];
        if perm.len() != m
            || perm
                .iter()
                .any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::domain(format!(
                "{perm:?} is not a permutation of 0..{m}"
            )));
        }
        let shape = self.shape;
        let map: Vec<usize> = (0..shape.dim())
            .map(|out| {
                perm.iter()
                    .enumerate()
                    .map(|(k, &src)| shape.digit(out, k) * shape.weight(src))
                    .sum()
            })
            .collect();
        let matrix = ComplexMatrix::from_fn(shape.dim(), |i, j| self.matrix.get(map[i], map[j]));
        Self::new(shape.d, m, matrix)
    }

    /// `U rho U^†`; the caller guarantees `unitary` is unitary.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        let mut out = self.matrix.conjugate_by(unitary);
        out.symmetrize_from_upper();
        Self::new(self.d(), self.qudits(), out)
    }
}

/// Positivity tolerance for a matrix of dimension `n`.
pub fn psd_tolerance(n: usize) -> f64 {
    1e-10 * n as f64
}
