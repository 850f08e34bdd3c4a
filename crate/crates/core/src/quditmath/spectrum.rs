use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Largest tolerated `|a_ij - conj(a_ji)|` for eigensolver input.
pub const SPECTRUM_HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// Nonzero eigenvalues, i.e. those above `cutoff`.
    pub fn support(&self, cutoff: f64) -> &[f64] {
        let end = self
            .0
            .iter()
            .position(|&x| x <= cutoff)
            .unwrap_or(self.0.len());
        &self.0[..end]
    }
}

/// All eigenvalues of a Hermitian matrix, sorted descending.
///
/// Householder tridiagonalization followed by implicit QR, via nalgebra.
pub fn hermitian_spectrum(matrix: &ComplexMatrix) -> Result<Spectrum> {
    let defect = matrix.hermiticity_defect();
    if defect > SPECTRUM_HERMITIAN_TOLERANCE {
        return Err(Error::domain(format!(
            "matrix is not Hermitian: max |a_ij - conj(a_ji)| = {defect:e}"
        )));
    }
    if matrix.dim() == 0 {
        return Ok(Spectrum(Vec::new()));
    }
    let values = matrix.to_nalgebra().symmetric_eigenvalues();
    Ok(Spectrum::from_values(values.iter().copied().collect()))
}
