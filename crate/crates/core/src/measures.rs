//! Scalar functionals of density matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quditmath::{ComplexMatrix, DensityMatrix, Spectrum};

/// Relative slack on the maximal-ball test `R >= n - 1`, so states built to
/// sit exactly on the sphere are not lost to the last bit of rounding.
pub const BALL_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    /// `tr(rho^2)`, clamped to `[1/n, 1]`.
    pub purity: f64,
    /// Inverse participation ratio `1 / tr(rho^2)` of the unclamped purity.
    pub ipr: f64,
    pub entropy: f64,
    pub hs_distance: f64,
    pub in_maximal_ball: bool,
}

impl MeasureRecord {
    /// Computes every measure; `spectrum` must be the spectrum of `rho`.
    pub fn with_spectrum(rho: &DensityMatrix, spectrum: &Spectrum) -> Result<Self> {
        let n = rho.dim() as f64;
        let raw = purity(rho);
        Ok(Self {
            purity: raw.clamp(1.0 / n, 1.0),
            ipr: 1.0 / raw,
            entropy: entropy_from_spectrum(spectrum, rho.psd_tolerance())?,
            hs_distance: hs_distance_to_center(rho),
            in_maximal_ball: ball_test(raw, rho.dim()),
        })
    }

    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Self::with_spectrum(rho, &rho.spectrum()?)
    }
}

/// Raw `tr(rho^2)` as the squared Frobenius norm.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().frobenius_norm_sqr()
}

/// Inverse participation ratio `1 / tr(rho^2)`.
pub fn ipr(rho: &DensityMatrix) -> f64 {
    1.0 / purity(rho)
}

/// `-sum x ln x` over the eigenvalues, natural log, `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_from_spectrum(&rho.spectrum()?, rho.psd_tolerance())
}

/// Entropy of a spectrum. Eigenvalues in `[-tolerance, 0)` count as zero;
/// anything more negative is an invariant violation.
pub fn entropy_from_spectrum(spectrum: &Spectrum, tolerance: f64) -> Result<f64> {
    let min = spectrum.min();
    if min < -tolerance {
        return Err(Error::invariant(
            "positive semidefinite",
            format!("eigenvalue {min:e} below -{tolerance:e}"),
        ));
    }
    Ok(-spectrum
        .values()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>())
}

/// Hilbert-Schmidt distance to the maximally mixed state, `||rho - I/n||_F`.
pub fn hs_distance_to_center(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let center = 1.0 / n as f64;
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            acc += if i == j {
                (z.re - center).powi(2) + z.im * z.im
            } else {
                z.norm_sqr()
            };
        }
    }
    acc.sqrt()
}

/// `alpha = tr A / sqrt(tr A^2)` for Hermitian `A`. When
/// `alpha >= sqrt(n - 1)`, `A` is positive semidefinite.
pub fn mehta_alpha(a: &ComplexMatrix) -> Result<f64> {
    let tr_sq = a.frobenius_norm_sqr();
    if tr_sq < 1e-30 {
        return Err(Error::Degenerate(format!(
            "tr A^2 = {tr_sq:e} is numerically zero"
        )));
    }
    Ok(a.trace().re / tr_sq.sqrt())
}

/// Whether `R(rho) >= d^m - 1`; the boundary sphere counts as inside.
pub fn in_maximal_ball(rho: &DensityMatrix) -> bool {
    ball_test(purity(rho), rho.dim())
}

fn ball_test(purity: f64, n: usize) -> bool {
    purity * (n as f64 - 1.0) <= 1.0 + BALL_RELATIVE_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quditmath::PureState;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn purity_examples() {
        let pure = DensityMatrix::from_pure(&PureState::basis(2, &[1, 0]).unwrap()).unwrap();
        assert_abs_diff_eq!(purity(&pure), 1.0, epsilon = 1e-15);
        let mixed = DensityMatrix::maximally_mixed(3, 2).unwrap();
        assert_abs_diff_eq!(purity(&mixed), 1.0 / 9.0, epsilon = 1e-15);
        let diag = DensityMatrix::diagonal(2, 1, &[0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(purity(&diag), 0.625, epsilon = 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::from_pure(&PureState::basis(2, &[0, 1]).unwrap()).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2, 2).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&mixed).unwrap(),
            4f64.ln(),
            epsilon = 1e-12
        );
        let half = DensityMatrix::diagonal(2, 2, &[0.5, 0.5, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&half).unwrap(),
            2f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_clips_noise_and_rejects_corruption() {
        let tol = 1e-10 * 4.0;
        let noisy = Spectrum::from_values(vec![0.5, 0.5, 1e-11, -1e-11]);
        assert_abs_diff_eq!(
            entropy_from_spectrum(&noisy, tol).unwrap(),
            2f64.ln(),
            epsilon = 1e-9
        );
        let bad = Spectrum::from_values(vec![0.6, 0.5, -1e-3, -0.099]);
        assert!(matches!(
            entropy_from_spectrum(&bad, tol),
            Err(Error::Invariant { .. })
        ));
    }

    #[test]
    fn hs_distance_examples() {
        let mixed = DensityMatrix::maximally_mixed(2, 2).unwrap();
        assert_abs_diff_eq!(hs_distance_to_center(&mixed), 0.0, epsilon = 1e-15);
        let pure = DensityMatrix::from_pure(&PureState::basis(2, &[1, 1]).unwrap()).unwrap();
        assert_abs_diff_eq!(
            hs_distance_to_center(&pure),
            3f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        let third = 1.0 / 3.0;
        let rho_a = DensityMatrix::diagonal(2, 2, &[third, third, third, 0.0]).unwrap();
        assert_abs_diff_eq!(
            hs_distance_to_center(&rho_a),
            (1.0f64 / 12.0).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn mehta_alpha_examples() {
        assert_abs_diff_eq!(
            mehta_alpha(&ComplexMatrix::identity(5)).unwrap(),
            5f64.sqrt(),
            epsilon = 1e-15
        );
        let diag = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert_abs_diff_eq!(mehta_alpha(&diag).unwrap(), 0.0, epsilon = 1e-15);
        let rho = DensityMatrix::diagonal(2, 1, &[0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(
            mehta_alpha(rho.matrix()).unwrap(),
            ipr(&rho).sqrt(),
            epsilon = 1e-15
        );
        assert!(matches!(
            mehta_alpha(&ComplexMatrix::zeros(3)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn maximal_ball_examples() {
        assert!(in_maximal_ball(
            &DensityMatrix::maximally_mixed(2, 2).unwrap()
        ));
        let pure = DensityMatrix::from_pure(&PureState::basis(2, &[0, 0]).unwrap()).unwrap();
        assert!(!in_maximal_ball(&pure));
        let third = 1.0 / 3.0;
        let rho_a = DensityMatrix::diagonal(2, 2, &[third, third, third, 0.0]).unwrap();
        assert!(in_maximal_ball(&rho_a));
        assert_abs_diff_eq!(ipr(&rho_a), 3.0, epsilon = 1e-14);
        // Just outside the sphere.
        let outside =
            DensityMatrix::diagonal(2, 2, &[third + 1e-6, third, third - 1e-6, 0.0]).unwrap();
        assert!(!in_maximal_ball(&outside));
    }

    #[test]
    fn record_invariants() {
        let m = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(0.7, 0.0),
            (1, 1) => Complex64::new(0.3, 0.0),
            (0, 1) => Complex64::new(0.1, 0.2),
            _ => Complex64::new(0.1, -0.2),
        });
        let rho = DensityMatrix::new(2, 1, m).unwrap();
        let rec = MeasureRecord::of(&rho).unwrap();
        assert_abs_diff_eq!(rec.ipr * rec.purity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rec.hs_distance.powi(2),
            1.0 / rec.ipr - 0.5,
            epsilon = 1e-10
        );
        assert_eq!(rec.in_maximal_ball, rec.ipr >= 1.0);
    }
}
