//! Positive-partial-transpose classification over every bipartition.

use serde::{Deserialize, Serialize};

use crate::analytic::{eps_ent, werner_state};
use crate::error::{Error, Result};
use crate::measures::MeasureRecord;
use crate::quditmath::{
    enumerate_bipartitions, hermitian_spectrum, partial_transpose, partial_transpose_subset,
    DensityMatrix, PartitionSpec,
};

/// Positivity tolerance for partial transposes of an `n x n` state,
/// `1e-10 * n`.
pub fn ppt_tolerance(n: usize) -> f64 {
    1e-10 * n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Ppt,
    Npt,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Ppt => "PPT",
            Verdict::Npt => "NPT",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ScanMode {
    /// Diagonalize every partial transpose and keep the global minimum.
    #[default]
    Full,
    /// Stop at the first partial transpose with an eigenvalue below tolerance.
    VerdictOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub verdict: Verdict,
    /// First bipartition attaining `min_eigenvalue`; present iff NPT.
    pub witness_subset: Option<PartitionSpec>,
    /// Most negative eigenvalue over the scanned partial transposes.
    pub min_eigenvalue: f64,
    pub measures: MeasureRecord,
}

pub fn classify(rho: &DensityMatrix) -> Result<ClassificationRecord> {
    classify_with(rho, ScanMode::Full)
}

pub fn classify_with(rho: &DensityMatrix, mode: ScanMode) -> Result<ClassificationRecord> {
    let m = rho.qudits();
    if m < 2 {
        return Err(Error::domain(
            "classification needs m >= 2; a single qudit is PPT by convention",
        ));
    }
    let measures = MeasureRecord::with_spectrum(rho, &rho.spectrum()?)?;
    let tolerance = ppt_tolerance(rho.dim());

    let mut min_eigenvalue = f64::INFINITY;
    let mut argmin: Option<PartitionSpec> = None;
    for part in enumerate_bipartitions(m)? {
        let lowest = hermitian_spectrum(&partial_transpose(rho, &part)?)?.min();
        if lowest < min_eigenvalue {
            min_eigenvalue = lowest;
            argmin = Some(part);
        }
        if mode == ScanMode::VerdictOnly && min_eigenvalue < -tolerance {
            break;
        }
    }

    let verdict = if min_eigenvalue < -tolerance {
        Verdict::Npt
    } else {
        Verdict::Ppt
    };
    Ok(ClassificationRecord {
        verdict,
        witness_subset: if verdict == Verdict::Npt {
            argmin
        } else {
            None
        },
        min_eigenvalue,
        measures,
    })
}

/// Smallest eigenvalue of the partial transpose over an arbitrary subset.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix, subset: &[usize]) -> Result<f64> {
    Ok(hermitian_spectrum(&partial_transpose_subset(rho, subset)?)?.min())
}

/// Smallest eigenvalue over all partial transposes, with no tolerance.
fn raw_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let mut lowest = f64::INFINITY;
    for part in enumerate_bipartitions(rho.qudits())? {
        lowest = lowest.min(hermitian_spectrum(&partial_transpose(rho, &part)?)?.min());
    }
    Ok(lowest)
}

/// Locates the PPT-to-NPT flip of the generalized Werner family by bisection
/// on `eps` in `[0, 1]`, to within `tolerance`.
///
/// The flip is detected on the sign of the smallest partial-transpose
/// eigenvalue, so the classification tolerance does not bias the crossing.
/// A crossing that disagrees with `1 / (d^(m-1) + 1)` by more than
/// `tolerance` is reported as a consistency error.
pub fn werner_threshold_scan(d: usize, m: usize, tolerance: f64) -> Result<f64> {
    if d < 2 || m < 2 {
        return Err(Error::domain(format!(
            "need d >= 2 and m >= 2, got d = {d}, m = {m}"
        )));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let is_npt =
        |eps: f64| -> Result<bool> { Ok(raw_min_eigenvalue(&werner_state(d, m, eps)?)? < 0.0) };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if is_npt(lo)? || !is_npt(hi)? {
        return Err(Error::Consistency(format!(
            "no PPT-to-NPT flip of the Werner family in [0, 1] for d = {d}, m = {m}"
        )));
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if is_npt(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let crossing = 0.5 * (lo + hi);
    let expected = eps_ent(d, m);
    if (crossing - expected).abs() > tolerance {
        return Err(Error::Consistency(format!(
            "Werner flip at {crossing} for d = {d}, m = {m}, expected {expected}"
        )));
    }
    Ok(crossing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quditmath::PureState;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn bell_rho() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi = PureState::new(
            2,
            2,
            vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)],
        )
        .unwrap();
        DensityMatrix::from_pure(&psi).unwrap()
    }

    #[test]
    fn bell_pair_is_npt() {
        let rec = classify(&bell_rho()).unwrap();
        assert_eq!(rec.verdict, Verdict::Npt);
        assert_eq!(rec.witness_subset.unwrap().subset(), &[0]);
        assert_abs_diff_eq!(rec.min_eigenvalue, -0.5, epsilon = 1e-14);
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        for (d, m) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
            let rho = DensityMatrix::maximally_mixed(d, m).unwrap();
            let rec = classify(&rho).unwrap();
            assert_eq!(rec.verdict, Verdict::Ppt);
            assert!(rec.witness_subset.is_none());
            let n = (d as f64).powi(m as i32);
            assert_abs_diff_eq!(rec.min_eigenvalue, 1.0 / n, epsilon = 1e-14);
        }
    }

    #[test]
    fn werner_two_qubit_verdicts() {
        let ppt = classify(&werner_state(2, 2, 0.2).unwrap()).unwrap();
        assert_eq!(ppt.verdict, Verdict::Ppt);
        let npt = classify(&werner_state(2, 2, 0.5).unwrap()).unwrap();
        assert_eq!(npt.verdict, Verdict::Npt);
    }

    #[test]
    fn verdict_only_agrees() {
        for eps in [0.1, 0.3, 0.5, 0.9] {
            let rho = werner_state(2, 3, eps).unwrap();
            let full = classify(&rho).unwrap();
            let fast = classify_with(&rho, ScanMode::VerdictOnly).unwrap();
            assert_eq!(full.verdict, fast.verdict);
            assert!(fast.min_eigenvalue >= full.min_eigenvalue);
        }
    }

    #[test]
    fn single_qudit_is_rejected() {
        let rho = DensityMatrix::maximally_mixed(3, 1).unwrap();
        assert!(matches!(classify(&rho), Err(Error::Domain(_))));
    }

    #[test]
    fn threshold_scan_examples() {
        assert_abs_diff_eq!(
            werner_threshold_scan(2, 2, 1e-10).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            werner_threshold_scan(3, 2, 1e-10).unwrap(),
            0.25,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            werner_threshold_scan(2, 3, 1e-10).unwrap(),
            0.2,
            epsilon = 1e-9
        );
        assert!(werner_threshold_scan(2, 2, 0.0).is_err());
        assert!(werner_threshold_scan(2, 1, 1e-3).is_err());
    }

    #[test]
    fn werner_family_flips_once() {
        for (d, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
            let verdicts: Vec<Verdict> = (0..=200)
                .map(|k| {
                    classify(&werner_state(d, m, k as f64 / 200.0).unwrap())
                        .unwrap()
                        .verdict
                })
                .collect();
            let flips = verdicts.windows(2).filter(|w| w[0] != w[1]).count();
            assert_eq!(flips, 1, "d={d} m={m}");
            assert_eq!(verdicts[0], Verdict::Ppt);
        }
    }
}
