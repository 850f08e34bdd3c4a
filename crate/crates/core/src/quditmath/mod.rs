//! Tensor-index arithmetic and dense Hermitian linear algebra on qudit
//! registers.
//!
//! Basis index `i` of an `N`-qudit register spells the qudit digits in base
//! `d` with qudit 0 as the most significant digit. Matrices are row-major.

mod matrix;
mod partition;
mod spectrum;
mod state;

pub use matrix::ComplexMatrix;
pub use partition::{enumerate_bipartitions, PartitionSpec};
pub use spectrum::{hermitian_spectrum, Spectrum, SPECTRUM_HERMITIAN_TOLERANCE};
pub use state::{
    hilbert_dim, hilbert_dim_wide, psd_tolerance, DensityMatrix, PureState, QuditShape,
    HERMITIAN_TOLERANCE, NORM_TOLERANCE, TRACE_TOLERANCE,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced density matrix of the qudits in `keep`, traced over the rest.
///
/// Works directly on the amplitudes: with the state reshaped into a
/// `d^m x d^(N-m)` matrix `Psi` (kept digits as rows), the result is
/// `Psi Psi^†`. Output qudits follow ascending position in `keep`.
pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let shape = state.shape();
    let n = shape.qudits;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    if keep.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain(format!(
            "duplicate position in keep set {keep:?}"
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&p| p >= n) {
        return Err(Error::domain(format!(
            "position {bad} out of range for N = {n}"
        )));
    }
    if keep.is_empty() || keep.len() == n {
        return Err(Error::domain(format!(
            "keep set must be a nonempty proper subset of 0..{n}, got {keep:?}"
        )));
    }

    let m = keep.len();
    let d = shape.d;
    let kept_dim = d.pow(m as u32);
    let traced_dim = d.pow((n - m) as u32);

    // Scatter amplitudes into Psi[kept][traced].
    let mut psi = vec![Complex64::new(0.0, 0.0); kept_dim * traced_dim];
    let is_kept: Vec<bool> = (0..n).map(|p| keep.contains(&p)).collect();
    for (index, &amp) in state.amplitudes().iter().enumerate() {
        let mut row = 0;
        let mut col = 0;
        for (p, &kept) in is_kept.iter().enumerate() {
            let digit = shape.digit(index, p);
            if kept {
                row = row * d + digit;
            } else {
                col = col * d + digit;
            }
        }
        psi[row * traced_dim + col] = amp;
    }

    let mut rho = ComplexMatrix::zeros(kept_dim);
    for a in 0..kept_dim {
        let row_a = &psi[a * traced_dim..(a + 1) * traced_dim];
        for b in a..kept_dim {
            let row_b = &psi[b * traced_dim..(b + 1) * traced_dim];
            let value: Complex64 = row_a.iter().zip(row_b).map(|(x, y)| x * y.conj()).sum();
            rho.set(a, b, value);
        }
    }
    rho.symmetrize_from_upper();
    DensityMatrix::new(d, m, rho)
}

/// Partial transpose over a canonical bipartition.
pub fn partial_transpose(rho: &DensityMatrix, part: &PartitionSpec) -> Result<ComplexMatrix> {
    if part.m() != rho.qudits() {
        return Err(Error::domain(format!(
            "partition is over {} qudits but the state has {}",
            part.m(),
            rho.qudits()
        )));
    }
    Ok(transpose_positions(
        rho.shape(),
        rho.matrix(),
        part.subset(),
    ))
}

/// Partial transpose over an arbitrary subset of positions (possibly empty or
/// the full register).
pub fn partial_transpose_subset(rho: &DensityMatrix, subset: &[usize]) -> Result<ComplexMatrix> {
    let m = rho.qudits();
    if let Some(&bad) = subset.iter().find(|&&p| p >= m) {
        return Err(Error::domain(format!(
            "position {bad} out of range for m = {m}"
        )));
    }
    Ok(transpose_positions(rho.shape(), rho.matrix(), subset))
}

// Since the digits of distinct positions occupy disjoint place values, an
// index splits additively as `rest + sub`. Transposing the subset exchanges
// the `sub` parts of row and column.
fn transpose_positions(
    shape: QuditShape,
    matrix: &ComplexMatrix,
    subset: &[usize],
) -> ComplexMatrix {
    let dim = shape.dim();
    let sub: Vec<usize> = (0..dim)
        .map(|i| {
            subset
                .iter()
                .map(|&p| shape.digit(i, p) * shape.weight(p))
                .sum()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let r_rest = r - sub[r];
        for c in 0..dim {
            let c_rest = c - sub[c];
            out.set(r_rest + sub[c], c_rest + sub[r], matrix.get(r, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(2, 2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap()
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let state = PureState::basis(2, &[0, 1]).unwrap();
        let rho = partial_trace(&state, &[0]).unwrap();
        assert_eq!(
            rho.matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        let rho = partial_trace(&state, &[1]).unwrap();
        assert_eq!(
            rho.matrix(),
            &ComplexMatrix::from_real_diagonal(&[0.0, 1.0])
        );
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        let rho = partial_trace(&bell(), &[0]).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5))
                < 1e-15
        );
    }

    #[test]
    fn ghz_two_qubit_marginal() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(h);
        amps[7] = c(h);
        let ghz = PureState::new(2, 3, amps).unwrap();
        let rho = partial_trace(&ghz, &[0, 1]).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn keep_order_is_ascending_position() {
        // |0 1 2> on three qutrits; keep {2, 0} gives the two-qutrit basis state |0 2>.
        let state = PureState::basis(3, &[0, 1, 2]).unwrap();
        let rho = partial_trace(&state, &[2, 0]).unwrap();
        assert_eq!(rho.matrix().get(2, 2), c(1.0));
    }

    #[test]
    fn partial_trace_errors() {
        let state = bell();
        assert!(matches!(partial_trace(&state, &[]), Err(Error::Domain(_))));
        assert!(matches!(
            partial_trace(&state, &[0, 1]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(partial_trace(&state, &[2]), Err(Error::Domain(_))));
        assert!(matches!(
            partial_trace(&state, &[0, 0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = DensityMatrix::from_pure(&bell()).unwrap();
        let part = PartitionSpec::new(2, [0]).unwrap();
        let pt = partial_transpose(&rho, &part).unwrap();
        let spectrum = hermitian_spectrum(&pt).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (got, want) in spectrum.values().iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn diagonal_states_are_fixed() {
        let rho =
            DensityMatrix::diagonal(2, 3, &[0.3, 0.1, 0.1, 0.05, 0.05, 0.2, 0.1, 0.1]).unwrap();
        for part in enumerate_bipartitions(3).unwrap() {
            assert_eq!(&partial_transpose(&rho, &part).unwrap(), rho.matrix());
        }
    }

    #[test]
    fn mismatched_partition_is_rejected() {
        let rho = DensityMatrix::maximally_mixed(2, 2).unwrap();
        let part = PartitionSpec::new(3, [0]).unwrap();
        assert!(matches!(
            partial_transpose(&rho, &part),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn full_transpose_matches_plain_transpose() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                c(0.25)
            } else if i < j {
                Complex64::new(0.01 * (i + j) as f64, 0.02 * j as f64)
            } else {
                Complex64::new(0.01 * (i + j) as f64, -0.02 * i as f64)
            }
        });
        let rho = DensityMatrix::new(2, 2, m.clone()).unwrap();
        let full = partial_transpose_subset(&rho, &[0, 1]).unwrap();
        assert_eq!(full, ComplexMatrix::from_fn(4, |i, j| m.get(j, i)));
        let none = partial_transpose_subset(&rho, &[]).unwrap();
        assert_eq!(&none, rho.matrix());
    }

    #[test]
    fn spectrum_examples() {
        let s = hermitian_spectrum(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        for x in s.values() {
            assert_abs_diff_eq!(*x, 0.25, epsilon = 1e-15);
        }
        let s = hermitian_spectrum(&ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3])).unwrap();
        assert_eq!(s.values(), &[0.5, 0.3, 0.2]);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, c(1.0));
        assert!(matches!(hermitian_spectrum(&m), Err(Error::Domain(_))));
    }
}
