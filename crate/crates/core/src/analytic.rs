//! Closed-form quantities: mean entropy and purity of induced states, the
//! maximal-ball radius, PPT and entanglement bounds on `N`, the generalized
//! Werner family, and the entropy of states on the ball boundary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quditmath::{hilbert_dim, ComplexMatrix, DensityMatrix, Spectrum};

fn log_base(x: f64, d: usize) -> f64 {
    if d == 2 {
        x.log2()
    } else {
        x.ln() / (d as f64).ln()
    }
}

fn pow_f(d: usize, e: i32) -> f64 {
    (d as f64).powi(e)
}

/// Mean subsystem entropy of a Haar-random pure state on `C^M (x) C^K`,
/// `sum_{j=K+1}^{MK} 1/j - (M-1)/(2K)`, summed exactly.
pub fn mean_entropy(big_m: u64, big_k: u64) -> Result<f64> {
    if big_m < 1 || big_m > big_k {
        return Err(Error::domain(format!(
            "need 1 <= M <= K, got M = {big_m}, K = {big_k}"
        )));
    }
    let upper = big_m
        .checked_mul(big_k)
        .ok_or_else(|| Error::domain("M*K overflows"))?;
    // Smallest terms first.
    let harmonic: f64 = ((big_k + 1)..=upper).rev().map(|j| 1.0 / j as f64).sum();
    Ok(harmonic - (big_m - 1) as f64 / (2.0 * big_k as f64))
}

/// [`mean_entropy`] for `m` of `n` qudits, with `M = d^m`, `K = d^(n-m)`
/// swapped so that `M <= K`.
pub fn mean_entropy_qudits(d: usize, n: usize, m: usize) -> Result<f64> {
    let (big_m, big_k) = subsystem_dims(d, n, m)?;
    mean_entropy(big_m.min(big_k), big_m.max(big_k))
}

/// Mean purity `(M + K) / (MK + 1)`.
pub fn mean_purity(big_m: u64, big_k: u64) -> Result<f64> {
    if big_m < 1 || big_k < 1 {
        return Err(Error::domain("dimensions must be >= 1"));
    }
    let (m, k) = (big_m as f64, big_k as f64);
    Ok((m + k) / (m * k + 1.0))
}

/// `(d^m + d^(n-m)) / (d^n + 1)`.
pub fn mean_purity_qudits(d: usize, n: usize, m: usize) -> Result<f64> {
    let (big_m, big_k) = subsystem_dims(d, n, m)?;
    mean_purity(big_m, big_k)
}

fn subsystem_dims(d: usize, n: usize, m: usize) -> Result<(u64, u64)> {
    if d < 2 || m < 1 || m >= n {
        return Err(Error::domain(format!(
            "need d >= 2 and 1 <= m < N, got d = {d}, N = {n}, m = {m}"
        )));
    }
    let dim = |k: usize| {
        hilbert_dim(d, k)
            .map(|x| x as u64)
            .ok_or_else(|| Error::domain(format!("{d}^{k} overflows")))
    };
    Ok((dim(m)?, dim(n - m)?))
}

/// Purity radius of the maximal ball, `1 / (d^m - 1)`.
pub fn r_ppt(d: usize, m: usize) -> f64 {
    1.0 / (pow_f(d, m as i32) - 1.0)
}

/// Werner-family entanglement threshold `1 / (d^(m-1) + 1)`.
pub fn eps_ent(d: usize, m: usize) -> f64 {
    1.0 / (pow_f(d, m as i32 - 1) + 1.0)
}

/// Purity of the Werner state at the threshold,
/// `(d^m + d^2 + 2d) / (d^m + d)^2`.
pub fn r_ent(d: usize, m: usize) -> f64 {
    let n = pow_f(d, m as i32);
    let d = d as f64;
    (n + d * d + 2.0 * d) / ((n + d) * (n + d))
}

/// Every closed-form bound for `m`-qudit subsystems of dimension-`d` qudits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub d: usize,
    pub m: usize,
    pub r_ppt: f64,
    pub n_ppt_real: f64,
    pub n_ppt: i64,
    /// `None` for `m = 1`: the Werner family needs at least two qudits.
    pub eps_ent: Option<f64>,
    pub r_ent: Option<f64>,
    pub n_ent_real: Option<f64>,
    pub n_ent: Option<i64>,
    pub transition_low: i64,
    pub transition_high: i64,
    /// `None` when `d^m < 3`.
    pub s_critical: Option<f64>,
}

pub fn bounds_report(d: usize, m: usize) -> Result<BoundsReport> {
    if d < 2 || m < 1 {
        return Err(Error::domain(format!(
            "need d >= 2 and m >= 1, got d = {d}, m = {m}"
        )));
    }
    let mi = m as i32;
    let n_ppt_real = 3.0 * m as f64 + log_base(1.0 - pow_f(d, -mi) - pow_f(d, -2 * mi), d);
    let (eps, r, n_ent_real) = if m >= 2 {
        let df = d as f64;
        let real = (3 * m - 2) as f64
            + log_base(
                1.0 + (2.0 * df + 1.0) * pow_f(d, -mi) + (df + 2.0) * pow_f(d, 1 - 2 * mi),
                d,
            );
        (Some(eps_ent(d, m)), Some(r_ent(d, m)), Some(real))
    } else {
        (None, None, None)
    };
    let s_critical = hilbert_dim(d, m)
        .filter(|&n| n >= 3)
        .and_then(|n| critical_entropy(n).ok());
    Ok(BoundsReport {
        d,
        m,
        r_ppt: r_ppt(d, m),
        n_ppt_real,
        n_ppt: n_ppt_real.floor() as i64 + 1,
        eps_ent: eps,
        r_ent: r,
        n_ent_real,
        n_ent: n_ent_real.map(|x| x.floor() as i64),
        transition_low: 3 * m as i64 - 2,
        transition_high: 3 * m as i64,
        s_critical,
    })
}

/// Generalized Werner state `(1-eps)/d^m I + eps |Psi><Psi|` with
/// `|Psi> = d^(-1/2) sum_i |i...i>`.
pub fn werner_state(d: usize, m: usize, eps: f64) -> Result<DensityMatrix> {
    if d < 2 || m < 2 {
        return Err(Error::domain(format!(
            "need d >= 2 and m >= 2, got d = {d}, m = {m}"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain(format!("eps = {eps} outside [0, 1]")));
    }
    let n = hilbert_dim(d, m).ok_or_else(|| Error::domain("dimension overflows"))?;
    // |i...i> has index i * (1 + d + ... + d^(m-1)).
    let stride = (n - 1) / (d - 1);
    let mut matrix = ComplexMatrix::identity(n).scale((1.0 - eps) / n as f64);
    let weight = eps / d as f64;
    for i in 0..d {
        for j in 0..d {
            let (r, c) = (i * stride, j * stride);
            matrix.set(r, c, matrix.get(r, c) + Complex64::new(weight, 0.0));
        }
    }
    DensityMatrix::new(d, m, matrix)
}

/// Largest entropy on the maximal-ball sphere `R = n - 1`:
/// `ln n - (2/n) ln 2 + ((n-2)/n) ln((n-1)/(n-2))`.
pub fn critical_entropy(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!(
            "critical entropy needs n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(nf.ln() - 2.0 / nf * 2f64.ln() + (nf - 2.0) / nf * ((nf - 1.0) / (nf - 2.0)).ln())
}

/// Spectra of the two antipodal states on the ball boundary: `rho_a` (on the
/// boundary of the state space, least entropy) and `rho_b` (most entropy).
pub fn ball_boundary_spectra(n: usize) -> Result<(Spectrum, Spectrum)> {
    if n < 3 {
        return Err(Error::domain(format!(
            "ball boundary spectra need n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let mut a = vec![1.0 / (nf - 1.0); n - 1];
    a.push(0.0);
    let mut b = vec![(nf - 2.0) / (nf * (nf - 1.0)); n - 1];
    b.push(2.0 / nf);
    Ok((Spectrum::from_values(a), Spectrum::from_values(b)))
}
