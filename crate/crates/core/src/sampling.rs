//! Seeded Haar-random pure states and the induced mixed-state ensemble.
//!
//! A Haar-random pure state is a vector of i.i.d. standard complex Gaussians
//! normalized to unit length. Each sample owns a ChaCha8 stream selected by
//! `(master_seed, sample_index)`, so any sample can be regenerated in
//! isolation and parallel runs reproduce serial ones exactly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quditmath::{hilbert_dim_wide, partial_trace, DensityMatrix, PureState};

/// Default cap on `d^N`: 2^20 amplitudes, about 16 MiB per state.
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 20;

/// Identifies one sample's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub sample_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, sample_index: u64) -> Self {
        Self {
            master_seed,
            sample_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.sample_index);
        rng
    }
}

/// Which `m` qudits survive the partial trace.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeepPolicy {
    #[default]
    FirstM,
    RandomSubset,
}

/// Draws one standard complex Gaussian (`E|z|^2 = 1`) by Box-Muller.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // 1 - U lies in (0, 1], keeping the logarithm finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let radius = (-u1.ln()).sqrt();
    Complex64::from_polar(radius, std::f64::consts::TAU * u2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaarSampler {
    pub max_amplitudes: usize,
}

impl Default for HaarSampler {
    fn default() -> Self {
        Self {
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }
}

impl HaarSampler {
    pub fn with_cap(max_amplitudes: usize) -> Self {
        Self { max_amplitudes }
    }

    /// Fails with [`Error::Resource`] if `d^n` exceeds the cap.
    pub fn check_capacity(&self, d: usize, n: usize) -> Result<()> {
        let requested = hilbert_dim_wide(d, n);
        if requested > self.max_amplitudes as u128 {
            return Err(Error::Resource {
                requested,
                cap: self.max_amplitudes,
            });
        }
        Ok(())
    }

    pub fn pure(&self, d: usize, n: usize, seed: SeedSpec) -> Result<PureState> {
        self.pure_with_rng(d, n, &mut seed.rng())
    }

    fn pure_with_rng(&self, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<PureState> {
        if d < 2 || n < 1 {
            return Err(Error::domain(format!(
                "need d >= 2 and N >= 1, got d = {d}, N = {n}"
            )));
        }
        self.check_capacity(d, n)?;
        let dim = d.pow(n as u32);
        let amplitudes = (0..dim).map(|_| complex_gaussian(rng)).collect();
        PureState::from_unnormalized(d, n, amplitudes)
    }

    /// One draw from the induced measure: a Haar-random `n`-qudit state
    /// reduced to `m` qudits.
    pub fn induced(
        &self,
        d: usize,
        n: usize,
        m: usize,
        policy: KeepPolicy,
        seed: SeedSpec,
    ) -> Result<DensityMatrix> {
        if m < 1 || m >= n {
            return Err(Error::domain(format!(
                "need 1 <= m < N, got m = {m}, N = {n}"
            )));
        }
        let mut rng = seed.rng();
        let state = self.pure_with_rng(d, n, &mut rng)?;
        let keep: Vec<usize> = match policy {
            KeepPolicy::FirstM => (0..m).collect(),
            KeepPolicy::RandomSubset => rand::seq::index::sample(&mut rng, n, m).into_vec(),
        };
        partial_trace(&state, &keep)
    }
}

/// Haar-random pure state under the default memory cap.
pub fn sample_haar_pure(d: usize, n: usize, seed: SeedSpec) -> Result<PureState> {
    HaarSampler::default().pure(d, n, seed)
}

/// Induced-measure mixed state under the default memory cap.
pub fn induced_mixed(
    d: usize,
    n: usize,
    m: usize,
    policy: KeepPolicy,
    seed: SeedSpec,
) -> Result<DensityMatrix> {
    HaarSampler::default().induced(d, n, m, policy, seed)
}

/// Haar-random `dim x dim` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> crate::quditmath::ComplexMatrix {
    let ginibre = nalgebra::DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    crate::quditmath::ComplexMatrix::from_fn(dim, |i, j| q[(i, j)])
}
