//! Monte Carlo harness: purity/entropy statistics, PPT fractions per `N`,
//! the transition window and the NPT falloff fit.
//!
//! Samples are grouped into fixed chunks of [`CHUNK_SIZE`] consecutive sample
//! indices. Chunks are processed in parallel and merged strictly in index
//! order, so floating-point sums (and everything downstream) are
//! bit-identical for any worker count.

pub mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::MeasureRecord;
use crate::ppt::{classify, Verdict};
use crate::quditmath::{hilbert_dim, DensityMatrix};
use crate::sampling::{HaarSampler, KeepPolicy, SeedSpec, DEFAULT_MAX_AMPLITUDES};

pub use stats::{fit_line, wilson_interval, Histogram, LineFit, Moments, Z_95};

/// Samples per work unit.
pub const CHUNK_SIZE: u64 = 64;
/// Minimum NPT hits for a point to enter the falloff fit.
pub const MIN_NPT_HITS: u64 = 100;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_BINS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: usize,
    pub m: usize,
    pub n_values: Vec<usize>,
    pub samples_per_point: u64,
    pub master_seed: u64,
    pub workers: usize,
    pub histogram_bins: usize,
    pub keep_policy: KeepPolicy,
    pub max_amplitudes: usize,
}

impl ExperimentConfig {
    pub fn new(d: usize, m: usize, n_values: Vec<usize>, master_seed: u64) -> Self {
        Self {
            d,
            m,
            n_values,
            samples_per_point: DEFAULT_SAMPLES,
            master_seed,
            workers: 1,
            histogram_bins: DEFAULT_BINS,
            keep_policy: KeepPolicy::FirstM,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }

    pub fn samples(mut self, samples: u64) -> Self {
        self.samples_per_point = samples;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 || self.m < 1 {
            return Err(Error::domain(format!(
                "need d >= 2 and m >= 1, got d = {}, m = {}",
                self.d, self.m
            )));
        }
        if self.n_values.is_empty() {
            return Err(Error::domain("no N values given"));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n <= self.m) {
            return Err(Error::domain(format!("N = {n} must exceed m = {}", self.m)));
        }
        if self.samples_per_point == 0 || self.workers == 0 || self.histogram_bins == 0 {
            return Err(Error::domain(
                "samples, workers and bins must all be positive",
            ));
        }
        let sampler = HaarSampler::with_cap(self.max_amplitudes);
        for &n in &self.n_values {
            sampler.check_capacity(self.d, n)?;
        }
        Ok(())
    }
}

/// Stream seed for the point `(d, m, N)` of a run with `master_seed`.
///
/// Different points draw from unrelated streams; sample `i` of a point uses
/// `SeedSpec::new(point_seed(..), i)`.
pub fn point_seed(master_seed: u64, d: usize, m: usize, n: usize) -> u64 {
    let mut h = master_seed;
    for x in [d as u64, m as u64, n as u64] {
        h = splitmix64(h ^ splitmix64(x));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Result of one induced-measure sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_index: u64,
    pub verdict: Verdict,
    /// `None` for `m = 1`, which has no bipartition.
    pub min_pt_eigenvalue: Option<f64>,
    pub witness: Option<String>,
    pub measures: MeasureRecord,
}

/// Draws, validates and classifies sample `index` of point `(d, N, m)`.
///
/// Single-qudit subsystems are PPT by convention.
pub fn evaluate_sample(
    sampler: &HaarSampler,
    d: usize,
    n: usize,
    m: usize,
    policy: KeepPolicy,
    seed: SeedSpec,
) -> Result<SampleRecord> {
    let rho = sampler.induced(d, n, m, policy, seed)?;
    let record = if m >= 2 {
        let rec = classify(&rho)?;
        SampleRecord {
            sample_index: seed.sample_index,
            verdict: rec.verdict,
            min_pt_eigenvalue: Some(rec.min_eigenvalue),
            witness: rec.witness_subset.map(|w| w.to_string()),
            measures: rec.measures,
        }
    } else {
        SampleRecord {
            sample_index: seed.sample_index,
            verdict: Verdict::Ppt,
            min_pt_eigenvalue: None,
            witness: None,
            measures: MeasureRecord::of(&rho)?,
        }
    };
    check_sample(&rho, &record)?;
    Ok(record)
}

fn check_sample(rho: &DensityMatrix, rec: &SampleRecord) -> Result<()> {
    let n = rho.dim() as f64;
    let mx = &rec.measures;
    let raw_purity = 1.0 / mx.ipr;
    if !(raw_purity >= 1.0 / n - 1e-12 && raw_purity <= 1.0 + 1e-12) {
        return Err(Error::invariant(
            "purity range",
            format!("purity {raw_purity}"),
        ));
    }
    let s_max = (rho.qudits() as f64) * (rho.d() as f64).ln();
    if !(mx.entropy >= -1e-12 && mx.entropy <= s_max + 1e-12) {
        return Err(Error::invariant(
            "entropy range",
            format!("entropy {}", mx.entropy),
        ));
    }
    let identity_gap = mx.hs_distance * mx.hs_distance + 1.0 / n - raw_purity;
    if identity_gap.abs() > 1e-10 {
        return Err(Error::invariant(
            "distance-purity identity",
            format!("D^2 + 1/n - r = {identity_gap:e}"),
        ));
    }
    if mx.in_maximal_ball && rec.verdict == Verdict::Npt {
        return Err(Error::invariant(
            "ball implies PPT",
            format!(
                "sample {} has R = {} but min eigenvalue {:?}",
                rec.sample_index, mx.ipr, rec.min_pt_eigenvalue
            ),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Accumulator {
    purity: Moments,
    entropy: Moments,
    ppt: u64,
    in_ball: u64,
    min_pt_eigenvalue: Option<f64>,
    histogram: Histogram,
}

impl Accumulator {
    fn new(n: usize, bins: usize) -> Self {
        Self {
            purity: Moments::default(),
            entropy: Moments::default(),
            ppt: 0,
            in_ball: 0,
            min_pt_eigenvalue: None,
            histogram: Histogram::new(1.0 / n as f64, 1.0, bins),
        }
    }

    fn push(&mut self, rec: &SampleRecord) {
        self.purity.push(rec.measures.purity);
        self.entropy.push(rec.measures.entropy);
        self.histogram.push(rec.measures.purity);
        if rec.verdict == Verdict::Ppt {
            self.ppt += 1;
        }
        if rec.measures.in_maximal_ball {
            self.in_ball += 1;
        }
        self.min_pt_eigenvalue = min_opt(self.min_pt_eigenvalue, rec.min_pt_eigenvalue);
    }

    fn merge(&mut self, other: &Self) {
        self.purity.merge(&other.purity);
        self.entropy.merge(&other.entropy);
        self.ppt += other.ppt;
        self.in_ball += other.in_ball;
        self.min_pt_eigenvalue = min_opt(self.min_pt_eigenvalue, other.min_pt_eigenvalue);
        self.histogram.merge(&other.histogram);
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Summary statistics for one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub n: usize,
    pub samples: u64,
    pub mean_purity: f64,
    pub se_purity: f64,
    pub sd_purity: f64,
    pub mean_entropy: f64,
    pub se_entropy: f64,
    pub ppt_count: u64,
    pub p_ppt: f64,
    pub ppt_ci: (f64, f64),
    pub npt_count: u64,
    pub p_npt: f64,
    pub npt_ci: (f64, f64),
    pub in_ball_count: u64,
    pub min_pt_eigenvalue: Option<f64>,
    pub histogram: Histogram,
}

impl PointStats {
    fn from_accumulator(n: usize, acc: Accumulator) -> Self {
        let samples = acc.purity.count;
        let npt = samples - acc.ppt;
        Self {
            n,
            samples,
            mean_purity: acc.purity.mean(),
            se_purity: acc.purity.std_error(),
            sd_purity: acc.purity.std_dev(),
            mean_entropy: acc.entropy.mean(),
            se_entropy: acc.entropy.std_error(),
            ppt_count: acc.ppt,
            p_ppt: acc.ppt as f64 / samples as f64,
            ppt_ci: wilson_interval(acc.ppt, samples, Z_95),
            npt_count: npt,
            p_npt: npt as f64 / samples as f64,
            npt_ci: wilson_interval(npt, samples, Z_95),
            in_ball_count: acc.in_ball,
            min_pt_eigenvalue: acc.min_pt_eigenvalue,
            histogram: acc.histogram,
        }
    }
}

/// Runs every `N` of the configuration. Capacity is checked for all points
/// before any sampling starts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<PointStats>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    config
        .n_values
        .iter()
        .map(|&n| pool.install(|| run_point(config, n)))
        .collect()
}

fn run_point(config: &ExperimentConfig, n: usize) -> Result<PointStats> {
    let sampler = HaarSampler::with_cap(config.max_amplitudes);
    let dim = hilbert_dim(config.d, config.m)
        .ok_or_else(|| Error::domain("subsystem dimension overflows"))?;
    let seed = point_seed(config.master_seed, config.d, config.m, n);
    let total = config.samples_per_point;
    let chunks = total.div_ceil(CHUNK_SIZE);

    let partials: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = Accumulator::new(dim, config.histogram_bins);
            let start = chunk * CHUNK_SIZE;
            for index in start..(start + CHUNK_SIZE).min(total) {
                let rec = evaluate_sample(
                    &sampler,
                    config.d,
                    n,
                    config.m,
                    config.keep_policy,
                    SeedSpec::new(seed, index),
                )?;
                acc.push(&rec);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut iter = partials.into_iter();
    let mut acc = iter.next().expect("at least one chunk");
    for part in iter {
        acc.merge(&part);
    }
    Ok(PointStats::from_accumulator(n, acc))
}

/// Bracket of the PPT transition along `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionWindow {
    /// Largest `N` below `n_high` with `p_ppt < 1%`.
    pub n_low: usize,
    /// Linear interpolation of the 50% crossing.
    pub n_mid: f64,
    /// Smallest `N` with `p_ppt > 99%`.
    pub n_high: usize,
}

pub fn transition_window(points: &[PointStats]) -> Result<TransitionWindow> {
    let mut pts: Vec<&PointStats> = points.iter().collect();
    pts.sort_by_key(|p| p.n);
    let high_at = pts
        .iter()
        .position(|p| p.p_ppt > 0.99)
        .ok_or_else(|| Error::InsufficientRange("no N with p_ppt > 99%".into()))?;
    let low_at = pts[..high_at]
        .iter()
        .rposition(|p| p.p_ppt < 0.01)
        .ok_or_else(|| {
            Error::InsufficientRange("no N with p_ppt < 1% below the upper end".into())
        })?;
    let n_mid = pts[low_at..=high_at]
        .windows(2)
        .find(|w| w[0].p_ppt < 0.5 && w[1].p_ppt >= 0.5)
        .map(|w| {
            let (x0, x1) = (w[0].n as f64, w[1].n as f64);
            x0 + (0.5 - w[0].p_ppt) / (w[1].p_ppt - w[0].p_ppt) * (x1 - x0)
        })
        .expect("p_ppt rises from below 1% to above 99%");
    Ok(TransitionWindow {
        n_low: pts[low_at].n,
        n_mid,
        n_high: pts[high_at].n,
    })
}

/// Fit of `ln p_npt` against `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalloffFit {
    pub slope: f64,
    pub intercept: f64,
    pub goodness: f64,
    pub n_values: Vec<usize>,
}

/// Fits `ln p_npt` against `N` over the points with at least
/// [`MIN_NPT_HITS`] NPT samples; at least three such points are required.
pub fn npt_falloff_fit(points: &[PointStats]) -> Result<FalloffFit> {
    let used = fit_points(points)?;
    fit_against(&used, |p| p.n as f64)
}

/// Same selection as [`npt_falloff_fit`], but fits `ln p_npt` against the
/// Hilbert-space dimension `d^N` instead of `N`.
pub fn npt_falloff_fit_hilbert(points: &[PointStats], d: usize) -> Result<FalloffFit> {
    let used = fit_points(points)?;
    fit_against(&used, |p| (d as f64).powi(p.n as i32))
}

fn fit_points(points: &[PointStats]) -> Result<Vec<&PointStats>> {
    let used: Vec<&PointStats> = points
        .iter()
        .filter(|p| p.npt_count >= MIN_NPT_HITS)
        .collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} point(s) with >= {MIN_NPT_HITS} NPT hits, need 3",
            used.len()
        )));
    }
    Ok(used)
}

fn fit_against(used: &[&PointStats], x: impl Fn(&PointStats) -> f64) -> Result<FalloffFit> {
    let xy: Vec<(f64, f64)> = used.iter().map(|p| (x(p), p.p_npt.ln())).collect();
    let fit = fit_line(&xy)?;
    Ok(FalloffFit {
        slope: fit.slope,
        intercept: fit.intercept,
        goodness: fit.goodness,
        n_values: used.iter().map(|p| p.n).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize, ppt: u64, samples: u64) -> PointStats {
        let acc = Accumulator {
            purity: Moments {
                count: samples,
                sum: 0.5 * samples as f64,
                sum_sq: 0.25 * samples as f64,
            },
            entropy: Moments {
                count: samples,
                sum: 0.0,
                sum_sq: 0.0,
            },
            ppt,
            in_ball: 0,
            min_pt_eigenvalue: None,
            histogram: Histogram::new(0.25, 1.0, 4),
        };
        PointStats::from_accumulator(n, acc)
    }

    #[test]
    fn window_on_synthetic_scan() {
        let pts: Vec<_> = [(3, 0), (4, 20), (5, 400), (6, 800), (7, 995), (8, 1000)]
            .into_iter()
            .map(|(n, ppt)| synthetic(n, ppt, 1000))
            .collect();
        let w = transition_window(&pts).unwrap();
        assert_eq!(w.n_low, 3);
        assert_eq!(w.n_high, 7);
        assert!((w.n_mid - 5.25).abs() < 1e-12);
        assert!(matches!(
            transition_window(&pts[1..]),
            Err(Error::InsufficientRange(_))
        ));
        assert!(matches!(
            transition_window(&pts[..4]),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn falloff_constant_input_has_zero_slope() {
        let pts: Vec<_> = (4..8).map(|n| synthetic(n, 700, 1000)).collect();
        let fit = npt_falloff_fit(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert_eq!(fit.n_values, vec![4, 5, 6, 7]);
    }

    #[test]
    fn falloff_skips_thin_points() {
        let pts = vec![
            synthetic(4, 500, 1000),
            synthetic(5, 800, 1000),
            synthetic(6, 950, 1000),
        ];
        assert!(matches!(
            npt_falloff_fit(&pts),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(2, 2, vec![3, 4], 1);
        assert!(ok.validate().is_ok());
        let bad_n = ExperimentConfig::new(2, 2, vec![2], 1);
        assert!(matches!(bad_n.validate(), Err(Error::Domain(_))));
        let mut big = ExperimentConfig::new(2, 2, vec![3, 30], 1);
        assert!(matches!(big.validate(), Err(Error::Resource { .. })));
        big.max_amplitudes = usize::MAX;
        assert!(big.validate().is_ok());
    }

    #[test]
    fn point_seeds_differ() {
        let a = point_seed(42, 2, 2, 3);
        assert_ne!(a, point_seed(42, 2, 2, 4));
        assert_ne!(a, point_seed(42, 3, 2, 3));
        assert_ne!(a, point_seed(43, 2, 2, 3));
        assert_eq!(a, point_seed(42, 2, 2, 3));
    }
}
