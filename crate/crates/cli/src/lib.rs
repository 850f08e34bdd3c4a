//! Command-line front end: bound calculators, single-shot sampling and the
//! figure-reproduction experiments.

pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qent_core::analytic::{bounds_report, mean_entropy_qudits, mean_purity_qudits};
use qent_core::montecarlo::{
    evaluate_sample, point_seed, run_experiment, ExperimentConfig, PointStats,
};
use qent_core::sampling::{HaarSampler, KeepPolicy, SeedSpec, DEFAULT_MAX_AMPLITUDES};

pub use output::{Format, OutputRecord};

/// Environment variable overriding the cap on `d^N`.
pub const MAX_AMPLITUDES_ENV: &str = "QENT_MAX_AMPLITUDES";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] qent_core::Error),
}

impl CliError {
    /// 0 success, 1 usage, 2 resource, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        use qent_core::Error as E;
        match self {
            CliError::Core(E::Resource { .. }) => 2,
            CliError::Core(E::Invariant { .. } | E::Consistency(_)) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qent",
    version,
    about = "Entanglement in qudit subsystems of random pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds for m-qudit subsystems.
    Bounds(BoundsArgs),
    /// Draw and classify individual induced-measure samples.
    Sample(RunArgs),
    /// Purity histogram of the induced ensemble at one N.
    PurityHist(RunArgs),
    /// PPT probability for each N.
    Transition(RunArgs),
    /// NPT probability for each N.
    NptProb(RunArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    /// Pure-state qudit count: a single value or an inclusive range `lo..hi`.
    #[arg(long, value_parser = parse_n_range)]
    pub n: NRange,
    /// Samples per N (default 10000; 1 for `sample`).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Master seed; drawn from system entropy and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long, value_enum, default_value = "first-m")]
    pub keep: KeepArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KeepArg {
    FirstM,
    RandomSubset,
}

impl From<KeepArg> for KeepPolicy {
    fn from(k: KeepArg) -> Self {
        match k {
            KeepArg::FirstM => KeepPolicy::FirstM,
            KeepArg::RandomSubset => KeepPolicy::RandomSubset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRange(pub Vec<usize>);

/// Parses `7` or the inclusive range `3..10`.
pub fn parse_n_range(s: &str) -> Result<NRange, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {lo}..{hi}"));
            }
            Ok(NRange((lo..=hi).collect()))
        }
        None => Ok(NRange(vec![parse(s)?])),
    }
}

/// The configuration echoed into every output file. The worker count is not
/// part of it: results do not depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub d: usize,
    pub m: usize,
    pub n_values: Vec<usize>,
    pub samples: u64,
    pub master_seed: u64,
    pub bins: usize,
    pub keep_policy: KeepPolicy,
    pub max_amplitudes: usize,
}

impl ResolvedConfig {
    pub fn experiment(&self, workers: usize) -> ExperimentConfig {
        ExperimentConfig {
            d: self.d,
            m: self.m,
            n_values: self.n_values.clone(),
            samples_per_point: self.samples,
            master_seed: self.master_seed,
            workers,
            histogram_bins: self.bins,
            keep_policy: self.keep_policy,
            max_amplitudes: self.max_amplitudes,
        }
    }
}

/// Reads the amplitude cap from [`MAX_AMPLITUDES_ENV`].
pub fn max_amplitudes_from_env() -> Result<usize, CliError> {
    match std::env::var(MAX_AMPLITUDES_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{MAX_AMPLITUDES_ENV}={v}: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_AMPLITUDES),
    }
}

/// Runs one command and writes its output. Diagnostics go to stderr.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let (record, output) = match cli.command {
        Command::Bounds(args) => (cmd_bounds(&args)?, args.output),
        Command::Sample(args) => (cmd_sample(&args)?, args.output),
        Command::PurityHist(args) => (cmd_purity_hist(&args)?, args.output),
        Command::Transition(args) => (cmd_transition(&args)?, args.output),
        Command::NptProb(args) => (cmd_npt_prob(&args)?, args.output),
    };
    let text = record.render(output.format);
    match output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn opt_num<T: Into<Value>>(x: Option<T>) -> Value {
    x.map(Into::into).unwrap_or(Value::Null)
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<OutputRecord, CliError> {
    let b = bounds_report(args.d, args.m).map_err(|e| CliError::Usage(e.to_string()))?;
    let fields = [
        ("d", json!(b.d)),
        ("m", json!(b.m)),
        ("r_ppt", json!(b.r_ppt)),
        ("n_ppt_real", json!(b.n_ppt_real)),
        ("n_ppt", json!(b.n_ppt)),
        ("eps_ent", opt_num(b.eps_ent)),
        ("r_ent", opt_num(b.r_ent)),
        ("n_ent_real", opt_num(b.n_ent_real)),
        ("n_ent", opt_num(b.n_ent)),
        ("transition_low", json!(b.transition_low)),
        ("transition_high", json!(b.transition_high)),
        ("s_critical", opt_num(b.s_critical)),
    ];
    // Absent fields are dropped rather than emitted as nulls.
    let (mut columns, mut row): (Vec<&str>, Vec<Value>) =
        fields.into_iter().filter(|(_, v)| !v.is_null()).unzip();
    let mut notes = Vec::new();
    if b.eps_ent.is_none() {
        notes.push("eps_ent, r_ent, n_ent omitted: the Werner family needs m >= 2");
    }
    if b.s_critical.is_none() {
        notes.push("s_critical omitted: needs d^m >= 3");
    }
    if !notes.is_empty() {
        columns.push("note");
        row.push(json!(notes.join("; ")));
    }
    let mut rec = OutputRecord::new("bounds", json!({"d": args.d, "m": args.m}), &columns);
    rec.push_row(row);
    Ok(rec)
}

fn resolve(args: &RunArgs, default_samples: u64) -> Result<(ResolvedConfig, usize), CliError> {
    let master_seed = args.seed.unwrap_or_else(rand::random);
    eprintln!("master_seed: {master_seed}");
    let workers = args.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let config = ResolvedConfig {
        d: args.d,
        m: args.m,
        n_values: args.n.0.clone(),
        samples: args.samples.unwrap_or(default_samples),
        master_seed,
        bins: args.bins,
        keep_policy: args.keep.into(),
        max_amplitudes: max_amplitudes_from_env()?,
    };
    // Fail before any sampling: bad parameters are usage errors, an
    // oversized register is a resource error.
    config.experiment(workers).validate().map_err(|e| match e {
        qent_core::Error::Domain(msg) => CliError::Usage(msg),
        other => CliError::Core(other),
    })?;
    Ok((config, workers))
}

fn config_value(config: &ResolvedConfig) -> Value {
    serde_json::to_value(config).expect("serializable")
}

pub fn cmd_sample(args: &RunArgs) -> Result<OutputRecord, CliError> {
    let (config, _) = resolve(args, 1)?;
    let sampler = HaarSampler::with_cap(config.max_amplitudes);
    let mut rec = OutputRecord::new(
        "sample",
        config_value(&config),
        &[
            "N",
            "sample_index",
            "purity",
            "ipr",
            "entropy",
            "hs_distance",
            "in_maximal_ball",
            "verdict",
            "min_pt_eigenvalue",
            "witness",
        ],
    );
    for &n in &config.n_values {
        let seed = point_seed(config.master_seed, config.d, config.m, n);
        for index in 0..config.samples {
            let s = evaluate_sample(
                &sampler,
                config.d,
                n,
                config.m,
                config.keep_policy,
                SeedSpec::new(seed, index),
            )?;
            rec.push_row(vec![
                json!(n),
                json!(index),
                json!(s.measures.purity),
                json!(s.measures.ipr),
                json!(s.measures.entropy),
                json!(s.measures.hs_distance),
                json!(s.measures.in_maximal_ball),
                json!(s.verdict.to_string()),
                opt_num(s.min_pt_eigenvalue),
                opt_num(s.witness),
            ]);
        }
    }
    Ok(rec)
}

pub fn cmd_purity_hist(args: &RunArgs) -> Result<OutputRecord, CliError> {
    if args.n.0.len() != 1 {
        return Err(CliError::Usage("purity-hist takes a single N".into()));
    }
    let (config, workers) = resolve(args, qent_core::montecarlo::DEFAULT_SAMPLES)?;
    let stats = run_experiment(&config.experiment(workers))?;
    let point = &stats[0];
    report_means(&config, point);
    let mut rec = OutputRecord::new(
        "purity-hist",
        config_value(&config),
        &["bin_low", "bin_high", "count"],
    );
    for (bin, &count) in point.histogram.counts.iter().enumerate() {
        let (lo, hi) = point.histogram.edges(bin);
        rec.push_row(vec![json!(lo), json!(hi), json!(count)]);
    }
    Ok(rec)
}

fn report_means(config: &ResolvedConfig, p: &PointStats) {
    let purity = mean_purity_qudits(config.d, p.n, config.m).unwrap_or(f64::NAN);
    let entropy = mean_entropy_qudits(config.d, p.n, config.m).unwrap_or(f64::NAN);
    eprintln!(
        "N={}: mean purity {:.6} +- {:.6} (exact {:.6}), mean entropy {:.6} +- {:.6} (exact {:.6})",
        p.n, p.mean_purity, p.se_purity, purity, p.mean_entropy, p.se_entropy, entropy
    );
}

pub fn cmd_transition(args: &RunArgs) -> Result<OutputRecord, CliError> {
    let (config, workers) = resolve(args, qent_core::montecarlo::DEFAULT_SAMPLES)?;
    let stats = run_experiment(&config.experiment(workers))?;
    let mut rec = OutputRecord::new(
        "transition",
        config_value(&config),
        &["N", "p_ppt", "ci_low", "ci_high", "samples"],
    );
    for p in &stats {
        rec.push_row(vec![
            json!(p.n),
            json!(p.p_ppt),
            json!(p.ppt_ci.0),
            json!(p.ppt_ci.1),
            json!(p.samples),
        ]);
    }
    Ok(rec)
}

pub fn cmd_npt_prob(args: &RunArgs) -> Result<OutputRecord, CliError> {
    let (config, workers) = resolve(args, qent_core::montecarlo::DEFAULT_SAMPLES)?;
    let stats = run_experiment(&config.experiment(workers))?;
    let mut rec = OutputRecord::new(
        "npt-prob",
        config_value(&config),
        &["N", "p_npt", "ci_low", "ci_high", "samples"],
    );
    for p in &stats {
        rec.push_row(vec![
            json!(p.n),
            json!(p.p_npt),
            json!(p.npt_ci.0),
            json!(p.npt_ci.1),
            json!(p.samples),
        ]);
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_ranges() {
        assert_eq!(
            parse_n_range("3..10").unwrap().0,
            (3..=10).collect::<Vec<_>>()
        );
        assert_eq!(parse_n_range("7").unwrap().0, vec![7]);
        assert_eq!(parse_n_range("5..5").unwrap().0, vec![5]);
        assert!(parse_n_range("6..3").is_err());
        assert!(parse_n_range("x").is_err());
        assert!(parse_n_range("3..").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let res = qent_core::Error::Resource {
            requested: 10,
            cap: 1,
        };
        assert_eq!(CliError::Core(res).exit_code(), 2);
        let inv = qent_core::Error::Invariant {
            invariant: "unit trace",
            detail: String::new(),
        };
        assert_eq!(CliError::Core(inv).exit_code(), 3);
    }
}
