//! Monte-Carlo reconstruction experiments and their CSV summary.
//!
//! Trial `t` draws its signal from `trial_seed(seed, t)`, so every SNR row
//! sees the same signals; the noise seed additionally mixes in the SNR
//! position.
//! Trials run on a rayon pool but are collected in `(snr, trial)` order, so
//! the CSV does not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt::Write as _;

use spfft_core::exact::find_support_start;
use spfft_core::lab::{self, NoiseLevel, NoiseShape, NoiseSpec, TrialRecord};
use spfft_core::{
    reconstruct_exact, reconstruct_noisy, CountingSpectrumAccessor, NoisyConfig, Radix2Fft, Signal,
    Spectrum,
};

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "snr_db,trials,mu_correct_pct,mean_err_sparse,mean_err_ifft,mean_noise_inf,mean_noise_l1_over_N,mean_samples,mean_kappa_vectors";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Noisy,
    IfftBaseline,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "noisy" => Ok(Algorithm::Noisy),
            "ifft-baseline" => Ok(Algorithm::IfftBaseline),
            other => Err(format!("unknown algorithm {other:?} (exact, noisy, ifft-baseline)")),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Exact => "exact",
            Algorithm::Noisy => "noisy",
            Algorithm::IfftBaseline => "ifft-baseline",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    /// SNR levels in dB; `inf` means noiseless.
    pub snr_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub noise_shape: NoiseShape,
    pub noisy: NoisyConfig,
    /// Worker count; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: usize, m: usize, snr_list: Vec<f64>, trials: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            snr_list,
            trials,
            seed,
            algorithm: Algorithm::Noisy,
            noise_shape: NoiseShape::Box,
            noisy: NoisyConfig::default(),
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        spfft_core::dft::checked_log2(self.n)?;
        if self.m == 0 || self.m > self.n {
            return Err(CliError::Validation(format!(
                "support length {} outside 1..={}",
                self.m, self.n
            )));
        }
        if self.trials == 0 {
            return Err(CliError::Validation("trials must be at least 1".into()));
        }
        if self.snr_list.is_empty() {
            return Err(CliError::Validation("snr list is empty".into()));
        }
        if let Some(bad) = self.snr_list.iter().find(|s| s.is_nan() || **s == f64::NEG_INFINITY) {
            return Err(CliError::Validation(format!("invalid SNR {bad}")));
        }
        if self.threads == Some(0) {
            return Err(CliError::Validation("thread count must be positive".into()));
        }
        self.noisy.validate()?;
        Ok(())
    }
}

/// Aggregate over all trials at one SNR level.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrSummary {
    pub snr_db: f64,
    pub trials: usize,
    pub mu_correct_pct: f64,
    pub mean_err_sparse: f64,
    pub mean_err_ifft: f64,
    pub mean_noise_inf: f64,
    pub mean_noise_l1_over_n: f64,
    pub mean_samples: f64,
    pub mean_kappa_vectors: f64,
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix(seed) ⊕ trial`: distinct base seeds give disjoint trial seed sets in
/// practice, which a plain `seed ⊕ trial` does not (seeds 2 and 3 share
/// trials 0..=1 with a swap).
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    mix(seed) ^ trial as u64
}

pub fn noise_seed(seed: u64, snr_index: usize, trial: usize) -> u64 {
    trial_seed(seed, trial).wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(snr_index as u64 + 1))
}

/// One trial. `plan` must have length `cfg.n`.
pub fn run_trial(
    cfg: &ExperimentConfig,
    plan: &Radix2Fft,
    snr_index: usize,
    trial: usize,
) -> Result<TrialRecord> {
    let n = cfg.n;
    let snr_db = cfg.snr_list[snr_index];
    let (x, truth) = lab::gen_sparse_signal(n, cfg.m, trial_seed(cfg.seed, trial))?;

    let mut clean = x.values().to_vec();
    plan.forward(&mut clean)?;
    let clean = Spectrum::new(clean)?;
    let level = if snr_db == f64::INFINITY {
        NoiseLevel::Bound(0.0)
    } else {
        NoiseLevel::SnrDb(snr_db)
    };
    let spec = NoiseSpec {
        level,
        shape: cfg.noise_shape,
        seed: noise_seed(cfg.seed, snr_index, trial),
    };
    let (noisy, noise) = lab::add_noise(&clean, &spec)?;

    let mut dense = noisy.values().to_vec();
    plan.inverse(&mut dense)?;
    let err_ifft = lab::error_l2_over_n(x.values(), &dense)?;

    let mut access = CountingSpectrumAccessor::new(&noisy);
    let (estimate, mu, kappa_vectors_used): (Vec<Complex64>, Option<usize>, usize) =
        match cfg.algorithm {
            Algorithm::Noisy => {
                let rec = reconstruct_noisy(&mut access, cfg.m, &cfg.noisy)?;
                let mu = rec.support.first_index;
                (rec.signal.into_values(), Some(mu), rec.kappa_vectors_used)
            }
            // Noise can push the exact algorithm off the root-of-unity lattice;
            // such a trial counts as a miss with the zero vector as estimate.
            Algorithm::Exact => match reconstruct_exact(&mut access, cfg.m) {
                Ok(rec) => {
                    let mu = rec.support.first_index;
                    (rec.signal.into_values(), Some(mu), 1)
                }
                Err(e) if matches!(CliError::from(e.clone()), CliError::Algorithm(_)) => {
                    (vec![Complex64::default(); n], None, 1)
                }
                Err(e) => return Err(e.into()),
            },
            Algorithm::IfftBaseline => {
                access.gather(0, 1, n)?;
                let mu = (2 * cfg.m <= n)
                    .then(|| find_support_start(&dense, cfg.m))
                    .transpose()?;
                (dense.clone(), mu, 0)
            }
        };

    Ok(TrialRecord {
        n,
        m: cfg.m,
        snr_db,
        mu_correct: mu == Some(truth.first_index),
        err_sparse: lab::error_l2_over_n(x.values(), &estimate)?,
        err_ifft,
        samples_used: access.read_count(),
        kappa_vectors_used,
        noise_inf_norm: lab::inf_norm(&noise),
        noise_l1_over_n: lab::l1_norm(&noise) / n as f64,
    })
}

fn summarize(snr_db: f64, records: &[TrialRecord]) -> SnrSummary {
    let count = records.len() as f64;
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).sum::<f64>() / count;
    SnrSummary {
        snr_db,
        trials: records.len(),
        mu_correct_pct: 100.0 * records.iter().filter(|r| r.mu_correct).count() as f64 / count,
        mean_err_sparse: mean(&|r| r.err_sparse),
        mean_err_ifft: mean(&|r| r.err_ifft),
        mean_noise_inf: mean(&|r| r.noise_inf_norm),
        mean_noise_l1_over_n: mean(&|r| r.noise_l1_over_n),
        mean_samples: mean(&|r| r.samples_used as f64),
        mean_kappa_vectors: mean(&|r| r.kappa_vectors_used as f64),
    }
}

/// Runs every `(snr, trial)` pair and returns the trial records grouped by SNR.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<Vec<TrialRecord>>> {
    cfg.validate()?;
    let plan = Radix2Fft::new(cfg.n)?;
    let jobs: Vec<(usize, usize)> = (0..cfg.snr_list.len())
        .flat_map(|s| (0..cfg.trials).map(move |t| (s, t)))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = cfg.threads {
        builder = builder.num_threads(threads);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, t)| run_trial(cfg, &plan, s, t))
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(records.chunks(cfg.trials).map(<[TrialRecord]>::to_vec).collect())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SnrSummary>> {
    let groups = run_trials(cfg)?;
    Ok(cfg
        .snr_list
        .iter()
        .zip(&groups)
        .map(|(&snr, records)| summarize(snr, records))
        .collect())
}

pub fn to_csv(rows: &[SnrSummary]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{:.1},{:.16e},{:.16e},{:.16e},{:.16e},{:.2},{:.2}",
            r.snr_db,
            r.trials,
            r.mu_correct_pct,
            r.mean_err_sparse,
            r.mean_err_ifft,
            r.mean_noise_inf,
            r.mean_noise_l1_over_n,
            r.mean_samples,
            r.mean_kappa_vectors
        )
        .expect("writing to a String");
    }
    out
}

/// Reference vector used by `spfft gen --demo`: length 256 with
/// `x₁₀₅ = 8, x₁₀₇ = −3, x₁₀₈ = −5, x₁₁₀ = 2` and support length 6.
pub fn demo_signal() -> Signal {
    let mut x = vec![Complex64::default(); 256];
    x[105] = Complex64::new(8.0, 0.0);
    x[107] = Complex64::new(-3.0, 0.0);
    x[108] = Complex64::new(-5.0, 0.0);
    x[110] = Complex64::new(2.0, 0.0);
    Signal::new(x).expect("256 is a power of two")
}
