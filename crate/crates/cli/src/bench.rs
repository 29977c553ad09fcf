//! Wall-time comparison of the sparse algorithms against a full inverse FFT.

use std::fmt::Write as _;
use std::time::Instant;

use spfft_core::lab::gen_sparse_signal;
use spfft_core::{
    fft_forward, fft_inverse, reconstruct_exact, reconstruct_noisy, CountingSpectrumAccessor,
    NoisyConfig,
};

use crate::error::{CliError, Result};
use crate::experiment::{trial_seed, Algorithm};

pub const CSV_HEADER: &str = "N,m,algorithm,mean_ns,samples_used";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub mean_ns: f64,
    /// Largest sample count seen over the trials.
    pub samples_used: usize,
}

/// Times every `(N, m)` pair with `m ≤ N` on exact data, sequentially.
/// The baseline is `fft_inverse`, twiddle setup included.
pub fn run_bench(n_list: &[usize], m_list: &[usize], trials: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if trials == 0 {
        return Err(CliError::Validation("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        spfft_core::dft::checked_log2(n)?;
        for &m in m_list.iter().filter(|&&m| m >= 1 && m <= n) {
            let mut totals = [0u128; 3];
            let mut samples = [0usize; 3];
            for t in 0..trials {
                let (x, _) = gen_sparse_signal(n, m, trial_seed(seed, t))?;
                let spectrum = fft_forward(&x)?;

                let mut access = CountingSpectrumAccessor::new(&spectrum);
                let start = Instant::now();
                let rec = reconstruct_exact(&mut access, m)?;
                totals[0] += start.elapsed().as_nanos();
                samples[0] = samples[0].max(rec.samples_used);

                let mut access = CountingSpectrumAccessor::new(&spectrum);
                let start = Instant::now();
                let rec = reconstruct_noisy(&mut access, m, &NoisyConfig::default())?;
                totals[1] += start.elapsed().as_nanos();
                samples[1] = samples[1].max(rec.samples_used);

                let start = Instant::now();
                let dense = fft_inverse(&spectrum)?;
                totals[2] += start.elapsed().as_nanos();
                samples[2] = dense.len();
            }
            for (i, algorithm) in [Algorithm::Exact, Algorithm::Noisy, Algorithm::IfftBaseline]
                .into_iter()
                .enumerate()
            {
                rows.push(BenchRow {
                    n,
                    m,
                    algorithm,
                    mean_ns: totals[i] as f64 / trials as f64,
                    samples_used: samples[i],
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{},{:.0},{}", r.n, r.m, r.algorithm, r.mean_ns, r.samples_used)
            .expect("writing to a String");
    }
    out
}
