//! Sparse inverse FFT for noisy Fourier data.
//!
//! Three stabilizations on top of the exact algorithm:
//!
//! 1. The periodized support start is voted on with window energies of
//!    several vectors `z^{(κ)} = F⁻¹(ŷ_{2^{J-L-1}k + κ})_k`. For exact data
//!    every `z^{(κ)}` has the same moduli as `x^{(L+1)}`, while the noise in
//!    each comes from disjoint spectrum entries.
//! 2. The shift is found one bit at a time: at level `j` the support start
//!    either stays or moves by `2^j`, which flips the sign of every
//!    odd-indexed Fourier value of `x^{(j+1)}`.
//! 3. The support values are the phase-corrected mean over all `z^{(κ)}`.

use num_complex::Complex64;

use crate::accessor::CountingSpectrumAccessor;
use crate::dft::{ceil_log2, root_of_unity, Signal};
use crate::error::{Error, Result};
use crate::exact::{check_support_length, embed_window, full_inverse, phased_window_sum};
use crate::fft::Radix2Fft;
use crate::support::SupportDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoisyConfig {
    /// Cap on the number of `z^{(κ)}` vectors computed for the support vote.
    pub max_kappa_vectors: usize,
    /// Cap on how many of those vectors enter the final average (`B + 1`).
    pub averaging_count: usize,
    /// Odd-indexed candidates scanned per doubling level; `None` means `m`.
    pub candidate_scan_budget: Option<usize>,
}

impl Default for NoisyConfig {
    fn default() -> Self {
        Self {
            max_kappa_vectors: 8,
            averaging_count: 8,
            candidate_scan_budget: None,
        }
    }
}

impl NoisyConfig {
    pub fn with_max_kappa(max_kappa_vectors: usize) -> Self {
        Self {
            max_kappa_vectors,
            averaging_count: max_kappa_vectors,
            candidate_scan_budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_kappa_vectors < 2 {
            return Err(Error::InvalidParameter(format!(
                "max_kappa_vectors must be at least 2, got {}",
                self.max_kappa_vectors
            )));
        }
        if self.averaging_count == 0 || self.averaging_count > self.max_kappa_vectors {
            return Err(Error::InvalidParameter(format!(
                "averaging_count must be in 1..={}, got {}",
                self.max_kappa_vectors, self.averaging_count
            )));
        }
        if self.candidate_scan_budget == Some(0) {
            return Err(Error::InvalidParameter(
                "candidate_scan_budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyReconstruction {
    pub signal: Signal,
    pub support: SupportDescriptor,
    pub samples_used: usize,
    pub level: u32,
    pub kappa_vectors_used: usize,
    /// Successive votes `μ_0^{(L+1)}, μ_1^{(L+1)}, ...`.
    pub mu_votes: Vec<usize>,
    /// False when the vote budget ran out before two votes agreed.
    pub votes_stable: bool,
    /// One entry per level `j = L+1..J-1`; true means the start moved by `2^j`.
    pub doubling_decisions: Vec<bool>,
    pub fallback: bool,
}

/// Offsets used for the energy vote: `0`, then `2^{J-L-2}, 2^{J-L-3}, ..., 1`,
/// then the remaining odd offsets `3, 5, ...` below `2^{J-L-1}`.
pub fn kappa_sequence(log2_len: u32, level: u32) -> Vec<usize> {
    let spread = log2_len - level - 1;
    let mut seq = vec![0];
    seq.extend((0..spread).rev().map(|r| 1usize << r));
    seq.extend((3..1usize << spread).step_by(2));
    seq
}

/// `z^{(κ)}`: inverse FFT of length `2^{L+1}` over `ŷ_{2^{J-L-1} k + κ}`.
pub fn compute_z_kappa(
    access: &mut CountingSpectrumAccessor<'_>,
    kappa: usize,
    level: u32,
    log2_len: u32,
) -> Result<Vec<Complex64>> {
    let plan = Radix2Fft::new(1 << (level + 1))?;
    z_kappa_with(access, &plan, kappa, level, log2_len)
}

fn z_kappa_with(
    access: &mut CountingSpectrumAccessor<'_>,
    plan: &Radix2Fft,
    kappa: usize,
    level: u32,
    log2_len: u32,
) -> Result<Vec<Complex64>> {
    if level >= log2_len || log2_len != access.log2_len() {
        return Err(Error::InvalidLevel {
            level,
            max: access.log2_len().saturating_sub(1),
        });
    }
    let stride = 1usize << (log2_len - level - 1);
    if kappa >= stride {
        return Err(Error::InvalidOffset {
            offset: kappa,
            limit: stride,
        });
    }
    let mut z = access.gather(kappa, stride, 1 << (level + 1))?;
    plan.inverse(&mut z)?;
    Ok(z)
}

/// Result of the energy vote.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportEstimate {
    pub mu: usize,
    pub z_vectors: Vec<Vec<Complex64>>,
    pub kappas: Vec<usize>,
    pub votes: Vec<usize>,
    pub stable: bool,
}

fn window_energies(z: &[Complex64], m: usize) -> Vec<f64> {
    let n = z.len();
    let power: Vec<f64> = z.iter().map(|v| v.norm_sqr()).collect();
    let mut out = Vec::with_capacity(n);
    let mut e: f64 = (0..m).map(|l| power[l % n]).sum();
    out.push(e);
    for k in 0..n - 1 {
        e += power[(k + m) % n] - power[k];
        out.push(e);
    }
    out
}

fn argmax_first(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
        .0
}

/// Votes on the support start of `x^{(L+1)}` with the running mean of the
/// window energies of `z^{(κ_0)}, z^{(κ_1)}, ...`, stopping once two
/// consecutive votes agree or the vector budget is spent.
pub fn estimate_support_start(
    access: &mut CountingSpectrumAccessor<'_>,
    m: usize,
    level: u32,
    log2_len: u32,
    config: &NoisyConfig,
) -> Result<SupportEstimate> {
    config.validate()?;
    if level + 1 >= log2_len {
        return Err(Error::InvalidLevel {
            level,
            max: log2_len.saturating_sub(2),
        });
    }
    let period = 1usize << (level + 1);
    if m == 0 || 2 * m > period {
        return Err(Error::AmbiguousSupport { m, len: period });
    }
    let plan = Radix2Fft::new(period)?;
    let candidates = kappa_sequence(log2_len, level);
    let budget = config.max_kappa_vectors.min(candidates.len());

    let mut energy_sum = vec![0.0; period];
    let mut z_vectors = Vec::new();
    let mut kappas = Vec::new();
    let mut votes: Vec<usize> = Vec::new();

    for &kappa in &candidates[..budget] {
        let z = z_kappa_with(access, &plan, kappa, level, log2_len)?;
        for (acc, e) in energy_sum.iter_mut().zip(window_energies(&z, m)) {
            *acc += e;
        }
        z_vectors.push(z);
        kappas.push(kappa);
        // Dividing by the vector count does not move the argmax.
        votes.push(argmax_first(&energy_sum));
        if votes.len() >= 2 && votes[votes.len() - 1] == votes[votes.len() - 2] {
            break;
        }
    }

    let stable = votes.len() >= 2 && votes[votes.len() - 1] == votes[votes.len() - 2];
    Ok(SupportEstimate {
        mu: *votes.last().expect("at least one vote"),
        z_vectors,
        kappas,
        votes,
        stable,
    })
}

/// Lifts the support start from level `L+1` to level `J`, one binary digit
/// of the shift per level. `periodized` is `x^{(L+1)}` (only its `m`-window
/// starting at `mu_periodized` is used). Returns `μ^{(J)}` and the decisions.
pub fn refine_support(
    periodized: &[Complex64],
    mu_periodized: usize,
    access: &mut CountingSpectrumAccessor<'_>,
    m: usize,
    level: u32,
    log2_len: u32,
    config: &NoisyConfig,
) -> Result<(usize, Vec<bool>)> {
    if periodized.len() != 1 << (level + 1) {
        return Err(Error::LengthMismatch {
            left: periodized.len(),
            right: 1 << (level + 1),
        });
    }
    let budget = config.candidate_scan_budget.unwrap_or(m).max(1);
    let peak = coarse_peak(access, level, log2_len)?;
    let mut mu = mu_periodized;
    let mut decisions = Vec::with_capacity((log2_len - level - 1) as usize);

    for j in level + 1..log2_len {
        // Odd entries of the spectrum of x^{(j+1)}: ŷ_{2^{J-j-1}(2k+1)}, k < 2^j.
        // The scanned run of k is centred on the coarse peak; its two odd
        // neighbours are k = centre and k = centre - 1.
        let stride = 1usize << (log2_len - j - 1);
        let count = budget.min(1 << j);
        let mask = (1usize << j) - 1;
        let centre = peak << (j - level - 1);
        let first = centre.wrapping_sub(count / 2) & mask;
        let mut best: Option<(u64, Complex64)> = None;
        for i in 0..count {
            let k = (first + i) & mask;
            let odd = 2 * k as u64 + 1;
            let y = access.get(stride * odd as usize)?;
            if best.map_or(true, |(_, b)| y.norm() > b.norm()) {
                best = Some((odd, y));
            }
        }
        let (odd, measured) = best.expect("budget is positive");

        let predicted = phased_window_sum(periodized, mu_periodized, m, 1 << (j + 1), odd, mu as u64);
        let shift = (predicted - measured).norm() > (predicted + measured).norm();
        if shift {
            mu += 1 << j;
        }
        decisions.push(shift);
    }
    Ok((mu, decisions))
}

/// Index of the largest-modulus entry of the stride-`2^{J-L-1}` subsampled
/// spectrum; these entries are the input of `z^{(0)}`, so no new reads.
fn coarse_peak(access: &mut CountingSpectrumAccessor<'_>, level: u32, log2_len: u32) -> Result<usize> {
    let stride = 1usize << (log2_len - level - 1);
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..1usize << (level + 1) {
        let v = access.get(stride * k)?.norm();
        if v > best.1 {
            best = (k, v);
        }
    }
    Ok(best.0)
}

/// Phase-corrected mean of the support values over the given `z^{(κ)}`:
/// `x_{(μ+k) mod N} = mean_r z^{(κ_r)}_{(μ^{(L+1)}+k) mod 2^{L+1}} ω_N^{-κ_r (μ+k)}`
/// with `μ = μ^{(L+1)} + 2^{L+1} ν`.
pub fn average_support_values(
    z_vectors: &[Vec<Complex64>],
    kappas: &[usize],
    mu_periodized: usize,
    shift: usize,
    m: usize,
    n: usize,
) -> Result<Vec<Complex64>> {
    if z_vectors.is_empty() || kappas.is_empty() {
        return Err(Error::NoVectors);
    }
    if z_vectors.len() != kappas.len() {
        return Err(Error::LengthMismatch {
            left: z_vectors.len(),
            right: kappas.len(),
        });
    }
    let period = z_vectors[0].len();
    if z_vectors.iter().any(|z| z.len() != period) {
        return Err(Error::InvalidParameter("z-vectors differ in length".into()));
    }
    let mu = (mu_periodized + period * shift) % n;
    let scale = 1.0 / z_vectors.len() as f64;
    Ok((0..m)
        .map(|k| {
            let global = ((mu + k) % n) as u64;
            let sum: Complex64 = z_vectors
                .iter()
                .zip(kappas)
                .map(|(z, &kappa)| {
                    z[(mu_periodized + k) % period] * root_of_unity(n, kappa as u64 * global).conj()
                })
                .sum();
            sum * scale
        })
        .collect())
}

/// Full noisy pipeline: energy vote, support doubling, averaging.
pub fn reconstruct_noisy(
    access: &mut CountingSpectrumAccessor<'_>,
    m: usize,
    config: &NoisyConfig,
) -> Result<NoisyReconstruction> {
    config.validate()?;
    let n = access.len();
    let log2_len = access.log2_len();
    check_support_length(m, n)?;
    let level = ceil_log2(m);

    if level + 1 >= log2_len {
        let (signal, support) = full_inverse(access, m)?;
        return Ok(NoisyReconstruction {
            signal,
            support,
            samples_used: access.read_count(),
            level,
            kappa_vectors_used: 0,
            mu_votes: Vec::new(),
            votes_stable: true,
            doubling_decisions: Vec::new(),
            fallback: true,
        });
    }

    let estimate = estimate_support_start(access, m, level, log2_len, config)?;
    let period = 1usize << (level + 1);
    let mu_periodized = estimate.mu;

    let (mu, decisions) = refine_support(
        &estimate.z_vectors[0],
        mu_periodized,
        access,
        m,
        level,
        log2_len,
        config,
    )?;
    let shift = (mu - mu_periodized) / period;

    let used = estimate.z_vectors.len().min(config.averaging_count);
    let values = average_support_values(
        &estimate.z_vectors[..used],
        &estimate.kappas[..used],
        mu_periodized,
        shift,
        m,
        n,
    )?;
    let signal = Signal::new(embed_window(&values, 0, mu, m, n))?;

    Ok(NoisyReconstruction {
        signal,
        support: SupportDescriptor::new(mu, m, n)?,
        samples_used: access.read_count(),
        level,
        kappa_vectors_used: estimate.z_vectors.len(),
        mu_votes: estimate.votes,
        votes_stable: estimate.stable,
        doubling_decisions: decisions,
        fallback: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::{fft_forward, periodize, Spectrum};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn worked_example() -> Signal {
        let mut x = vec![Complex64::default(); 256];
        x[105] = c(8.0);
        x[107] = c(-3.0);
        x[108] = c(-5.0);
        x[110] = c(2.0);
        Signal::new(x).unwrap()
    }

    #[test]
    fn kappa_sequence_order() {
        assert_eq!(kappa_sequence(8, 3), vec![0, 8, 4, 2, 1, 3, 5, 7, 9, 11, 13, 15]);
        assert_eq!(kappa_sequence(5, 3), vec![0, 1]);
    }

    #[test]
    fn z0_is_the_periodization() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let z = compute_z_kappa(&mut acc, 0, 3, 8).unwrap();
        let p = periodize(&x, 4).unwrap();
        for (a, b) in z.iter().zip(p.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn z_kappa_of_zero_spectrum_is_zero() {
        let s = Spectrum::zeros(64).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        for kappa in 0..8 {
            let z = compute_z_kappa(&mut acc, kappa, 2, 6).unwrap();
            assert!(z.iter().all(|v| *v == c(0.0)));
        }
        assert!(matches!(
            compute_z_kappa(&mut acc, 8, 2, 6),
            Err(Error::InvalidOffset { offset: 8, limit: 8 })
        ));
    }

    #[test]
    fn exact_data_vote_agrees_after_two_vectors() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let est = estimate_support_start(&mut acc, 6, 3, 8, &NoisyConfig::default()).unwrap();
        assert_eq!(est.mu, 9);
        assert_eq!(est.kappas, vec![0, 8]);
        assert_eq!(est.votes, vec![9, 9]);
        assert!(est.stable);
    }

    #[test]
    fn refine_exact_worked_example_recovers_shift_digits() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let p = periodize(&x, 4).unwrap();
        let (mu, decisions) =
            refine_support(p.values(), 9, &mut acc, 6, 3, 8, &NoisyConfig::default()).unwrap();
        assert_eq!(mu, 105);
        // ν = 6 = 0b0110, least significant digit first
        assert_eq!(decisions, vec![false, true, true, false]);
        // each intermediate start against brute-force periodizations
        let mut level_mu = 9;
        for (j, &d) in (4..8).zip(&decisions) {
            if d {
                level_mu += 1 << j;
            }
            let pj = periodize(&x, j + 1).unwrap();
            assert_ne!(pj[level_mu], c(0.0));
            assert_eq!(level_mu, 105 % (1 << (j + 1)));
        }
    }

    #[test]
    fn sign_decision_follows_measured_value() {
        // A spectrum whose only relevant odd entry at the top level equals ±a.
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let p = periodize(&x, 7).unwrap();
        // at level j = 7 with μ^{(7)} = 105: no shift
        let mut acc = CountingSpectrumAccessor::new(&s);
        let (mu, d) = refine_support(
            periodize(&x, 4).unwrap().values(),
            9,
            &mut acc,
            6,
            3,
            8,
            &NoisyConfig::default(),
        )
        .unwrap();
        assert_eq!((mu, d[3]), (105, false));
        assert_ne!(p[105 % 128], c(0.0));

        // mirrored: shift the signal by N/2, every odd entry flips sign
        let y = Signal::new((0..256).map(|k| x[(k + 128) % 256]).collect()).unwrap();
        let sy = fft_forward(&y).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&sy);
        let (mu, d) = refine_support(
            periodize(&y, 4).unwrap().values(),
            9,
            &mut acc,
            6,
            3,
            8,
            &NoisyConfig::default(),
        )
        .unwrap();
        assert_eq!((mu, d[3]), ((105 + 128) % 256, true));
    }

    #[test]
    fn single_candidate_is_the_right_neighbour_of_the_coarse_peak() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let coarse: Vec<f64> = (0..16).map(|k| s[16 * k].norm()).collect();
        let peak = (0..16).fold(0, |b, k| if coarse[k] > coarse[b] { k } else { b });

        let mut acc = CountingSpectrumAccessor::new(&s);
        for k in 0..16 {
            acc.get(16 * k).unwrap();
        }
        let config = NoisyConfig {
            candidate_scan_budget: Some(1),
            ..NoisyConfig::default()
        };
        let p = periodize(&x, 4).unwrap();
        let (mu, _) = refine_support(p.values(), 9, &mut acc, 6, 3, 8, &config).unwrap();
        assert_eq!(mu, 105);
        // level j reads ŷ_{2^{7-j}(2^{j-3}·peak + 1)} = ŷ_{16·peak + 2^{7-j}}
        let mut expected: Vec<usize> = (0..16).map(|k| 16 * k).collect();
        expected.extend((4..8).map(|j| 16 * peak + (1 << (7 - j))));
        expected.sort_unstable();
        assert_eq!(acc.accessed_indices(), expected);
    }

    #[test]
    fn average_single_vector_is_z0_window() {
        let z = vec![(0..16).map(|k| Complex64::new(k as f64, -(k as f64))).collect::<Vec<_>>()];
        let out = average_support_values(&z, &[0], 9, 6, 6, 256).unwrap();
        for k in 0..6 {
            assert_eq!(out[k], z[0][(9 + k) % 16]);
        }
        assert_eq!(
            average_support_values(&[], &[], 0, 0, 1, 16).unwrap_err(),
            Error::NoVectors
        );
    }

    #[test]
    fn average_exact_data_returns_true_values() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let kappas = [0usize, 8, 4, 2, 1, 3];
        let z: Vec<_> = kappas
            .iter()
            .map(|&k| compute_z_kappa(&mut acc, k, 3, 8).unwrap())
            .collect();
        let out = average_support_values(&z, &kappas, 9, 6, 6, 256).unwrap();
        for k in 0..6 {
            assert!((out[k] - x[105 + k]).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn exact_data_through_noisy_pipeline() {
        let x = worked_example();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let rec = reconstruct_noisy(&mut acc, 6, &NoisyConfig::default()).unwrap();
        assert_eq!(rec.support.first_index, 105);
        assert_eq!(rec.kappa_vectors_used, 2);
        assert_eq!(rec.doubling_decisions.len(), 4);
        for (a, b) in rec.signal.values().iter().zip(x.values()) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!(rec.samples_used <= 2 * 16 + 4 * 6);
    }

    #[test]
    fn noisy_fallback_for_wide_support() {
        let x = Signal::new((0..32).map(|k| c(k as f64)).collect()).unwrap();
        let s = fft_forward(&x).unwrap();
        let mut acc = CountingSpectrumAccessor::new(&s);
        let rec = reconstruct_noisy(&mut acc, 10, &NoisyConfig::default()).unwrap();
        assert!(rec.fallback);
        assert!(rec.doubling_decisions.is_empty());
        assert_eq!(rec.samples_used, 32);
    }

    #[test]
    fn config_validation() {
        assert!(NoisyConfig::with_max_kappa(1).validate().is_err());
        let bad = NoisyConfig {
            averaging_count: 9,
            ..NoisyConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = NoisyConfig {
            candidate_scan_budget: Some(0),
            ..NoisyConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(NoisyConfig::default().validate().is_ok());
    }
}
