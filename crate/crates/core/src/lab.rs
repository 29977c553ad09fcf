//! Test signals, noise injection, error metrics and brute-force oracles.
//!
//! Randomness comes from ChaCha8 seeded with a `u64` through
//! `SeedableRng::seed_from_u64`, so a seed gives the same draws on every
//! platform for a fixed dependency lock.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::dft::{checked_log2, fft_inverse, Signal, Spectrum};
use crate::error::{Error, Result};
use crate::support::SupportDescriptor;

/// Bound on `|Re x_k|` and `|Im x_k|` inside the support.
pub const VALUE_BOUND: f64 = 10.0;
/// Minimum modulus of the two support endpoints.
pub const ENDPOINT_FLOOR: f64 = 0.5;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_box<R: Rng>(rng: &mut R, half_width: f64) -> Complex64 {
    Complex64::new(
        rng.gen_range(-half_width..=half_width),
        rng.gen_range(-half_width..=half_width),
    )
}

/// Random vector of length `n` with support length exactly `m`.
///
/// The start is uniform on `0..n`; support entries are uniform on the box
/// `[-10, 10]²`, with both endpoints redrawn until their modulus is at
/// least [`ENDPOINT_FLOOR`].
pub fn gen_sparse_signal(n: usize, m: usize, seed: u64) -> Result<(Signal, SupportDescriptor)> {
    checked_log2(n)?;
    if m == 0 || m > n {
        return Err(Error::InvalidSupportLength { m, len: n });
    }
    let mut rng = rng_from_seed(seed);
    let mu = rng.gen_range(0..n);
    let mut x = vec![Complex64::default(); n];
    for r in 0..m {
        let endpoint = r == 0 || r == m - 1;
        let value = loop {
            let v = uniform_box(&mut rng, VALUE_BOUND);
            if !endpoint || v.norm() >= ENDPOINT_FLOOR {
                break v;
            }
        };
        x[(mu + r) % n] = value;
    }
    Ok((Signal::new(x)?, SupportDescriptor::new(mu, m, n)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLevel {
    /// Every `|ε_k| ≤ δ`.
    Bound(f64),
    /// Rescale so that `20 log₁₀(‖x̂‖₂/‖ε‖₂)` hits this value.
    SnrDb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseShape {
    /// Uniform on the disc `|ε| ≤ δ`.
    Disc,
    /// Independent uniform real and imaginary parts on `[-δ/√2, δ/√2]`,
    /// which also keeps `|ε| ≤ δ`.
    #[default]
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub level: NoiseLevel,
    pub shape: NoiseShape,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn snr(snr_db: f64, seed: u64) -> Self {
        Self {
            level: NoiseLevel::SnrDb(snr_db),
            shape: NoiseShape::default(),
            seed,
        }
    }

    pub fn bound(delta: f64, seed: u64) -> Self {
        Self {
            level: NoiseLevel::Bound(delta),
            shape: NoiseShape::default(),
            seed,
        }
    }
}

fn unit_noise<R: Rng>(rng: &mut R, shape: NoiseShape) -> Complex64 {
    match shape {
        NoiseShape::Disc => {
            let r = rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            Complex64::from_polar(r, theta)
        }
        NoiseShape::Box => uniform_box(rng, std::f64::consts::FRAC_1_SQRT_2),
    }
}

pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn l1_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

/// `20 log₁₀(‖x̂‖₂ / ‖ε‖₂)`; `+∞` for zero noise.
pub fn snr_db(spectrum: &[Complex64], noise: &[Complex64]) -> f64 {
    20.0 * (l2_norm(spectrum) / l2_norm(noise)).log10()
}

/// Returns `(x̂ + ε, ε)`.
pub fn add_noise(s: &Spectrum, spec: &NoiseSpec) -> Result<(Spectrum, Vec<Complex64>)> {
    let mut rng = rng_from_seed(spec.seed);
    let unit: Vec<Complex64> = (0..s.len()).map(|_| unit_noise(&mut rng, spec.shape)).collect();
    let scale = match spec.level {
        NoiseLevel::Bound(delta) => {
            if !(delta >= 0.0) || !delta.is_finite() {
                return Err(Error::InvalidParameter(format!("noise bound {delta}")));
            }
            delta
        }
        NoiseLevel::SnrDb(db) => {
            if !db.is_finite() {
                return Err(Error::InvalidParameter(format!("target SNR {db}")));
            }
            let signal = l2_norm(s.values());
            let drawn = l2_norm(&unit);
            if signal == 0.0 || drawn == 0.0 {
                return Err(Error::CannotCalibrate);
            }
            signal / 10f64.powf(db / 20.0) / drawn
        }
    };
    let noise: Vec<Complex64> = unit.into_iter().map(|e| e * scale).collect();
    let noisy = s.values().iter().zip(&noise).map(|(a, e)| a + e).collect();
    Ok((Spectrum::new(noisy)?, noise))
}

/// `‖x − x′‖₂ / N`.
pub fn error_l2_over_n(x: &[Complex64], y: &[Complex64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let d: f64 = x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(d.sqrt() / x.len() as f64)
}

/// Full-length inverse FFT: the dense baseline the sparse algorithms are compared to.
pub fn oracle_inverse(s: &Spectrum) -> Result<Signal> {
    fft_inverse(s)
}

/// Window-energy maximizer by direct O(m·n) summation, smallest index on ties.
pub fn brute_force_support_start(p: &[Complex64], m: usize) -> usize {
    let n = p.len();
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..n {
        let e: f64 = (0..m).map(|l| p[(k + l) % n].norm_sqr()).sum();
        if e > best.1 {
            best = (k, e);
        }
    }
    best.0
}

/// Shortest cyclic interval containing every nonzero entry, as `(start, length)`.
/// `None` for the zero vector.
pub fn minimal_support(x: &[Complex64]) -> Option<(usize, usize)> {
    let n = x.len();
    let nonzero: Vec<usize> = (0..n).filter(|&k| x[k] != Complex64::default()).collect();
    if nonzero.is_empty() {
        return None;
    }
    // The interval starting right after the largest cyclic gap is minimal.
    let mut best = (nonzero[0], n);
    for (i, &start) in nonzero.iter().enumerate() {
        let end = nonzero[(i + nonzero.len() - 1) % nonzero.len()];
        let len = (end + n - start) % n + 1;
        if len < best.1 {
            best = (start, len);
        }
    }
    Some(best)
}

/// One reconstruction trial, as tabulated by the experiment harness.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub m: usize,
    pub snr_db: f64,
    pub mu_correct: bool,
    pub err_sparse: f64,
    pub err_ifft: f64,
    pub samples_used: usize,
    pub kappa_vectors_used: usize,
    pub noise_inf_norm: f64,
    pub noise_l1_over_n: f64,
}
