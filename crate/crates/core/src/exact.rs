//! Sparse inverse FFT for exact Fourier data.
//!
//! For a vector of length `N = 2^J` with support length at most `m`, set
//! `L = ⌈log₂ m⌉`. One inverse FFT of length `2^{L+1}` over the stride
//! subsampled spectrum yields the periodization `x^{(L+1)}`, which already
//! holds every nonzero entry of `x` in order. What remains is the shift
//! `ν` placing the support: `μ = μ^{(L+1)} + 2^{L+1} ν`. It is read off a
//! single odd-indexed Fourier value, whose ratio to the value predicted for
//! `ν = 0` is the root of unity `ω_{2^{J-L-1}}^{(2k₀+1)ν}`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::accessor::CountingSpectrumAccessor;
use crate::dft::{ceil_log2, root_of_unity, zeroed, Signal};
use crate::error::{Error, Result};
use crate::fft::Radix2Fft;
use crate::support::SupportDescriptor;

/// Relative size under which a Fourier value is treated as zero when
/// picking the odd-indexed reference sample.
const NEGLIGIBLE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactReconstruction {
    pub signal: Signal,
    pub support: SupportDescriptor,
    /// Distinct spectrum entries read.
    pub samples_used: usize,
    /// `L = ⌈log₂ m⌉`.
    pub level: u32,
    /// `ν` in `μ = μ^{(L+1)} + 2^{L+1} ν`.
    pub shift: usize,
    /// `p` with `b = ω_{2^{J-L-1}}^p`.
    pub quotient: usize,
    /// Index `2k₀+1` of the odd Fourier value used, if any.
    pub odd_index: Option<usize>,
    /// True when `L ≥ J-1` and a full-length inverse FFT was used instead.
    pub fallback: bool,
}

/// Start of the cyclic length-`m` window of `p` with maximal energy
/// `e_k = Σ_{ℓ=k}^{k+m-1} |p_{ℓ mod n}|²`. Ties go to the smallest index.
pub fn find_support_start(p: &[Complex64], m: usize) -> Result<usize> {
    let n = p.len();
    if m == 0 || 2 * m > n {
        return Err(Error::AmbiguousSupport { m, len: n });
    }
    let power: Vec<f64> = p.iter().map(|v| v.norm_sqr()).collect();
    let mut energy: f64 = power[..m].iter().sum();
    let (mut best, mut best_energy) = (0, energy);
    for k in 0..n - 1 {
        energy += power[(k + m) % n] - power[k];
        if energy > best_energy {
            best = k + 1;
            best_energy = energy;
        }
    }
    Ok(best)
}

/// Picks the odd-indexed reference value `x̂_{2k₀+1}`.
///
/// `subsampled` holds the already-read values `x̂_{2^{J-L-1} k}`,
/// `k < 2^{L+1}`. The neighbour (right on ties) of their largest entry is
/// used; if both neighbours vanish, odd indices are scanned in order.
/// Returns `(k₀, x̂_{2k₀+1})`.
pub fn select_odd_sample(
    access: &mut CountingSpectrumAccessor<'_>,
    subsampled: &[Complex64],
    log2_len: u32,
    level: u32,
) -> Result<(usize, Complex64)> {
    if level + 1 >= log2_len {
        return Err(Error::InvalidLevel {
            level,
            max: log2_len.saturating_sub(2),
        });
    }
    if subsampled.len() != 1 << (level + 1) {
        return Err(Error::LengthMismatch {
            left: subsampled.len(),
            right: 1 << (level + 1),
        });
    }
    let n = access.len();
    let stride = 1usize << (log2_len - level - 1);

    let (peak, peak_norm) = subsampled
        .iter()
        .map(|v| v.norm_sqr())
        .enumerate()
        .fold((0, -1.0), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    let threshold = NEGLIGIBLE * peak_norm.sqrt();

    let center = peak * stride;
    let right = access.get(center + 1)?;
    let left = access.get((center + n - 1) % n)?;
    let (index, value) = if left.norm() > right.norm() {
        ((center + n - 1) % n, left)
    } else {
        (center + 1, right)
    };
    if value.norm() > threshold {
        return Ok((index / 2, value));
    }

    for index in (1..n).step_by(2) {
        let value = access.get(index)?;
        if value.norm() > threshold {
            return Ok((index / 2, value));
        }
    }
    Err(Error::ZeroSignal)
}

/// `a⁻¹ mod 2^bits` for odd `a`, by Newton iteration `y ← y(2 − ay)`.
pub fn mod_inverse_pow2(a: u64, bits: u32) -> Result<u64> {
    if a % 2 == 0 {
        return Err(Error::NotInvertible(a));
    }
    if bits == 0 || bits > 64 {
        return Err(Error::InvalidParameter(format!(
            "modulus exponent {bits} outside 1..=64"
        )));
    }
    // a·a ≡ 1 (mod 8): three correct bits to start, doubling each step.
    let mut y = a;
    for _ in 0..5 {
        y = y.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(y)));
    }
    Ok(if bits == 64 { y } else { y & ((1u64 << bits) - 1) })
}

/// Quotient exponent `p` and shift `ν` recovered from `b = ω_{2^t}^p`
/// with `(2k₀+1) ν ≡ p (mod 2^t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftResolution {
    pub quotient: usize,
    pub shift: usize,
}

pub fn resolve_shift(b: Complex64, k0: usize, modulus_log: u32) -> Result<ShiftResolution> {
    if !(b.norm() > 0.0) || !b.is_finite() {
        return Err(Error::DegenerateQuotient);
    }
    let modulus = 1u64 << modulus_log;
    let steps = -b.arg() * modulus as f64 / (2.0 * PI);
    let nearest = steps.round();
    let distance = (steps - nearest).abs();
    if distance > 0.25 {
        return Err(Error::NoisyQuotient { distance });
    }
    let p = (nearest as i64).rem_euclid(modulus as i64) as u64;
    let odd = (2 * k0 as u64 + 1) % modulus;
    let inverse = mod_inverse_pow2(odd, modulus_log)?;
    let nu = (p as u128 * inverse as u128 % modulus as u128) as u64;
    Ok(ShiftResolution {
        quotient: p as usize,
        shift: nu as usize,
    })
}

/// `Σ_{ℓ<m} x_{(μ+ℓ) mod len} ω_M^{q(s+ℓ)}` where `x` is a periodization
/// with support start `μ`. The phasor is advanced by multiplication.
pub(crate) fn phased_window_sum(
    x: &[Complex64],
    mu: usize,
    m: usize,
    modulus: usize,
    frequency: u64,
    start: u64,
) -> Complex64 {
    let len = x.len();
    let step = root_of_unity(modulus, frequency);
    let mut phasor = root_of_unity(modulus, (frequency % modulus as u64) * (start % modulus as u64));
    let mut acc = Complex64::default();
    for l in 0..m {
        acc += x[(mu + l) % len] * phasor;
        phasor *= step;
    }
    acc
}

/// Places the window `x_{(μ^{(L+1)}+ℓ) mod 2^{L+1}}`, `ℓ < m`, at
/// `(μ + ℓ) mod n` in an otherwise zero vector of length `n`.
pub(crate) fn embed_window(
    periodized: &[Complex64],
    mu_periodized: usize,
    mu: usize,
    m: usize,
    n: usize,
) -> Vec<Complex64> {
    let len = periodized.len();
    let mut out = zeroed(n);
    for l in 0..m {
        out[(mu + l) % n] = periodized[(mu_periodized + l) % len];
    }
    out
}

/// Full inverse FFT of every spectrum entry; the branch for `L ≥ J-1`.
pub(crate) fn full_inverse(
    access: &mut CountingSpectrumAccessor<'_>,
    m: usize,
) -> Result<(Signal, SupportDescriptor)> {
    let n = access.len();
    let mut data = access.gather(0, 1, n)?;
    Radix2Fft::new(n)?.inverse(&mut data)?;
    let support = if 2 * m <= n {
        SupportDescriptor::new(find_support_start(&data, m)?, m, n)?
    } else {
        SupportDescriptor::new(0, n, n)?
    };
    Ok((Signal::new(data)?, support))
}

pub(crate) fn check_support_length(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidSupportLength { m, len: n });
    }
    Ok(())
}

/// Recovers `x` from exact Fourier data, given an upper bound `m` on its
/// support length. Reads at most `2^{L+1} + 2` spectrum entries when
/// `L = ⌈log₂ m⌉ < J - 1`.
pub fn reconstruct_exact(
    access: &mut CountingSpectrumAccessor<'_>,
    m: usize,
) -> Result<ExactReconstruction> {
    let n = access.len();
    let log2_len = access.log2_len();
    check_support_length(m, n)?;
    let level = ceil_log2(m);

    if level + 1 >= log2_len {
        let (signal, support) = full_inverse(access, m)?;
        return Ok(ExactReconstruction {
            signal,
            support,
            samples_used: access.read_count(),
            level,
            shift: 0,
            quotient: 0,
            odd_index: None,
            fallback: true,
        });
    }

    let period = 1usize << (level + 1);
    let stride = n / period;
    let modulus_log = log2_len - level - 1;

    let subsampled = access.gather(0, stride, period)?;
    let zero = |access: &CountingSpectrumAccessor<'_>| -> Result<ExactReconstruction> {
        Ok(ExactReconstruction {
            signal: Signal::zeros(n)?,
            support: SupportDescriptor::new(0, m, n)?,
            samples_used: access.read_count(),
            level,
            shift: 0,
            quotient: 0,
            odd_index: None,
            fallback: false,
        })
    };
    if subsampled.iter().all(|v| *v == Complex64::default()) {
        return zero(access);
    }

    let mut periodized = subsampled.clone();
    Radix2Fft::new(period)?.inverse(&mut periodized)?;
    let mu_periodized = find_support_start(&periodized, m)?;

    let (k0, measured) = match select_odd_sample(access, &subsampled, log2_len, level) {
        Ok(pick) => pick,
        Err(Error::ZeroSignal) => return zero(access),
        Err(e) => return Err(e),
    };
    let odd = 2 * k0 as u64 + 1;
    let predicted = phased_window_sum(&periodized, mu_periodized, m, n, odd, mu_periodized as u64);
    if predicted.norm() == 0.0 {
        return Err(Error::DegenerateQuotient);
    }
    let resolution = resolve_shift(measured / predicted, k0, modulus_log)?;

    let mu = mu_periodized + period * resolution.shift;
    let signal = Signal::new(embed_window(&periodized, mu_periodized, mu, m, n))?;
    Ok(ExactReconstruction {
        signal,
        support: SupportDescriptor::new(mu, m, n)?,
        samples_used: access.read_count(),
        level,
        shift: resolution.shift,
        quotient: resolution.quotient,
        odd_index: Some(odd as usize),
        fallback: false,
    })
}
