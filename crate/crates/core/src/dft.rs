//! DFT convention, periodization and spectrum subsampling.
//!
//! The forward transform of `x ∈ C^N` is `x̂_k = Σ_j x_j ω_N^{jk}` with
//! `ω_N = e^{-2πi/N}` and no scale factor. The inverse carries the `1/N`.
//! Every routine in this crate uses that single convention.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::Radix2Fft;

/// Largest supported `log2` of a vector length.
pub const MAX_LOG2_LEN: u32 = 30;

/// Returns `J` for `len = 2^J`, rejecting anything else.
pub fn checked_log2(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() || len.trailing_zeros() > MAX_LOG2_LEN {
        return Err(Error::InvalidLength(len));
    }
    Ok(len.trailing_zeros())
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
pub fn ceil_log2(m: usize) -> u32 {
    debug_assert!(m >= 1);
    m.next_power_of_two().trailing_zeros()
}

/// `ω_n^e = e^{-2πi e/n}`, with the exponent reduced modulo `n` first.
pub fn root_of_unity(n: usize, e: u64) -> Complex64 {
    let r = e % n as u64;
    let (sin, cos) = (-2.0 * PI * r as f64 / n as f64).sin_cos();
    Complex64::new(cos, sin)
}

macro_rules! pow2_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Vec<Complex64>);

        impl $name {
            pub fn new(values: Vec<Complex64>) -> Result<Self> {
                checked_log2(values.len())?;
                Ok(Self(values))
            }

            pub fn zeros(len: usize) -> Result<Self> {
                Self::new(zeroed(len))
            }

            pub fn from_real(values: &[f64]) -> Result<Self> {
                Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// `J` such that `len = 2^J`.
            pub fn log2_len(&self) -> u32 {
                self.0.len().trailing_zeros()
            }

            pub fn values(&self) -> &[Complex64] {
                &self.0
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.0
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = Complex64;

            fn index(&self, i: usize) -> &Complex64 {
                &self.0[i]
            }
        }
    };
}

pow2_vector!(
    /// Time-domain vector of power-of-two length.
    Signal
);
pow2_vector!(
    /// Frequency-domain vector of power-of-two length.
    Spectrum
);

/// Zero vector from a zeroed allocation; the pages are not written up front,
/// so a long output with a short support costs far less than `O(len)` stores.
pub(crate) fn zeroed(len: usize) -> Vec<Complex64> {
    bytemuck::zeroed_vec(len)
}

/// O(N²) evaluation of the forward DFT, for any length. Test oracle only.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, &v)| v * root_of_unity(n, (j as u64) * (k as u64)))
                .sum()
        })
        .collect()
}

pub fn fft_forward(x: &Signal) -> Result<Spectrum> {
    let plan = Radix2Fft::new(x.len())?;
    let mut data = x.values().to_vec();
    plan.forward(&mut data)?;
    Ok(Spectrum(data))
}

pub fn fft_inverse(s: &Spectrum) -> Result<Signal> {
    let plan = Radix2Fft::new(s.len())?;
    let mut data = s.values().to_vec();
    plan.inverse(&mut data)?;
    Ok(Signal(data))
}

fn check_level(level: u32, log2_len: u32) -> Result<()> {
    if level > log2_len {
        return Err(Error::InvalidLevel {
            level,
            max: log2_len,
        });
    }
    Ok(())
}

/// The length-`2^level` periodization `x^{(level)}_k = Σ_ℓ x_{k + 2^level ℓ}`.
pub fn periodize(x: &Signal, level: u32) -> Result<Signal> {
    check_level(level, x.log2_len())?;
    let period = 1usize << level;
    let mut out = vec![Complex64::default(); period];
    for chunk in x.values().chunks_exact(period) {
        for (acc, &v) in out.iter_mut().zip(chunk) {
            *acc += v;
        }
    }
    Ok(Signal(out))
}

/// Every `2^{J-level}`-th entry of `s`, which is the spectrum of
/// `periodize(x, level)` when `s` is the spectrum of `x`.
pub fn subsample_spectrum(s: &Spectrum, level: u32) -> Result<Spectrum> {
    check_level(level, s.log2_len())?;
    let stride = 1usize << (s.log2_len() - level);
    Ok(Spectrum(s.values().iter().step_by(stride).copied().collect()))
}

/// Checks the shift/modulation identity: for `y_k = x_{(k + 2^level ν) mod N}`,
/// `ŷ_l = ω_{2^{J-level}}^{-lν} x̂_l`. Both spectra come from [`naive_dft`].
pub fn modulation_check(x: &Signal, level: u32, shift: usize) -> Result<bool> {
    let log2_len = x.log2_len();
    if level >= log2_len {
        return Err(Error::InvalidLevel {
            level,
            max: log2_len.saturating_sub(1),
        });
    }
    let modulus = 1usize << (log2_len - level);
    if shift >= modulus {
        return Err(Error::InvalidOffset {
            offset: shift,
            limit: modulus,
        });
    }

    let n = x.len();
    let offset = shift << level;
    let shifted: Vec<Complex64> = (0..n).map(|k| x[(k + offset) % n]).collect();
    let x_hat = naive_dft(x.values());
    let y_hat = naive_dft(&shifted);

    let scale = x_hat.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    Ok(x_hat.iter().zip(&y_hat).enumerate().all(|(l, (&xl, &yl))| {
        // ω^{-lν} = conj(ω^{lν})
        let predicted = root_of_unity(modulus, (l as u64) * shift as u64).conj() * xl;
        (predicted - yl).norm() <= 1e-10 * scale
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).norm() <= tol, "entry {i}: {x} vs {y}");
        }
    }

    #[test]
    fn naive_dft_small_cases() {
        assert_close(
            &naive_dft(&[c(1.0), c(0.0), c(0.0), c(0.0)]),
            &[c(1.0); 4],
            1e-15,
        );
        assert_close(
            &naive_dft(&[c(1.0); 4]),
            &[c(4.0), c(0.0), c(0.0), c(0.0)],
            1e-14,
        );
        assert_close(&naive_dft(&[c(1.0), c(2.0)]), &[c(3.0), c(-1.0)], 1e-15);
    }

    #[test]
    fn fft_forward_delta_and_zero() {
        let delta = Signal::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_close(fft_forward(&delta).unwrap().values(), &[c(1.0); 4], 1e-15);

        let zero = Signal::zeros(16).unwrap();
        assert!(fft_forward(&zero)
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == Complex64::default()));
    }

    #[test]
    fn fft_inverse_small_cases() {
        let ones = Spectrum::from_real(&[1.0; 4]).unwrap();
        assert_close(
            fft_inverse(&ones).unwrap().values(),
            &[c(1.0), c(0.0), c(0.0), c(0.0)],
            1e-15,
        );
        let scaled = Spectrum::from_real(&[4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_close(fft_inverse(&scaled).unwrap().values(), &[c(1.0); 4], 1e-15);
    }

    #[test]
    fn invalid_lengths_rejected() {
        assert_eq!(
            Signal::new(vec![Complex64::default(); 6]).unwrap_err(),
            Error::InvalidLength(6)
        );
        assert_eq!(Spectrum::new(vec![]).unwrap_err(), Error::InvalidLength(0));
        assert_eq!(checked_log2(1 << 31).unwrap_err(), Error::InvalidLength(1 << 31));
        assert_eq!(checked_log2(1 << 30).unwrap(), 30);
    }

    #[test]
    fn periodize_levels() {
        let x = Signal::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(periodize(&x, 1).unwrap().values(), &[c(4.0), c(6.0)]);
        assert_eq!(periodize(&x, 2).unwrap(), x);
        assert_eq!(periodize(&x, 0).unwrap().values(), &[c(10.0)]);
        assert_eq!(
            periodize(&x, 3).unwrap_err(),
            Error::InvalidLevel { level: 3, max: 2 }
        );
    }

    #[test]
    fn subsample_strides() {
        let s = Spectrum::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(
            subsample_spectrum(&s, 2).unwrap().values(),
            &[c(0.0), c(2.0), c(4.0), c(6.0)]
        );
        assert_eq!(subsample_spectrum(&s, 3).unwrap(), s);
        assert!(subsample_spectrum(&s, 4).is_err());
    }

    #[test]
    fn modulation_half_shift_negates_odd_entries() {
        let x = Signal::new(
            (0..16)
                .map(|k| Complex64::new((k * k % 7) as f64, k as f64 - 3.0))
                .collect(),
        )
        .unwrap();
        assert!(modulation_check(&x, 3, 1).unwrap());
        assert!(modulation_check(&x, 1, 0).unwrap());

        // Explicit form: even entries agree, odd entries flip sign.
        let shifted: Vec<Complex64> = (0..16).map(|k| x[(k + 8) % 16]).collect();
        let xh = naive_dft(x.values());
        let yh = naive_dft(&shifted);
        for k in 0..8 {
            assert!((xh[2 * k] - yh[2 * k]).norm() < 1e-10);
            assert!((xh[2 * k + 1] + yh[2 * k + 1]).norm() < 1e-10);
        }
    }

    #[test]
    fn modulation_rejects_bad_parameters() {
        let x = Signal::zeros(8).unwrap();
        assert!(matches!(
            modulation_check(&x, 3, 0),
            Err(Error::InvalidLevel { .. })
        ));
        assert!(matches!(
            modulation_check(&x, 1, 4),
            Err(Error::InvalidOffset { offset: 4, limit: 4 })
        ));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(50), 6);
    }
}
