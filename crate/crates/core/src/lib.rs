//! Deterministic sparse inverse FFT for vectors with a short support interval.
//!
//! Given the DFT of a length-`N = 2^J` vector that vanishes outside a cyclic
//! interval of length `m`, [`reconstruct_exact`] recovers the vector from
//! fewer than `4m` Fourier samples and [`reconstruct_noisy`] does so stably
//! for perturbed samples using `O(m log N)` of them.

pub mod accessor;
pub mod dft;
pub mod error;
pub mod exact;
pub mod fft;
pub mod lab;
pub mod noisy;
pub mod support;

pub use accessor::CountingSpectrumAccessor;
pub use dft::{fft_forward, fft_inverse, naive_dft, periodize, subsample_spectrum, Signal, Spectrum};
pub use error::{Error, Result};
pub use exact::{reconstruct_exact, ExactReconstruction};
pub use fft::Radix2Fft;
pub use noisy::{reconstruct_noisy, NoisyConfig, NoisyReconstruction};
pub use support::SupportDescriptor;

pub use num_complex::Complex64;
