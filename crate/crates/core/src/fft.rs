//! Iterative in-place radix-2 decimation-in-time FFT.
//!
//! A [`Radix2Fft`] owns the twiddle table for one power-of-two length and can
//! be reused for any number of forward or inverse transforms of that length.
//! Forward transforms use the kernel `e^{-2πi jk/N}` with no scaling; inverse
//! transforms use `e^{+2πi jk/N}` and divide by `N`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::dft::checked_log2;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Radix2Fft {
    len: usize,
    log2_len: u32,
    // twiddles[k] = e^{-2πi k / len}, k < len/2
    twiddles: Vec<Complex64>,
}

impl Radix2Fft {
    pub fn new(len: usize) -> Result<Self> {
        let log2_len = checked_log2(len)?;
        let twiddles = (0..len / 2)
            .map(|k| {
                let (sin, cos) = (-2.0 * PI * k as f64 / len as f64).sin_cos();
                Complex64::new(cos, sin)
            })
            .collect();
        Ok(Self {
            len,
            log2_len,
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) -> Result<()> {
        self.check(data)?;
        self.transform(data, false);
        Ok(())
    }

    pub fn inverse(&self, data: &mut [Complex64]) -> Result<()> {
        self.check(data)?;
        self.transform(data, true);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
        Ok(())
    }

    fn check(&self, data: &[Complex64]) -> Result<()> {
        if data.len() != self.len {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: self.len,
            });
        }
        Ok(())
    }

    fn transform(&self, data: &mut [Complex64], conjugate: bool) {
        let n = self.len;
        if n < 2 {
            return;
        }

        let shift = usize::BITS - self.log2_len;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                data.swap(i, j);
            }
        }

        let mut half = 1;
        while half < n {
            let span = half * 2;
            let stride = n / span;
            for block in data.chunks_exact_mut(span) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if conjugate { w.conj() } else { w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            half = span;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(Radix2Fft::new(12).unwrap_err(), Error::InvalidLength(12));
        assert_eq!(Radix2Fft::new(0).unwrap_err(), Error::InvalidLength(0));
    }

    #[test]
    fn length_one_is_identity() {
        let plan = Radix2Fft::new(1).unwrap();
        let mut data = vec![Complex64::new(3.0, -1.0)];
        plan.forward(&mut data).unwrap();
        assert_eq!(data[0], Complex64::new(3.0, -1.0));
        plan.inverse(&mut data).unwrap();
        assert_eq!(data[0], Complex64::new(3.0, -1.0));
    }

    #[test]
    fn buffer_length_must_match_plan() {
        let plan = Radix2Fft::new(8).unwrap();
        let mut data = vec![Complex64::default(); 4];
        assert!(matches!(
            plan.forward(&mut data),
            Err(Error::LengthMismatch { left: 4, right: 8 })
        ));
    }
}
