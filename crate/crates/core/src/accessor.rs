use num_complex::Complex64;
use std::collections::HashSet;

use crate::dft::Spectrum;
use crate::error::{Error, Result};

/// Random access to a spectrum that records which entries were measured.
///
/// `read_count` is the number of *distinct* indices read so far; repeated
/// reads of one index are free. This is the sample budget the sparse
/// algorithms are judged by.
#[derive(Debug)]
pub struct CountingSpectrumAccessor<'a> {
    spectrum: &'a Spectrum,
    accessed: HashSet<usize>,
}

impl<'a> CountingSpectrumAccessor<'a> {
    pub fn new(spectrum: &'a Spectrum) -> Self {
        Self {
            spectrum,
            accessed: HashSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.spectrum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectrum.is_empty()
    }

    pub fn log2_len(&self) -> u32 {
        self.spectrum.log2_len()
    }

    pub fn get(&mut self, index: usize) -> Result<Complex64> {
        let len = self.spectrum.len();
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        self.accessed.insert(index);
        Ok(self.spectrum[index])
    }

    /// Reads `count` entries `start, start + stride, ...`.
    pub fn gather(&mut self, start: usize, stride: usize, count: usize) -> Result<Vec<Complex64>> {
        (0..count).map(|k| self.get(start + k * stride)).collect()
    }

    pub fn read_count(&self) -> usize {
        self.accessed.len()
    }

    /// Indices read so far, in ascending order.
    pub fn accessed_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.accessed.iter().copied().collect();
        v.sort_unstable();
        v
    }
}
