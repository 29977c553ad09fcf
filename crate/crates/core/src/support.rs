use crate::error::{Error, Result};

/// A cyclic support interval `{(first + r) mod n : r < length}` of a length-`n` vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SupportDescriptor {
    pub first_index: usize,
    pub length: usize,
}

impl SupportDescriptor {
    pub fn new(first_index: usize, length: usize, n: usize) -> Result<Self> {
        if first_index >= n {
            return Err(Error::InvalidOffset {
                offset: first_index,
                limit: n,
            });
        }
        if length == 0 || length > n {
            return Err(Error::InvalidSupportLength { m: length, len: n });
        }
        Ok(Self {
            first_index,
            length,
        })
    }

    pub fn contains(&self, index: usize, n: usize) -> bool {
        (index + n - self.first_index) % n < self.length
    }

    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> {
        let first = self.first_index;
        (0..self.length).map(move |r| (first + r) % n)
    }
}
