//! SPF1 vector files.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "SPF1"
//!      4     2  version, u16 LE, = 1
//!      6     1  domain: 0 time, 1 frequency
//!      7     1  reserved, = 0
//!      8     8  length N, u64 LE, a power of two
//!     16  16·N  N × (re f64 LE, im f64 LE)
//! ```

use num_complex::Complex64;
use std::path::Path;
use thiserror::Error;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"SPF1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Time = 0,
    Frequency = 1,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::Time => "time",
            Domain::Frequency => "frequency",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed SPF1 data at byte offset {offset}: {message}")]
pub struct FormatError {
    pub offset: usize,
    pub message: String,
}

fn malformed(offset: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        offset,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

impl VectorFile {
    pub fn new(domain: Domain, values: Vec<Complex64>) -> Self {
        Self { domain, values }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * self.values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.domain as u8);
        out.push(0);
        out.extend_from_slice(&(self.values.len() as u64).to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Self, FormatError> {
        if bytes.len() < HEADER_LEN {
            return Err(malformed(bytes.len(), "truncated header"));
        }
        if &bytes[0..4] != MAGIC {
            return Err(malformed(0, format!("bad magic {:?}", &bytes[0..4])));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(malformed(4, format!("unsupported version {version}")));
        }
        let domain = match bytes[6] {
            0 => Domain::Time,
            1 => Domain::Frequency,
            other => return Err(malformed(6, format!("unknown domain flag {other}"))),
        };
        if bytes[7] != 0 {
            return Err(malformed(7, "reserved byte is not zero"));
        }
        let len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
        if len == 0 || !len.is_power_of_two() || len > 1 << spfft_core::dft::MAX_LOG2_LEN {
            return Err(malformed(8, format!("length {len} is not a supported power of two")));
        }
        let payload = &bytes[HEADER_LEN..];
        let expected = 16 * len as usize;
        if payload.len() != expected {
            return Err(malformed(
                HEADER_LEN + payload.len().min(expected),
                format!("payload is {} bytes, expected {expected}", payload.len()),
            ));
        }
        let values = payload
            .chunks_exact(16)
            .map(|rec| {
                let re = f64::from_le_bytes(rec[0..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(rec[8..16].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self { domain, values })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|source| CliError::Format {
            path: path.to_path_buf(),
            source,
        })
    }
}
