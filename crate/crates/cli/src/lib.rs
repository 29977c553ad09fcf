//! Command implementations behind the `spfft` binary: SPF1 vector files,
//! single reconstructions, and the experiment and benchmark harnesses.

pub mod bench;
pub mod commands;
pub mod error;
pub mod experiment;
pub mod spf1;

pub use error::{CliError, Result};

/// Name of the environment variable capping the experiment worker pool.
pub const THREADS_ENV: &str = "SPFFT_THREADS";

/// Reads [`THREADS_ENV`]; unset or empty means no cap.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        _ => Ok(None),
    }
}
