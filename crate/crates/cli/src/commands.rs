use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use spfft_core::lab::{self, NoiseLevel, NoiseShape, NoiseSpec};
use spfft_core::{
    fft_forward, fft_inverse, reconstruct_exact, reconstruct_noisy, CountingSpectrumAccessor,
    NoisyConfig, Spectrum,
};

use crate::error::{CliError, Result};
use crate::experiment::{demo_signal, Algorithm};
use crate::spf1::{Domain, VectorFile};

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub prefix: String,
    /// Noise added to the frequency file; `None` leaves it exact.
    pub snr_db: Option<f64>,
    pub noise_shape: NoiseShape,
    /// Write the fixed length-256 demo vector instead of a random one.
    pub demo: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenOutput {
    pub time_path: PathBuf,
    pub freq_path: PathBuf,
    pub meta_path: PathBuf,
    pub mu: usize,
    pub m: usize,
}

/// Writes `<prefix>.time.spf`, `<prefix>.freq.spf` and `<prefix>.meta.txt`.
pub fn cmd_gen(opts: &GenOptions) -> Result<GenOutput> {
    let (x, mu, m, n) = if opts.demo {
        (demo_signal(), 105, 6, 256)
    } else {
        let (x, support) = lab::gen_sparse_signal(opts.n, opts.m, opts.seed)?;
        (x, support.first_index, opts.m, opts.n)
    };
    let clean = fft_forward(&x)?;
    let (spectrum, noise_inf) = match opts.snr_db {
        Some(db) => {
            let spec = NoiseSpec {
                level: NoiseLevel::SnrDb(db),
                shape: opts.noise_shape,
                seed: opts.seed.wrapping_add(1),
            };
            let (noisy, noise) = lab::add_noise(&clean, &spec)?;
            (noisy, Some(lab::inf_norm(&noise)))
        }
        None => (clean, None),
    };

    std::fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(&opts.out_dir, e))?;
    let time_path = opts.out_dir.join(format!("{}.time.spf", opts.prefix));
    let freq_path = opts.out_dir.join(format!("{}.freq.spf", opts.prefix));
    let meta_path = opts.out_dir.join(format!("{}.meta.txt", opts.prefix));

    VectorFile::new(Domain::Time, x.into_values()).write(&time_path)?;
    VectorFile::new(Domain::Frequency, spectrum.into_values()).write(&freq_path)?;

    let mut meta = format!("n={n}\nm={m}\nmu={mu}\nseed={}\n", opts.seed);
    if let (Some(db), Some(inf)) = (opts.snr_db, noise_inf) {
        meta.push_str(&format!("snr_db={db}\nnoise_inf={inf}\n"));
    }
    std::fs::write(&meta_path, meta).map_err(|e| CliError::io(&meta_path, e))?;

    Ok(GenOutput {
        time_path,
        freq_path,
        meta_path,
        mu,
        m,
    })
}

#[derive(Debug, Clone)]
pub struct ReconstructOptions {
    pub input: PathBuf,
    pub m: usize,
    pub algorithm: Algorithm,
    pub max_kappa: usize,
    pub out: PathBuf,
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructReport {
    pub algorithm: Algorithm,
    pub mu: usize,
    pub samples_used: usize,
    pub wall_ns: u128,
    pub fallback: bool,
    pub kappa_vectors: Option<usize>,
    pub err_l2_over_n: Option<f64>,
}

impl fmt::Display for ReconstructReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algorithm={} mu={} samples_used={} wall_ns={}",
            self.algorithm, self.mu, self.samples_used, self.wall_ns
        )?;
        if let Some(k) = self.kappa_vectors {
            write!(f, " kappa_vectors={k}")?;
        }
        if self.fallback {
            f.write_str(" fallback")?;
        }
        if let Some(e) = self.err_l2_over_n {
            write!(f, " err_l2_over_n={e:.17e}")?;
        }
        Ok(())
    }
}

fn read_domain(path: &Path, expected: Domain) -> Result<Vec<spfft_core::Complex64>> {
    let file = VectorFile::read(path)?;
    if file.domain != expected {
        return Err(CliError::Validation(format!(
            "{}: expected a {expected}-domain file, found {}",
            path.display(),
            file.domain
        )));
    }
    Ok(file.values)
}

pub fn cmd_reconstruct(opts: &ReconstructOptions) -> Result<ReconstructReport> {
    let spectrum = Spectrum::new(read_domain(&opts.input, Domain::Frequency)?)?;
    let truth = opts
        .truth
        .as_deref()
        .map(|p| read_domain(p, Domain::Time))
        .transpose()?;
    if let Some(t) = &truth {
        if t.len() != spectrum.len() {
            return Err(CliError::Validation(format!(
                "truth has length {}, input has {}",
                t.len(),
                spectrum.len()
            )));
        }
    }

    let mut access = CountingSpectrumAccessor::new(&spectrum);
    let start = Instant::now();
    let (signal, mu, fallback, kappa_vectors) = match opts.algorithm {
        Algorithm::Exact => {
            let rec = reconstruct_exact(&mut access, opts.m)?;
            (rec.signal, rec.support.first_index, rec.fallback, None)
        }
        Algorithm::Noisy => {
            let rec = reconstruct_noisy(&mut access, opts.m, &NoisyConfig::with_max_kappa(opts.max_kappa))?;
            (
                rec.signal,
                rec.support.first_index,
                rec.fallback,
                Some(rec.kappa_vectors_used),
            )
        }
        Algorithm::IfftBaseline => {
            if opts.m == 0 || opts.m > spectrum.len() {
                return Err(spfft_core::Error::InvalidSupportLength {
                    m: opts.m,
                    len: spectrum.len(),
                }
                .into());
            }
            access.gather(0, 1, spectrum.len())?;
            let signal = fft_inverse(&spectrum)?;
            let mu = if 2 * opts.m <= signal.len() {
                spfft_core::exact::find_support_start(signal.values(), opts.m)?
            } else {
                0
            };
            (signal, mu, true, None)
        }
    };
    let wall_ns = start.elapsed().as_nanos();

    let err_l2_over_n = truth
        .as_deref()
        .map(|t| lab::error_l2_over_n(t, signal.values()))
        .transpose()?;
    VectorFile::new(Domain::Time, signal.into_values()).write(&opts.out)?;

    Ok(ReconstructReport {
        algorithm: opts.algorithm,
        mu,
        samples_used: access.read_count(),
        wall_ns,
        fallback,
        kappa_vectors,
        err_l2_over_n,
    })
}
