use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use spfft_cli::commands::{cmd_gen, cmd_reconstruct, GenOptions, ReconstructOptions};
use spfft_cli::experiment::{run_experiment, to_csv, Algorithm, ExperimentConfig};
use spfft_cli::{bench, threads_from_env, CliError};
use spfft_core::lab::NoiseShape;
use spfft_core::NoisyConfig;

#[derive(Parser)]
#[command(name = "spfft", version, about = "Sparse inverse FFT for vectors with short support")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Disc,
    Box,
}

impl From<Shape> for NoiseShape {
    fn from(s: Shape) -> Self {
        match s {
            Shape::Disc => NoiseShape::Disc,
            Shape::Box => NoiseShape::Box,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random sparse vector and its spectrum as SPF1 files.
    Gen {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "signal")]
        prefix: String,
        /// Add noise at this SNR (dB) to the frequency file.
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long, value_enum, default_value = "box")]
        noise_shape: Shape,
        /// Use the fixed N = 256, m = 6 demo vector (support starts at 105).
        #[arg(long)]
        demo: bool,
    },
    /// Recover a time-domain vector from a frequency-domain SPF1 file.
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        /// exact, noisy or ifft-baseline
        #[arg(long, default_value = "exact")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 8)]
        max_kappa: usize,
        #[arg(long)]
        out: PathBuf,
        /// Time-domain SPF1 file to report ‖x − x′‖₂/N against.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Monte-Carlo reconstruction experiment, one CSV row per SNR.
    Experiment {
        #[arg(long, default_value_t = 1 << 16)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        /// Comma-separated SNR levels in dB ("inf" for noiseless).
        #[arg(long, value_delimiter = ',', default_value = "0,5,10,15,20,25,30,35,40,45,50")]
        snr: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "noisy")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 8)]
        max_kappa: usize,
        #[arg(long, value_enum, default_value = "box")]
        noise_shape: Shape,
        /// Use N = 2^22 regardless of --n.
        #[arg(long)]
        full: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the sparse algorithms against a full inverse FFT.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "65536,1048576,4194304")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "50,1024,2048")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            n,
            m,
            seed,
            out_dir,
            prefix,
            snr,
            noise_shape,
            demo,
        } => {
            let out = cmd_gen(&GenOptions {
                n,
                m,
                seed,
                out_dir,
                prefix,
                snr_db: snr,
                noise_shape: noise_shape.into(),
                demo,
            })?;
            println!(
                "mu={} m={} time={} freq={} meta={}",
                out.mu,
                out.m,
                out.time_path.display(),
                out.freq_path.display(),
                out.meta_path.display()
            );
        }
        Command::Reconstruct {
            input,
            m,
            algorithm,
            max_kappa,
            out,
            truth,
        } => {
            let report = cmd_reconstruct(&ReconstructOptions {
                input,
                m,
                algorithm,
                max_kappa,
                out,
                truth,
            })?;
            println!("{report}");
        }
        Command::Experiment {
            n,
            m,
            snr,
            trials,
            seed,
            algorithm,
            max_kappa,
            noise_shape,
            full,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(if full { 1 << 22 } else { n }, m, snr, trials, seed);
            cfg.algorithm = algorithm;
            cfg.noise_shape = noise_shape.into();
            cfg.noisy = NoisyConfig::with_max_kappa(max_kappa);
            cfg.threads = threads_from_env()?;
            emit(out, &to_csv(&run_experiment(&cfg)?))?;
        }
        Command::Bench {
            n,
            m,
            trials,
            seed,
            out,
        } => {
            let rows = bench::run_bench(&n, &m, trials, seed)?;
            emit(out, &bench::to_csv(&rows))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spfft: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
