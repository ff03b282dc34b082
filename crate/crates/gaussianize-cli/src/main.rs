//! Command-line front-end: `eval` reproduces the transform-comparison
//! table, `density` emits KDE and reference density curves, `fewshot` runs
//! episodic trials. Everything is a deterministic function of the flags and
//! input files; exit codes are 0 (ok), 2 (configuration), 3 (computation)
//! and 4 (data).

mod args;
mod density;
mod error;
mod eval;
mod fewshot_cmd;
mod sources;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{SourceArg, SyntheticArg, TransformArg};
use error::CliError;
use fewshot_cmd::{FewshotParams, MethodArg};
use table::OutputFormat;

#[derive(Parser)]
#[command(name = "gaussianize", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare Gaussianization transforms on the benchmark sources.
    Eval {
        /// Sample size for the random sources.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Master seed for the random sources.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
        format: OutputFormat,
    },
    /// Emit the KDE of a transformed source and its moment-matched Gaussian
    /// as `<out>.kde.csv` and `<out>.gaussian.csv`.
    Density {
        /// Data source: uniform[:low,high], exponential[:mean], iris[:feature].
        #[arg(long)]
        source: SourceArg,
        /// Transform: none, tukey[:l], log, boxcox[:l], yeojohnson[:l],
        /// logtukey[:eps]; boxcox/yeojohnson without lambda fit it by
        /// maximum likelihood on the source data.
        #[arg(long)]
        transform: TransformArg,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Grid resolution of the curves.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Output path prefix (required).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run N-way-K-shot trials with Gaussian Sampling, the
    /// distribution-calibration baseline, or both on identical episodes.
    Fewshot {
        #[arg(long, value_enum, default_value_t = MethodArg::Compare)]
        method: MethodArg,
        #[arg(long, default_value_t = 5)]
        n_way: usize,
        #[arg(long, default_value_t = 5)]
        k_shot: usize,
        #[arg(long, default_value_t = 15)]
        q_query: usize,
        /// Sampling budget: per class for gs, per support point for dc.
        #[arg(long, default_value_t = 150, conflicts_with = "p_grid")]
        p: usize,
        /// Sweep over budgets instead, e.g. --p-grid 50,100,150.
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<usize>>,
        /// Override the method's transform (needs explicit parameters).
        #[arg(long)]
        transform: Option<TransformArg>,
        /// Calibration covariance offset for dc.
        #[arg(long, default_value_t = 0.21)]
        alpha: f64,
        /// Neighboring base classes used by dc calibration.
        #[arg(long, default_value_t = 2)]
        k_neighbors: usize,
        /// Covariance ridge added before gs sampling.
        #[arg(long, default_value_t = 0.1)]
        reg: f64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        tasks: usize,
        /// Feature CSV (with --splits).
        #[arg(long, requires = "splits")]
        features: Option<PathBuf>,
        /// Split manifest (with --features).
        #[arg(long, requires = "features")]
        splits: Option<PathBuf>,
        /// Synthetic dataset: skewed|separable with key=value overrides.
        #[arg(long, conflicts_with_all = ["features", "splits"])]
        synthetic: Option<SyntheticArg>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval {
            n,
            seed,
            out,
            format,
        } => {
            let table = eval::run(n, seed)?;
            emit(&table.render(format), out.as_deref())
        }
        Command::Density {
            source,
            transform,
            n,
            seed,
            grid,
            out,
        } => {
            let written = density::run(&source, transform, n, seed, grid, &out)?;
            println!("{}", written.kde_path.display());
            println!("{}", written.gaussian_path.display());
            Ok(())
        }
        Command::Fewshot {
            method,
            n_way,
            k_shot,
            q_query,
            p,
            p_grid,
            transform,
            alpha,
            k_neighbors,
            reg,
            trials,
            tasks,
            features,
            splits,
            synthetic,
            seed,
            out,
            format,
        } => {
            let params = FewshotParams {
                method,
                n_way,
                k_shot,
                q_query,
                p,
                p_grid,
                transform,
                alpha,
                k_neighbors,
                regularization: reg,
                trials,
                tasks,
                features,
                splits,
                synthetic,
                seed,
            };
            let table = fewshot_cmd::run(&params)?;
            emit(&table.render(format), out.as_deref())
        }
    }
}

fn emit(rendered: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, rendered)?;
            Ok(())
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
