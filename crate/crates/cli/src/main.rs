use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use decompaudit_core::harness::{
    audit, emit_reports, gen_synthetic, load_csv, registry_entry, run_ablation, run_experiment, run_summation,
    DatasetSource, ExperimentConfig, SyntheticSpec,
};
use decompaudit_core::spectral::power_spectrum;
use decompaudit_core::{decompose, DecompositionConfig, Error, ErrorCategory, Method, Result, TimeSeries};

#[derive(Parser)]
#[command(name = "decompaudit", version, about = "Leaked vs causal decomposition forecasting audit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one series into a components CSV.
    Decompose {
        #[command(flatten)]
        input: SeriesInput,
        #[arg(long, default_value = "emd")]
        method: Method,
        /// Experiment config whose [decomposition] table is used.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Power spectrum of a series, or of one of its components.
    Spectrum {
        #[command(flatten)]
        input: SeriesInput,
        /// Decompose first and take this component (e.g. IMF1, AC, SSA2).
        #[arg(long, requires = "method")]
        component: Option<String>,
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the configured experiment grid.
    Run(GridArgs),
    /// Leaked single-component ablation for one method.
    Ablate {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "emd")]
        method: Method,
    },
    /// Per-component models with summed forecasts.
    Summation {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "emd")]
        method: Method,
        /// Use causal instead of leaked test features.
        #[arg(long)]
        causal: bool,
    },
    /// Leaked-vs-causal comparison with a verdict per method and model.
    Audit(GridArgs),
    /// Write a synthetic series (the standard fixture unless configured).
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a local copy of a published dataset against its statistics.
    Verify {
        #[command(flatten)]
        input: SeriesInput,
        /// Registry name: Hs, WSPD, U, GHI, P or T.
        #[arg(long)]
        name: String,
    },
}

#[derive(Args)]
struct SeriesInput {
    /// CSV file with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Column name; defaults to the first column.
    #[arg(long)]
    column: Option<String>,
}

impl SeriesInput {
    fn load(&self) -> Result<TimeSeries> {
        load_csv(&self.input, self.column.as_deref())
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    config: PathBuf,
    /// First seed of the repeats.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the configured dataset with a local CSV.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, requires = "dataset")]
    column: Option<String>,
}

impl GridArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.base_seed = seed;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(path) = &self.dataset {
            cfg.dataset = DatasetSource::Csv {
                path: path.clone(),
                column: self.column.clone(),
                name: None,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn decomposition_config(path: Option<&Path>) -> Result<DecompositionConfig> {
    match path {
        Some(p) => Ok(ExperimentConfig::from_file(p)?.decomposition),
        None => Ok(DecompositionConfig::default()),
    }
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn print_aggregates(out: &decompaudit_core::harness::ExperimentOutput) {
    println!("{:<6} {:<18} {:<18} {:>13} {:>13} {:>10}", "method", "mode", "model", "mse_mean", "mse_std", "p_causal");
    for a in &out.aggregates {
        let p = a.p_vs_causal.map(|p| format!("{p:.3e}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<6} {:<18} {:<18} {:>13.6e} {:>13.6e} {:>10}",
            a.method.to_string(),
            a.mode.to_string(),
            a.model,
            a.mse_mean,
            a.mse_std,
            p
        );
    }
    let failed = out.rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} cell(s) failed; see results.csv");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose {
            input,
            method,
            config,
            out,
        } => {
            let series = input.load()?;
            let set = decompose(&series, method, &decomposition_config(config.as_deref())?)?;
            set.write_csv(&out)?;
            println!("{} components -> {}", set.len(), out.display());
        }
        Command::Spectrum {
            input,
            component,
            method,
            config,
            out,
        } => {
            let series = input.load()?;
            let spectrum = match (component, method) {
                (Some(label), Some(method)) => {
                    let set = decompose(&series, method, &decomposition_config(config.as_deref())?)?;
                    let values = set.component(&label).ok_or_else(|| {
                        Error::InvalidConfig(format!("no component `{label}`; have {}", set.labels.join(", ")))
                    })?;
                    power_spectrum(values)?
                }
                _ => power_spectrum(series.values())?,
            };
            spectrum.write_csv(&out)?;
        }
        Command::Run(args) => {
            let cfg = args.load()?;
            let output = run_experiment(&cfg)?;
            emit_reports(&output, &cfg.out)?;
            print_aggregates(&output);
        }
        Command::Ablate { grid, method } => {
            let cfg = grid.load()?;
            let ab = run_ablation(&cfg, method)?;
            emit_reports(&ab.output, &cfg.out)?;
            let mut csv = String::from("model,index,label,dominant_frequency,mse_mean,error_reduction\n");
            for e in &ab.entries {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    e.model, e.index, e.label, e.dominant_frequency, e.mse_mean, e.error_reduction
                ));
                println!(
                    "{:<18} {:<6} f={:.5} mse={:.6e} reduction={:+.1}%",
                    e.model,
                    e.label,
                    e.dominant_frequency,
                    e.mse_mean,
                    100.0 * e.error_reduction
                );
            }
            write_text(&cfg.out.join("ablation.csv"), &csv)?;
        }
        Command::Summation { grid, method, causal } => {
            let cfg = grid.load()?;
            let output = run_summation(&cfg, method, !causal)?;
            emit_reports(&output, &cfg.out)?;
            print_aggregates(&output);
        }
        Command::Audit(args) => {
            let cfg = args.load()?;
            let (output, findings) = audit(&cfg)?;
            emit_reports(&output, &cfg.out)?;
            for f in &findings {
                let p = f.p.map(|p| format!("{p:.3e}")).unwrap_or_else(|| "n/a".into());
                println!(
                    "{} {}: raw {:.4e}, leaked {:.4e} ({:+.1}%), causal {:.4e} ({:+.1}%), p = {p}\n  {}",
                    f.method,
                    f.model,
                    f.raw_mse,
                    f.leaked_mse,
                    100.0 * f.leaked_change,
                    f.causal_mse,
                    100.0 * f.causal_change,
                    f.verdict
                );
            }
        }
        Command::Synth {
            config,
            seed,
            length,
            out,
        } => {
            let mut spec = match config {
                Some(p) => match ExperimentConfig::from_file(&p)?.dataset {
                    DatasetSource::Synthetic(s) => s,
                    DatasetSource::Csv { .. } => {
                        return Err(Error::InvalidConfig("config dataset is not synthetic".into()));
                    }
                },
                None => SyntheticSpec::standard_fixture(),
            };
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(n) = length {
                spec.length = n;
            }
            let series = gen_synthetic(&spec)?;
            let mut body = String::from("value\n");
            for v in series.values() {
                body.push_str(&format!("{v}\n"));
            }
            write_text(&out, &body)?;
        }
        Command::Verify { input, name } => {
            let entry =
                registry_entry(&name).ok_or_else(|| Error::InvalidConfig(format!("unknown dataset `{name}`")))?;
            let series = input.load()?;
            let check = entry.verify(&series, 0.01);
            println!(
                "{}: length {} (expected {}), mean {:.4} (expected {}), std {:.4} (expected {})",
                entry.name,
                series.len(),
                entry.length,
                check.mean,
                entry.mean,
                check.std,
                entry.std
            );
            if !check.passed() {
                return Err(Error::InvalidInput(format!("{} does not match the registry", input.input.display())));
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        ErrorCategory::Io => 1,
        ErrorCategory::Config => 2,
        ErrorCategory::Data => 3,
        ErrorCategory::Numeric => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
