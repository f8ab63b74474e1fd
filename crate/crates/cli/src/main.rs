use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use spikecs::bench::{
    read_records, reference_records, render_table, run_experiment, sensing_seed, write_records, ExperimentConfig,
    ExperimentKind, ExperimentRecord,
};
use spikecs::dictionaries::{self, BasisKind, DictionaryOptions};
use spikecs::metrics::{psnr_db, snr_db, spike_snr_db, QualityReport};
use spikecs::sensing::{compression_ratio, measure, SensingKind, SensingMatrix, DEFAULT_NNZ_PER_COLUMN};
use spikecs::signal::{
    detect_spike_center, generate_spike, load_signal, save_signal, SampleFormat, SignalVector, SpikeTemplateParams,
    SpikeWindow, DEFAULT_SAMPLE_RATE_HZ, DEFAULT_SEGMENT_LEN, DEFAULT_SPIKE_HALF_WIDTH, MIN_SPIKE_AMPLITUDE_UV,
};
use spikecs::solvers::{reconstruct, SolverConfig, SolverKind};

/// Compressed sensing of neural action potentials.
#[derive(Parser)]
#[command(name = "spikecs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic spike recording.
    Gen(GenArgs),
    /// Compress and reconstruct one signal file; prints a JSON quality report.
    Reconstruct(ReconstructArgs),
    /// Run an experiment sweep from a TOML config.
    Bench(BenchArgs),
    /// Render records as a text table.
    Table(TableArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = DEFAULT_SEGMENT_LEN)]
    n: usize,
    /// Peak amplitude in microvolts.
    #[arg(long, default_value_t = 300.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 5.0)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 2.5)]
    depol_width: f64,
    #[arg(long, default_value_t = 5.0)]
    repol_width: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// csv, f64le or f32le.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// csv, f64le or f32le.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE_HZ)]
    sample_rate: f64,
    #[arg(long, default_value = "dct")]
    basis: String,
    #[arg(long, default_value = "bsbl_bo")]
    solver: String,
    #[arg(long, default_value_t = 128)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gaussian or sparse_binary.
    #[arg(long, default_value = "gaussian")]
    sensing: String,
    #[arg(long, default_value_t = DEFAULT_NNZ_PER_COLUMN)]
    nnz_per_column: usize,
    /// Also write the run as a one-line record file (JSON lines plus csv).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the reconstructed signal in the input format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, required_unless_present = "template", requires = "out_dir")]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Print the default config for an experiment kind and exit.
    #[arg(long, conflicts_with = "config")]
    template: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TableArgs {
    /// Records file in JSON lines format.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Render the built-in published reference table.
    #[arg(long)]
    reference: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Table(a) => cmd_table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let format: SampleFormat = a.format.parse()?;
    let params = SpikeTemplateParams {
        amplitude_uv: a.amplitude,
        depol_width: a.depol_width,
        repol_width: a.repol_width,
        noise_sigma_uv: a.noise_sigma,
        seed: a.seed,
    };
    let signal = generate_spike(a.n, &params)?;
    save_signal(&signal, &a.out, format)?;
    Ok(())
}

fn cmd_reconstruct(a: ReconstructArgs) -> Result<()> {
    let format: SampleFormat = a.format.parse()?;
    let basis: BasisKind = a.basis.parse()?;
    let solver: SolverKind = a.solver.parse()?;
    let sensing: SensingKind = a.sensing.parse()?;
    let x = load_signal(&a.input, format, a.sample_rate)?;
    let n = x.len();
    if a.m == 0 || a.m > n {
        bail!("--m must be in 1..={n} for a {n}-sample signal, got {}", a.m);
    }

    let seed = sensing_seed(a.seed, n, a.m);
    let sensing_matrix = SensingMatrix::build(sensing, a.m, n, a.nnz_per_column.min(a.m), seed)?;
    let dictionary = dictionaries::build(basis, n, &DictionaryOptions::default())
        .with_context(|| format!("building the {basis} dictionary for n = {n}"))?;
    let y = measure(&sensing_matrix, &x)?;
    let result = reconstruct(&y, &sensing_matrix, &dictionary, &SolverConfig::default_for(solver))?;
    if !result.converged {
        log::warn!(
            "{solver} stopped after {} iterations without converging",
            result.iterations
        );
    }
    let xhat = result.signal_hat.as_slice();

    let spike_snr = detect_spike_center(&x, MIN_SPIKE_AMPLITUDE_UV)
        .ok()
        .and_then(|c| spike_snr_db(x.samples(), xhat, SpikeWindow::new(c, DEFAULT_SPIKE_HALF_WIDTH)).ok());
    let report = QualityReport {
        snr_db: snr_db(x.samples(), xhat)?,
        psnr_db: psnr_db(x.samples(), xhat)?,
        spike_snr_db: spike_snr,
        cr: compression_ratio(a.m, n),
        runtime_s: result.runtime_s,
    };
    println!("{}", serde_json::to_string(&report)?);

    if let Some(path) = &a.report {
        let record = ExperimentRecord {
            experiment: "reconstruct".to_string(),
            basis,
            solver,
            n,
            m: a.m,
            cr: report.cr,
            snr_db: report.snr_db,
            psnr_db: report.psnr_db,
            spike_snr_db: report.spike_snr_db,
            runtime_s: report.runtime_s,
            iterations: result.iterations,
            converged: result.converged,
            trial_seed: a.seed,
        };
        write_records(&[record], path)?;
    }
    if let Some(path) = &a.out {
        let out = SignalVector::new(xhat.to_vec(), x.sample_rate_hz(), x.origin().clone())?;
        save_signal(&out, path, format)?;
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    if let Some(kind) = a.template {
        let kind: ExperimentKind = kind.parse()?;
        print!("{}", ExperimentConfig::with_defaults(kind).to_toml_string());
        return Ok(());
    }
    let (Some(config), Some(out_dir)) = (a.config, a.out_dir) else {
        bail!("--config and --out-dir are required");
    };
    let cfg = ExperimentConfig::from_path(&config)?;
    log::info!("running {} from {}", cfg.experiment.name(), config.display());
    let records = run_experiment(&cfg)?;
    fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_records(&records, &out_dir.join("records.jsonl"))?;
    print!("{}", render_table(&records)?);
    Ok(())
}

fn cmd_table(a: TableArgs) -> Result<()> {
    let records = match a.records {
        Some(path) => load_records(&path)?,
        None => reference_records(),
    };
    print!("{}", render_table(&records)?);
    Ok(())
}

fn load_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    Ok(read_records(path)?)
}
