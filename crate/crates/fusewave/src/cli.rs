//! Command-line front end: `fuse`, `metrics`, `decompose`, `reconstruct`,
//! `bench`, `gen-testpair`.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 usage errors.
//! Parameter resolution order for the swarm flags: built-in defaults, then
//! `--preset`, then `--config` file values, then explicit flags.

use crate::container;
use crate::io::{load_image, save_image};
use crate::parallel::PoolStrategy;
use crate::report;
use crate::testpair;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fusewave_core::dtcwt;
use fusewave_core::fusion::weights_from_vector;
use fusewave_core::mopso::{InertiaSchedule, SwarmConfig, SwarmMode};
use fusewave_core::pipeline::{self, FusionJob, Selection};
use fusewave_core::Image;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] crate::io::IoError),
    #[error(transparent)]
    Container(#[from] container::ContainerError),
    #[error("{0}")]
    Pipeline(#[from] fusewave_core::PipelineError),
    #[error("{0}")]
    Transform(#[from] dtcwt::DtcwtError),
    #[error("{0}")]
    Image(#[from] fusewave_core::ImageError),
    #[error("{0}")]
    Metrics(#[from] fusewave_core::metrics::MetricsError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot read config {path}: {reason}")]
    Config { path: String, reason: String },
}

pub fn exit_code(e: &AppError) -> i32 {
    match e {
        AppError::Usage(_) => 2,
        _ => 1,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fusewave",
    version,
    about = "Dual-tree complex wavelet image fusion with swarm-optimized subband weights"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fuse two registered grayscale images
    Fuse(FuseArgs),
    /// Quality metrics for a test image against a reference
    Metrics(MetricsArgs),
    /// Decompose an image into a pyramid container
    Decompose(DecomposeArgs),
    /// Reconstruct an image from a pyramid container
    Reconstruct(ReconstructArgs),
    /// Multi-seed APSO vs plain-PSO comparison, CSV output
    Bench(BenchArgs),
    /// Regenerate the bundled phantom test pair
    GenTestpair(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Apso,
    Pso,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum PresetArg {
    /// reference experiment settings (NP=100, Gmax=100)
    Paper,
    /// reduced settings for quick runs (NP=20, Gmax=30)
    Desk,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct SwarmFlags {
    /// decomposition depth
    #[arg(long)]
    pub levels: Option<usize>,
    /// particle count
    #[arg(long)]
    pub np: Option<usize>,
    /// generations
    #[arg(long)]
    pub gmax: Option<usize>,
    /// mutation probability
    #[arg(long)]
    pub pm: Option<f64>,
    /// inertia weight
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// archive capacity
    #[arg(long)]
    pub mem: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// optimizer variant
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// parameter preset applied before other flags
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// decaying inertia schedule W(g) = 0.9 - 0.5 g/Gmax
    #[arg(long)]
    pub w_decay: bool,
    /// TOML file with the same keys as these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    levels: Option<usize>,
    np: Option<usize>,
    gmax: Option<usize>,
    pm: Option<f64>,
    w: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    mem: Option<usize>,
    seed: Option<u64>,
    mode: Option<String>,
    select: Option<String>,
    w_decay: Option<bool>,
}

pub struct Resolved {
    pub levels: usize,
    pub swarm: SwarmConfig,
    pub config_select: Option<Selection>,
}

impl SwarmFlags {
    pub fn resolve(&self) -> Result<Resolved, AppError> {
        let mut levels = 3usize;
        // dim is recomputed by the pipeline from levels
        let mut cfg = SwarmConfig::paper_defaults(1 + 6 * levels);
        if let Some(PresetArg::Desk) = self.preset {
            cfg.np = 20;
            cfg.gmax = 30;
        }
        let mut config_select = None;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| AppError::Config {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            let file: ConfigFile = toml::from_str(&text).map_err(|e| AppError::Config {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            if let Some(v) = file.levels {
                levels = v;
            }
            if let Some(v) = file.np {
                cfg.np = v;
            }
            if let Some(v) = file.gmax {
                cfg.gmax = v;
            }
            if let Some(v) = file.pm {
                cfg.pm = v;
            }
            if let Some(v) = file.w {
                cfg.w = v;
            }
            if let Some(v) = file.c1 {
                cfg.c1 = v;
            }
            if let Some(v) = file.c2 {
                cfg.c2 = v;
            }
            if let Some(v) = file.mem {
                cfg.mem = v;
            }
            if let Some(v) = file.seed {
                cfg.seed = v;
            }
            if let Some(v) = &file.mode {
                cfg.mode = match v.as_str() {
                    "apso" => SwarmMode::Apso,
                    "pso" => SwarmMode::PlainPso,
                    other => {
                        return Err(AppError::Usage(format!("config mode '{other}' unknown")))
                    }
                };
            }
            if let Some(v) = &file.select {
                config_select = Some(parse_selection(v)?);
            }
            if file.w_decay == Some(true) {
                cfg.inertia = InertiaSchedule::LinearDecay;
            }
        }
        if let Some(v) = self.levels {
            levels = v;
        }
        if let Some(v) = self.np {
            cfg.np = v;
        }
        if let Some(v) = self.gmax {
            cfg.gmax = v;
        }
        if let Some(v) = self.pm {
            cfg.pm = v;
        }
        if let Some(v) = self.w {
            cfg.w = v;
        }
        if let Some(v) = self.c1 {
            cfg.c1 = v;
        }
        if let Some(v) = self.c2 {
            cfg.c2 = v;
        }
        if let Some(v) = self.mem {
            cfg.mem = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.mode {
            cfg.mode = match v {
                ModeArg::Apso => SwarmMode::Apso,
                ModeArg::Pso => SwarmMode::PlainPso,
            };
        }
        if self.w_decay {
            cfg.inertia = InertiaSchedule::LinearDecay;
        }
        if levels < 1 || levels > dtcwt::MAX_LEVELS {
            return Err(AppError::Usage(format!(
                "levels {levels} outside [1, {}]",
                dtcwt::MAX_LEVELS
            )));
        }
        cfg.dim = 1 + 6 * levels;
        cfg.validate()
            .map_err(|e| AppError::Usage(e.to_string()))?;
        Ok(Resolved {
            levels,
            swarm: cfg,
            config_select,
        })
    }
}

fn parse_selection(text: &str) -> Result<Selection, AppError> {
    match text {
        "compromise" => Ok(Selection::Compromise),
        "max-entropy" | "max_entropy" => Ok(Selection::MaxEntropy),
        other => {
            if let Some(n) = other.strip_prefix("index:") {
                let i: usize = n
                    .parse()
                    .map_err(|_| AppError::Usage(format!("bad selection index '{n}'")))?;
                Ok(Selection::Index(i))
            } else {
                Err(AppError::Usage(format!(
                    "selection '{other}' is not compromise, max-entropy or index:N"
                )))
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct FuseArgs {
    /// first source image
    #[arg(long)]
    pub a: PathBuf,
    /// second source image
    #[arg(long)]
    pub b: PathBuf,
    /// fused output image (.pgm or .png)
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub swarm: SwarmFlags,
    /// fixed weight vector `w0,w1,...` (1 + 6*levels values); skips the
    /// optimizer entirely
    #[arg(long)]
    pub weights: Option<String>,
    /// write a JSON report here
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// write the final archive (weights + objectives) as CSV
    #[arg(long)]
    pub dump_archive: Option<PathBuf>,
    /// archive member choice: compromise, max-entropy, or index:N
    #[arg(long)]
    pub select: Option<String>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// reference image
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// image under test
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// output container (.dtcw)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// input container (.dtcw)
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// number of seeds; each runs both APSO and plain PSO
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// output CSV
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub swarm: SwarmFlags,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// directory receiving ct_256.pgm and mr_256.pgm
    #[arg(long, default_value = "assets")]
    pub out_dir: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Fuse(args) => cmd_fuse(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Bench(args) => cmd_bench(args),
        Command::GenTestpair(args) => cmd_gen_testpair(args),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text).map_err(|source| AppError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn mode_name(mode: SwarmMode) -> &'static str {
    match mode {
        SwarmMode::Apso => "apso",
        SwarmMode::PlainPso => "pso",
    }
}

fn cmd_fuse(args: FuseArgs) -> Result<(), AppError> {
    let resolved = args.swarm.resolve()?;
    let selection = match (&args.select, resolved.config_select) {
        (Some(text), _) => parse_selection(text)?,
        (None, Some(sel)) => sel,
        (None, None) => Selection::Compromise,
    };
    let a = load_image(&args.a)?;
    let b = load_image(&args.b)?;

    if let Some(weights_text) = &args.weights {
        let values: Result<Vec<f64>, _> = weights_text
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect();
        let values =
            values.map_err(|_| AppError::Usage("weights must be comma-separated numbers".into()))?;
        let weights = weights_from_vector(&values, resolved.levels)
            .map_err(|e| AppError::Usage(e.to_string()))?;
        let (fused, metrics) =
            pipeline::fuse_with_weights(&a, &b, resolved.levels, &weights)?;
        save_image(&fused, &args.out)?;
        if let Some(report_path) = &args.report {
            let meta = report::FuseReportMeta {
                weights: &weights,
                archive_size: 0,
                seed: resolved.swarm.seed,
                mode: "fixed-weights",
                selection: "none",
                levels: resolved.levels,
                evaluations: 0,
                invalid_evaluations: 0,
            };
            write_text(report_path, &report::fuse_report_json(&metrics, &meta))?;
        }
        if args.verbose > 0 {
            eprintln!("fused with fixed weights -> {}", args.out.display());
        }
        return Ok(());
    }

    let job = FusionJob {
        source_a: a,
        source_b: b,
        levels: resolved.levels,
        swarm: resolved.swarm.clone(),
        selection,
        dump_archive: args.dump_archive.is_some(),
    };
    if args.verbose > 0 {
        eprintln!(
            "fusing {}x{} at L={} with {} (np={}, gmax={}, seed={})",
            job.source_a.width(),
            job.source_a.height(),
            job.levels,
            mode_name(job.swarm.mode),
            job.swarm.np,
            job.swarm.gmax,
            job.swarm.seed
        );
    }
    let started = Instant::now();
    let result = pipeline::run_fusion_with(&job, &PoolStrategy::from_env())?;
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    save_image(&result.fused, &args.out)?;
    if let Some(report_path) = &args.report {
        let meta = report::FuseReportMeta {
            weights: &result.weights,
            archive_size: result.archive_size,
            seed: job.swarm.seed,
            mode: mode_name(job.swarm.mode),
            selection: match selection {
                Selection::Compromise => "compromise",
                Selection::MaxEntropy => "max-entropy",
                Selection::Index(_) => "index",
            },
            levels: job.levels,
            evaluations: result.evaluations,
            invalid_evaluations: result.invalid_evaluations,
        };
        write_text(report_path, &report::fuse_report_json(&result.report, &meta))?;
    }
    if let Some(dump_path) = &args.dump_archive {
        let dump = result.archive_dump.as_deref().unwrap_or(&[]);
        write_text(dump_path, &report::archive_csv(dump))?;
    }
    if args.verbose > 0 {
        eprintln!(
            "archive {} members, {} evaluations, {:.1}s -> {}",
            result.archive_size,
            result.evaluations,
            started.elapsed().as_secs_f64(),
            args.out.display()
        );
    }
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), AppError> {
    let reference = load_image(&args.reference)?;
    let test = load_image(&args.test)?;
    let r = fusewave_core::metrics::report(&test, &reference, &reference)?;
    let text = match args.format {
        FormatArg::Json => report::metrics_json_string(&r),
        FormatArg::Csv => report::metrics_csv(&r),
        FormatArg::Text => report::metrics_text(&r),
    };
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    Ok(())
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), AppError> {
    if args.levels < 1 || args.levels > dtcwt::MAX_LEVELS {
        return Err(AppError::Usage(format!(
            "levels {} outside [1, {}]",
            args.levels,
            dtcwt::MAX_LEVELS
        )));
    }
    let img = load_image(&args.input)?;
    let (padded, original) = img.pad_to_multiple(1 << args.levels);
    let pyramid = dtcwt::forward(&padded, args.levels)?;
    container::write_pyramid(&args.out, &pyramid, original, img.depth())?;
    Ok(())
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<(), AppError> {
    let stored = container::read_pyramid(&args.input)?;
    let rec = dtcwt::inverse(&stored.pyramid)?;
    let cropped = rec.crop(stored.original);
    save_image(&cropped, &args.out)?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), AppError> {
    let resolved = args.swarm.resolve()?;
    let a = load_image(&args.a)?;
    let b = load_image(&args.b)?;
    let pool = PoolStrategy::from_env();
    let mut csv = String::from(report::BENCH_HEADER);
    let base_seed = resolved.swarm.seed;
    for seed_index in 0..args.seeds {
        let seed = base_seed + seed_index;
        for mode in [SwarmMode::Apso, SwarmMode::PlainPso] {
            let mut swarm = resolved.swarm.clone();
            swarm.seed = seed;
            swarm.mode = mode;
            let job = FusionJob {
                source_a: a.clone(),
                source_b: b.clone(),
                levels: resolved.levels,
                swarm,
                selection: Selection::Compromise,
                dump_archive: false,
            };
            let started = Instant::now();
            let result = pipeline::run_fusion_with(&job, &pool)?;
            let wall_ms = started.elapsed().as_millis();
            csv.push_str(&report::bench_row(
                seed,
                mode_name(mode),
                &result.report,
                wall_ms,
            ));
            if args.verbose > 0 {
                eprintln!(
                    "seed {seed} {}: EN={:.4} RMSE={:.4} ({} ms)",
                    mode_name(mode),
                    result.report.entropy,
                    result.report.rmse,
                    wall_ms
                );
            }
        }
    }
    write_text(&args.out, &csv)?;
    Ok(())
}

fn cmd_gen_testpair(args: GenArgs) -> Result<(), AppError> {
    std::fs::create_dir_all(&args.out_dir).map_err(|source| AppError::Write {
        path: args.out_dir.display().to_string(),
        source,
    })?;
    let (ct, mr) = testpair::generate_pair();
    save_image(&ct, &args.out_dir.join("ct_256.pgm"))?;
    save_image(&mr, &args.out_dir.join("mr_256.pgm"))?;
    Ok(())
}

/// Convenience for tests: fuse two in-memory images with desk settings.
pub fn desk_job(a: Image, b: Image, seed: u64, mode: SwarmMode) -> FusionJob {
    let levels = 3;
    FusionJob {
        source_a: a,
        source_b: b,
        levels,
        swarm: SwarmConfig {
            np: 20,
            gmax: 30,
            seed,
            mode,
            ..SwarmConfig::paper_defaults(1 + 6 * levels)
        },
        selection: Selection::Compromise,
        dump_archive: false,
    }
}
