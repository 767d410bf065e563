//! Command-line front end: data generation, training, evaluation and
//! ablation studies driven by JSON experiment configs.
//!
//! Exit codes are 0 on success, 2 for usage and configuration errors and
//! 1 for runtime failures.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::{DataSource, ExperimentConfig, GuideSource, PrototypeChoice, ResolvedExperiment, ResolvedGuide};

use crate::data::{gen_gaussian_mixture, load_csv, load_gfv1, save_gfv1, DatasetBundle, MixtureParams};
use crate::error::{GucError, Result};
use crate::eval::{ablate_binning, ablate_hamming, evaluate, AblationReport, EvalReport, HammingCondition};
use crate::model::{load_checkpoint, save_checkpoint, ModelMode};
use crate::training::{train_baseline, train_prototype, train_texture, EpochMetrics, StepCounts, TrainConfig, TrainOutcome};

pub const CHECKPOINT_FILE: &str = "checkpoint.gucw";
pub const METRICS_FILE: &str = "metrics.jsonl";
pub const REPORT_FILE: &str = "report.json";
pub const ABLATION_FILE: &str = "ablation.json";

#[derive(Debug, Parser)]
#[command(name = "gucnet", version, about = "Guided-clustering classifier experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    /// Heavily overlapping classes (defaults: 7 classes, sigma 0.9, seed 1).
    Cluttered,
    /// Well-separated guide clusters (defaults: 10 classes, sigma 0.05, seed 2).
    Separable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    Hamming,
    Binning,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic Gaussian-mixture dataset as GFV1.
    GenData(GenDataArgs),
    /// Train from an experiment config; writes checkpoint, metrics and report.
    Train(TrainArgs),
    /// Evaluate a checkpoint on a GFV1 or CSV dataset.
    Eval(EvalArgs),
    /// Run the prototype-separation or co-binning study.
    Ablate(AblateArgs),
}

#[derive(Debug, clap::Args)]
pub struct GenDataArgs {
    #[arg(long, value_enum, default_value = "cluttered")]
    pub kind: DataKind,
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, default_value_t = 400)]
    pub per_class: usize,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

impl GenDataArgs {
    pub fn params(&self) -> MixtureParams {
        let (classes, sigma, seed) = match self.kind {
            DataKind::Cluttered => (7, 0.9, 1),
            DataKind::Separable => (10, 0.05, 2),
        };
        MixtureParams {
            classes: self.classes.unwrap_or(classes),
            dim: self.dim,
            per_class: self.per_class,
            radius: self.radius,
            sigma: self.sigma.unwrap_or(sigma) * self.radius,
            seed: self.seed.unwrap_or(seed),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    pub config: PathBuf,
    /// Overrides the config's output directory.
    #[arg(short = 'o', long = "output-dir")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    pub checkpoint: PathBuf,
    /// GFV1 file, or CSV when the extension is `.csv`.
    pub data: PathBuf,
    /// CSV label column (default: last).
    #[arg(long)]
    pub label_column: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct AblateArgs {
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub study: Study,
    /// Shuffle seeds for the binning study.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
    pub shuffle_seeds: Vec<u64>,
    /// Maximum number of conditions trained concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(short = 'o', long = "output-dir")]
    pub output_dir: Option<PathBuf>,
}

/// Final summary written to `report.json` and printed by `train`.
#[derive(Debug, Clone, Serialize)]
pub struct TrainReport {
    pub mode: ModelMode,
    pub dataset: String,
    pub test_accuracy: f64,
    pub report: EvalReport,
    pub final_epoch: Option<EpochMetrics>,
    pub steps: StepCounts,
    pub split_fingerprint: String,
    pub config: TrainConfig,
}

/// Exit code for an error: 2 for configuration problems, 1 otherwise.
pub fn exit_code(err: &GucError) -> i32 {
    match err {
        GucError::Config(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match cmd {
        Command::GenData(a) => {
            let bundle = cmd_gen_data(&a)?;
            writeln!(out, "N={} D={} C={}", bundle.len(), bundle.dim(), bundle.num_classes())
                .map_err(|e| GucError::io("<stdout>", e))?;
        }
        Command::Train(a) => {
            let report = cmd_train(&a.config, a.output_dir.as_deref())?;
            write_json_line(&mut out, &report)?;
        }
        Command::Eval(a) => {
            let report = cmd_eval(&a.checkpoint, &a.data, a.label_column)?;
            write_json_line(&mut out, &report)?;
        }
        Command::Ablate(a) => {
            let report = cmd_ablate(&a.config, a.study, &a.shuffle_seeds, a.jobs, a.output_dir.as_deref())?;
            write_json_line(&mut out, &report)?;
        }
    }
    Ok(())
}

fn write_json_line<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<()> {
    let text = serde_json::to_string(value).expect("report serializes");
    writeln!(w, "{text}").map_err(|e| GucError::io("<stdout>", e))
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| GucError::io(path, e))
}

fn config_base(config_path: &Path) -> PathBuf {
    config_path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn cmd_gen_data(args: &GenDataArgs) -> Result<DatasetBundle> {
    let bundle = gen_gaussian_mixture(&args.params())?;
    save_gfv1(&bundle, &args.output)?;
    Ok(bundle)
}

/// Writes one JSON object per epoch.
pub fn write_metrics_jsonl<W: Write>(metrics: &[EpochMetrics], w: W) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    for m in metrics {
        serde_json::to_writer(&mut w, m)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Runs the configured training and returns the outcome without writing
/// anything.
pub fn run_experiment(exp: &ResolvedExperiment) -> Result<TrainOutcome> {
    match &exp.guide {
        ResolvedGuide::None => train_baseline(&exp.data, &exp.train),
        ResolvedGuide::Prototypes(g) => train_prototype(&exp.data, g, &exp.train),
        ResolvedGuide::Texture { data, binning } => train_texture(&exp.data, data, binning, &exp.train),
    }
}

pub fn cmd_train(config_path: &Path, output_dir: Option<&Path>) -> Result<TrainReport> {
    let cfg = ExperimentConfig::from_path(config_path)?;
    let exp = cfg.resolve(&config_base(config_path))?;
    let dir = output_dir
        .map(Path::to_path_buf)
        .or_else(|| exp.output_dir.clone())
        .ok_or_else(|| GucError::Config("no output directory: set \"output_dir\" or pass --output-dir".into()))?;
    std::fs::create_dir_all(&dir).map_err(|e| GucError::io(&dir, e))?;

    let outcome = run_experiment(&exp)?;
    save_checkpoint(&outcome.model, dir.join(CHECKPOINT_FILE))?;
    let metrics_path = dir.join(METRICS_FILE);
    let file = File::create(&metrics_path).map_err(|e| GucError::io(&metrics_path, e))?;
    write_metrics_jsonl(&outcome.metrics, file).map_err(|e| GucError::io(&metrics_path, e))?;

    let report = TrainReport {
        mode: exp.train.mode,
        dataset: exp.data.name().to_string(),
        test_accuracy: outcome.final_report.accuracy,
        report: outcome.final_report.clone(),
        final_epoch: outcome.metrics.last().cloned(),
        steps: outcome.steps,
        split_fingerprint: format!("{:016x}", outcome.split.fingerprint()),
        config: exp.train.clone(),
    };
    write_json_file(&dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

pub fn load_dataset(path: &Path, label_column: Option<usize>) -> Result<DatasetBundle> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        load_csv(path, label_column)
    } else {
        load_gfv1(path)
    }
}

pub fn cmd_eval(checkpoint: &Path, data: &Path, label_column: Option<usize>) -> Result<EvalReport> {
    let model = load_checkpoint(checkpoint)?;
    let bundle = load_dataset(data, label_column)?;
    if bundle.num_classes() > model.num_classes() {
        return Err(GucError::ClassCountMismatch(format!(
            "data has {} classes, checkpoint predicts {}",
            bundle.num_classes(),
            model.num_classes()
        )));
    }
    evaluate(&model, bundle.features(), bundle.labels())
}

pub fn cmd_ablate(
    config_path: &Path,
    study: Study,
    shuffle_seeds: &[u64],
    jobs: usize,
    output_dir: Option<&Path>,
) -> Result<AblationReport> {
    let cfg = ExperimentConfig::from_path(config_path)?;
    let expected = match study {
        Study::Hamming => ModelMode::Prototype,
        Study::Binning => ModelMode::Texture,
    };
    if cfg.mode != expected {
        return Err(GucError::Config(format!(
            "the {study:?} study needs a {expected:?} config, got {:?}",
            cfg.mode
        )
        .to_lowercase()));
    }
    if jobs == 0 {
        return Err(GucError::Config("--jobs must be >= 1".into()));
    }
    let exp = cfg.resolve(&config_base(config_path))?;
    let report = match (&exp.guide, study) {
        (ResolvedGuide::Prototypes(_), Study::Hamming) => {
            ablate_hamming(&exp.data, &exp.train, &HammingCondition::ALL, jobs)?
        }
        (ResolvedGuide::Texture { data, .. }, Study::Binning) => {
            if shuffle_seeds.is_empty() {
                return Err(GucError::Config("the binning study needs at least one shuffle seed".into()));
            }
            ablate_binning(&exp.data, data, &exp.train, shuffle_seeds, jobs)?
        }
        _ => unreachable!("guide checked against mode"),
    };
    if let Some(dir) = output_dir.map(Path::to_path_buf).or(exp.output_dir) {
        std::fs::create_dir_all(&dir).map_err(|e| GucError::io(&dir, e))?;
        write_json_file(&dir.join(ABLATION_FILE), &report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_data_defaults_follow_kind() {
        let cli = Cli::try_parse_from(["gucnet", "gen-data", "--kind", "separable", "-o", "y.gfv1"]).unwrap();
        let Command::GenData(a) = cli.command else { panic!() };
        let p = a.params();
        assert_eq!((p.classes, p.sigma, p.seed), (10, 0.05, 2));
        let cli = Cli::try_parse_from(["gucnet", "gen-data", "--sigma", "0.5", "--radius", "2", "-o", "x"]).unwrap();
        let Command::GenData(a) = cli.command else { panic!() };
        assert_eq!(a.params().sigma, 1.0);
    }

    #[test]
    fn missing_output_is_usage_error() {
        assert_eq!(run(["gucnet", "gen-data", "--classes", "3"]), 2);
        assert_eq!(run(["gucnet", "bogus"]), 2);
    }

    #[test]
    fn config_errors_exit_two() {
        assert_eq!(exit_code(&GucError::Config("x".into())), 2);
        assert_eq!(exit_code(&GucError::Truncated("x".into())), 1);
    }

    #[test]
    fn shuffle_seed_list() {
        let cli = Cli::try_parse_from(["gucnet", "ablate", "c.json", "--study", "binning", "--shuffle-seeds", "4,5"]).unwrap();
        let Command::Ablate(a) = cli.command else { panic!() };
        assert_eq!(a.shuffle_seeds, vec![4, 5]);
        assert_eq!(a.study, Study::Binning);
    }
}
