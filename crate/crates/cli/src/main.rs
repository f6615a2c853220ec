use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use flbench_core::fault_injector::FaultKind;
use flbench_core::gateway::TaskPhase;
use flbench_core::pipeline::{self, PipelineError, RunConfig, Stage, StageError, StageReport};
use flbench_core::runstore::RunStore;
use flbench_core::source_model::Quartile;

/// Fault-localization benchmark runner: inject faults into seed programs,
/// apply behaviour-preserving mutations, query models and report accuracy.
#[derive(Debug, Parser)]
#[command(name = "flbench", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run directory; overrides `run_dir` in the config.
    #[arg(long, global = true)]
    run_dir: Option<PathBuf>,
    /// RNG seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Concurrent model requests per model.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Comma-separated models to evaluate (roster names or mock:oracle,
    /// mock:random[:seed], mock:q1[:bias[:seed]]).
    #[arg(long, global = true, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Comma-separated filter panel; defaults to every evaluated model.
    #[arg(long, global = true, value_delimiter = ',')]
    panel: Option<Vec<String>>,
    /// Minimum non-blank lines for a seed.
    #[arg(long, global = true)]
    min_loc: Option<usize>,
    /// Maximum estimated prompt tokens for a seed.
    #[arg(long, global = true)]
    max_tokens: Option<usize>,
    /// Comma-separated fault kinds, e.g. OffByOne,OperatorSwap.
    #[arg(long, global = true, value_delimiter = ',')]
    kinds: Option<Vec<FaultKind>>,
    /// Comma-separated quartiles for fault injection and mutation.
    #[arg(long, global = true, value_delimiter = ',')]
    quartiles: Option<Vec<Quartile>>,
    /// Faults per (seed, kind, quartile).
    #[arg(long, global = true)]
    per_combination: Option<usize>,
    /// Comma-separated mutation strengths (1-8).
    #[arg(long, global = true, value_delimiter = ',')]
    strengths: Option<Vec<u8>>,
    /// Mutation content source: `template` or a model name.
    #[arg(long, global = true)]
    content: Option<String>,
    /// Secondary ±k-line accuracy column in reports.
    #[arg(long, global = true)]
    tolerance: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and filter the seed corpus.
    Ingest,
    /// Generate faulty programs and baseline tasks.
    Inject,
    /// Query every configured model on outstanding tasks of one phase.
    Evaluate {
        #[arg(long, default_value = "baseline")]
        phase: TaskPhase,
    },
    /// Drop tasks no panel model localizes.
    Filter,
    /// Apply behaviour-preserving mutations to retained faulty programs.
    Mutate,
    /// Write CSV tables and summary.json into <run-dir>/report.
    Report,
    /// Run every stage in order.
    Pipeline,
}

fn load_config(common: &Common) -> anyhow::Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = &common.run_dir {
        config.run_dir = Some(dir.clone());
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(parallel) = common.parallel {
        config.evaluate.parallel = parallel;
    }
    if let Some(models) = &common.models {
        config.evaluate.models = models.clone();
    }
    if let Some(panel) = &common.panel {
        config.filter.panel = panel.clone();
    }
    if let Some(v) = common.min_loc {
        config.corpus.min_loc = v;
    }
    if let Some(v) = common.max_tokens {
        config.corpus.max_tokens = v;
    }
    if let Some(kinds) = &common.kinds {
        config.inject.kinds = kinds.clone();
    }
    if let Some(quartiles) = &common.quartiles {
        config.inject.quartiles = quartiles.clone();
        config.mutate.quartiles = quartiles.clone();
    }
    if let Some(v) = common.per_combination {
        config.inject.per_combination = v;
    }
    if let Some(strengths) = &common.strengths {
        config.mutate.strengths = strengths.clone();
    }
    if let Some(content) = &common.content {
        config.mutate.content = content.clone();
    }
    if let Some(v) = common.tolerance {
        config.report.tolerance = v;
    }
    config.validate()?;
    Ok(config)
}

fn print_stage(stage: Stage, report: &StageReport) {
    println!(
        "{stage}: {} new, {} already present, {} failed",
        report.new_records, report.skipped, report.failed
    );
}

fn run_stage(store: &mut RunStore, config: &RunConfig, command: &Command) -> Result<(), StageError> {
    let parallel = config.evaluate.parallel;
    let tag = |stage: Stage| move |source: PipelineError| StageError { stage, source };
    let (stage, report) = match command {
        Command::Ingest => (Stage::Ingest, pipeline::ingest(store, config)),
        Command::Inject => (Stage::Inject, pipeline::inject(store, config)),
        Command::Evaluate { phase } => (Stage::Evaluate(*phase), pipeline::evaluate(store, config, *phase, parallel)),
        Command::Filter => (Stage::Filter, pipeline::filter(store, config)),
        Command::Mutate => (Stage::Mutate, pipeline::mutate(store, config)),
        Command::Report => {
            let summary = pipeline::report(store, config).map_err(tag(Stage::Report))?;
            println!("report: {}", summary.files.join(", "));
            return Ok(());
        }
        Command::Pipeline => {
            let summary = pipeline::run_pipeline(store, config, parallel)?;
            println!("report: {}", summary.files.join(", "));
            if let Some(micro) = summary.robustness_micro_pct {
                println!("robustness failure rate: {micro:.2}%");
            }
            return Ok(());
        }
    };
    print_stage(stage, &report.map_err(tag(stage))?);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();

    let config = match load_config(&cli.common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let opened = config
        .run_dir
        .clone()
        .context("no run directory: pass --run-dir or set `run_dir` in the config")
        .and_then(|dir| pipeline::open_run(&dir, &config).with_context(|| format!("opening {}", dir.display())));
    let mut store = match opened {
        Ok(store) => store,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(3);
        }
    };
    match run_stage(&mut store, &config, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
