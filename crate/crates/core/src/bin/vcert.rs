use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use verbal_certainty::pipeline::{Pipeline, RunConfig, Stage, CONFIG_ENV};
use verbal_certainty::Error;

/// Language-certainty scoring and bibliometric analysis pipeline.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Run config (TOML).
    #[arg(short, long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,

    /// Override the config's output directory.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the machine's parallelism. Outputs do not depend on it.
    #[arg(short, long, global = true)]
    workers: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and index the corpus.
    Ingest,
    /// Split abstracts, tag conclusions and score certainty.
    Score,
    /// Team size, gender, interdisciplinarity, country and bibliometric features.
    Features,
    /// Subfield coauthorship graphs: centrality and echo-chamber metrics.
    Network,
    /// Annual averages, yearly correlations, tweet groups and geography.
    Analyze,
    /// Figure-analog data files and their manifest.
    Report,
    /// Every stage in order.
    Run,
    /// Print a default config for a corpus.
    InitConfig {
        corpus: PathBuf,
        #[arg(long, default_value = "vcert-out")]
        output_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    if let Command::InitConfig { corpus, output_dir } = &cli.command {
        print!("{}", RunConfig::new(corpus, output_dir).to_toml()?);
        return Ok(());
    }
    let path = cli
        .config
        .ok_or_else(|| Error::Config(format!("no config given; pass --config or set {CONFIG_ENV}")))?;
    let mut cfg = RunConfig::load(&path)?;
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    let pipeline = Pipeline::new(cfg)?;
    let stages: Vec<Stage> = match cli.command {
        Command::Ingest => vec![Stage::Ingest],
        Command::Score => vec![Stage::Score],
        Command::Features => vec![Stage::Features],
        Command::Network => vec![Stage::Network],
        Command::Analyze => vec![Stage::Analyze],
        Command::Report => vec![Stage::Report],
        Command::Run => Stage::ALL.to_vec(),
        Command::InitConfig { .. } => unreachable!(),
    };
    for stage in stages {
        let m = pipeline.run(stage)?;
        eprintln!("{stage}: {} outputs in {}", m.outputs.len(), pipeline.stage_dir(stage).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let stage = match &e {
                Error::Stage { stage, .. } => Some(stage.clone()),
                _ => None,
            };
            let summary = serde_json::json!({ "error": e.kind(), "stage": stage, "message": e.to_string() });
            eprintln!("{summary}");
            ExitCode::FAILURE
        }
    }
}
