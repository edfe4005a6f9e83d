use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use imbalforest::pipeline::{
    self, cmd_evaluate, cmd_prepare, cmd_run, cmd_synth, with_threads, InputSource, Mode,
    RunConfig, RunOptions, SYNTHETIC_CSV,
};
use imbalforest::{Error, SynthSpec};

#[derive(Parser)]
#[command(name = "imbalforest", version, about = "Random forest fraud detection on imbalanced data")]
struct Cli {
    /// JSON run config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = pipeline::THREADS_ENV)]
    threads: Option<usize>,
    /// Leave wall-clock timings out of report.json.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Override a config value, e.g. `--set smote.k=3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic processed dataset.
    Synth,
    /// Ingest, encode and drop columns; write processed.csv and the heatmap.
    Prepare,
    /// Full pipeline: split, SMOTE, tune, train, evaluate.
    Run,
    /// Score a saved model on a processed dataset.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
}

fn load_config(cli: &Cli) -> imbalforest::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::new(InputSource::Synth(SynthSpec::default())),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(mode) = cli.mode {
        cfg.mode = mode;
    }
    let mut cfg = cfg.with_overrides(&cli.set)?;
    cfg.out_dir = Some(cli.out.clone());
    Ok(cfg)
}

fn fmt(v: Option<f64>) -> String {
    v.map_or("undefined".into(), |v| format!("{v:.4}"))
}

fn execute(cli: &Cli) -> imbalforest::Result<()> {
    match &cli.command {
        Command::Synth => {
            let cfg = load_config(cli)?;
            let InputSource::Synth(spec) = &cfg.input else {
                return Err(Error::Config("synth needs a `synth` input".into()));
            };
            let path = cli.out.join(SYNTHETIC_CSV);
            let ds = cmd_synth(spec, cfg.seed, &path)?;
            let [legit, fraud] = ds.class_counts();
            println!("{}: {} rows ({legit} legit, {fraud} fraud)", path.display(), ds.n_rows());
        }
        Command::Prepare => {
            for f in cmd_prepare(&load_config(cli)?)?.files {
                println!("{}", f.display());
            }
        }
        Command::Run => {
            let cfg = load_config(cli)?;
            let out = cmd_run(&cfg, RunOptions { timing: !cli.no_timing })?;
            let r = &out.report;
            if let Some(w) = &r.leakage_warning {
                eprintln!("warning: {w}");
            }
            let fraud = &r.class_report.classes[1];
            println!(
                "accuracy {:.4}  fraud precision {}  recall {}  f1 {}  auc {:.4}",
                r.class_report.accuracy,
                fmt(fraud.precision),
                fmt(fraud.recall),
                fmt(fraud.f1),
                r.auc
            );
            println!("outputs in {}", cli.out.display());
        }
        Command::Evaluate { model, data, threshold } => {
            let r = cmd_evaluate(model, data, *threshold, Some(&cli.out))?;
            let fraud = &r.class_report.classes[1];
            println!(
                "{} rows  accuracy {:.4}  fraud f1 {}  auc {}",
                r.rows,
                r.class_report.accuracy,
                fmt(fraud.f1),
                r.auc.map_or("n/a".into(), |a| format!("{a:.4}"))
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => with_threads(n, || execute(&cli)).and_then(|r| r),
        None => execute(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
