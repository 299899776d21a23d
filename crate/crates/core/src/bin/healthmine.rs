use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use healthmine::config::Config;
use healthmine::pipeline;
use healthmine::Result;

#[derive(Parser)]
#[command(
    name = "healthmine",
    version,
    about = "Health-event mining over tweet corpora"
)]
struct Cli {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dedupe, drop retweets, keep one language and optionally filter by query.
    Ingest {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        lang: Option<String>,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Vocabulary, term-document matrix and term associations.
    Vocab {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        min_freq: Option<u64>,
    },
    /// Fit and prune a tree and report on the validation fold.
    Train {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        model: ModelPath,
        #[command(flatten)]
        fit: Fit,
    },
    /// Score a labeled corpus with a saved model.
    Evaluate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        model: ModelPath,
        /// Second labeled corpus reported in its own column.
        #[arg(long)]
        testing: Option<PathBuf>,
    },
    /// Classify a geo-bounded corpus in time order and aggregate the hits.
    Replay {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        model: ModelPath,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        geo: Geo,
        /// Stratified sample sizes as `TRUE,FALSE`, e.g. `100,100`.
        #[arg(long)]
        audit: Option<String>,
    },
    /// Draw a stratified sample from a hits file.
    Audit {
        #[arg(long)]
        hits: Option<PathBuf>,
        #[arg(long)]
        audit: Option<String>,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct ModelPath {
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct QueryArgs {
    #[arg(long)]
    query: Option<String>,
    #[arg(long)]
    query_file: Option<PathBuf>,
    /// Built-in protocol name (`paper2016`).
    #[arg(long)]
    protocol: Option<String>,
}

#[derive(Args)]
struct Fit {
    #[arg(long)]
    min_freq: Option<u64>,
    #[arg(long)]
    min_split: Option<usize>,
    #[arg(long)]
    min_bucket: Option<usize>,
    #[arg(long)]
    cp: Option<f64>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    binary_features: bool,
}

#[derive(Args)]
struct Geo {
    /// `lat_min,lat_max,lon_min,lon_max`
    #[arg(long, allow_hyphen_values = true)]
    bbox: Option<String>,
    #[arg(long)]
    cell_deg: Option<f64>,
    /// `YYYY-MM-DD,YYYY-MM-DD`
    #[arg(long)]
    window: Option<String>,
    /// Count only hits predicted TRUE in the grid and daily series.
    #[arg(long)]
    predicted_only: bool,
}

type Overrides = Vec<(&'static str, String)>;

fn push<T: ToString>(o: &mut Overrides, key: &'static str, v: &Option<T>) {
    if let Some(v) = v {
        o.push((key, v.to_string()));
    }
}

fn path(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

impl Input {
    fn apply(&self, o: &mut Overrides) {
        push(o, "corpus", &path(&self.corpus));
        push(o, "stopwords", &path(&self.stopwords));
    }
}

impl QueryArgs {
    fn apply(&self, o: &mut Overrides) {
        push(o, "query", &self.query);
        push(o, "query_file", &path(&self.query_file));
        push(o, "protocol", &self.protocol);
    }
}

impl Command {
    fn overrides(&self) -> Overrides {
        let mut o = Vec::new();
        match self {
            Command::Ingest { input, lang, query } => {
                input.apply(&mut o);
                push(&mut o, "lang", lang);
                query.apply(&mut o);
            }
            Command::Vocab { input, min_freq } => {
                input.apply(&mut o);
                push(&mut o, "min_freq", min_freq);
            }
            Command::Train { input, model, fit } => {
                input.apply(&mut o);
                push(&mut o, "model", &path(&model.model));
                push(&mut o, "min_freq", &fit.min_freq);
                push(&mut o, "min_split", &fit.min_split);
                push(&mut o, "min_bucket", &fit.min_bucket);
                push(&mut o, "cp", &fit.cp);
                push(&mut o, "max_depth", &fit.max_depth);
                push(&mut o, "train_fraction", &fit.train_fraction);
                if fit.binary_features {
                    o.push(("binary_features", "true".into()));
                }
            }
            Command::Evaluate {
                input,
                model,
                testing,
            } => {
                input.apply(&mut o);
                push(&mut o, "model", &path(&model.model));
                push(&mut o, "testing", &path(testing));
            }
            Command::Replay {
                input,
                model,
                query,
                geo,
                audit,
            } => {
                input.apply(&mut o);
                push(&mut o, "model", &path(&model.model));
                query.apply(&mut o);
                push(&mut o, "bbox", &geo.bbox);
                push(&mut o, "cell_deg", &geo.cell_deg);
                push(&mut o, "window", &geo.window);
                if geo.predicted_only {
                    o.push(("predicted_only", "true".into()));
                }
                push(&mut o, "audit", audit);
            }
            Command::Audit { hits, audit } => {
                push(&mut o, "hits", &path(hits));
                push(&mut o, "audit", audit);
            }
        }
        o
    }
}

fn build_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut o = cli.command.overrides();
    push(&mut o, "seed", &cli.seed);
    push(&mut o, "output_dir", &path(&cli.output_dir));
    for (k, v) in o {
        cfg.set(k, &v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<String> {
    let cfg = build_config(cli)?;
    Ok(match cli.command {
        Command::Ingest { .. } => pipeline::run_ingest(&cfg)?.to_string(),
        Command::Vocab { .. } => pipeline::run_vocab(&cfg)?.to_string(),
        Command::Train { .. } => {
            let out = pipeline::run_train(&cfg)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            out.report()
        }
        Command::Evaluate { .. } => pipeline::run_evaluate(&cfg)?.table(),
        Command::Replay { .. } => pipeline::run_replay(&cfg)?.to_string(),
        Command::Audit { .. } => format!("audit rows {}", pipeline::run_audit(&cfg)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if !cli.quiet {
                println!("{}", text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
