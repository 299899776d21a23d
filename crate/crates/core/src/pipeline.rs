//! The composed stages behind each `healthmine` subcommand.
//!
//! Every `run_*` function reads its inputs from a [`Config`], writes its
//! artifacts under `output_dir` and returns a summary that the command
//! line tool prints. The in-memory halves ([`ingest`], [`train`],
//! [`evaluate`]) are usable without touching the filesystem.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::cart::{self, Dataset};
use crate::config::Config;
use crate::corpus::{self, CorpusEntry, LabeledTweet};
use crate::geo::{self, AuditSampler, DailyCounter, GridCounter, ReplayStats};
use crate::metrics::{self, Evaluation, ScoredLabel};
use crate::model::TextModel;
use crate::query::Query;
use crate::seed;
use crate::text::{self, Stopwords, TermDocMatrix, TokenizedDoc};
use crate::{Error, Result};

/// Minimum correlation listed in `associations.csv`.
pub const ASSOCIATION_THRESHOLD: f64 = 0.2;

pub const CLEANED_FILE: &str = "cleaned.ndjson";
pub const MODEL_FILE: &str = "model.json";
pub const HITS_FILE: &str = "hits.ndjson";
pub const AUDIT_FILE: &str = "audit.ndjson";

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing CSV to memory cannot fail");
    buf
}

fn stopwords(cfg: &Config) -> Result<Stopwords> {
    match &cfg.stopwords {
        Some(p) => Ok(Stopwords::load(p)?),
        None => Ok(Stopwords::bahasa()),
    }
}

fn out_path(cfg: &Config, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

// ingest -----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestSummary {
    pub loaded: usize,
    pub after_dedupe: usize,
    pub after_retweets: usize,
    pub after_lang: usize,
    /// Present when a query filter was applied.
    pub after_query: Option<usize>,
}

impl IngestSummary {
    pub fn kept(&self) -> usize {
        self.after_query.unwrap_or(self.after_lang)
    }
}

impl fmt::Display for IngestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "loaded          {}", self.loaded)?;
        writeln!(f, "after dedupe    {}", self.after_dedupe)?;
        writeln!(f, "after retweets  {}", self.after_retweets)?;
        write!(f, "after lang      {}", self.after_lang)?;
        if let Some(n) = self.after_query {
            write!(f, "\nafter query     {n}")?;
        }
        Ok(())
    }
}

/// Dedupe, drop retweets, keep `lang`, then optionally keep records
/// matching `query`.
pub fn ingest(
    entries: Vec<CorpusEntry>,
    lang: &str,
    query: Option<&Query>,
) -> (Vec<CorpusEntry>, IngestSummary) {
    let loaded = entries.len();
    let entries = corpus::dedupe(entries);
    let after_dedupe = entries.len();
    let entries = corpus::drop_retweets(entries);
    let after_retweets = entries.len();
    let mut entries = corpus::filter_lang(entries, lang);
    let after_lang = entries.len();
    let after_query = query.map(|q| {
        entries.retain(|e| q.matches(&e.tweet.text));
        entries.len()
    });
    let summary = IngestSummary {
        loaded,
        after_dedupe,
        after_retweets,
        after_lang,
        after_query,
    };
    (entries, summary)
}

/// Writes `cleaned.ndjson`.
pub fn run_ingest(cfg: &Config) -> Result<IngestSummary> {
    let input = cfg.require(&cfg.corpus, "corpus")?;
    let query = cfg.resolve_query()?;
    let entries = corpus::load_entries(input)?;
    let (kept, summary) = ingest(entries, &cfg.lang, query.as_ref());
    let mut buf = Vec::new();
    corpus::write_entries(&mut buf, &kept).expect("writing to memory cannot fail");
    write_file(&out_path(cfg, CLEANED_FILE), buf)?;
    Ok(summary)
}

// vocab ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VocabSummary {
    pub documents: usize,
    pub terms: usize,
    pub associations: usize,
}

impl fmt::Display for VocabSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "documents {}\nterms {}\nassociations {}",
            self.documents, self.terms, self.associations
        )
    }
}

fn tokenize_all<'a>(
    records: impl IntoIterator<Item = &'a corpus::TweetRecord>,
    sw: &Stopwords,
) -> Vec<TokenizedDoc> {
    records
        .into_iter()
        .map(|t| TokenizedDoc::from_text(t.id.clone(), &t.text, sw))
        .collect()
}

/// `term,partner,correlation` for every term pair reaching
/// [`ASSOCIATION_THRESHOLD`], terms in vocabulary order and partners
/// strongest first.
pub fn associations(tdm: &TermDocMatrix) -> Vec<(String, String, f64)> {
    let mut out = Vec::new();
    for term in tdm.vocabulary().names() {
        let found = text::top_associations(tdm, &term, ASSOCIATION_THRESHOLD)
            .expect("term comes from the vocabulary");
        out.extend(found.into_iter().map(|(p, r)| (term.clone(), p, r)));
    }
    out
}

/// Writes `vocab.csv`, `tdm.csv` and `associations.csv` for the corpus as
/// given (run `ingest` first to clean it).
pub fn run_vocab(cfg: &Config) -> Result<VocabSummary> {
    let input = cfg.require(&cfg.corpus, "corpus")?;
    let sw = stopwords(cfg)?;
    let records = corpus::load_corpus(input)?;
    let docs = tokenize_all(&records, &sw);
    let vocab = text::build_vocab(&docs, cfg.min_freq);
    if vocab.is_empty() {
        return Err(Error::Degenerate(format!(
            "no term reaches min_freq {} in {} documents",
            cfg.min_freq,
            docs.len()
        )));
    }
    write_file(
        &out_path(cfg, "vocab.csv"),
        csv_bytes(|w| vocab.write_csv(w)),
    )?;
    let terms = vocab.len();
    let tdm = TermDocMatrix::build(&docs, vocab);
    write_file(&out_path(cfg, "tdm.csv"), csv_bytes(|w| tdm.write_csv(w)))?;
    let pairs = associations(&tdm);
    let assoc = csv_bytes(|w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["term", "partner", "correlation"])?;
        for (a, b, r) in &pairs {
            w.write_record([a.as_str(), b.as_str(), &format!("{r:.6}")])?;
        }
        w.flush()?;
        Ok(())
    });
    write_file(&out_path(cfg, "associations.csv"), assoc)?;
    Ok(VocabSummary {
        documents: docs.len(),
        terms,
        associations: pairs.len(),
    })
}

// train ------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: TextModel,
    pub n_train: usize,
    pub n_valid: usize,
    pub validation: Evaluation,
    pub warnings: Vec<String>,
}

impl TrainOutcome {
    /// Split sizes, the validation table and the fitted tree.
    pub fn report(&self) -> String {
        let tree = self.model.tree();
        format!(
            "n_train {}\nn_valid {}\nterms {}\n\n{}\ntree: {} nodes, {} leaves, depth {}\n{}",
            self.n_train,
            self.n_valid,
            self.model.vocabulary().len(),
            metrics::format_table(&[("Validation", &self.validation)]),
            tree.n_nodes(),
            tree.n_leaves(),
            tree.depth(),
            tree.describe()
        )
    }
}

fn require_both_classes(labels: &[bool], what: &str) -> Result<()> {
    let n_true = labels.iter().filter(|&&l| l).count();
    if n_true == 0 || n_true == labels.len() {
        return Err(Error::Degenerate(format!(
            "{what} labels are all {}; both classes are needed",
            if n_true == 0 { "FALSE" } else { "TRUE" }
        )));
    }
    Ok(())
}

fn scored(
    model: &TextModel,
    records: &[LabeledTweet],
    sw: &Stopwords,
) -> (Vec<ScoredLabel>, Vec<bool>) {
    records
        .iter()
        .map(|r| {
            let (pred, p) = model.classify(&r.tweet.text, sw);
            (ScoredLabel::new(p, r.label), pred)
        })
        .unzip()
}

/// Vocabulary over all records, seeded train/validation split, grow and
/// prune on the training fold, evaluate on the validation fold.
pub fn train(records: &[LabeledTweet], sw: &Stopwords, cfg: &Config) -> Result<TrainOutcome> {
    let labels: Vec<bool> = records.iter().map(|r| r.label).collect();
    if records.is_empty() {
        return Err(Error::Degenerate("labeled corpus is empty".into()));
    }
    require_both_classes(&labels, "corpus")?;
    let docs = tokenize_all(records.iter().map(|r| &r.tweet), sw);
    let vocab = text::build_vocab(&docs, cfg.min_freq);
    if vocab.is_empty() {
        return Err(Error::Degenerate(format!(
            "no term reaches min_freq {}; the vocabulary is empty",
            cfg.min_freq
        )));
    }
    let mut tdm = TermDocMatrix::build(&docs, vocab.clone());
    if cfg.binary_features {
        tdm = tdm.binarized();
    }
    let data = Dataset::new(tdm.rows().to_vec(), labels, vocab.names())?;
    let (train_idx, valid_idx) = cart::split_indices(
        data.n_rows(),
        cfg.train_fraction,
        seed::derive(cfg.seed, "split"),
    )?;
    let train_set = data.subset(&train_idx)?;
    require_both_classes(train_set.labels(), "training")?;

    let mut params = cfg.fit.clone();
    params.seed = cfg.seed;
    let warnings = params.validate()?;
    let grown = cart::grow(&train_set, &params)?;
    let tree = cart::prune(&grown, params.cp);
    let model = TextModel::new(tree, vocab, cfg.binary_features)?;

    let valid: Vec<LabeledTweet> = valid_idx.iter().map(|&i| records[i].clone()).collect();
    let (scores, preds) = scored(&model, &valid, sw);
    let validation = Evaluation::from_scores(&scores, &preds)?;
    Ok(TrainOutcome {
        model,
        n_train: train_idx.len(),
        n_valid: valid_idx.len(),
        validation,
        warnings,
    })
}

/// Writes `model.json`, `validation_report.csv` and
/// `validation_report.txt`.
pub fn run_train(cfg: &Config) -> Result<TrainOutcome> {
    let input = cfg.require(&cfg.corpus, "corpus")?;
    let sw = stopwords(cfg)?;
    let records = corpus::load_labeled(input)?;
    let outcome = train(&records, &sw, cfg)?;
    let model_path = cfg
        .model
        .clone()
        .unwrap_or_else(|| out_path(cfg, MODEL_FILE));
    write_file(&model_path, outcome.model.to_json())?;
    let mut csv = csv_bytes(|w| metrics::write_report_csv(w, &outcome.validation));
    csv.extend(format!("n_train,{}\nn_valid,{}\n", outcome.n_train, outcome.n_valid).bytes());
    write_file(&out_path(cfg, "validation_report.csv"), csv)?;
    write_file(&out_path(cfg, "validation_report.txt"), outcome.report())?;
    Ok(outcome)
}

// evaluate ---------------------------------------------------------------

pub fn evaluate(model: &TextModel, records: &[LabeledTweet], sw: &Stopwords) -> Result<Evaluation> {
    let (scores, preds) = scored(model, records, sw);
    Ok(Evaluation::from_scores(&scores, &preds)?)
}

#[derive(Debug, Clone)]
pub struct EvaluateOutcome {
    pub columns: Vec<(String, Evaluation)>,
}

impl EvaluateOutcome {
    pub fn table(&self) -> String {
        let cols: Vec<(&str, &Evaluation)> =
            self.columns.iter().map(|(n, e)| (n.as_str(), e)).collect();
        metrics::format_table(&cols)
    }
}

/// Evaluates the model on `corpus` (column "Validation") and, when
/// configured, on `testing` (column "Testing"). Writes `report.csv`
/// (plus `report_testing.csv`) and `report.txt`.
pub fn run_evaluate(cfg: &Config) -> Result<EvaluateOutcome> {
    let model_path = cfg
        .model
        .clone()
        .unwrap_or_else(|| out_path(cfg, MODEL_FILE));
    let model = TextModel::load(&model_path)?;
    let sw = stopwords(cfg)?;
    let mut sources = vec![(
        "Validation",
        "report.csv",
        cfg.require(&cfg.corpus, "corpus")?,
    )];
    if let Some(t) = &cfg.testing {
        sources.push(("Testing", "report_testing.csv", t.as_path()));
    }
    let mut columns = Vec::new();
    for (name, file, path) in sources {
        let records = corpus::load_labeled(path)?;
        let eval = evaluate(&model, &records, &sw)?;
        write_file(
            &out_path(cfg, file),
            csv_bytes(|w| metrics::write_report_csv(w, &eval)),
        )?;
        columns.push((name.to_string(), eval));
    }
    let outcome = EvaluateOutcome { columns };
    write_file(&out_path(cfg, "report.txt"), outcome.table())?;
    Ok(outcome)
}

// replay and audit -------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ReplaySummary {
    pub stats: ReplayStats,
    pub cells: usize,
    pub days: usize,
    pub audit_rows: Option<usize>,
}

impl fmt::Display for ReplaySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.stats;
        writeln!(f, "seen            {}", s.seen)?;
        writeln!(f, "no coordinates  {}", s.no_coordinates)?;
        writeln!(f, "outside bbox    {}", s.outside_bbox)?;
        writeln!(f, "query rejected  {}", s.query_rejected)?;
        writeln!(f, "hits            {}", s.emitted)?;
        writeln!(f, "predicted TRUE  {}", s.predicted_true)?;
        writeln!(f, "grid cells      {}", self.cells)?;
        write!(f, "days            {}", self.days)?;
        if let Some(n) = self.audit_rows {
            write!(f, "\naudit rows      {n}")?;
        }
        Ok(())
    }
}

/// Streams the corpus through the model once, writing `hits.ndjson`,
/// `grid.csv`, `grid.geojson`, `daily.csv` and, when `audit` is set,
/// `audit.ndjson`.
pub fn run_replay(cfg: &Config) -> Result<ReplaySummary> {
    let grid = cfg.grid()?;
    let model_path = cfg
        .model
        .clone()
        .unwrap_or_else(|| out_path(cfg, MODEL_FILE));
    let model = TextModel::load(&model_path)?;
    let sw = stopwords(cfg)?;
    let query = cfg.resolve_query()?;
    let records = corpus::load_corpus(cfg.require(&cfg.corpus, "corpus")?)?;

    let mut grid_counter = GridCounter::new(grid, cfg.predicted_only);
    let mut daily = DailyCounter::new(cfg.predicted_only);
    let mut sampler = cfg.audit.map(|(t, f)| AuditSampler::new(t, f, cfg.seed));
    let mut hits_out = Vec::new();

    let mut stream = geo::replay(&records, &model, &sw, cfg.bbox, query.as_ref());
    for hit in stream.by_ref() {
        hits_out.extend(hit.to_line().bytes());
        hits_out.push(b'\n');
        grid_counter.push(&hit);
        daily.push(&hit);
        if let Some(s) = sampler.as_mut() {
            s.push(&hit);
        }
    }
    let stats = stream.stats();

    let audit = sampler.map(AuditSampler::finish).transpose()?;
    let window = cfg.window.or_else(|| geo::corpus_window(&records));
    let series = daily.finish(window);
    let counts = grid_counter.into_counts();

    write_file(&out_path(cfg, HITS_FILE), hits_out)?;
    write_file(
        &out_path(cfg, "grid.csv"),
        csv_bytes(|w| geo::write_grid_csv(w, &counts, &grid)),
    )?;
    let mut geojson = serde_json::to_string_pretty(&geo::grid_geojson(&counts, &grid))
        .expect("GeoJSON serialization is infallible");
    geojson.push('\n');
    write_file(&out_path(cfg, "grid.geojson"), geojson)?;
    write_file(
        &out_path(cfg, "daily.csv"),
        csv_bytes(|w| geo::write_daily_csv(w, &series)),
    )?;
    let audit_rows = match audit {
        Some(sample) => {
            write_audit(cfg, &sample)?;
            Some(sample.len())
        }
        None => None,
    };
    Ok(ReplaySummary {
        stats,
        cells: counts.len(),
        days: series.len(),
        audit_rows,
    })
}

fn write_audit(cfg: &Config, sample: &[geo::ClassifiedHit]) -> Result<()> {
    let mut buf = Vec::new();
    geo::write_hits(&mut buf, sample).expect("writing to memory cannot fail");
    write_file(&out_path(cfg, AUDIT_FILE), buf)
}

/// Draws the stratified sample from an existing hits file (`hits`, or
/// `hits.ndjson` in the output directory) and writes `audit.ndjson`.
pub fn run_audit(cfg: &Config) -> Result<usize> {
    let (n_true, n_false) = cfg
        .audit
        .ok_or(crate::config::ConfigError::Missing("audit"))?;
    let path = cfg.hits.clone().unwrap_or_else(|| out_path(cfg, HITS_FILE));
    let hits = geo::load_hits(&path)?;
    let sample = geo::audit_sample(&hits, n_true, n_false, cfg.seed)?;
    write_audit(cfg, &sample)?;
    Ok(sample.len())
}
