//! Text normalization, vocabulary construction, count vectors and term
//! associations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;
use unicode_general_category::{get_general_category, GeneralCategory};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("term `{0}` is not in the vocabulary")]
    UnknownTerm(String),
    #[error("term `{0}` has zero variance across documents, correlation is undefined")]
    ZeroVariance(String),
    #[error("cannot read stopword file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_id.txt");

fn is_stripped(c: char) -> bool {
    let cat = get_general_category(c);
    cat == GeneralCategory::DecimalNumber || matches!(cat.abbreviation().as_bytes()[0], b'P' | b'S')
}

/// Lowercases, replaces punctuation, symbols and decimal digits with
/// spaces, collapses whitespace and trims.
pub fn normalize(text: &str) -> String {
    let replaced: String = text
        .to_lowercase()
        .chars()
        .map(|c| if is_stripped(c) { ' ' } else { c })
        .collect();
    replaced.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn tokenize(normalized: &str) -> Vec<String> {
    normalized.split_whitespace().map(str::to_owned).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// The bundled Bahasa Indonesia list.
    pub fn bahasa() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(contents: &str) -> Self {
        Stopwords(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TextError> {
        let path = path.as_ref();
        std::fs::read_to_string(path)
            .map(|s| Self::parse(&s))
            .map_err(|source| TextError::Io {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<String> for Stopwords {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        Stopwords(iter.into_iter().collect())
    }
}

pub fn remove_stopwords(tokens: Vec<String>, stopwords: &Stopwords) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

impl TokenizedDoc {
    /// Runs the full normalize, tokenize and stopword pipeline on raw text.
    pub fn from_text(doc_id: impl Into<String>, text: &str, stopwords: &Stopwords) -> Self {
        TokenizedDoc {
            doc_id: doc_id.into(),
            tokens: remove_stopwords(tokenize(&normalize(text)), stopwords),
        }
    }
}

/// Terms reaching a minimum corpus frequency, most frequent first with
/// ties in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<(String, u64)>,
    min_freq: u64,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from explicit entries, validating the ordering
    /// and frequency invariants.
    pub fn from_entries(entries: Vec<(String, u64)>, min_freq: u64) -> Result<Self, String> {
        if min_freq == 0 {
            return Err("min_freq must be at least 1".into());
        }
        for pair in entries.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if (b.1, &a.0) >= (a.1, &b.0) {
                return Err(format!(
                    "vocabulary entries `{}` and `{}` are out of order",
                    a.0, b.0
                ));
            }
        }
        if let Some((t, f)) = entries.iter().find(|(_, f)| *f < min_freq) {
            return Err(format!(
                "term `{t}` has frequency {f} below min_freq {min_freq}"
            ));
        }
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (t, _))| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            terms: entries,
            min_freq,
            index,
        })
    }

    pub fn terms(&self) -> &[(String, u64)] {
        &self.terms
    }

    pub fn names(&self) -> Vec<String> {
        self.terms.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn min_freq(&self) -> u64 {
        self.min_freq
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["term", "frequency"])?;
        for (t, f) in &self.terms {
            w.write_record([t.as_str(), &f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn build_vocab(docs: &[TokenizedDoc], min_freq: u64) -> Vocabulary {
    let min_freq = min_freq.max(1);
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for tok in docs.iter().flat_map(|d| &d.tokens) {
        *counts.entry(tok.as_str()).or_default() += 1;
    }
    let mut terms: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|&(_, f)| f >= min_freq)
        .map(|(t, f)| (t.to_owned(), f))
        .collect();
    // BTreeMap order is already lexicographic, so a stable sort keeps ties sorted.
    terms.sort_by_key(|t| std::cmp::Reverse(t.1));
    Vocabulary::from_entries(terms, min_freq).expect("constructed in canonical order")
}

pub fn vectorize(doc: &TokenizedDoc, vocab: &Vocabulary) -> Vec<u32> {
    vectorize_tokens(&doc.tokens, vocab)
}

pub fn vectorize_tokens(tokens: &[String], vocab: &Vocabulary) -> Vec<u32> {
    let mut v = vec![0u32; vocab.len()];
    for t in tokens {
        if let Some(i) = vocab.index_of(t) {
            v[i] += 1;
        }
    }
    v
}

/// Per-document count vectors over a fixed vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    vocabulary: Vocabulary,
    doc_ids: Vec<String>,
    rows: Vec<Vec<u32>>,
}

impl TermDocMatrix {
    pub fn build(docs: &[TokenizedDoc], vocabulary: Vocabulary) -> Self {
        let rows = docs.iter().map(|d| vectorize(d, &vocabulary)).collect();
        TermDocMatrix {
            doc_ids: docs.iter().map(|d| d.doc_id.clone()).collect(),
            rows,
            vocabulary,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row(&self, doc_id: &str) -> Option<&[u32]> {
        self.doc_ids
            .iter()
            .position(|d| d == doc_id)
            .map(|i| self.rows[i].as_slice())
    }

    /// Presence/absence variant: every positive count becomes 1.
    pub fn binarized(&self) -> Self {
        TermDocMatrix {
            vocabulary: self.vocabulary.clone(),
            doc_ids: self.doc_ids.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&c| u32::from(c > 0)).collect())
                .collect(),
        }
    }

    fn column(&self, term: &str) -> Result<Vec<f64>, TextError> {
        let j = self
            .vocabulary
            .index_of(term)
            .ok_or_else(|| TextError::UnknownTerm(term.to_owned()))?;
        Ok(self.rows.iter().map(|r| f64::from(r[j])).collect())
    }

    /// `doc_id,<term1>,<term2>,...` header followed by one row per document.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["doc_id".to_owned()];
        header.extend(self.vocabulary.names());
        w.write_record(&header)?;
        for (id, row) in self.doc_ids.iter().zip(&self.rows) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(u32::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    if a.is_empty() {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

fn is_constant(col: &[f64]) -> bool {
    col.windows(2).all(|w| w[0] == w[1])
}

/// Pearson correlation of the count columns of two vocabulary terms.
pub fn term_correlation(tdm: &TermDocMatrix, a: &str, b: &str) -> Result<f64, TextError> {
    let ca = tdm.column(a)?;
    let cb = tdm.column(b)?;
    if is_constant(&ca) {
        return Err(TextError::ZeroVariance(a.to_owned()));
    }
    if is_constant(&cb) {
        return Err(TextError::ZeroVariance(b.to_owned()));
    }
    if a == b {
        return Ok(1.0);
    }
    Ok(pearson(&ca, &cb).expect("non-constant columns"))
}

/// Other vocabulary terms whose correlation with `term` reaches
/// `threshold`, strongest first. Terms with constant columns are skipped.
pub fn top_associations(
    tdm: &TermDocMatrix,
    term: &str,
    threshold: f64,
) -> Result<Vec<(String, f64)>, TextError> {
    let target = tdm.column(term)?;
    let mut out = Vec::new();
    if is_constant(&target) {
        return Ok(out);
    }
    for (other, _) in tdm.vocabulary.terms() {
        if other == term {
            continue;
        }
        let col = tdm.column(other)?;
        if is_constant(&col) {
            continue;
        }
        if let Some(r) = pearson(&target, &col) {
            if r >= threshold {
                out.push((other.clone(), r));
            }
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}
