//! Tweet records and the newline-delimited corpus format.
//!
//! One JSON object per line. Required keys: `id`, `created_at`
//! (ISO-8601, normalized to UTC), `text`, `lang`, `retweet`. Optional keys:
//! `lat`/`lon` (both or neither) and `label` for annotated corpora. Any
//! other key is ignored on load.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Timelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
}

impl CorpusError {
    fn line(line: usize, reason: impl Into<String>) -> Self {
        CorpusError::Line {
            line,
            reason: reason.into(),
        }
    }
}

/// A single geo-timestamped message.
#[derive(Debug, Clone, PartialEq)]
pub struct TweetRecord {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub coords: Option<(f64, f64)>,
    pub lang: String,
    pub retweet: bool,
}

impl TweetRecord {
    pub fn lat(&self) -> Option<f64> {
        self.coords.map(|c| c.0)
    }

    pub fn lon(&self) -> Option<f64> {
        self.coords.map(|c| c.1)
    }
}

impl AsRef<TweetRecord> for TweetRecord {
    fn as_ref(&self) -> &TweetRecord {
        self
    }
}

/// A tweet with its gold relevance label (`true` = health/disease event).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTweet {
    pub tweet: TweetRecord,
    pub label: bool,
}

impl AsRef<TweetRecord> for LabeledTweet {
    fn as_ref(&self) -> &TweetRecord {
        &self.tweet
    }
}

/// A record as it appears on the wire. Optional everywhere so that a
/// missing key is reported with its name and line number.
#[derive(Debug, Default, Serialize, Deserialize)]
pub(crate) struct WireRecord {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub created_at: Option<String>,
    #[serde(default)]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(default)]
    pub lang: Option<String>,
    #[serde(default)]
    pub retweet: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_true: Option<f64>,
}

impl WireRecord {
    pub(crate) fn from_tweet(tweet: &TweetRecord) -> Self {
        WireRecord {
            id: Some(tweet.id.clone()),
            created_at: Some(format_timestamp(&tweet.created_at)),
            text: Some(tweet.text.clone()),
            lat: tweet.lat(),
            lon: tweet.lon(),
            lang: Some(tweet.lang.clone()),
            retweet: Some(tweet.retweet),
            ..Default::default()
        }
    }

    pub(crate) fn parse(line: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))
    }

    pub(crate) fn to_tweet(&self) -> std::result::Result<TweetRecord, String> {
        fn required<'a, T>(v: &'a Option<T>, key: &str) -> std::result::Result<&'a T, String> {
            v.as_ref()
                .ok_or_else(|| format!("missing required field `{key}`"))
        }
        let id = required(&self.id, "id")?;
        if id.is_empty() {
            return Err("field `id` is empty".into());
        }
        let created_at = parse_timestamp(required(&self.created_at, "created_at")?)?;
        let text = required(&self.text, "text")?;
        if text.is_empty() {
            return Err("field `text` is empty".into());
        }
        let lang = required(&self.lang, "lang")?;
        let retweet = *required(&self.retweet, "retweet")?;
        let coords = match (self.lat, self.lon) {
            (None, None) => None,
            (Some(lat), Some(lon)) => {
                if !(-90.0..=90.0).contains(&lat) {
                    return Err(format!("latitude {lat} outside [-90, 90]"));
                }
                if !(-180.0..=180.0).contains(&lon) {
                    return Err(format!("longitude {lon} outside [-180, 180]"));
                }
                Some((lat, lon))
            }
            _ => return Err("`lat` and `lon` must be given together".into()),
        };
        Ok(TweetRecord {
            id: id.clone(),
            created_at,
            text: text.clone(),
            coords,
            lang: lang.to_lowercase(),
            retweet,
        })
    }
}

/// Parses an ISO-8601 timestamp with offset and normalizes it to UTC,
/// truncated to whole seconds.
pub fn parse_timestamp(raw: &str) -> std::result::Result<DateTime<Utc>, String> {
    let ts = DateTime::parse_from_rfc3339(raw)
        .map_err(|e| format!("invalid created_at `{raw}`: {e}"))?
        .with_timezone(&Utc);
    Ok(ts.with_nanosecond(0).unwrap_or(ts))
}

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn open(path: &Path) -> Result<BufReader<File>, CorpusError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Visits every non-blank line of a record file as a parsed [`WireRecord`].
pub(crate) fn read_wire<F>(path: &Path, mut visit: F) -> Result<(), CorpusError>
where
    F: FnMut(usize, WireRecord) -> Result<(), CorpusError>,
{
    let reader = open(path)?;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| CorpusError::line(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let wire = WireRecord::parse(&line).map_err(|r| CorpusError::line(lineno, r))?;
        visit(lineno, wire)?;
    }
    Ok(())
}

/// Loads a record file in file order.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<TweetRecord>, CorpusError> {
    let mut out = Vec::new();
    read_wire(path.as_ref(), |lineno, wire| {
        out.push(wire.to_tweet().map_err(|r| CorpusError::line(lineno, r))?);
        Ok(())
    })?;
    Ok(out)
}

/// Loads an annotated record file; every line must carry a boolean `label`.
pub fn load_labeled(path: impl AsRef<Path>) -> Result<Vec<LabeledTweet>, CorpusError> {
    let mut out = Vec::new();
    read_wire(path.as_ref(), |lineno, wire| {
        let tweet = wire.to_tweet().map_err(|r| CorpusError::line(lineno, r))?;
        let label = wire
            .label
            .ok_or_else(|| CorpusError::line(lineno, "missing required field `label`"))?;
        out.push(LabeledTweet { tweet, label });
        Ok(())
    })?;
    Ok(out)
}

/// A loaded record that may or may not carry a label. Used by stages that
/// pass corpora through unchanged apart from filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub tweet: TweetRecord,
    pub label: Option<bool>,
}

impl AsRef<TweetRecord> for CorpusEntry {
    fn as_ref(&self) -> &TweetRecord {
        &self.tweet
    }
}

pub fn load_entries(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    read_wire(path.as_ref(), |lineno, wire| {
        let tweet = wire.to_tweet().map_err(|r| CorpusError::line(lineno, r))?;
        out.push(CorpusEntry {
            tweet,
            label: wire.label,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Serializes one record as a single line (no trailing newline).
pub fn record_line(tweet: &TweetRecord, label: Option<bool>) -> String {
    let mut wire = WireRecord::from_tweet(tweet);
    wire.label = label;
    serde_json::to_string(&wire).expect("record serialization is infallible")
}

pub fn write_entries<W: Write>(mut out: W, entries: &[CorpusEntry]) -> io::Result<()> {
    for e in entries {
        writeln!(out, "{}", record_line(&e.tweet, e.label))?;
    }
    Ok(())
}

pub fn write_corpus<W: Write>(mut out: W, records: &[TweetRecord]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", record_line(r, None))?;
    }
    Ok(())
}

pub fn write_labeled<W: Write>(mut out: W, records: &[LabeledTweet]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", record_line(&r.tweet, Some(r.label)))?;
    }
    Ok(())
}

/// Keeps the first occurrence of each id.
pub fn dedupe<T: AsRef<TweetRecord>>(records: Vec<T>) -> Vec<T> {
    let mut seen = HashSet::with_capacity(records.len());
    records
        .into_iter()
        .filter(|r| seen.insert(r.as_ref().id.clone()))
        .collect()
}

pub fn drop_retweets<T: AsRef<TweetRecord>>(records: Vec<T>) -> Vec<T> {
    records
        .into_iter()
        .filter(|r| !r.as_ref().retweet)
        .collect()
}

/// Keeps records whose language code equals `lang_code`, ignoring case.
pub fn filter_lang<T: AsRef<TweetRecord>>(records: Vec<T>, lang_code: &str) -> Vec<T> {
    let code = lang_code.to_lowercase();
    records
        .into_iter()
        .filter(|r| r.as_ref().lang.to_lowercase() == code)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, retweet: bool, lang: &str) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            created_at: parse_timestamp("2016-07-26T08:15:00Z").unwrap(),
            text: format!("tweet {id}"),
            coords: None,
            lang: lang.into(),
            retweet,
        }
    }

    fn file_with(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    const LINE_A: &str = r#"{"id":"a","created_at":"2016-07-26T08:15:00Z","text":"demam tinggi","lang":"id","retweet":false,"lat":-6.2,"lon":106.8}"#;
    const LINE_B: &str = r#"{"id":"b","created_at":"2016-07-26T09:00:00+07:00","text":"sakit perut","lang":"ID","retweet":true,"extra":1}"#;
    const LINE_C: &str =
        r#"{"id":"c","created_at":"2016-07-27T00:00:00Z","text":"x","lang":"en","retweet":false}"#;

    #[test]
    fn loads_three_valid_lines_in_order() {
        let f = file_with(&format!("{LINE_A}\n{LINE_B}\n{LINE_C}\n"));
        let recs = load_corpus(f.path()).unwrap();
        let ids: Vec<_> = recs.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(recs[0].coords, Some((-6.2, 106.8)));
        // +07:00 normalized to UTC
        assert_eq!(
            format_timestamp(&recs[1].created_at),
            "2016-07-26T02:00:00Z"
        );
        assert_eq!(recs[1].lang, "id");
    }

    #[test]
    fn missing_text_names_line_two() {
        let bad = r#"{"id":"b","created_at":"2016-07-26T08:15:00Z","lang":"id","retweet":false}"#;
        let f = file_with(&format!("{LINE_A}\n{bad}\n"));
        match load_corpus(f.path()) {
            Err(CorpusError::Line { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("text"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_and_bad_fields_are_line_errors() {
        for bad in [
            "{not json",
            r#"{"id":"x","created_at":"yesterday","text":"t","lang":"id","retweet":false}"#,
            r#"{"id":"x","created_at":"2016-07-26T08:15:00Z","text":"t","lang":"id","retweet":false,"lat":1.0}"#,
            r#"{"id":"x","created_at":"2016-07-26T08:15:00Z","text":"t","lang":"id","retweet":false,"lat":91.0,"lon":0.0}"#,
            r#"{"id":"","created_at":"2016-07-26T08:15:00Z","text":"t","lang":"id","retweet":false}"#,
        ] {
            let f = file_with(&format!("{bad}\n"));
            assert!(
                matches!(
                    load_corpus(f.path()),
                    Err(CorpusError::Line { line: 1, .. })
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let f = file_with("");
        assert!(load_corpus(f.path()).unwrap().is_empty());
    }

    #[test]
    fn unreadable_file_is_io_error() {
        let err = load_corpus("/nonexistent/corpus.ndjson").unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn labeled_requires_label() {
        let f = file_with(&format!("{LINE_A}\n"));
        assert!(matches!(
            load_labeled(f.path()),
            Err(CorpusError::Line { line: 1, .. })
        ));
    }

    #[test]
    fn dedupe_keeps_first() {
        let a1 = rec("a", false, "id");
        let mut a2 = rec("a", false, "id");
        a2.text = "other".into();
        let b = rec("b", false, "id");
        let out = dedupe(vec![a1.clone(), b.clone(), a2]);
        assert_eq!(out, vec![a1, b]);
        assert!(dedupe(Vec::<TweetRecord>::new()).is_empty());
        let distinct = vec![
            rec("a", false, "id"),
            rec("b", false, "id"),
            rec("c", false, "id"),
        ];
        assert_eq!(dedupe(distinct.clone()), distinct);
    }

    #[test]
    fn drop_retweets_filters() {
        let recs: Vec<_> = (0..5)
            .map(|i| rec(&i.to_string(), i % 2 == 1, "id"))
            .collect();
        let out = drop_retweets(recs);
        assert_eq!(
            out.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(),
            ["0", "2", "4"]
        );
        assert!(drop_retweets(vec![rec("a", true, "id")]).is_empty());
        let clean = vec![rec("a", false, "id"), rec("b", false, "id")];
        assert_eq!(drop_retweets(clean.clone()), clean);
    }

    #[test]
    fn filter_lang_is_case_insensitive() {
        let recs = vec![
            rec("a", false, "id"),
            rec("b", false, "en"),
            rec("c", false, "id"),
        ];
        assert_eq!(filter_lang(recs.clone(), "id").len(), 2);
        assert_eq!(filter_lang(recs.clone(), "ID").len(), 2);
        assert!(filter_lang(recs, "fr").is_empty());
    }
}
