//! Flat `key = value` run configuration.
//!
//! ```text
//! # run.conf
//! corpus = data/labeled_400.ndjson
//! protocol = paper2016
//! min_freq = 10
//! bbox = -11, 6, 95, 141
//! seed = 2016
//! ```
//!
//! Blank lines and `#` comments are ignored; unknown keys are errors.
//! Command line flags are applied on top with [`Config::set`].

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use thiserror::Error;

use crate::cart::FitParams;
use crate::geo::{BBox, GridSpec};
use crate::query::{self, Query};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown config key `{key}`{}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    UnknownKey { key: String, line: Option<usize> },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("`{0}` is required for this command")]
    Missing(&'static str),
    #[error("cannot read config {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum QuerySource {
    #[default]
    None,
    Inline(String),
    File(PathBuf),
    /// A built-in protocol by name; only `paper2016` exists.
    Builtin(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub corpus: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub hits: Option<PathBuf>,
    pub testing: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub query: QuerySource,
    pub lang: String,
    pub min_freq: u64,
    pub fit: FitParams,
    pub binary_features: bool,
    pub train_fraction: f64,
    pub bbox: BBox,
    pub cell_deg: f64,
    pub predicted_only: bool,
    pub window: Option<(NaiveDate, NaiveDate)>,
    pub audit: Option<(usize, usize)>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            corpus: None,
            stopwords: None,
            model: None,
            hits: None,
            testing: None,
            output_dir: PathBuf::from("out"),
            query: QuerySource::None,
            lang: "id".into(),
            min_freq: 10,
            fit: FitParams::default(),
            binary_features: false,
            train_fraction: 0.7,
            bbox: BBox::INDONESIA,
            cell_deg: GridSpec::DEFAULT_CELL_DEG,
            predicted_only: false,
            window: None,
            audit: None,
            seed: 2016,
        }
    }
}

pub const KEYS: &[&str] = &[
    "corpus",
    "stopwords",
    "model",
    "hits",
    "testing",
    "output_dir",
    "query",
    "query_file",
    "protocol",
    "lang",
    "min_freq",
    "min_split",
    "min_bucket",
    "cp",
    "max_depth",
    "binary_features",
    "train_fraction",
    "bbox",
    "cell_deg",
    "predicted_only",
    "window",
    "audit",
    "seed",
];

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| invalid(key, format!("`{v}`: {e}")))
}

fn boolean(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, format!("`{v}` is not a boolean"))),
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str, n: usize) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    let parts: Vec<T> = v
        .split(',')
        .map(|p| num(key, p.trim()))
        .collect::<Result<_, _>>()?;
    if parts.len() != n {
        return Err(invalid(key, format!("expected {n} comma-separated values")));
    }
    Ok(parts)
}

impl Config {
    pub fn parse(contents: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        for (idx, raw) in contents.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: idx + 1 })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    key: key.into(),
                    line: Some(idx + 1),
                });
            }
            cfg.set(key, value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&s)
    }

    /// Sets one key from its textual value. Call [`Config::validate`]
    /// after a batch of changes.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        match key {
            "corpus" => self.corpus = Some(v.into()),
            "stopwords" => self.stopwords = Some(v.into()),
            "model" => self.model = Some(v.into()),
            "hits" => self.hits = Some(v.into()),
            "testing" => self.testing = Some(v.into()),
            "output_dir" => self.output_dir = v.into(),
            "query" => self.query = QuerySource::Inline(v.into()),
            "query_file" => self.query = QuerySource::File(v.into()),
            "protocol" => self.query = QuerySource::Builtin(v.into()),
            "lang" => self.lang = v.to_lowercase(),
            "min_freq" => self.min_freq = num(key, v)?,
            "min_split" => self.fit.min_split = num(key, v)?,
            "min_bucket" => self.fit.min_bucket = num(key, v)?,
            "cp" => self.fit.cp = num(key, v)?,
            "max_depth" => self.fit.max_depth = num(key, v)?,
            "binary_features" => self.binary_features = boolean(key, v)?,
            "train_fraction" => self.train_fraction = num(key, v)?,
            "bbox" => {
                let b: Vec<f64> = list(key, v, 4)?;
                self.bbox = BBox {
                    lat_min: b[0],
                    lat_max: b[1],
                    lon_min: b[2],
                    lon_max: b[3],
                };
            }
            "cell_deg" => self.cell_deg = num(key, v)?,
            "predicted_only" => self.predicted_only = boolean(key, v)?,
            "window" => {
                let d: Vec<NaiveDate> = list(key, v, 2)?;
                self.window = Some((d[0], d[1]));
            }
            "audit" => {
                let a: Vec<usize> = list(key, v, 2)?;
                self.audit = Some((a[0], a[1]));
            }
            "seed" => self.seed = num(key, v)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: key.into(),
                    line: None,
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.lang.is_empty() {
            return Err(invalid("lang", "empty language code"));
        }
        if self.min_freq < 1 {
            return Err(invalid("min_freq", "must be at least 1"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(invalid("train_fraction", "must be in (0, 1)"));
        }
        if self.fit.min_bucket < 1 {
            return Err(invalid("min_bucket", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.fit.cp) {
            return Err(invalid("cp", "must be in [0, 1]"));
        }
        self.bbox
            .validate()
            .map_err(|e| invalid("bbox", e.to_string()))?;
        if !(self.cell_deg.is_finite() && self.cell_deg > 0.0) {
            return Err(invalid("cell_deg", "must be positive"));
        }
        if let Some((a, b)) = self.window {
            if a > b {
                return Err(invalid("window", "start is after end"));
            }
        }
        Ok(())
    }

    /// Parses the configured query, if any.
    pub fn resolve_query(&self) -> crate::Result<Option<Query>> {
        match &self.query {
            QuerySource::None => Ok(None),
            QuerySource::Inline(s) => Ok(Some(query::parse_query(s)?)),
            QuerySource::File(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| crate::Error::io(p, e))?;
                Ok(Some(query::parse_query(s.trim())?))
            }
            QuerySource::Builtin(name) if name == "paper2016" => {
                Ok(Some(query::default_protocol()))
            }
            QuerySource::Builtin(name) => {
                Err(invalid("protocol", format!("unknown protocol `{name}`")).into())
            }
        }
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.bbox, self.cell_deg).map_err(|e| invalid("cell_deg", e.to_string()))
    }

    pub fn require<'a>(
        &self,
        value: &'a Option<PathBuf>,
        key: &'static str,
    ) -> Result<&'a Path, ConfigError> {
        value.as_deref().ok_or(ConfigError::Missing(key))
    }
}
