//! Stream replay, geographic and daily aggregation, and audit sampling.
//!
//! [`replay`] turns a loaded corpus into a lazily classified, time-ordered
//! stream of [`ClassifiedHit`]s. The aggregators ([`GridCounter`],
//! [`DailyCounter`], [`AuditSampler`]) consume hits one at a time, so a
//! replay that only needs aggregates never holds more than the aggregation
//! state.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{self, CorpusError, TweetRecord, WireRecord};
use crate::model::TextModel;
use crate::query::Query;
use crate::seed;
use crate::text::Stopwords;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("invalid bounding box: {0}")]
    InvalidBBox(String),
    #[error("grid cell size {0} must be positive and finite")]
    InvalidCell(f64),
    #[error("audit needs {requested} {stratum} predictions but only {available} are available")]
    InsufficientStratum {
        stratum: &'static str,
        requested: usize,
        available: usize,
    },
}

/// Inclusive lat/lon rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BBox {
    /// 11°S to 6°N, 95°E to 141°E.
    pub const INDONESIA: BBox = BBox {
        lat_min: -11.0,
        lat_max: 6.0,
        lon_min: 95.0,
        lon_max: 141.0,
    };

    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64) -> Result<Self, GeoError> {
        let b = BBox {
            lat_min,
            lat_max,
            lon_min,
            lon_max,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), GeoError> {
        let all = [self.lat_min, self.lat_max, self.lon_min, self.lon_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GeoError::InvalidBBox("non-finite bound".into()));
        }
        if self.lat_min >= self.lat_max {
            return Err(GeoError::InvalidBBox(format!(
                "lat_min {} is not below lat_max {}",
                self.lat_min, self.lat_max
            )));
        }
        if self.lon_min >= self.lon_max {
            return Err(GeoError::InvalidBBox(format!(
                "lon_min {} is not below lon_max {}",
                self.lon_min, self.lon_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat_min..=self.lat_max).contains(&lat) && (self.lon_min..=self.lon_max).contains(&lon)
    }
}

impl Default for BBox {
    fn default() -> Self {
        BBox::INDONESIA
    }
}

pub fn in_bbox(lat: f64, lon: f64, bbox: &BBox) -> bool {
    bbox.contains(lat, lon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub lat_index: u32,
    pub lon_index: u32,
}

/// Square cells anchored at the bounding box's south-west corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    bbox: BBox,
    cell_deg: f64,
}

impl GridSpec {
    pub const DEFAULT_CELL_DEG: f64 = 0.5;

    pub fn new(bbox: BBox, cell_deg: f64) -> Result<Self, GeoError> {
        bbox.validate()?;
        if !(cell_deg.is_finite() && cell_deg > 0.0) {
            return Err(GeoError::InvalidCell(cell_deg));
        }
        Ok(GridSpec { bbox, cell_deg })
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }

    pub fn cell_deg(&self) -> f64 {
        self.cell_deg
    }

    pub fn n_lat(&self) -> u32 {
        ((self.bbox.lat_max - self.bbox.lat_min) / self.cell_deg).ceil() as u32
    }

    pub fn n_lon(&self) -> u32 {
        ((self.bbox.lon_max - self.bbox.lon_min) / self.cell_deg).ceil() as u32
    }

    /// Cell of a point inside the box. Points on the north or east edge
    /// fall in the last row or column.
    pub fn cell_of(&self, lat: f64, lon: f64) -> Option<Cell> {
        if !self.bbox.contains(lat, lon) {
            return None;
        }
        let idx = |v: f64, min: f64, n: u32| {
            (((v - min) / self.cell_deg).floor() as u32).min(n.saturating_sub(1))
        };
        Some(Cell {
            lat_index: idx(lat, self.bbox.lat_min, self.n_lat()),
            lon_index: idx(lon, self.bbox.lon_min, self.n_lon()),
        })
    }

    pub fn center(&self, cell: Cell) -> (f64, f64) {
        (
            self.bbox.lat_min + (f64::from(cell.lat_index) + 0.5) * self.cell_deg,
            self.bbox.lon_min + (f64::from(cell.lon_index) + 0.5) * self.cell_deg,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedHit {
    pub tweet: TweetRecord,
    pub predicted: bool,
    pub p_true: f64,
}

impl ClassifiedHit {
    /// Corpus record line extended with `predicted` and `p_true`.
    pub fn to_line(&self) -> String {
        let mut wire = WireRecord::from_tweet(&self.tweet);
        wire.predicted = Some(self.predicted);
        wire.p_true = Some(self.p_true);
        serde_json::to_string(&wire).expect("hit serialization is infallible")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub seen: usize,
    pub no_coordinates: usize,
    pub outside_bbox: usize,
    pub query_rejected: usize,
    pub emitted: usize,
    pub predicted_true: usize,
}

/// Lazily classified stream over a corpus in `created_at` order.
pub struct Replay<'a> {
    corpus: &'a [TweetRecord],
    order: std::vec::IntoIter<usize>,
    model: &'a TextModel,
    stopwords: &'a Stopwords,
    bbox: BBox,
    query: Option<&'a Query>,
    stats: ReplayStats,
}

impl Replay<'_> {
    pub fn stats(&self) -> ReplayStats {
        self.stats
    }
}

impl Iterator for Replay<'_> {
    type Item = ClassifiedHit;

    fn next(&mut self) -> Option<ClassifiedHit> {
        for i in self.order.by_ref() {
            let tweet = &self.corpus[i];
            self.stats.seen += 1;
            let Some((lat, lon)) = tweet.coords else {
                self.stats.no_coordinates += 1;
                continue;
            };
            if !self.bbox.contains(lat, lon) {
                self.stats.outside_bbox += 1;
                continue;
            }
            if self.query.is_some_and(|q| !q.matches(&tweet.text)) {
                self.stats.query_rejected += 1;
                continue;
            }
            let (predicted, p_true) = self.model.classify(&tweet.text, self.stopwords);
            self.stats.emitted += 1;
            self.stats.predicted_true += usize::from(predicted);
            return Some(ClassifiedHit {
                tweet: tweet.clone(),
                predicted,
                p_true,
            });
        }
        None
    }
}

/// Replays `corpus` in non-decreasing `created_at` order (ties keep file
/// order), dropping records without coordinates, outside `bbox`, or not
/// matching `query`, and classifying the rest.
///
/// The [`TextModel`] guarantees vocabulary and tree agree, so dimension
/// errors surface when the model is built or loaded, before any emission.
pub fn replay<'a>(
    corpus: &'a [TweetRecord],
    model: &'a TextModel,
    stopwords: &'a Stopwords,
    bbox: BBox,
    query: Option<&'a Query>,
) -> Replay<'a> {
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.sort_by_key(|&i| corpus[i].created_at);
    Replay {
        corpus,
        order: order.into_iter(),
        model,
        stopwords,
        bbox,
        query,
        stats: ReplayStats::default(),
    }
}

/// Streaming per-cell counts.
#[derive(Debug, Clone)]
pub struct GridCounter {
    grid: GridSpec,
    predicted_only: bool,
    counts: BTreeMap<Cell, u64>,
}

impl GridCounter {
    pub fn new(grid: GridSpec, predicted_only: bool) -> Self {
        GridCounter {
            grid,
            predicted_only,
            counts: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, hit: &ClassifiedHit) {
        if self.predicted_only && !hit.predicted {
            return;
        }
        if let Some(cell) = hit
            .tweet
            .coords
            .and_then(|(la, lo)| self.grid.cell_of(la, lo))
        {
            *self.counts.entry(cell).or_default() += 1;
        }
    }

    pub fn counts(&self) -> &BTreeMap<Cell, u64> {
        &self.counts
    }

    pub fn into_counts(self) -> BTreeMap<Cell, u64> {
        self.counts
    }
}

pub fn aggregate_grid<'h>(
    hits: impl IntoIterator<Item = &'h ClassifiedHit>,
    grid: &GridSpec,
    predicted_only: bool,
) -> BTreeMap<Cell, u64> {
    let mut c = GridCounter::new(*grid, predicted_only);
    hits.into_iter().for_each(|h| c.push(h));
    c.into_counts()
}

/// Streaming per-UTC-day counts.
#[derive(Debug, Clone, Default)]
pub struct DailyCounter {
    predicted_only: bool,
    counts: BTreeMap<NaiveDate, u64>,
}

impl DailyCounter {
    pub fn new(predicted_only: bool) -> Self {
        DailyCounter {
            predicted_only,
            counts: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, hit: &ClassifiedHit) {
        if self.predicted_only && !hit.predicted {
            return;
        }
        *self
            .counts
            .entry(hit.tweet.created_at.date_naive())
            .or_default() += 1;
    }

    /// Counts with every day of `window` (inclusive) present, zero-filled.
    /// Without a window the span of observed days is used.
    pub fn finish(self, window: Option<(NaiveDate, NaiveDate)>) -> BTreeMap<NaiveDate, u64> {
        let mut out = self.counts;
        let span = window.or_else(|| Some((*out.keys().next()?, *out.keys().next_back()?)));
        if let Some((start, end)) = span {
            let mut d = start;
            while d <= end {
                out.entry(d).or_insert(0);
                d = d + Days::new(1);
            }
        }
        out
    }
}

pub fn daily_series<'h>(
    hits: impl IntoIterator<Item = &'h ClassifiedHit>,
    predicted_only: bool,
    window: Option<(NaiveDate, NaiveDate)>,
) -> BTreeMap<NaiveDate, u64> {
    let mut c = DailyCounter::new(predicted_only);
    hits.into_iter().for_each(|h| c.push(h));
    c.finish(window)
}

/// UTC calendar days spanned by a corpus.
pub fn corpus_window(corpus: &[TweetRecord]) -> Option<(NaiveDate, NaiveDate)> {
    let min = corpus.iter().map(|r| r.created_at).min()?;
    let max = corpus.iter().map(|r| r.created_at).max()?;
    Some((min.date_naive(), max.date_naive()))
}

/// Single-pass stratified sampler: one seeded reservoir per predicted
/// class.
#[derive(Debug, Clone)]
pub struct AuditSampler {
    true_res: Reservoir,
    false_res: Reservoir,
}

#[derive(Debug, Clone)]
struct Reservoir {
    capacity: usize,
    seen: usize,
    items: Vec<ClassifiedHit>,
    rng: ChaCha8Rng,
}

impl Reservoir {
    fn new(capacity: usize, seed: u64) -> Self {
        Reservoir {
            capacity,
            seen: 0,
            items: Vec::with_capacity(capacity),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn push(&mut self, hit: &ClassifiedHit) {
        if self.items.len() < self.capacity {
            self.items.push(hit.clone());
        } else if self.capacity > 0 {
            let j = self.rng.random_range(0..=self.seen);
            if j < self.capacity {
                self.items[j] = hit.clone();
            }
        }
        self.seen += 1;
    }
}

impl AuditSampler {
    pub fn new(n_true: usize, n_false: usize, seed: u64) -> Self {
        AuditSampler {
            true_res: Reservoir::new(n_true, seed::derive(seed, "audit.true")),
            false_res: Reservoir::new(n_false, seed::derive(seed, "audit.false")),
        }
    }

    pub fn push(&mut self, hit: &ClassifiedHit) {
        if hit.predicted {
            self.true_res.push(hit);
        } else {
            self.false_res.push(hit);
        }
    }

    /// TRUE stratum then FALSE stratum, each in reservoir order.
    pub fn finish(self) -> Result<Vec<ClassifiedHit>, GeoError> {
        for (stratum, r) in [("TRUE", &self.true_res), ("FALSE", &self.false_res)] {
            if r.seen < r.capacity {
                return Err(GeoError::InsufficientStratum {
                    stratum,
                    requested: r.capacity,
                    available: r.seen,
                });
            }
        }
        let mut out = self.true_res.items;
        out.extend(self.false_res.items);
        Ok(out)
    }
}

pub fn audit_sample<'h>(
    hits: impl IntoIterator<Item = &'h ClassifiedHit>,
    n_true: usize,
    n_false: usize,
    seed: u64,
) -> Result<Vec<ClassifiedHit>, GeoError> {
    let mut s = AuditSampler::new(n_true, n_false, seed);
    hits.into_iter().for_each(|h| s.push(h));
    s.finish()
}

// Exports ---------------------------------------------------------------

pub fn write_hits<'h, W: Write>(
    mut out: W,
    hits: impl IntoIterator<Item = &'h ClassifiedHit>,
) -> io::Result<()> {
    for h in hits {
        writeln!(out, "{}", h.to_line())?;
    }
    Ok(())
}

/// Reads a hits file written by [`write_hits`].
pub fn load_hits(path: impl AsRef<Path>) -> Result<Vec<ClassifiedHit>, CorpusError> {
    let mut out = Vec::new();
    corpus::read_wire(path.as_ref(), |line, wire| {
        let err = |reason: String| CorpusError::Line { line, reason };
        let tweet = wire.to_tweet().map_err(err)?;
        let predicted = wire
            .predicted
            .ok_or_else(|| err("missing required field `predicted`".into()))?;
        let p_true = wire
            .p_true
            .filter(|p| (0.0..=1.0).contains(p))
            .ok_or_else(|| err("missing or out-of-range field `p_true`".into()))?;
        out.push(ClassifiedHit {
            tweet,
            predicted,
            p_true,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn write_grid_csv<W: Write>(
    out: W,
    counts: &BTreeMap<Cell, u64>,
    grid: &GridSpec,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lat_index",
        "lon_index",
        "lat_center",
        "lon_center",
        "count",
    ])?;
    for (cell, n) in counts {
        let (lat, lon) = grid.center(*cell);
        w.write_record([
            cell.lat_index.to_string(),
            cell.lon_index.to_string(),
            lat.to_string(),
            lon.to_string(),
            n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn grid_geojson(counts: &BTreeMap<Cell, u64>, grid: &GridSpec) -> serde_json::Value {
    let features: Vec<_> = counts
        .iter()
        .map(|(cell, n)| {
            let (lat, lon) = grid.center(*cell);
            serde_json::json!({
                "type": "Feature",
                "geometry": { "type": "Point", "coordinates": [lon, lat] },
                "properties": {
                    "lat_index": cell.lat_index,
                    "lon_index": cell.lon_index,
                    "count": n,
                },
            })
        })
        .collect();
    serde_json::json!({ "type": "FeatureCollection", "features": features })
}

pub fn write_daily_csv<W: Write>(out: W, series: &BTreeMap<NaiveDate, u64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "count"])?;
    for (d, n) in series {
        w.write_record([d.format("%Y-%m-%d").to_string(), n.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
