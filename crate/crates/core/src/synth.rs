//! Seeded synthetic corpora with planted, known structure.
//!
//! Real annotated tweets are not redistributable, so the bundled data and
//! the end-to-end tests use generated Bahasa-like text:
//!
//! * [`labeled_corpus`]: 400 annotated records (10 of them retweets) whose
//!   health-event label is carried by illness words such as *demam*,
//!   *pendarahan* or *nak*, while *orang*, *hati*, *lemah* and *rasa* mark
//!   heartbreak and everyday chatter. After cleaning exactly
//!   [`VOCAB_TERMS`] terms occur ten or more times.
//! * [`stream_week`]: a geo-tagged week of records with a planted rate of
//!   health-event texts.
//! * [`association_corpus`]: documents where *hati* co-occurs with *sakit*
//!   more than any other term does.

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CorpusEntry, TweetRecord};
use crate::geo::BBox;
use crate::query;
use crate::text::TokenizedDoc;

/// Words that mark a health event on their own.
pub const ILLNESS_WORDS: [&str; 5] = ["demam", "pendarahan", "nak", "muntah", "trombosit"];
/// Words of heartbreak and complaint that do not mark a health event.
pub const HEARTBREAK_WORDS: [&str; 4] = ["orang", "hati", "lemah", "rasa"];
/// Context words shared by both classes.
pub const CONTEXT_WORDS: [&str; 12] = [
    "perut", "panas", "badan", "rumah", "rawat", "inap", "kerja", "jalan", "teman", "makan",
    "hujan", "macet",
];
/// Number of terms reaching frequency 10 in the cleaned labeled corpus:
/// the illness, heartbreak and context words plus *sakit*.
pub const VOCAB_TERMS: usize =
    ILLNESS_WORDS.len() + HEARTBREAK_WORDS.len() + CONTEXT_WORDS.len() + 1;

const STOP_FILLERS: [&str; 10] = [
    "aku", "yang", "banget", "kamu", "aja", "lagi", "dari", "sudah", "nih", "gak",
];
const NOISE: [&str; 8] = ["!!", "...", ":'(", "39", "2016", "#", "😢", "?"];
/// Protocol terms appended to a labeled text that would otherwise not be
/// found by the keyword search.
const ANCHORS: [&str; 4] = ["rumah", "panas", "badan", ":'("];
const SYLLABLES: [&str; 16] = [
    "ba", "ci", "du", "ge", "ko", "lu", "ma", "ni", "po", "ri", "sa", "tu", "we", "ya", "zo", "fe",
];
/// Rare filler tokens are used at most this many times, below the
/// minimum vocabulary frequency of 10.
const FILLER_CAP: u32 = 9;

pub const LABELED_ORIGINALS: usize = 390;
pub const LABELED_RETWEETS: usize = 10;

/// Deterministic pseudo-word filler, never reaching [`FILLER_CAP`] + 1 uses.
struct Fillers {
    words: Vec<String>,
    uses: Vec<u32>,
}

impl Fillers {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        let mut words = Vec::new();
        for a in SYLLABLES {
            for b in SYLLABLES {
                for c in ["", "k", "ng", "n"] {
                    words.push(format!("{a}{b}{c}"));
                }
            }
        }
        words.shuffle(rng);
        let n = words.len();
        Fillers {
            words,
            uses: vec![0; n],
        }
    }

    fn reset(&mut self) {
        self.uses.iter_mut().for_each(|u| *u = 0);
    }

    fn pick(&mut self, rng: &mut ChaCha8Rng) -> String {
        loop {
            let i = rng.random_range(0..self.words.len());
            if self.uses[i] < FILLER_CAP {
                self.uses[i] += 1;
                return self.words[i].clone();
            }
        }
    }
}

fn choose<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).expect("non-empty word list")
}

fn compose(rng: &mut ChaCha8Rng, content: Vec<String>, fillers: &mut Fillers) -> String {
    let mut words = content;
    for _ in 0..rng.random_range(1..=3) {
        words.push(fillers.pick(rng));
    }
    for _ in 0..rng.random_range(0..=2) {
        words.push(choose(rng, &STOP_FILLERS).to_string());
    }
    words.shuffle(rng);
    // capitalize the first word and sprinkle punctuation, digits, emoticons
    if let Some(first) = words.first_mut() {
        let mut cs = first.chars();
        if let Some(c) = cs.next() {
            *first = c.to_uppercase().chain(cs).collect();
        }
    }
    if rng.random_bool(0.6) {
        words.push(choose(rng, &NOISE).to_string());
    }
    words.join(" ")
}

fn health_text(rng: &mut ChaCha8Rng, fillers: &mut Fillers) -> String {
    let k = rng.random_range(1..=2);
    let mut content: Vec<String> = ILLNESS_WORDS
        .choose_multiple(rng, k)
        .map(|s| s.to_string())
        .collect();
    if rng.random_bool(0.5) {
        content.push("sakit".into());
    }
    for _ in 0..rng.random_range(0..=2) {
        content.push(choose(rng, &CONTEXT_WORDS).into());
    }
    compose(rng, content, fillers)
}

fn other_text(rng: &mut ChaCha8Rng, fillers: &mut Fillers) -> String {
    let k = rng.random_range(1..=2);
    let mut content: Vec<String> = HEARTBREAK_WORDS
        .choose_multiple(rng, k)
        .map(|s| s.to_string())
        .collect();
    // "sakit hati": heartbreak, not illness
    if rng.random_bool(0.3) {
        content.push("sakit".into());
        if !content.iter().any(|w| w == "hati") {
            content.push("hati".into());
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        content.push(choose(rng, &CONTEXT_WORDS).into());
    }
    compose(rng, content, fillers)
}

fn random_time(rng: &mut ChaCha8Rng, start: DateTime<Utc>, days: i64) -> DateTime<Utc> {
    start + Duration::seconds(rng.random_range(0..days * 86_400))
}

/// A point in the Indonesia box, weighted towards Java and Sumatra.
fn indonesian_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (lat, lon, spread): (f64, f64, f64) = match rng.random_range(0..10) {
        0..=4 => (-7.0, 110.0, 1.5), // Java
        5..=6 => (0.0, 101.0, 2.5),  // Sumatra
        7 => (0.5, 114.0, 2.0),      // Kalimantan
        8 => (-2.0, 121.0, 2.0),     // Sulawesi
        _ => (-4.0, 135.0, 3.0),     // Papua
    };
    let b = BBox::INDONESIA;
    (
        (lat + rng.random_range(-spread..spread)).clamp(b.lat_min, b.lat_max),
        (lon + rng.random_range(-spread..spread)).clamp(b.lon_min, b.lon_max),
    )
}

/// A point outside the Indonesia box.
fn foreign_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    match rng.random_range(0..3) {
        0 => (rng.random_range(6.5..12.0), rng.random_range(100.0..125.0)), // north
        1 => (
            rng.random_range(-35.0..-12.0),
            rng.random_range(115.0..150.0),
        ), // Australia
        _ => (rng.random_range(-5.0..5.0), rng.random_range(60.0..94.0)),   // Indian Ocean
    }
}

/// The annotated search corpus: [`LABELED_ORIGINALS`] originals in random
/// order (195 health events), each found by the built-in keyword protocol,
/// with [`LABELED_RETWEETS`] retweets
/// interleaved at random positions.
pub fn labeled_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fillers = Fillers::new(&mut rng);
    let start = Utc.with_ymd_and_hms(2016, 7, 18, 0, 0, 0).unwrap();
    let protocol = query::default_protocol();
    let mut labels: Vec<bool> = (0..LABELED_ORIGINALS)
        .map(|i| i < LABELED_ORIGINALS / 2)
        .collect();
    labels.shuffle(&mut rng);

    let mut entries: Vec<CorpusEntry> = labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let mut text = if label {
                health_text(&mut rng, &mut fillers)
            } else {
                other_text(&mut rng, &mut fillers)
            };
            if !protocol.matches(&text) {
                text.push(' ');
                text.push_str(choose(&mut rng, &ANCHORS));
            }
            let coords = rng.random_bool(0.4).then(|| indonesian_point(&mut rng));
            CorpusEntry {
                tweet: TweetRecord {
                    id: format!("t{:05}", i + 1),
                    created_at: random_time(&mut rng, start, 7),
                    text,
                    coords,
                    lang: "id".into(),
                    retweet: false,
                },
                label: Some(label),
            }
        })
        .collect();
    entries.sort_by_key(|e| e.tweet.created_at);

    for k in 0..LABELED_RETWEETS {
        let src = entries[rng.random_range(0..entries.len())].clone();
        let mut tweet = src.tweet;
        tweet.id = format!("rt{:04}", k + 1);
        tweet.text = format!("RT @warga{}: {}", k + 1, tweet.text);
        tweet.retweet = true;
        tweet.created_at += Duration::minutes(rng.random_range(1..120));
        let at = rng.random_range(0..=entries.len());
        entries.insert(
            at,
            CorpusEntry {
                tweet,
                label: src.label,
            },
        );
    }
    entries
}

#[derive(Debug, Clone)]
pub struct StreamSample {
    pub records: Vec<TweetRecord>,
    /// Records with coordinates inside the Indonesia box.
    pub in_bbox: usize,
    /// In-box records carrying a planted health-event text.
    pub planted_true: usize,
}

impl StreamSample {
    pub fn planted_rate(&self) -> f64 {
        self.planted_true as f64 / self.in_bbox as f64
    }
}

/// `n` records spread uniformly over 26 July to 1 August 2016 (UTC).
/// About 90% carry in-box coordinates, 5% foreign coordinates and 5%
/// none; `round(true_rate * in_bbox)` in-box records get health-event
/// texts.
pub fn stream_week(n: usize, true_rate: f64, seed: u64) -> StreamSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fillers = Fillers::new(&mut rng);
    let start = Utc.with_ymd_and_hms(2016, 7, 26, 0, 0, 0).unwrap();

    #[derive(Clone, Copy)]
    enum Place {
        Inside,
        Outside,
        Unknown,
    }
    let places: Vec<Place> = (0..n)
        .map(|_| match rng.random_range(0..20) {
            0 => Place::Outside,
            1 => Place::Unknown,
            _ => Place::Inside,
        })
        .collect();
    let inside: Vec<usize> = (0..n)
        .filter(|&i| matches!(places[i], Place::Inside))
        .collect();
    let planted_true = (true_rate * inside.len() as f64).round() as usize;
    let mut is_true = vec![false; n];
    for &i in inside.choose_multiple(&mut rng, planted_true) {
        is_true[i] = true;
    }

    let mut records: Vec<TweetRecord> = (0..n)
        .map(|i| {
            // the frequency cap only matters for the labeled corpus
            fillers.reset();
            let text = if is_true[i] {
                health_text(&mut rng, &mut fillers)
            } else {
                other_text(&mut rng, &mut fillers)
            };
            let coords = match places[i] {
                Place::Inside => Some(indonesian_point(&mut rng)),
                Place::Outside => Some(foreign_point(&mut rng)),
                Place::Unknown => None,
            };
            TweetRecord {
                id: format!("s{:07}", i + 1),
                created_at: random_time(&mut rng, start, 7),
                text,
                coords,
                lang: "id".into(),
                retweet: false,
            }
        })
        .collect();
    records.sort_by_key(|r| r.created_at);
    StreamSample {
        records,
        in_bbox: inside.len(),
        planted_true,
    }
}

/// `n` token documents where every one of *hati*, *rasa*, *perut* is
/// drawn more often alongside *sakit*, *hati* most strongly, and the other
/// terms are independent of it.
pub fn association_corpus(n: usize, seed: u64) -> Vec<TokenizedDoc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others = ["jalan", "makan", "kerja", "teman"];
    (0..n)
        .map(|i| {
            let mut tokens = Vec::new();
            let sick = rng.random_bool(0.5);
            if sick {
                tokens.push("sakit".to_string());
            }
            for (word, p_with, p_without) in [
                ("hati", 0.8, 0.15),
                ("rasa", 0.6, 0.25),
                ("perut", 0.5, 0.3),
            ] {
                if rng.random_bool(if sick { p_with } else { p_without }) {
                    tokens.push(word.to_string());
                }
            }
            for w in others {
                if rng.random_bool(0.4) {
                    tokens.push(w.to_string());
                }
            }
            tokens.shuffle(&mut rng);
            TokenizedDoc {
                doc_id: format!("a{i}"),
                tokens,
            }
        })
        .collect()
}
