//! Train on the bundled corpus, replay a synthetic week through the model
//! and print the grid and daily counts.
//!
//! ```text
//! cargo run --release --example replay_stream -- [RECORDS]
//! ```

use healthmine::config::Config;
use healthmine::corpus::{self, LabeledTweet};
use healthmine::geo::{self, BBox, GridSpec};
use healthmine::pipeline;
use healthmine::synth;
use healthmine::text::Stopwords;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(20_000), |s| s.parse())?;
    let sw = Stopwords::bahasa();

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/labeled_400.ndjson");
    let labeled: Vec<LabeledTweet> = corpus::drop_retweets(corpus::load_labeled(path)?);
    let model = pipeline::train(&labeled, &sw, &Config::default())?.model;

    let week = synth::stream_week(n, 0.005, 11);
    let mut stream = geo::replay(&week.records, &model, &sw, BBox::INDONESIA, None);
    let hits: Vec<_> = stream.by_ref().collect();
    let stats = stream.stats();
    println!("{stats:?}");
    println!(
        "predicted TRUE {:.3}% of hits, planted {:.3}%",
        100.0 * stats.predicted_true as f64 / stats.emitted as f64,
        100.0 * week.planted_rate()
    );

    let grid = GridSpec::new(BBox::INDONESIA, GridSpec::DEFAULT_CELL_DEG)?;
    let counts = geo::aggregate_grid(&hits, &grid, true);
    let mut busiest: Vec<_> = counts.iter().collect();
    busiest.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    println!("\nbusiest cells, predicted TRUE only:");
    for (cell, n) in busiest.iter().take(5) {
        let (lat, lon) = grid.center(**cell);
        println!("  ({lat:7.2}, {lon:7.2}) {n}");
    }

    println!("\ndaily predicted TRUE:");
    for (day, n) in geo::daily_series(&hits, true, geo::corpus_window(&week.records)) {
        println!("  {day} {n}");
    }
    Ok(())
}
