//! Writes the synthetic corpora used by the other examples and the tests.
//!
//! ```text
//! cargo run --example synth_corpus -- [OUT_DIR] [STREAM_RECORDS]
//! ```
//!
//! `OUT_DIR` defaults to `data`. It receives `labeled_400.ndjson` (the
//! bundled annotated corpus) and `stream_week.ndjson` (a geo-tagged week,
//! 10 000 records unless told otherwise, 0.5% planted health events).

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use healthmine::corpus;
use healthmine::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "data".into()));
    let n_stream: usize = args.next().map_or(Ok(10_000), |s| s.parse())?;
    fs::create_dir_all(&out)?;

    let labeled = synth::labeled_corpus(2016);
    let path = out.join("labeled_400.ndjson");
    corpus::write_entries(BufWriter::new(File::create(&path)?), &labeled)?;
    let n_true = labeled.iter().filter(|e| e.label == Some(true)).count();
    println!(
        "{}: {} records, {} labeled TRUE",
        path.display(),
        labeled.len(),
        n_true
    );

    let stream = synth::stream_week(n_stream, 0.005, 7);
    let path = out.join("stream_week.ndjson");
    corpus::write_corpus(BufWriter::new(File::create(&path)?), &stream.records)?;
    println!(
        "{}: {} records, {} inside the box, {} planted TRUE",
        path.display(),
        stream.records.len(),
        stream.in_bbox,
        stream.planted_true
    );
    Ok(())
}
