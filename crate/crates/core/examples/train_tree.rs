//! Fit a tree on the bundled labeled corpus and show how `cp` trims it.
//!
//! ```text
//! cargo run --example train_tree
//! ```

use healthmine::cart::{self, Dataset, FitParams};
use healthmine::corpus;
use healthmine::seed;
use healthmine::text::{self, Stopwords, TermDocMatrix, TokenizedDoc};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/labeled_400.ndjson");
    let records = corpus::drop_retweets(corpus::load_labeled(path)?);
    let sw = Stopwords::bahasa();

    let docs: Vec<TokenizedDoc> = records
        .iter()
        .map(|r| TokenizedDoc::from_text(r.tweet.id.clone(), &r.tweet.text, &sw))
        .collect();
    let vocab = text::build_vocab(&docs, 10);
    let tdm = TermDocMatrix::build(&docs, vocab.clone());
    let labels = records.iter().map(|r| r.label).collect();
    let data = Dataset::new(tdm.rows().to_vec(), labels, vocab.names())?;

    let (train, valid) = cart::train_valid_split(&data, 0.7, seed::derive(2016, "split"))?;
    println!(
        "{} records: {} train, {} validation",
        data.n_rows(),
        train.n_rows(),
        valid.n_rows()
    );

    let params = FitParams {
        cp: 0.0,
        ..FitParams::default()
    };
    let full = cart::grow(&train, &params)?;
    println!("\nunpruned tree:\n{}", full.describe());

    for cp in [0.0, 0.01, 0.05, 0.2, 1.0] {
        let t = cart::prune(&full, cp);
        let correct = valid
            .features()
            .iter()
            .zip(valid.labels())
            .filter(|(x, &y)| t.predict(x).unwrap() == y)
            .count();
        println!(
            "cp {cp:<5} nodes {:2}  leaves {:2}  validation accuracy {}/{}",
            t.n_nodes(),
            t.n_leaves(),
            correct,
            valid.n_rows()
        );
    }
    Ok(())
}
