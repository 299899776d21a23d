//! Rank the terms that co-occur with *sakit*.
//!
//! The synthetic documents pair *hati* with *sakit* most often, *rasa*
//! and *perut* less so, and scatter the remaining terms at random.

use healthmine::synth;
use healthmine::text::{self, TermDocMatrix};

fn main() {
    let docs = synth::association_corpus(400, 3);
    let vocab = text::build_vocab(&docs, 10);
    let tdm = TermDocMatrix::build(&docs, vocab);

    println!("terms correlated with `sakit` (r >= 0.1):");
    for (term, r) in text::top_associations(&tdm, "sakit", 0.1).unwrap() {
        println!("  {term:8} {r:.3}");
    }

    let r = text::term_correlation(&tdm, "hati", "jalan").unwrap();
    println!("\nhati ~ jalan: {r:.3}");
}
