//! Normalize, tokenize, drop stopwords, then build a vocabulary and count
//! vectors over a handful of texts.

use healthmine::text::{self, Stopwords, TermDocMatrix, TokenizedDoc};

fn main() {
    let raw = [
        "Aku DEMAM 39°C dari semalam :'( #sakit",
        "Sakit hati banget sama kamu...",
        "Demam berdarah, trombosit turun. Harus rawat inap!",
        "Hujan, macet, perut lapar",
        "Demam lagi, sakit kepala",
    ];
    let sw = Stopwords::bahasa();

    for t in &raw {
        let norm = text::normalize(t);
        let tokens = text::remove_stopwords(text::tokenize(&norm), &sw);
        println!("{t:48} -> {norm:42} -> {tokens:?}");
    }

    let docs: Vec<TokenizedDoc> = raw
        .iter()
        .enumerate()
        .map(|(i, t)| TokenizedDoc::from_text(format!("d{i}"), t, &sw))
        .collect();
    let vocab = text::build_vocab(&docs, 2);
    println!("\nterms with frequency >= 2: {:?}", vocab.terms());

    let tdm = TermDocMatrix::build(&docs, vocab);
    let mut out = Vec::new();
    tdm.write_csv(&mut out).unwrap();
    print!("\n{}", String::from_utf8(out).unwrap());
}
