//! Parse the built-in keyword protocol and run it over a few texts.
//!
//! ```text
//! cargo run --example parse_protocol -- "demam OR panas -cuaca"
//! ```
//!
//! With no argument the built-in protocol is used.

use healthmine::query::{self, Query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let query: Query = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => query::default_protocol(),
    };

    for (i, clause) in query.clauses().iter().enumerate() {
        let terms: Vec<String> = clause
            .terms()
            .iter()
            .map(|t| {
                let mut s = String::new();
                if t.is_negated() {
                    s.push('-');
                }
                if t.is_quoted() {
                    s.push_str(&format!("{:?}", t.text()));
                } else {
                    s.push_str(t.text());
                }
                s
            })
            .collect();
        println!("clause {:2}: {}", i + 1, terms.join(" "));
    }
    println!("rendered: {query}\n");

    let texts = [
        "Anakku demam tinggi sejak semalam",
        "Panas banget cuaca hari ini",
        "Badan panas, kepala pusing",
        "Kangen kamu :'(",
        "Nonton bola sama teman",
    ];
    for t in texts {
        println!("{:5}  {t}", query.matches(t));
    }
    Ok(())
}
