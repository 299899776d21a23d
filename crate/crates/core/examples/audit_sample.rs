//! Stream classified hits through the stratified reservoir sampler.

use chrono::{TimeZone, Utc};
use healthmine::corpus::TweetRecord;
use healthmine::geo::{AuditSampler, ClassifiedHit};

fn main() {
    let mut sampler = AuditSampler::new(3, 3, 2016);
    for i in 0..1000 {
        let predicted = i % 50 == 0;
        let hit = ClassifiedHit {
            tweet: TweetRecord {
                id: format!("h{i}"),
                created_at: Utc.timestamp_opt(1_469_491_200 + i * 60, 0).unwrap(),
                text: String::new(),
                coords: Some((-6.2, 106.8)),
                lang: "id".into(),
                retweet: false,
            },
            predicted,
            p_true: if predicted { 0.9 } else { 0.1 },
        };
        sampler.push(&hit);
    }
    for hit in sampler.finish().expect("both strata have at least 3 hits") {
        println!("{} {}", hit.predicted, hit.tweet.id);
    }

    // asking for more than the stream holds is an error
    let short = AuditSampler::new(100, 0, 1);
    println!("\n{}", short.finish().unwrap_err());
}
