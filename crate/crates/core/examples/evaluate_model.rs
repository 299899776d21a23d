//! Confusion-matrix rates, ROC and AUC.

use healthmine::metrics::{self, ConfusionMatrix, Evaluation, ScoredLabel};

fn main() {
    // 117 validation tweets: 52 true positives, 8 false positives,
    // 13 false negatives, 44 true negatives
    let cm = ConfusionMatrix::new(52, 8, 13, 44);
    let r = metrics::rates(&cm);
    println!("sensitivity {}", metrics::format_percent(r.sensitivity));
    println!("specificity {}", metrics::format_percent(r.specificity));
    println!("ppv         {}", metrics::format_percent(r.ppv));
    println!("npv         {}", metrics::format_percent(r.npv));
    println!("accuracy    {}", metrics::format_percent(r.accuracy));

    let scored: Vec<ScoredLabel> = [
        (0.9, true),
        (0.8, false),
        (0.7, true),
        (0.4, true),
        (0.4, false),
        (0.1, false),
    ]
    .into_iter()
    .map(|(s, l)| ScoredLabel::new(s, l))
    .collect();
    let curve = metrics::roc(&scored).unwrap();
    println!("\nROC points (fpr, tpr):");
    for (fpr, tpr) in &curve.points {
        println!("  {fpr:.3} {tpr:.3}");
    }
    println!("AUC {:.4}", metrics::auc(&curve));

    let preds: Vec<bool> = scored.iter().map(|s| s.score >= 0.5).collect();
    let eval = Evaluation::from_scores(&scored, &preds).unwrap();
    print!("\n{}", metrics::format_table(&[("Toy", &eval)]));
}
