//! Binary classification evaluation: confusion matrix, rates, ROC and AUC.

use std::fmt::Write as _;
use std::io::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("{predictions} predictions for {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("no items to evaluate")]
    Empty,
    #[error("ROC needs both classes; got {positives} positives and {negatives} negatives")]
    SingleClass { positives: usize, negatives: usize },
    #[error("score {0} is not finite")]
    NonFiniteScore(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn confusion(predictions: &[bool], labels: &[bool]) -> Result<ConfusionMatrix, MetricsError> {
    if predictions.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, true) => cm.fn_ += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// Derived rates; `None` where the denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
    pub accuracy: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn rates(cm: &ConfusionMatrix) -> Rates {
    Rates {
        sensitivity: ratio(cm.tp, cm.tp + cm.fn_),
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        ppv: ratio(cm.tp, cm.tp + cm.fp),
        npv: ratio(cm.tn, cm.tn + cm.fn_),
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
    }
}

/// A proportion as a percentage rounded half away from zero to one
/// decimal, e.g. `0.8461` -> `84.6`.
pub fn percent(rate: f64) -> f64 {
    (rate * 1000.0).round() / 10.0
}

pub fn format_percent(rate: Option<f64>) -> String {
    rate.map_or_else(|| "undefined".into(), |r| format!("{:.1}", percent(r)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredLabel {
    pub score: f64,
    pub label: bool,
}

impl ScoredLabel {
    pub fn new(score: f64, label: bool) -> Self {
        ScoredLabel { score, label }
    }
}

/// ROC points from (0,0) to (1,1), both coordinates non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

/// Sweeps thresholds over the distinct scores in descending order,
/// predicting TRUE when `score >= threshold`.
pub fn roc(scored: &[ScoredLabel]) -> Result<RocCurve, MetricsError> {
    if let Some(s) = scored.iter().find(|s| !s.score.is_finite()) {
        return Err(MetricsError::NonFiniteScore(s.score));
    }
    let positives = scored.iter().filter(|s| s.label).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(MetricsError::SingleClass {
            positives,
            negatives,
        });
    }
    let mut sorted = scored.to_vec();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i].score;
        while i < sorted.len() && sorted[i].score == t {
            if sorted[i].label {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / negatives as f64, tp as f64 / positives as f64));
    }
    points.push((1.0, 1.0));
    points.dedup();
    Ok(RocCurve { points })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// Evaluation summary for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub n: usize,
    pub confusion: ConfusionMatrix,
    pub rates: Rates,
    pub auc: Option<f64>,
}

impl Evaluation {
    /// AUC is `None` when only one class is present.
    pub fn from_scores(scored: &[ScoredLabel], predictions: &[bool]) -> Result<Self, MetricsError> {
        let labels: Vec<bool> = scored.iter().map(|s| s.label).collect();
        let cm = confusion(predictions, &labels)?;
        let auc = match roc(scored) {
            Ok(c) => Some(auc(&c)),
            Err(MetricsError::SingleClass { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Evaluation {
            n: scored.len(),
            confusion: cm,
            rates: rates(&cm),
            auc,
        })
    }

    fn rows(&self) -> [(&'static str, String); 6] {
        [
            ("Sensitivity", format_percent(self.rates.sensitivity)),
            ("Specificity", format_percent(self.rates.specificity)),
            ("Positive Predictive Value", format_percent(self.rates.ppv)),
            ("Negative Predictive Value", format_percent(self.rates.npv)),
            ("Accuracy", format_percent(self.rates.accuracy)),
            (
                "AUC",
                self.auc
                    .map_or_else(|| "undefined".into(), |a| format!("{a:.2}")),
            ),
        ]
    }
}

/// `metric,value` CSV with unrounded rates and the confusion cells.
pub fn write_report_csv<W: Write>(out: W, eval: &Evaluation) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "value"])?;
    let num = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| x.to_string());
    let cm = &eval.confusion;
    let rows: [(&str, String); 11] = [
        ("n", eval.n.to_string()),
        ("tp", cm.tp.to_string()),
        ("fp", cm.fp.to_string()),
        ("fn", cm.fn_.to_string()),
        ("tn", cm.tn.to_string()),
        ("sensitivity", num(eval.rates.sensitivity)),
        ("specificity", num(eval.rates.specificity)),
        ("ppv", num(eval.rates.ppv)),
        ("npv", num(eval.rates.npv)),
        ("accuracy", num(eval.rates.accuracy)),
        ("auc", num(eval.auc)),
    ];
    for (k, v) in rows {
        w.write_record([k, v.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text table with one column per supplied dataset, percentages to
/// one decimal and AUC to two.
pub fn format_table(columns: &[(&str, &Evaluation)]) -> String {
    let label_width = 27;
    let col_width = 12;
    let mut out = String::new();
    let _ = write!(out, "{:label_width$}", "");
    for (name, _) in columns {
        let _ = write!(out, "{name:>col_width$}");
    }
    out.push('\n');
    let rows: Vec<_> = columns.iter().map(|(_, e)| e.rows()).collect();
    for r in 0..6 {
        let _ = write!(out, "{:label_width$}", rows.first().map_or("", |c| c[r].0));
        for col in &rows {
            let _ = write!(out, "{:>col_width$}", col[r].1);
        }
        out.push('\n');
    }
    out
}
