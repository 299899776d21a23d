//! Acceptance suite: eight criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the
//! terminal: `cargo test --test acceptance`.

mod common;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use healthmine::cart::{self, Dataset, FitParams, SplitRule, TreeNode};
use healthmine::corpus;
use healthmine::geo::BBox;
use healthmine::metrics::{self, ConfusionMatrix, ScoredLabel};
use healthmine::query::{self, Clause, Query, Term};
use healthmine::synth;
use healthmine::text::{self, TermDocMatrix, TokenizedDoc};

use common::{cli, read_csv_map};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 -------------------------------------------------------------------------

fn validation_rates() -> Outcome {
    // percentages in tenths, rounded half up with integer arithmetic
    let target = [800, 846, 867, 772];
    let as_pct = |num: u64, den: u64| (2000 * num + den) / (2 * den);
    // every matrix with n = 117 whose rounded rates match the table
    let mut found = Vec::new();
    for tp in 0..=117u64 {
        for fp in 0..=117 - tp {
            for fn_ in 0..=117 - tp - fp {
                let tn = 117 - tp - fp - fn_;
                if tp + fn_ == 0 || tn + fp == 0 || tp + fp == 0 || tn + fn_ == 0 {
                    continue;
                }
                let r = [
                    as_pct(tp, tp + fn_),
                    as_pct(tn, tn + fp),
                    as_pct(tp, tp + fp),
                    as_pct(tn, tn + fn_),
                ];
                if r == target {
                    found.push((tp, fp, fn_, tn));
                }
            }
        }
    }
    check(found == [(52, 8, 13, 44)], || {
        format!("integer search found {found:?}")
    })?;

    let r = metrics::rates(&ConfusionMatrix::new(52, 8, 13, 44));
    let printed: Vec<String> = [r.sensitivity, r.specificity, r.ppv, r.npv]
        .into_iter()
        .map(metrics::format_percent)
        .collect();
    check(printed == ["80.0", "84.6", "86.7", "77.2"], || {
        format!("printed {printed:?}")
    })?;
    Ok(format!("(52,8,13,44) unique, prints {}", printed.join("/")))
}

// 2 -------------------------------------------------------------------------

fn mann_whitney(s: &[ScoredLabel]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for p in s.iter().filter(|x| x.label) {
        for n in s.iter().filter(|x| !x.label) {
            pairs += 1.0;
            wins += if p.score > n.score {
                1.0
            } else if p.score == n.score {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / pairs
}

fn auc_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    while cases < 300 {
        let n = rng.random_range(2..=500);
        // coarse scores on half the cases to force ties
        let levels = if rng.random_bool(0.5) {
            rng.random_range(2..10)
        } else {
            0
        };
        let s: Vec<ScoredLabel> = (0..n)
            .map(|_| {
                let score = if levels > 0 {
                    f64::from(rng.random_range(0..levels)) / f64::from(levels)
                } else {
                    rng.random()
                };
                ScoredLabel::new(score, rng.random_bool(0.4))
            })
            .collect();
        if s.iter().all(|x| x.label) || s.iter().all(|x| !x.label) {
            continue;
        }
        let got = metrics::auc(&metrics::roc(&s).map_err(|e| e.to_string())?);
        let diff = (got - mann_whitney(&s)).abs();
        worst = worst.max(diff);
        check(diff <= 1e-9, || {
            format!("case {cases}: auc {got} differs from oracle by {diff}")
        })?;
        cases += 1;
    }

    let perfect: Vec<ScoredLabel> = (0..20)
        .map(|i| ScoredLabel::new(f64::from(i), i >= 10))
        .collect();
    let a = metrics::auc(&metrics::roc(&perfect).unwrap());
    check(a == 1.0, || format!("perfect separation gave {a}"))?;
    let constant: Vec<ScoredLabel> = (0..20).map(|i| ScoredLabel::new(0.3, i % 3 == 0)).collect();
    let a = metrics::auc(&metrics::roc(&constant).unwrap());
    check(a == 0.5, || format!("constant scores gave {a}"))?;
    Ok(format!(
        "{cases} random cases, max deviation {worst:.1e}; perfect 1.0, constant 0.5"
    ))
}

// 3 -------------------------------------------------------------------------

fn gini(f: f64, t: f64) -> f64 {
    let n = f + t;
    1.0 - (f / n).powi(2) - (t / n).powi(2)
}

/// Exhaustive search in floating point: every feature, every midpoint
/// between consecutive distinct values, lowest weighted child impurity
/// wins, earlier (feature, threshold) kept on ties.
fn brute_force_split(x: &[Vec<u32>], y: &[bool], min_bucket: usize) -> Option<SplitRule> {
    let n = y.len() as f64;
    let (pf, pt) = y.iter().fold(
        (0.0, 0.0),
        |(f, t), &l| if l { (f, t + 1.0) } else { (f + 1.0, t) },
    );
    let parent = gini(pf, pt);
    let mut best: Option<(SplitRule, f64)> = None;
    for j in 0..x[0].len() {
        let mut vals: Vec<u32> = x.iter().map(|r| r[j]).collect();
        vals.sort_unstable();
        vals.dedup();
        for w in vals.windows(2) {
            let thr = (f64::from(w[0]) + f64::from(w[1])) / 2.0;
            let (mut lf, mut lt, mut rf, mut rt) = (0.0, 0.0, 0.0, 0.0);
            for (row, &label) in x.iter().zip(y) {
                match (f64::from(row[j]) < thr, label) {
                    (true, true) => lt += 1.0,
                    (true, false) => lf += 1.0,
                    (false, true) => rt += 1.0,
                    (false, false) => rf += 1.0,
                }
            }
            if ((lf + lt) as usize) < min_bucket || ((rf + rt) as usize) < min_bucket {
                continue;
            }
            let gain = parent - ((lf + lt) * gini(lf, lt) + (rf + rt) * gini(rf, rt)) / n;
            if gain <= 1e-12 {
                continue;
            }
            if best.as_ref().is_none_or(|(_, g)| gain > g + 1e-12) {
                best = Some((
                    SplitRule {
                        feature_index: j,
                        threshold: thr,
                    },
                    gain,
                ));
            }
        }
    }
    best.map(|(r, _)| r)
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize, max_val: u32) -> Dataset {
    let x: Vec<Vec<u32>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(0..=max_val)).collect())
        .collect();
    // labels loosely tied to feature 0 so splits are informative
    let y: Vec<bool> = x
        .iter()
        .map(|r| rng.random_bool(if r[0] >= max_val / 2 { 0.75 } else { 0.3 }))
        .collect();
    let names = (0..p).map(|j| format!("f{j}")).collect();
    Dataset::new(x, y, names).expect("valid random dataset")
}

fn split_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut with_split = 0;
    let trials = 400;
    for trial in 0..trials {
        let n = rng.random_range(1..=60);
        let p = rng.random_range(1..=6);
        let d = random_dataset(&mut rng, n, p, 5);
        let min_bucket = rng.random_range(1..=8);
        let params = FitParams {
            min_bucket,
            ..FitParams::default()
        };
        let got = cart::best_split(&d, &params);
        let want = brute_force_split(d.features(), d.labels(), min_bucket);
        check(got == want, || {
            format!("trial {trial} (n {n}, p {p}, min_bucket {min_bucket}): {got:?} vs {want:?}")
        })?;
        with_split += usize::from(want.is_some());
    }
    Ok(format!(
        "{trials} datasets agree with brute force ({with_split} with a split)"
    ))
}

// 4 -------------------------------------------------------------------------

/// Structural subtree: same root, and wherever `small` splits `big`
/// splits identically.
fn is_subtree(small: &TreeNode, big: &TreeNode) -> bool {
    if small.counts != big.counts {
        return false;
    }
    match (&small.split, &big.split) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => {
            a.rule == b.rule && is_subtree(&a.left, &b.left) && is_subtree(&a.right, &b.right)
        }
    }
}

fn count_nodes(t: &TreeNode) -> usize {
    1 + t
        .split
        .as_ref()
        .map_or(0, |s| count_nodes(&s.left) + count_nodes(&s.right))
}

fn pruning_monotone() -> Outcome {
    let grid = [0.0, 0.005, 0.01, 0.05, 0.2, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut trees = 0;
    let mut largest = 0;
    while trees < 80 {
        let (n, p) = (rng.random_range(40..=300), rng.random_range(2..=6));
        let d = random_dataset(&mut rng, n, p, 5);
        let params = FitParams {
            min_split: 4,
            min_bucket: 2,
            cp: 0.0,
            ..FitParams::default()
        };
        let full = cart::grow(&d, &params).map_err(|e| e.to_string())?;
        if full.n_leaves() < 3 {
            continue;
        }
        largest = largest.max(full.n_nodes());
        let mut prev = full.clone();
        for cp in grid {
            let t = cart::prune(&full, cp);
            check(count_nodes(t.root()) <= count_nodes(prev.root()), || {
                format!("tree {trees}: nodes grew at cp {cp}")
            })?;
            check(
                is_subtree(t.root(), full.root()) && is_subtree(t.root(), prev.root()),
                || format!("tree {trees}: cp {cp} is not a subtree"),
            )?;
            if cp == 0.0 {
                check(t == full, || format!("tree {trees}: cp 0 changed the tree"))?;
            }
            prev = t;
        }
        check(prev.n_nodes() == 1, || {
            format!("tree {trees}: cp 1 left {} nodes", prev.n_nodes())
        })?;
        trees += 1;
    }
    Ok(format!(
        "{trees} trees (up to {largest} nodes) over cp {grid:?}"
    ))
}

// 5 -------------------------------------------------------------------------

fn random_term(rng: &mut ChaCha8Rng, negated: bool, force_word: bool) -> Term {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";
    const QUOTED: &[char] = &['a', 'b', 'z', ' ', ':', '\'', '"', '(', ')', '!', '-', '.'];
    if force_word || rng.random_bool(0.75) {
        loop {
            let len = rng.random_range(1..=7);
            let w: String = (0..len)
                .map(|_| char::from(LETTERS[rng.random_range(0..LETTERS.len())]))
                .collect();
            if let Ok(t) = Term::word(w, negated) {
                return t;
            }
        }
    }
    loop {
        let len = rng.random_range(1..=8);
        let s: String = (0..len).map(|_| *QUOTED.choose(rng).unwrap()).collect();
        if let Ok(t) = Term::quoted(s, negated) {
            return t;
        }
    }
}

fn random_query(rng: &mut ChaCha8Rng) -> Query {
    let clauses = (0..rng.random_range(1..=6))
        .map(|_| {
            let force = rng.random_bool(0.5);
            let mut terms = vec![random_term(rng, false, force)];
            for _ in 0..rng.random_range(0..4) {
                let neg = rng.random_bool(0.3);
                terms.push(random_term(rng, neg, false));
            }
            terms.shuffle(rng);
            Clause::new(terms).unwrap()
        })
        .collect();
    Query::new(clauses).unwrap()
}

fn protocol_golden() -> Outcome {
    let q = query::parse_query(query::BUILTIN_PROTOCOL).map_err(|e| e.to_string())?;
    check(q.clauses().len() == 14, || {
        format!("{} clauses", q.clauses().len())
    })?;
    let c6: Vec<(&str, bool)> = q.clauses()[5]
        .terms()
        .iter()
        .map(|t| (t.text(), t.is_negated()))
        .collect();
    check(c6 == [("panas", false), ("cuaca", true)], || {
        format!("clause 6 is {c6:?}")
    })?;
    let c14 = &q.clauses()[13].terms()[0];
    check(
        c14.text() == ":'(" && c14.is_quoted() && !c14.is_negated(),
        || format!("clause 14 is {c14:?}"),
    )?;

    let cases: [(&str, bool); 20] = [
        ("Anakku demam tinggi", true),
        ("DEMAM berdarah lagi", true),
        ("Masuk rumah sakit tadi pagi", true),
        ("harus rawat inap", true),
        ("badan panas semua", true),
        ("panas", true),
        ("Panas banget cuaca hari ini", false),
        ("cuaca panas", false),
        ("panas, CUACA ekstrem", false),
        ("trombosit turun", true),
        ("muntah-muntah", true),
        ("pendarahan di hidung", true),
        ("orang tua saya", true),
        ("sedih :'(", true),
        ("sedih :'", false),
        ("sedih :(", false),
        ("hujan deras macet total", false),
        ("demamnya turun", false),
        ("rumahku jauh", false),
        ("", false),
    ];
    for (text, want) in cases {
        check(q.matches(text) == want, || {
            format!("{text:?} should give {want}")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trips = 600;
    for i in 0..trips {
        let q = random_query(&mut rng);
        let rendered = q.to_string();
        let back =
            query::parse_query(&rendered).map_err(|e| format!("query {i} `{rendered}`: {e}"))?;
        check(back == q, || {
            format!("query {i} `{rendered}` did not round-trip")
        })?;
    }
    Ok(format!("14 clauses, 20 hand texts, {trips} round-trips"))
}

// 6 -------------------------------------------------------------------------

fn pipeline_run(dir: &Path) -> Result<(), String> {
    let data = common::bundled_labeled();
    let out = dir.to_str().unwrap();
    cli(&[
        "--quiet",
        "--output-dir",
        out,
        "ingest",
        "--corpus",
        data.to_str().unwrap(),
    ])
    .success()?;
    let cleaned = dir.join("cleaned.ndjson");
    cli(&[
        "--quiet",
        "--output-dir",
        out,
        "train",
        "--corpus",
        cleaned.to_str().unwrap(),
    ])
    .success()?;
    Ok(())
}

fn end_to_end() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    pipeline_run(a.path())?;
    pipeline_run(b.path())?;

    let cleaned =
        corpus::load_labeled(a.path().join("cleaned.ndjson")).map_err(|e| e.to_string())?;
    check(cleaned.len() == 390, || {
        format!("{} cleaned records", cleaned.len())
    })?;
    let report = read_csv_map(&a.path().join("validation_report.csv"));
    check(
        report["n_train"] == "273" && report["n_valid"] == "117",
        || format!("split {}/{}", report["n_train"], report["n_valid"]),
    )?;
    let sens: f64 = report["sensitivity"].parse().unwrap();
    let spec: f64 = report["specificity"].parse().unwrap();
    check(sens > 0.9 && spec > 0.9, || {
        format!("sensitivity {sens}, specificity {spec}")
    })?;
    let txt = fs::read_to_string(a.path().join("validation_report.txt")).unwrap();
    check(
        txt.contains("n_train 273") && txt.contains("n_valid 117"),
        || "text report lacks split".into(),
    )?;

    for f in [
        "cleaned.ndjson",
        "model.json",
        "validation_report.csv",
        "validation_report.txt",
    ] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        check(x == y, || format!("{f} differs between runs"))?;
    }
    Ok(format!(
        "390 cleaned, 273/117, sensitivity {sens:.3}, specificity {spec:.3}, byte-identical"
    ))
}

// 7 -------------------------------------------------------------------------

fn stream_replay() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let week = synth::stream_week(100_000, 0.005, 77);
    let stream_path = out.join("stream.ndjson");
    corpus::write_corpus(fs::File::create(&stream_path).unwrap(), &week.records).unwrap();

    pipeline_run(out)?;
    let o = out.to_str().unwrap();
    cli(&[
        "--quiet",
        "--output-dir",
        o,
        "replay",
        "--corpus",
        stream_path.to_str().unwrap(),
        "--audit",
        "100,100",
    ])
    .success()?;

    let hits = healthmine::geo::load_hits(out.join("hits.ndjson")).map_err(|e| e.to_string())?;
    let b = BBox::INDONESIA;
    let outside = hits
        .iter()
        .filter(|h| {
            !h.tweet
                .coords
                .is_some_and(|(la, lo)| (-11.0..=6.0).contains(&la) && (95.0..=141.0).contains(&lo))
        })
        .count();
    check(outside == 0, || format!("{outside} hits outside the box"))?;
    check(hits.len() == week.in_bbox, || {
        format!("{} hits, {} records in the box", hits.len(), week.in_bbox)
    })?;
    check(b == BBox::default(), || "default box changed".into())?;

    let grid_total: u64 = common::read_csv_rows(&out.join("grid.csv"))
        .iter()
        .map(|r| r["count"].parse::<u64>().unwrap())
        .sum();
    check(grid_total == hits.len() as u64, || {
        format!("grid sums to {grid_total}, {} hits", hits.len())
    })?;
    let days = common::read_csv_rows(&out.join("daily.csv"));
    check(days.len() == 7, || format!("{} daily rows", days.len()))?;
    let day_total: u64 = days
        .iter()
        .map(|r| r["count"].parse::<u64>().unwrap())
        .sum();
    check(day_total == hits.len() as u64, || {
        format!("days sum to {day_total}")
    })?;

    let frac = hits.iter().filter(|h| h.predicted).count() as f64 / hits.len() as f64;
    let planted = week.planted_rate();
    check((frac - planted).abs() <= 0.002, || {
        format!("TRUE fraction {frac}, planted {planted}")
    })?;

    let audit = healthmine::geo::load_hits(out.join("audit.ndjson")).map_err(|e| e.to_string())?;
    check(audit.len() == 200, || format!("{} audit rows", audit.len()))?;
    check(
        audit[..100].iter().all(|h| h.predicted) && audit[100..].iter().all(|h| !h.predicted),
        || "audit strata out of order".into(),
    )?;
    let mut ids: Vec<&str> = audit.iter().map(|h| h.tweet.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    check(ids.len() == 200, || "audit sample repeats a record".into())?;
    Ok(format!(
        "{} hits in box, TRUE {:.3}% vs planted {:.3}%, 7 days, 200 audit rows",
        hits.len(),
        100.0 * frac,
        100.0 * planted
    ))
}

// 8 -------------------------------------------------------------------------

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const POOL: &[char] = &[
        'a', 'B', 'c', 'é', 'Ä', 'z', 'ß', 'İ', '0', '7', '٣', ' ', '\t', '\n', '.', ',', '!', '#',
        '@', '"', '\'', '(', ')', '-', '_', '+', '$', '°', '😢', '…', '«', '、', 'ー', 'ж', 'Ω',
        '\u{00a0}',
    ];
    (0..rng.random_range(0..40))
        .map(|_| *POOL.choose(rng).unwrap())
        .collect()
}

fn random_docs(rng: &mut ChaCha8Rng) -> Vec<TokenizedDoc> {
    const WORDS: &[&str] = &[
        "sakit", "hati", "demam", "rasa", "perut", "jalan", "makan", "orang",
    ];
    (0..rng.random_range(2..25))
        .map(|i| TokenizedDoc {
            doc_id: format!("d{i}"),
            tokens: (0..rng.random_range(0..12))
                .map(|_| WORDS.choose(rng).unwrap().to_string())
                .collect(),
        })
        .collect()
}

fn text_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = 600;
    for i in 0..cases {
        let s = random_text(&mut rng);
        let once = text::normalize(&s);
        check(text::normalize(&once) == once, || {
            format!("case {i}: normalize not idempotent on {s:?}")
        })?;
    }
    for i in 0..cases {
        let docs = random_docs(&mut rng);
        let vocab = text::build_vocab(&docs, 1);
        let (a, b) = (&docs[0], &docs[1]);
        let joined = TokenizedDoc {
            doc_id: "ab".into(),
            tokens: a.tokens.iter().chain(&b.tokens).cloned().collect(),
        };
        let sum: Vec<u32> = text::vectorize(a, &vocab)
            .iter()
            .zip(text::vectorize(b, &vocab))
            .map(|(x, y)| x + y)
            .collect();
        check(text::vectorize(&joined, &vocab) == sum, || {
            format!("case {i}: vectorize not additive")
        })?;
    }
    for i in 0..cases {
        let docs = random_docs(&mut rng);
        let k = rng.random_range(1..15);
        let lo = text::build_vocab(&docs, k).names();
        let hi = text::build_vocab(&docs, k + 1).names();
        check(hi.iter().all(|t| lo.contains(t)), || {
            format!("case {i}: min_freq {k} lost terms")
        })?;
    }
    let mut corr_checked = 0;
    for i in 0..cases {
        let docs = random_docs(&mut rng);
        let tdm = TermDocMatrix::build(&docs, text::build_vocab(&docs, 1));
        let names = tdm.vocabulary().names();
        if names.len() < 2 {
            continue;
        }
        let (x, y) = (&names[0], &names[names.len() - 1]);
        let (Ok(xy), Ok(yx), Ok(xx)) = (
            text::term_correlation(&tdm, x, y),
            text::term_correlation(&tdm, y, x),
            text::term_correlation(&tdm, x, x),
        ) else {
            continue;
        };
        check(
            xy == yx && (xx - 1.0).abs() < 1e-12 && xy.abs() <= 1.0 + 1e-12,
            || format!("case {i}: r({x},{y}) {xy}, r({y},{x}) {yx}, r({x},{x}) {xx}"),
        )?;
        corr_checked += 1;
    }
    check(corr_checked >= 500, || {
        format!("only {corr_checked} correlation cases")
    })?;

    let docs = synth::association_corpus(400, 3);
    let tdm = TermDocMatrix::build(&docs, text::build_vocab(&docs, 10));
    let top = text::top_associations(&tdm, "sakit", 0.0).map_err(|e| e.to_string())?;
    check(top.first().map(|(t, _)| t.as_str()) == Some("hati"), || {
        format!("associations {top:?}")
    })?;
    Ok(format!(
        "{cases} cases per property ({corr_checked} correlation), sakit partners {:?}",
        top.iter()
            .take(3)
            .map(|(t, _)| t.as_str())
            .collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "validation-column rates",
            Duration::from_secs(1),
            validation_rates,
        ),
        (
            "AUC property suite",
            Duration::from_secs(10),
            auc_properties,
        ),
        ("CART split oracle", Duration::from_secs(30), split_oracle),
        (
            "pruning monotonicity",
            Duration::from_secs(30),
            pruning_monotone,
        ),
        (
            "protocol parser golden",
            Duration::from_secs(5),
            protocol_golden,
        ),
        (
            "end-to-end at 390 tweets",
            Duration::from_secs(10),
            end_to_end,
        ),
        (
            "stream replay at 100k",
            Duration::from_secs(60),
            stream_replay,
        ),
        (
            "text pipeline properties",
            Duration::from_secs(10),
            text_properties,
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took > budget {
                Err(format!("took {took:.1?}, budget {budget:?}"))
            } else {
                Ok(msg)
            }
        });
        match result {
            Ok(msg) => println!("criterion {}: PASS  {name} [{took:.2?}] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{took:.2?}] {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
