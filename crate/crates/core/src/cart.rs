//! Binary CART classification over non-negative count features.
//!
//! Splits use the Gini criterion. A row goes LEFT when its feature value
//! is strictly below the threshold; thresholds sit at midpoints between
//! consecutive distinct observed values. Candidate splits are compared
//! in exact integer arithmetic, so equal-gain candidates are true ties and
//! resolve to the lowest feature index, then the lowest threshold.
//!
//! Growth stops at pure nodes, nodes under `min_split` rows, `max_depth`,
//! when no split leaves `min_bucket` rows on both sides with positive
//! gain, or when the split's share of root impurity falls below `cp`.
//! [`prune`] then applies weakest-link cost-complexity pruning on training
//! misclassification counts.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CartError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset has no features")]
    NoFeatures,
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
    #[error("duplicate feature name `{0}`")]
    DuplicateFeature(String),
    #[error("feature vector has length {got}, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gini impurity is undefined for an empty node")]
    EmptyNode,
    #[error("train fraction {0} is not in (0, 1)")]
    InvalidFraction(f64),
    #[error("split of {n} rows gives {n_train} training and {n_valid} validation rows")]
    DegenerateSplit {
        n: usize,
        n_train: usize,
        n_valid: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Count features with boolean labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<u32>>,
    labels: Vec<bool>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<u32>>,
        labels: Vec<bool>,
        feature_names: Vec<String>,
    ) -> Result<Self, CartError> {
        if features.is_empty() {
            return Err(CartError::EmptyDataset);
        }
        if feature_names.is_empty() {
            return Err(CartError::NoFeatures);
        }
        if labels.len() != features.len() {
            return Err(CartError::LabelCount {
                rows: features.len(),
                labels: labels.len(),
            });
        }
        let p = feature_names.len();
        if let Some((row, r)) = features.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(CartError::RaggedRow {
                row,
                expected: p,
                got: r.len(),
            });
        }
        check_distinct(&feature_names)?;
        Ok(Dataset {
            features,
            labels,
            feature_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn features(&self) -> &[Vec<u32>] {
        &self.features
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_counts(&self) -> ClassCounts {
        ClassCounts::of(self.labels.iter().copied())
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset, CartError> {
        Dataset::new(
            indices.iter().map(|&i| self.features[i].clone()).collect(),
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.feature_names.clone(),
        )
    }
}

fn check_distinct(names: &[String]) -> Result<(), CartError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(CartError::DuplicateFeature(n.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub n_false: u64,
    pub n_true: u64,
}

impl ClassCounts {
    pub fn new(n_false: u64, n_true: u64) -> Self {
        ClassCounts { n_false, n_true }
    }

    fn of(labels: impl Iterator<Item = bool>) -> Self {
        let mut c = ClassCounts::default();
        for l in labels {
            c.add(l);
        }
        c
    }

    fn add(&mut self, label: bool) {
        if label {
            self.n_true += 1;
        } else {
            self.n_false += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.n_false + self.n_true
    }

    pub fn is_pure(&self) -> bool {
        self.n_false == 0 || self.n_true == 0
    }

    /// Majority class; an even split resolves to `false`.
    pub fn majority(&self) -> bool {
        self.n_true > self.n_false
    }

    /// Training rows misclassified when this node predicts its majority.
    pub fn misclassified(&self) -> u64 {
        self.n_false.min(self.n_true)
    }

    pub fn p_true(&self) -> f64 {
        self.n_true as f64 / self.total() as f64
    }

    /// Sum of squared class counts, the integer core of the Gini index.
    fn sum_sq(&self) -> u128 {
        let (f, t) = (self.n_false as u128, self.n_true as u128);
        f * f + t * t
    }
}

impl std::ops::Add for ClassCounts {
    type Output = ClassCounts;

    fn add(self, o: ClassCounts) -> ClassCounts {
        ClassCounts::new(self.n_false + o.n_false, self.n_true + o.n_true)
    }
}

/// Gini impurity `1 - p_false² - p_true²`.
pub fn gini(counts: ClassCounts) -> Result<f64, CartError> {
    let n = counts.total();
    if n == 0 {
        return Err(CartError::EmptyNode);
    }
    let pf = counts.n_false as f64 / n as f64;
    let pt = counts.n_true as f64 / n as f64;
    Ok(1.0 - pf * pf - pt * pt)
}

/// Routing rule: LEFT iff `x[feature_index] < threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRule {
    pub feature_index: usize,
    pub threshold: f64,
}

impl SplitRule {
    pub fn goes_left(&self, x: &[u32]) -> bool {
        f64::from(x[self.feature_index]) < self.threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub min_split: usize,
    pub min_bucket: usize,
    pub cp: f64,
    pub max_depth: usize,
    /// Seed for the train/validation partition. Fitting itself is
    /// deterministic.
    pub seed: u64,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            min_split: 20,
            min_bucket: 7,
            cp: 0.01,
            max_depth: 30,
            seed: 0,
        }
    }
}

impl FitParams {
    /// Checks the hard constraints and returns any soft warnings.
    pub fn validate(&self) -> Result<Vec<String>, CartError> {
        if self.min_bucket < 1 {
            return Err(CartError::InvalidParams(
                "min_bucket must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.cp) {
            return Err(CartError::InvalidParams(format!(
                "cp {} is not in [0, 1]",
                self.cp
            )));
        }
        let mut warnings = Vec::new();
        if self.min_split < 2 * self.min_bucket {
            warnings.push(format!(
                "min_split {} is below 2 * min_bucket ({}); nodes that small can never split",
                self.min_split,
                2 * self.min_bucket
            ));
        }
        Ok(warnings)
    }
}

/// Score of a candidate split as an exact fraction: the weighted sum of
/// squared class proportions over the two children, times n. Maximizing it
/// maximizes the Gini decrease.
#[derive(Debug, Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn of_children(l: ClassCounts, r: ClassCounts) -> Score {
        let (nl, nr) = (l.total() as u128, r.total() as u128);
        Score {
            num: l.sum_sq() * nr + r.sum_sq() * nl,
            den: nl * nr,
        }
    }

    fn of_parent(p: ClassCounts) -> Score {
        Score {
            num: p.sum_sq(),
            den: p.total() as u128,
        }
    }

    fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Score {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Score {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    rule: SplitRule,
    /// Gini decrease `G(parent) - nL/n G(L) - nR/n G(R)`.
    gain: f64,
}

fn find_split(data: &Dataset, rows: &[usize], min_bucket: usize) -> Option<Candidate> {
    let parent = ClassCounts::of(rows.iter().map(|&i| data.labels[i]));
    if parent.is_pure() {
        return None;
    }
    let n = rows.len();
    let parent_score = Score::of_parent(parent);
    let min_bucket = min_bucket.max(1);
    let mut best: Option<(SplitRule, Score)> = None;
    let mut order: Vec<usize> = rows.to_vec();

    for f in 0..data.n_features() {
        order.sort_by_key(|&i| data.features[i][f]);
        let mut left = ClassCounts::default();
        for k in 0..n - 1 {
            left.add(data.labels[order[k]]);
            let (v, next) = (data.features[order[k]][f], data.features[order[k + 1]][f]);
            if v == next {
                continue;
            }
            let n_left = k + 1;
            if n_left < min_bucket || n - n_left < min_bucket {
                continue;
            }
            let right =
                ClassCounts::new(parent.n_false - left.n_false, parent.n_true - left.n_true);
            let score = Score::of_children(left, right);
            if score <= parent_score {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                let threshold = (f64::from(v) + f64::from(next)) / 2.0;
                best = Some((
                    SplitRule {
                        feature_index: f,
                        threshold,
                    },
                    score,
                ));
            }
        }
    }

    best.map(|(rule, score)| Candidate {
        rule,
        gain: (score.value() - parent_score.value()) / n as f64,
    })
}

/// The gain-maximizing legal split of the whole dataset, if any split has
/// positive gain with at least `min_bucket` rows on each side.
pub fn best_split(data: &Dataset, params: &FitParams) -> Option<SplitRule> {
    let rows: Vec<usize> = (0..data.n_rows()).collect();
    find_split(data, &rows, params.min_bucket).map(|c| c.rule)
}

/// Like [`best_split`] but also reports the Gini decrease.
pub fn best_split_with_gain(data: &Dataset, params: &FitParams) -> Option<(SplitRule, f64)> {
    let rows: Vec<usize> = (0..data.n_rows()).collect();
    find_split(data, &rows, params.min_bucket).map(|c| (c.rule, c.gain))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub counts: ClassCounts,
    pub split: Option<Box<Split>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub rule: SplitRule,
    pub left: TreeNode,
    pub right: TreeNode,
}

impl TreeNode {
    pub fn leaf(counts: ClassCounts) -> Self {
        TreeNode {
            counts,
            split: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    pub fn predicted_class(&self) -> bool {
        self.counts.majority()
    }

    pub fn p_true(&self) -> f64 {
        self.counts.p_true()
    }

    pub fn n_nodes(&self) -> usize {
        1 + self
            .split
            .as_ref()
            .map_or(0, |s| s.left.n_nodes() + s.right.n_nodes())
    }

    pub fn n_leaves(&self) -> usize {
        self.split
            .as_ref()
            .map_or(1, |s| s.left.n_leaves() + s.right.n_leaves())
    }

    pub fn depth(&self) -> usize {
        self.split
            .as_ref()
            .map_or(0, |s| 1 + s.left.depth().max(s.right.depth()))
    }

    /// Misclassified training rows summed over the leaves below this node.
    fn subtree_errors(&self) -> u64 {
        match &self.split {
            None => self.counts.misclassified(),
            Some(s) => s.left.subtree_errors() + s.right.subtree_errors(),
        }
    }

    /// True if `self` is `other` with zero or more subtrees collapsed.
    pub fn is_subtree_of(&self, other: &TreeNode) -> bool {
        if self.counts != other.counts {
            return false;
        }
        match (&self.split, &other.split) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => {
                a.rule == b.rule && a.left.is_subtree_of(&b.left) && a.right.is_subtree_of(&b.right)
            }
        }
    }
}

/// A fitted classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    root: TreeNode,
    feature_names: Vec<String>,
    params: FitParams,
}

impl Tree {
    /// Assembles a tree, checking structural invariants.
    pub fn from_parts(
        root: TreeNode,
        feature_names: Vec<String>,
        params: FitParams,
    ) -> Result<Self, CartError> {
        if feature_names.is_empty() {
            return Err(CartError::InvalidModel("no features".into()));
        }
        check_distinct(&feature_names).map_err(|e| CartError::InvalidModel(e.to_string()))?;
        params.validate()?;
        validate_node(&root, feature_names.len())?;
        Ok(Tree {
            root,
            feature_names,
            params,
        })
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn params(&self) -> &FitParams {
        &self.params
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.root.n_nodes()
    }

    pub fn n_leaves(&self) -> usize {
        self.root.n_leaves()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn is_subtree_of(&self, other: &Tree) -> bool {
        self.root.is_subtree_of(&other.root)
    }

    pub fn leaf_for(&self, x: &[u32]) -> Result<&TreeNode, CartError> {
        if x.len() != self.n_features() {
            return Err(CartError::DimensionMismatch {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        let mut node = &self.root;
        while let Some(s) = &node.split {
            node = if s.rule.goes_left(x) {
                &s.left
            } else {
                &s.right
            };
        }
        Ok(node)
    }

    pub fn predict(&self, x: &[u32]) -> Result<bool, CartError> {
        self.leaf_for(x).map(TreeNode::predicted_class)
    }

    pub fn predict_proba(&self, x: &[u32]) -> Result<f64, CartError> {
        self.leaf_for(x).map(TreeNode::p_true)
    }

    /// Indented text rendering, one node per line.
    pub fn describe(&self) -> String {
        fn walk(node: &TreeNode, names: &[String], depth: usize, out: &mut String) {
            let pad = "  ".repeat(depth);
            let c = node.counts;
            match &node.split {
                None => out.push_str(&format!(
                    "{pad}leaf -> {} (false {}, true {}, p_true {:.3})\n",
                    if node.predicted_class() {
                        "TRUE"
                    } else {
                        "FALSE"
                    },
                    c.n_false,
                    c.n_true,
                    node.p_true()
                )),
                Some(s) => {
                    let name = &names[s.rule.feature_index];
                    out.push_str(&format!(
                        "{pad}{name} < {} (false {}, true {})\n",
                        s.rule.threshold, c.n_false, c.n_true
                    ));
                    walk(&s.left, names, depth + 1, out);
                    out.push_str(&format!("{pad}{name} >= {}\n", s.rule.threshold));
                    walk(&s.right, names, depth + 1, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, &self.feature_names, 0, &mut out);
        out
    }
}

fn validate_node(node: &TreeNode, p: usize) -> Result<(), CartError> {
    if node.counts.total() == 0 {
        return Err(CartError::InvalidModel("node with no training rows".into()));
    }
    if let Some(s) = &node.split {
        if s.rule.feature_index >= p {
            return Err(CartError::InvalidModel(format!(
                "split on feature {} of {p}",
                s.rule.feature_index
            )));
        }
        if !s.rule.threshold.is_finite() {
            return Err(CartError::InvalidModel("non-finite threshold".into()));
        }
        if s.left.counts + s.right.counts != node.counts {
            return Err(CartError::InvalidModel(
                "node class counts differ from the sum of its children".into(),
            ));
        }
        validate_node(&s.left, p)?;
        validate_node(&s.right, p)?;
    }
    Ok(())
}

/// Recursive partitioning under the stopping rules of [`FitParams`].
pub fn grow(data: &Dataset, params: &FitParams) -> Result<Tree, CartError> {
    params.validate()?;
    let rows: Vec<usize> = (0..data.n_rows()).collect();
    let root_counts = data.class_counts();
    let root_impurity = gini(root_counts)?;
    let ctx = GrowContext {
        data,
        params,
        n_root: data.n_rows() as f64,
        root_impurity,
    };
    let root = ctx.grow_node(&rows, 0);
    Ok(Tree {
        root,
        feature_names: data.feature_names.clone(),
        params: params.clone(),
    })
}

struct GrowContext<'a> {
    data: &'a Dataset,
    params: &'a FitParams,
    n_root: f64,
    root_impurity: f64,
}

impl GrowContext<'_> {
    fn grow_node(&self, rows: &[usize], depth: usize) -> TreeNode {
        let counts = ClassCounts::of(rows.iter().map(|&i| self.data.labels[i]));
        let leaf = TreeNode::leaf(counts);
        if counts.is_pure() || rows.len() < self.params.min_split || depth >= self.params.max_depth
        {
            return leaf;
        }
        let Some(cand) = find_split(self.data, rows, self.params.min_bucket) else {
            return leaf;
        };
        // Gain weighted by the node's share of the training rows, relative
        // to the root impurity.
        let improvement = cand.gain * rows.len() as f64 / self.n_root / self.root_impurity;
        if improvement < self.params.cp {
            return leaf;
        }
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| cand.rule.goes_left(&self.data.features[i]));
        TreeNode {
            counts,
            split: Some(Box::new(Split {
                rule: cand.rule,
                left: self.grow_node(&left, depth + 1),
                right: self.grow_node(&right, depth + 1),
            })),
        }
    }
}

/// Weakest-link cost-complexity pruning.
///
/// For an internal node `t` the link strength is
/// `(R(t) - R(T_t)) / (leaves(T_t) - 1)`, with `R` counting misclassified
/// training rows. The weakest link is collapsed repeatedly while its
/// strength is at most `cp * R(root)`. `cp = 0` leaves the tree unchanged.
pub fn prune(tree: &Tree, cp: f64) -> Tree {
    let mut root = tree.root.clone();
    if cp > 0.0 {
        let budget = cp * root.counts.misclassified() as f64;
        while let Some((path, num, den)) = weakest_link(&root) {
            if num as f64 > budget * den as f64 {
                break;
            }
            collapse(&mut root, &path);
        }
    }
    Tree {
        root,
        feature_names: tree.feature_names.clone(),
        params: tree.params.clone(),
    }
}

/// Path (false = left) to the internal node with the smallest link
/// strength, returned as the fraction `num / den`. Ties go to the first
/// node in preorder.
fn weakest_link(root: &TreeNode) -> Option<(Vec<bool>, u64, u64)> {
    fn visit(node: &TreeNode, path: &mut Vec<bool>, best: &mut Option<(Vec<bool>, u64, u64)>) {
        let Some(s) = &node.split else { return };
        let num = node.counts.misclassified() - node.subtree_errors();
        let den = node.n_leaves() as u64 - 1;
        let better = best.as_ref().is_none_or(|(_, bn, bd)| {
            (num as u128) * (*bd as u128) < (*bn as u128) * (den as u128)
        });
        if better {
            *best = Some((path.clone(), num, den));
        }
        path.push(false);
        visit(&s.left, path, best);
        path.pop();
        path.push(true);
        visit(&s.right, path, best);
        path.pop();
    }
    let mut best = None;
    visit(root, &mut Vec::new(), &mut best);
    best
}

fn collapse(root: &mut TreeNode, path: &[bool]) {
    let mut node = root;
    for &right in path {
        let s = node.split.as_mut().expect("path follows internal nodes");
        node = if right { &mut s.right } else { &mut s.left };
    }
    node.split = None;
}

/// Row indices of a seeded uniform partition: `round(n * fraction)`
/// training rows and the rest for validation, each in ascending order.
pub fn split_indices(
    n: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), CartError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CartError::InvalidFraction(train_fraction));
    }
    let n_train = (n as f64 * train_fraction).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(CartError::DegenerateSplit {
            n,
            n_train,
            n_valid: n.saturating_sub(n_train),
        });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = idx[..n_train].to_vec();
    let mut valid = idx[n_train..].to_vec();
    train.sort_unstable();
    valid.sort_unstable();
    Ok((train, valid))
}

pub fn train_valid_split(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), CartError> {
    let (train, valid) = split_indices(data.n_rows(), train_fraction, seed)?;
    Ok((data.subset(&train)?, data.subset(&valid)?))
}

// Model document -------------------------------------------------------

pub const MODEL_FORMAT: &str = "healthmine-cart";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TreeDoc {
    pub params: FitParams,
    pub feature_names: Vec<String>,
    pub root: NodeDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct NodeDoc {
    counts: [u64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<Box<SplitDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SplitDoc {
    feature: String,
    threshold: f64,
    left: NodeDoc,
    right: NodeDoc,
}

impl TreeDoc {
    pub(crate) fn from_tree(tree: &Tree) -> Self {
        fn node(n: &TreeNode, names: &[String]) -> NodeDoc {
            NodeDoc {
                counts: [n.counts.n_false, n.counts.n_true],
                split: n.split.as_ref().map(|s| {
                    Box::new(SplitDoc {
                        feature: names[s.rule.feature_index].clone(),
                        threshold: s.rule.threshold,
                        left: node(&s.left, names),
                        right: node(&s.right, names),
                    })
                }),
            }
        }
        TreeDoc {
            params: tree.params.clone(),
            feature_names: tree.feature_names.clone(),
            root: node(&tree.root, &tree.feature_names),
        }
    }

    pub(crate) fn into_tree(self) -> Result<Tree, CartError> {
        fn node(d: NodeDoc, names: &[String]) -> Result<TreeNode, CartError> {
            let counts = ClassCounts::new(d.counts[0], d.counts[1]);
            let split = match d.split {
                None => None,
                Some(s) => {
                    let s = *s;
                    let feature_index =
                        names.iter().position(|n| *n == s.feature).ok_or_else(|| {
                            CartError::InvalidModel(format!(
                                "split on unknown feature `{}`",
                                s.feature
                            ))
                        })?;
                    Some(Box::new(Split {
                        rule: SplitRule {
                            feature_index,
                            threshold: s.threshold,
                        },
                        left: node(s.left, names)?,
                        right: node(s.right, names)?,
                    }))
                }
            };
            Ok(TreeNode { counts, split })
        }
        let root = node(self.root, &self.feature_names)?;
        Tree::from_parts(root, self.feature_names, self.params)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StandaloneDoc {
    format: String,
    version: u32,
    #[serde(flatten)]
    tree: TreeDoc,
}

impl Tree {
    /// Versioned JSON model document.
    pub fn to_json(&self) -> String {
        let doc = StandaloneDoc {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            tree: TreeDoc::from_tree(self),
        };
        serde_json::to_string_pretty(&doc).expect("tree serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Tree, CartError> {
        let doc: StandaloneDoc =
            serde_json::from_str(s).map_err(|e| CartError::InvalidModel(e.to_string()))?;
        check_header(&doc.format, doc.version)?;
        doc.tree.into_tree()
    }
}

pub(crate) fn check_header(format: &str, version: u32) -> Result<(), CartError> {
    if format != MODEL_FORMAT {
        return Err(CartError::InvalidModel(format!(
            "unknown format `{format}`"
        )));
    }
    if version != MODEL_VERSION {
        return Err(CartError::InvalidModel(format!(
            "unsupported version {version}"
        )));
    }
    Ok(())
}
