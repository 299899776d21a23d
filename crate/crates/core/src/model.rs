//! A fitted tree bundled with the vocabulary that produces its features.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cart::{self, CartError, Tree, TreeDoc};
use crate::text::{self, Stopwords, Vocabulary};

#[derive(Debug, Clone, PartialEq)]
pub struct TextModel {
    tree: Tree,
    vocabulary: Vocabulary,
    binary_features: bool,
}

impl TextModel {
    /// Fails unless the tree's feature names are the vocabulary terms in
    /// vocabulary order.
    pub fn new(
        tree: Tree,
        vocabulary: Vocabulary,
        binary_features: bool,
    ) -> Result<Self, CartError> {
        let names = vocabulary.names();
        if names.len() != tree.n_features() {
            return Err(CartError::DimensionMismatch {
                expected: tree.n_features(),
                got: names.len(),
            });
        }
        if names != tree.feature_names() {
            return Err(CartError::InvalidModel(
                "tree features do not match the vocabulary".into(),
            ));
        }
        Ok(TextModel {
            tree,
            vocabulary,
            binary_features,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn binary_features(&self) -> bool {
        self.binary_features
    }

    /// Feature vector of already normalized, stopword-filtered tokens.
    pub fn features(&self, tokens: &[String]) -> Vec<u32> {
        let mut v = text::vectorize_tokens(tokens, &self.vocabulary);
        if self.binary_features {
            v.iter_mut().for_each(|c| *c = (*c).min(1));
        }
        v
    }

    /// Predicted class and leaf probability for raw text.
    pub fn classify(&self, raw: &str, stopwords: &Stopwords) -> (bool, f64) {
        let tokens = text::remove_stopwords(text::tokenize(&text::normalize(raw)), stopwords);
        let leaf = self
            .tree
            .leaf_for(&self.features(&tokens))
            .expect("feature length fixed by construction");
        (leaf.predicted_class(), leaf.p_true())
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            format: cart::MODEL_FORMAT.into(),
            version: cart::MODEL_VERSION,
            binary_features: self.binary_features,
            vocabulary: VocabDoc {
                min_freq: self.vocabulary.min_freq(),
                terms: self.vocabulary.terms().to_vec(),
            },
            tree: TreeDoc::from_tree(&self.tree),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("model serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CartError> {
        let doc: ModelDoc =
            serde_json::from_str(s).map_err(|e| CartError::InvalidModel(e.to_string()))?;
        cart::check_header(&doc.format, doc.version)?;
        let vocabulary = Vocabulary::from_entries(doc.vocabulary.terms, doc.vocabulary.min_freq)
            .map_err(CartError::InvalidModel)?;
        let tree = doc.tree.into_tree()?;
        TextModel::new(tree, vocabulary, doc.binary_features)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, crate::Error> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        Ok(TextModel::from_json(&s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), crate::Error> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| crate::Error::io(path, e))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    version: u32,
    binary_features: bool,
    vocabulary: VocabDoc,
    tree: TreeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabDoc {
    min_freq: u64,
    terms: Vec<(String, u64)>,
}
