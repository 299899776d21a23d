//! Health-event mining over tweet corpora.
//!
//! The crate covers the whole pipeline from raw newline-delimited tweet
//! records to auditable geographic signal counts:
//!
//! * [`corpus`]: load, validate, deduplicate and filter tweet records.
//! * [`query`]: parse and evaluate the boolean keyword protocol
//!   (`demam OR panas -cuaca OR ':'('`).
//! * [`text`]: normalize Bahasa Indonesia text, build a minimum-frequency
//!   vocabulary, count vectors and term correlations.
//! * [`cart`]: grow, prune and apply a binary Gini CART classifier.
//! * [`metrics`]: confusion matrix rates, ROC curve and AUC.
//! * [`geo`]: replay a corpus as an ordered stream, classify it, bin hits
//!   on a lat/lon grid and per UTC day, and draw stratified audit samples.
//! * [`pipeline`] and [`config`]: the composed stages behind the
//!   `healthmine` command line tool.
//!
//! Runnable walkthroughs for each capability live in the crate's
//! `examples/` directory.

pub mod cart;
pub mod config;
pub mod corpus;
mod error;
pub mod geo;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod query;
pub mod seed;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
