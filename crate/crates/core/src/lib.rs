//! Core algorithms for affective explanation captioning (AEC).
//!
//! Everything in this crate is a pure function of its inputs: no file
//! system, no clock, no global state. Randomness is always driven by an
//! explicit seed. The crate is `no_std` and only needs `alloc`, so the
//! same code runs inside the `aec` command-line tool, in tests, and in
//! embedded or WASM hosts.
//!
//! Module map:
//!
//! - [`corpus`]: annotation records, preprocessing, vocabulary, splits,
//!   embedding tables, nearest-neighbor image selection and deduplication.
//! - [`lexicons`]: concreteness, sentiment valence, subjectivity and simile
//!   scorers over token lists.
//! - [`analysis`]: corpus statistics (part-of-speech tables, emotion
//!   distribution, annotator agreement) and the bundled analysis report.
//! - [`classifiers`]: bag-of-n-grams text→emotion classifier and a linear
//!   image→emotion-distribution probe.
//! - [`listener`]: retrieval trials and curves over embeddings, plus a
//!   trainable contrastive projection.
//! - [`pragmatics`]: listener/speaker fused re-ranking of candidate captions.
//! - [`metrics`]: BLEU, ROUGE-L, CLIPScore, RefCLIPScore, diversity and
//!   affective metrics and the combined report.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod classifiers;
pub mod corpus;
pub mod emotion;
mod error;
pub mod lexicons;
pub mod listener;
mod measured;
pub mod metrics;
pub mod pragmatics;
pub mod text;
pub mod vector;

pub use emotion::{EmotionDistribution, EmotionLabel, Sentiment, Valence};
pub use error::{Error, Result};
pub use measured::Measured;
