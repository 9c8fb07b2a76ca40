//! BEACON: behavioral malware family classification from sandbox JSON reports.
//!
//! The pipeline turns hierarchical JSON behavior reports into fixed-length
//! dense vectors and trains a 1D CNN (plus MLP and BiLSTM baselines) for
//! multi-class family classification:
//!
//! 1. [`corpus`] — manifests, temporal train/test splits, k-fold plans.
//! 2. [`chunker`] — structure-aware splitting of serialized JSON under a
//!    token budget, preserving root-to-leaf key paths.
//! 3. [`embed`] — one 768-dim vector per chunk via a pluggable provider
//!    (remote wire protocol or deterministic local hashing), with an
//!    on-disk cache.
//! 4. [`aggregate`] — concatenation, per-sample PCA for long samples and
//!    mean-value padding for short ones, producing uniform-length vectors.
//! 5. [`nn`] — from-scratch tensors, layers, Adam, and training loops for
//!    the CNN/MLP/BiLSTM classifiers.
//! 6. [`metrics`] — confusion-matrix metrics, one-vs-rest PR curves, AUPRC.
//! 7. [`pipeline`] — stage orchestration over a work directory; the
//!    `beacon` binary is a thin wrapper around this module.
//!
//! See the crate examples for one runnable program per stage plus an
//! end-to-end run on a synthetic corpus ([`synth`]).

pub mod aggregate;
pub mod chunker;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod metrics;
pub mod nn;
pub mod pipeline;
pub mod synth;

pub use error::{Error, Result};
