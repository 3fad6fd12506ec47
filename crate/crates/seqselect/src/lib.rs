//! Penalized model selection for sparse signals observed in heterogeneous
//! Gaussian noise.
//!
//! The data model is the sequence space observation `X_lambda = f_lambda +
//! xi_lambda` for `lambda = 1..=n`, where the noise is independent centred
//! Gaussian with known per-coordinate variances `sigma_lambda^2`. Because
//! every coordinate carries its own variance, the complexity charge of a
//! selection depends not only on how many coefficients enter the model but
//! on which ones: the penalty weights the selected variances by their rank.
//!
//! What's here:
//!
//! - [`seqmodel`]: noise profiles (linear, fractional-integration, inverse
//!   problem, custom), sparse signal generation, observation sampling, and
//!   squared-error loss.
//! - [`penalty`]: the explicit rank-weighted penalty, the penalized
//!   empirical risk, the risk-hull value, and exact incremental insertion
//!   deltas.
//! - [`selectors`]: the adaptive threshold rule, a two-phase greedy full
//!   subset search, exhaustive enumeration at test scale, the universal and
//!   sparsity-informed thresholds, the sparsity-tuned minimax estimator with
//!   its normalization solver, and the two simulation oracles.
//! - [`bounds`]: leading-order minimax lower bounds (weighted entropy,
//!   uniform weights, top-r) and the matching upper bound.
//! - [`harness`]: a reproducible Monte Carlo engine with relative-error
//!   reports, figure-data emission, and the numerical verification suites.
//! - [`cli`]: the `seqselect` binary (`simulate`, `estimate`, `bounds`,
//!   `figure`, `verify`).
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example threshold_selectors`.

// validation guards use the negated form `!(x > 0.0)` so that NaN inputs are
// rejected along with non-positive ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod numfmt;
pub mod penalty;
pub mod selectors;
pub mod seqmodel;

pub use error::{Error, Result};
pub use penalty::PenaltyContext;
pub use seqmodel::{observe, NoiseProfile, SelectionMask, SequenceData, Signal};
pub use selectors::{SelectorId, SelectorResult};
