//! The explicit rank-weighted penalty, the penalized empirical risk it
//! induces, the associated risk-hull value, and exact incremental updates
//! under single-coordinate insertion.
//!
//! For a selection `h` with `k = |h|` coordinates the penalty is
//!
//! ```text
//! Pen(h) = 2 * sum_{j=1..k} sigma_{(j)}^2 * (log(n e / j) + log_+(n ||Sigma||) / j)
//! ```
//!
//! where `sigma_{(j)}^2` is the j-th largest noise variance among the
//! selected coordinates and `log_+(z) = max(log z, 0)`. The penalized
//! empirical risk is `Rbar(X, h) = - sum_h X^2 + 2 Pen(h)`, so each selected
//! coordinate is charged `4 sigma^2 (log(ne/j) + log_+(n||Sigma||)/j)` at its
//! variance rank `j`. Ranks are over the selected variances in descending
//! order; ties are broken by ascending coordinate index so that incremental
//! bookkeeping is exact.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::seqmodel::{NoiseProfile, SelectionMask, SequenceData, Signal};

/// `log_+(z) = max(log z, 0)`, with the limit convention `log_+(0) = 0`.
pub fn log_plus(z: f64) -> f64 {
    if z > 1.0 {
        z.ln()
    } else {
        0.0
    }
}

/// Precomputed quantities shared by every penalty evaluation on one profile.
#[derive(Debug, Clone)]
pub struct PenaltyContext {
    profile: NoiseProfile,
    /// `log(n e / j)` for `j = 1..=n` (index `j - 1`).
    log_ne: Vec<f64>,
    /// `log_+(n ||Sigma||)`.
    log_plus_nsigma: f64,
}

impl PenaltyContext {
    pub fn new(profile: &NoiseProfile) -> Self {
        let n = profile.n();
        let ln_n = (n as f64).ln();
        let log_ne = (1..=n).map(|j| ln_n + 1.0 - (j as f64).ln()).collect();
        let log_plus_nsigma = log_plus(n as f64 * profile.sigma_norm());
        Self { profile: profile.clone(), log_ne, log_plus_nsigma }
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn profile(&self) -> &NoiseProfile {
        &self.profile
    }

    /// `log(n e / j)` for a 1-based rank `j`.
    pub fn log_ne(&self, j: usize) -> f64 {
        self.log_ne[j - 1]
    }

    pub fn log_plus_nsigma(&self) -> f64 {
        self.log_plus_nsigma
    }

    /// Penalty weight of rank `j`: `log(ne/j) + log_+(n||Sigma||)/j`.
    pub fn rank_weight(&self, j: usize) -> f64 {
        self.log_ne[j - 1] + self.log_plus_nsigma / j as f64
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: len });
        }
        Ok(())
    }
}

/// Rank order of selected coordinates: descending variance, ties broken by
/// ascending index (the smaller index takes the rank closer to 1).
pub(crate) fn rank_order(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1))
}

/// `Pen(h)`; zero for the empty selection.
pub fn penalty(mask: &SelectionMask, ctx: &PenaltyContext) -> Result<f64> {
    ctx.check_len(mask.n())?;
    let mut selected: Vec<(f64, usize)> = mask
        .bits()
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some((ctx.profile.sigma_sq(i), i)))
        .collect();
    selected.sort_by(rank_order);
    let mut sum = 0.0;
    for (j, &(sq, _)) in selected.iter().enumerate() {
        sum += 2.0 * sq * ctx.rank_weight(j + 1);
    }
    Ok(sum)
}

/// `Rbar(X, h) = - sum_{h} X^2 + 2 Pen(h)`; may be negative.
pub fn penalized_empirical_risk(
    data: &SequenceData,
    mask: &SelectionMask,
    ctx: &PenaltyContext,
) -> Result<f64> {
    ctx.check_len(data.n())?;
    ctx.check_len(mask.n())?;
    let data_term: f64 = data
        .x()
        .iter()
        .zip(mask.bits())
        .map(|(&x, &b)| if b { x * x } else { 0.0 })
        .sum();
    Ok(-data_term + 2.0 * penalty(mask, ctx)?)
}

/// Risk-hull value `sum (1 - h) f^2 + Pen(h) + sqrt(2) min(1/n, ||Sigma||)`.
pub fn risk_hull(signal: &Signal, mask: &SelectionMask, ctx: &PenaltyContext) -> Result<f64> {
    ctx.check_len(signal.n())?;
    ctx.check_len(mask.n())?;
    let bias: f64 = signal
        .values()
        .iter()
        .zip(mask.bits())
        .map(|(&f, &b)| if b { 0.0 } else { f * f })
        .sum();
    let n = ctx.n() as f64;
    Ok(bias + penalty(mask, ctx)? + std::f64::consts::SQRT_2 * (1.0 / n).min(ctx.profile.sigma_norm()))
}

/// Change of the penalized empirical risk when coordinate `lambda0` (0-based)
/// is added to `mask`:
///
/// ```text
/// -X^2 + 4 sigma0^2 (log(ne/R0) + log_+(n||Sigma||)/R0)
///      - 4 sum_{bumped} sigma^2 (log(1 + 1/R) + log_+(n||Sigma||)/(R (R+1)))
/// ```
///
/// `R0` is the rank the new coordinate takes after insertion and the bumped
/// sum runs over selected coordinates ranked below it (pre-insertion ranks
/// `R`). Equals `Rbar(mask + lambda0) - Rbar(mask)` exactly, ties included.
pub fn insertion_delta(
    data: &SequenceData,
    mask: &SelectionMask,
    lambda0: usize,
    ctx: &PenaltyContext,
) -> Result<f64> {
    ctx.check_len(data.n())?;
    ctx.check_len(mask.n())?;
    if lambda0 >= ctx.n() {
        return Err(Error::InvalidArgument(format!(
            "coordinate {lambda0} out of range for n = {}",
            ctx.n()
        )));
    }
    if mask.is_selected(lambda0) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {lambda0} is already selected"
        )));
    }
    let mut ranked = RankedSelection::new();
    for (i, &b) in mask.bits().iter().enumerate() {
        if b {
            ranked.insert(ctx.profile.sigma_sq(i), i);
        }
    }
    Ok(ranked.insertion_delta(data.x()[lambda0], ctx.profile.sigma_sq(lambda0), lambda0, ctx))
}

/// Selected coordinates kept in rank order, supporting exact O(k) insertion
/// deltas. Single-owner mutable state used by the incremental selectors.
#[derive(Debug, Clone, Default)]
pub(crate) struct RankedSelection {
    /// `(sigma^2, index)` sorted by `rank_order` (rank 1 first).
    entries: Vec<(f64, usize)>,
}

impl RankedSelection {
    pub(crate) fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// 0-based position the key would occupy; its 1-based rank is `pos + 1`.
    pub(crate) fn insertion_point(&self, sq: f64, idx: usize) -> usize {
        let key = (sq, idx);
        self.entries.partition_point(|e| rank_order(e, &key) == Ordering::Less)
    }

    /// Exact change of `Rbar` if `(x, sq, idx)` were inserted now.
    pub(crate) fn insertion_delta(&self, x: f64, sq: f64, idx: usize, ctx: &PenaltyContext) -> f64 {
        let p = self.insertion_point(sq, idx);
        -x * x + 4.0 * sq * ctx.rank_weight(p + 1) - 4.0 * self.bump_cost_from(p, ctx)
    }

    /// `sum_{r >= p+1} sigma_(r)^2 (log(1 + 1/r) + log_+(n||Sigma||)/(r (r+1)))`
    /// over pre-insertion ranks, i.e. the penalty released by demoting every
    /// entry at position >= `p` one rank down.
    pub(crate) fn bump_cost_from(&self, p: usize, ctx: &PenaltyContext) -> f64 {
        let lp = ctx.log_plus_nsigma();
        let mut sum = 0.0;
        for (i, &(sq, _)) in self.entries.iter().enumerate().skip(p) {
            let r = (i + 1) as f64;
            sum += sq * ((1.0 / r).ln_1p() + lp / (r * (r + 1.0)));
        }
        sum
    }

    pub(crate) fn insert(&mut self, sq: f64, idx: usize) {
        let p = self.insertion_point(sq, idx);
        self.entries.insert(p, (sq, idx));
    }
}
