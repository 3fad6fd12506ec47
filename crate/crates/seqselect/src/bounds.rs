//! Leading-order minimax risk bounds for the sparsity class with proportion
//! `gamma` of non-zero coefficients.
//!
//! Three lower-bound evaluations (weighted-entropy supremum, uniform weights,
//! top-r concentration) and the matching upper bound of the sparsity-tuned
//! threshold estimator. All values are reported without their vanishing
//! correction factors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seqmodel::NoiseProfile;
use crate::selectors::solve_beta;

/// Bound values for one `(profile, gamma)` pair.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub lower_entropy: f64,
    pub lower_uniform: f64,
    pub lower_topk: f64,
    pub upper_minimax: f64,
    pub beta: f64,
    pub c_n: f64,
    pub gamma: f64,
    pub n: usize,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    Ok(())
}

/// Default cube cap `c = (n gamma)^(-1/4)`, which shrinks while
/// `c sqrt(n gamma)` still grows. Only valid once `n gamma > 1`.
pub fn default_cap(n: usize, gamma: f64) -> f64 {
    (n as f64 * gamma).powf(-0.25)
}

/// Weighted-entropy lower bound: the supremum of
/// `2 sum sigma^2 alpha log(1/alpha)` over weight vectors `alpha` in
/// `[0, c]^n` with `sum alpha = n gamma (1 - c)`.
///
/// The optimizer has the form `alpha = e^-1 q^(sbar2 / sigma^2)` with
/// `q = e gamma (1 - c)`, capped at `c`; `sbar2 >= 0` is found by bisection
/// on the capped-sum equation, which water-fills the mass constraint over the
/// uncapped coordinates. Returns the bound value and the optimal weights.
pub fn lower_bound_entropy(
    profile: &NoiseProfile,
    gamma: f64,
    c: f64,
) -> Result<(f64, Vec<f64>)> {
    check_gamma(gamma)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidArgument(format!("c must lie in (0, 1), got {c}")));
    }
    let q = std::f64::consts::E * gamma * (1.0 - c);
    if q >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "need e * gamma * (1 - c) < 1, got {q}"
        )));
    }
    let n = profile.n() as f64;
    let target = n * gamma * (1.0 - c);
    let log_q = q.ln(); // negative
    let alphas_at = |sbar2: f64| -> Vec<f64> {
        profile
            .sigma_sqs()
            .iter()
            .map(|&sq| c.min((-1.0 + sbar2 * log_q / sq).exp()))
            .collect()
    };
    let sum_at = |sbar2: f64| -> f64 { alphas_at(sbar2).iter().sum() };

    if sum_at(0.0) < target - 1e-9 * n {
        // even alpha = min(c, 1/e) everywhere cannot carry the mass
        return Err(Error::NoConvergence(format!(
            "cap c = {c} too small to place mass n gamma (1 - c) = {target}"
        )));
    }
    let mut lo = 0.0f64;
    let mut hi = profile.sigma_norm();
    let mut guard = 0;
    while sum_at(hi) > target {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoConvergence("entropy weight bisection bracket".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sbar2 = 0.5 * (lo + hi);
    let alphas = alphas_at(sbar2);
    let sum: f64 = alphas.iter().sum();
    if (sum - target).abs() > 1e-9 * n {
        return Err(Error::NoConvergence(format!(
            "entropy weight residual {} exceeds tolerance",
            (sum - target).abs()
        )));
    }
    let value = 2.0
        * profile
            .sigma_sqs()
            .iter()
            .zip(&alphas)
            .map(|(&sq, &a)| if a > 0.0 { sq * a * (1.0 / a).ln() } else { 0.0 })
            .sum::<f64>();
    Ok((value, alphas))
}

/// Uniform-weight specialization: `2 n gamma log(1/gamma) * mean(sigma^2)`.
pub fn lower_bound_uniform(profile: &NoiseProfile, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let n = profile.n() as f64;
    let mean_sq = profile.sigma_sqs().iter().sum::<f64>() / n;
    Ok(2.0 * n * gamma * (1.0 / gamma).ln() * mean_sq)
}

/// Mass concentrated on the `r` noisiest coordinates:
/// `2 n gamma log(1/gamma) * (1/r) sum of the r largest sigma^2`.
/// Requires `ceil(n gamma) <= r <= n`.
pub fn lower_bound_topk(profile: &NoiseProfile, gamma: f64, r: usize) -> Result<f64> {
    check_gamma(gamma)?;
    let n = profile.n();
    let min_r = (n as f64 * gamma).ceil() as usize;
    if r < min_r || r > n {
        return Err(Error::InvalidArgument(format!(
            "r must lie in [{min_r}, {n}], got {r}"
        )));
    }
    let top: f64 = profile.sorted_sq_desc()[..r].iter().sum();
    Ok(2.0 * n as f64 * gamma * (1.0 / gamma).ln() * top / r as f64)
}

/// Risk ceiling of the sparsity-tuned threshold estimator:
/// `2 n gamma beta` with `beta` from [`solve_beta`].
pub fn upper_bound_minimax(profile: &NoiseProfile, gamma: f64) -> Result<f64> {
    let beta = solve_beta(profile, gamma)?;
    Ok(2.0 * profile.n() as f64 * gamma * beta)
}

/// Default choice for the top-r bound: twice the expected support size,
/// clamped to the admissible range.
pub fn default_top_r(n: usize, gamma: f64) -> usize {
    let min_r = (n as f64 * gamma).ceil() as usize;
    (2 * min_r).clamp(min_r.max(1), n)
}

/// Evaluate every bound on one profile. `c` and `r` fall back to
/// [`default_cap`] and [`default_top_r`].
pub fn report(
    profile: &NoiseProfile,
    gamma: f64,
    c: Option<f64>,
    r: Option<usize>,
) -> Result<BoundReport> {
    check_gamma(gamma)?;
    let n = profile.n();
    let c_n = match c {
        Some(v) => v,
        None => {
            let v = default_cap(n, gamma);
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "default cap (n gamma)^(-1/4) = {v} is outside (0, 1); pass c explicitly"
                )));
            }
            v
        }
    };
    let r = r.unwrap_or_else(|| default_top_r(n, gamma));
    let (lower_entropy, _) = lower_bound_entropy(profile, gamma, c_n)?;
    let beta = solve_beta(profile, gamma)?;
    Ok(BoundReport {
        lower_entropy,
        lower_uniform: lower_bound_uniform(profile, gamma)?,
        lower_topk: lower_bound_topk(profile, gamma, r)?,
        upper_minimax: 2.0 * n as f64 * gamma * beta,
        beta,
        c_n,
        gamma,
        n,
    })
}

impl BoundReport {
    /// Copy with floats rounded for text output.
    pub fn rounded(&self, sig_digits: usize) -> Self {
        let r = |v: f64| crate::numfmt::round_sig(v, sig_digits);
        Self {
            lower_entropy: r(self.lower_entropy),
            lower_uniform: r(self.lower_uniform),
            lower_topk: r(self.lower_topk),
            upper_minimax: r(self.upper_minimax),
            beta: r(self.beta),
            c_n: r(self.c_n),
            gamma: r(self.gamma),
            n: self.n,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
