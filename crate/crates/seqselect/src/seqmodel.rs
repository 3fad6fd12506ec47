//! Core domain types for the sequence model `X = f + xi`, where the noise
//! `xi` is centred Gaussian with diagonal covariance `diag(sigma_1^2, ..., sigma_n^2)`.
//!
//! Coordinates are indexed `lambda = 1..=n` in formulas and text output;
//! internally everything is 0-based.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numfmt::fmt_sig;

/// Per-coordinate noise standard deviations plus cached order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile {
    sigmas: Vec<f64>,
    sigma_sq: Vec<f64>,
    /// Squared sigmas sorted descending (inverse order statistics).
    sorted_sq_desc: Vec<f64>,
    /// Operator norm of the covariance: max over sigma^2.
    sigma_norm: f64,
}

impl NoiseProfile {
    pub fn new(sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidArgument("noise profile must be non-empty".into()));
        }
        if sigmas.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidArgument(
                "noise standard deviations must be positive and finite".into(),
            ));
        }
        let sigma_sq: Vec<f64> = sigmas.iter().map(|s| s * s).collect();
        let mut sorted_sq_desc = sigma_sq.clone();
        sorted_sq_desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sigma_norm = sorted_sq_desc[0];
        Ok(Self { sigmas, sigma_sq, sorted_sq_desc, sigma_norm })
    }

    /// Linearly increasing noise level `sigma_lambda = slope * lambda`.
    pub fn linear(n: usize, slope: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(slope > 0.0) {
            return Err(Error::InvalidArgument("slope must be positive".into()));
        }
        Self::new((1..=n).map(|l| slope * l as f64).collect())
    }

    /// Fractional-integration noise, `sigma_lambda^2 = eps^2 (2 pi lambda)^(2 alpha)`
    /// with `alpha` in `[0, 1/2)`. `alpha = 0` is white noise.
    pub fn fbm(n: usize, eps: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in [0, 1/2), got {alpha}"
            )));
        }
        Self::new(
            (1..=n)
                .map(|l| eps * (2.0 * std::f64::consts::PI * l as f64).powf(alpha))
                .collect(),
        )
    }

    /// Inverse-problem noise `sigma_lambda = eps / b_lambda` for singular values `b`.
    pub fn inverse(b: &[f64], eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        if b.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidArgument("all singular values must be positive".into()));
        }
        Self::new(b.iter().map(|&v| eps / v).collect())
    }

    /// Constant noise level, `sigma_lambda = sigma` for all coordinates.
    pub fn homogeneous(n: usize, sigma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument("sigma must be positive".into()));
        }
        Self::new(vec![sigma; n])
    }

    pub fn n(&self) -> usize {
        self.sigmas.len()
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.sigmas[i]
    }

    pub fn sigma_sq(&self, i: usize) -> f64 {
        self.sigma_sq[i]
    }

    pub fn sigma_sqs(&self) -> &[f64] {
        &self.sigma_sq
    }

    /// `||Sigma||`, the largest noise variance.
    pub fn sigma_norm(&self) -> f64 {
        self.sigma_norm
    }

    /// Squared noise levels sorted descending.
    pub fn sorted_sq_desc(&self) -> &[f64] {
        &self.sorted_sq_desc
    }
}

/// True coefficient vector, known on the simulation side.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// Zero signal of length `n`.
    pub fn zero(n: usize) -> Self {
        Self { values: vec![0.0; n] }
    }

    /// Draw a sparse signal with exactly `floor(n * gamma)` non-zero entries.
    ///
    /// Positions are sampled uniformly without replacement; the non-zero
    /// values are i.i.d. uniform on `[lo, hi]`. The result lies in the
    /// sparsity class of proportion `gamma` by construction.
    pub fn sample_uniform(
        n: usize,
        gamma: f64,
        lo: f64,
        hi: f64,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in (0, 1], got {gamma}"
            )));
        }
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "empty value range [{lo}, {hi}]"
            )));
        }
        let k = (n as f64 * gamma).floor() as usize;
        let mut values = vec![0.0; n];
        let positions = rand::seq::index::sample(rng, n, k);
        let dist = rand::distr::Uniform::new_inclusive(lo, hi)
            .map_err(|e| Error::InvalidArgument(format!("bad value range: {e}")))?;
        for pos in positions.iter() {
            values[pos] = rng.sample(dist);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of non-zero coefficients.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    /// Mask selecting exactly the non-zero coefficients.
    pub fn support_mask(&self) -> SelectionMask {
        SelectionMask::from_bits(self.values.iter().map(|&v| v != 0.0).collect())
    }
}

/// Observed coefficients paired with their noise profile.
#[derive(Debug, Clone)]
pub struct SequenceData {
    x: Vec<f64>,
    profile: NoiseProfile,
}

impl SequenceData {
    pub fn new(x: Vec<f64>, profile: NoiseProfile) -> Result<Self> {
        if x.len() != profile.n() {
            return Err(Error::DimensionMismatch { expected: profile.n(), actual: x.len() });
        }
        Ok(Self { x, profile })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn profile(&self) -> &NoiseProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Sample `X_lambda = f_lambda + sigma_lambda * zeta_lambda` with standard
/// Gaussian `zeta`. Pure in `(f, profile, rng state)`: a fixed seed yields
/// byte-identical output.
pub fn observe(signal: &Signal, profile: &NoiseProfile, rng: &mut impl Rng) -> Result<SequenceData> {
    if signal.n() != profile.n() {
        return Err(Error::DimensionMismatch { expected: profile.n(), actual: signal.n() });
    }
    let x = signal
        .values
        .iter()
        .zip(profile.sigmas())
        .map(|(&f, &s)| {
            let z: f64 = rng.sample(StandardNormal);
            f + s * z
        })
        .collect();
    Ok(SequenceData { x, profile: profile.clone() })
}

/// Squared l2 loss in coefficient space.
pub fn loss(signal: &Signal, fhat: &[f64]) -> Result<f64> {
    if signal.n() != fhat.len() {
        return Err(Error::DimensionMismatch { expected: signal.n(), actual: fhat.len() });
    }
    Ok(signal
        .values
        .iter()
        .zip(fhat)
        .map(|(&f, &g)| (g - f) * (g - f))
        .sum())
}

/// Binary inclusion vector over the index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMask {
    bits: Vec<bool>,
    count: usize,
}

impl SelectionMask {
    pub fn empty(n: usize) -> Self {
        Self { bits: vec![false; n], count: 0 }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        let count = bits.iter().filter(|&&b| b).count();
        Self { bits, count }
    }

    /// Build from 0-based coordinate indices.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidArgument(format!(
                    "index {i} out of range for n = {n}"
                )));
            }
            bits[i] = true;
        }
        Ok(Self::from_bits(bits))
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// Number of selected coordinates `|h|`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_selected(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.bits[i] != value {
            self.count = if value { self.count + 1 } else { self.count - 1 };
            self.bits[i] = value;
        }
    }

    /// Selected coordinates as ascending 1-based indices.
    pub fn indices_1based(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect()
    }

    /// Keep-if-selected estimator `fhat_lambda = h_lambda X_lambda`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.bits
            .iter()
            .zip(x)
            .map(|(&b, &v)| if b { v } else { 0.0 })
            .collect()
    }
}

/// Write `lambda,f,x,sigma` rows for a signal/observation pair.
pub fn write_sequence_csv(
    signal: &Signal,
    data: &SequenceData,
    out: &mut impl Write,
    sig_digits: usize,
) -> Result<()> {
    if signal.n() != data.n() {
        return Err(Error::DimensionMismatch { expected: data.n(), actual: signal.n() });
    }
    writeln!(out, "lambda,f,x,sigma")?;
    for i in 0..data.n() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            fmt_sig(signal.values()[i], sig_digits),
            fmt_sig(data.x()[i], sig_digits),
            fmt_sig(data.profile().sigma(i), sig_digits),
        )?;
    }
    Ok(())
}

/// Parse a `lambda,x,sigma` CSV into observations. Lambdas must be 1-based,
/// contiguous and ascending.
pub fn read_sequence_csv(text: &str) -> Result<SequenceData> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::MalformedInput { line: 1, msg: "empty input".into() })?;
    let normalized: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if normalized != ["lambda", "x", "sigma"] {
        return Err(Error::MalformedInput {
            line: 1,
            msg: format!("expected header `lambda,x,sigma`, got `{header}`"),
        });
    }
    let mut xs = Vec::new();
    let mut sigmas = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
        if cols.len() != 3 {
            return Err(Error::MalformedInput {
                line: line_no,
                msg: format!("expected 3 columns, got {}", cols.len()),
            });
        }
        let lambda: usize = cols[0].parse().map_err(|_| Error::MalformedInput {
            line: line_no,
            msg: format!("column `lambda`: cannot parse `{}`", cols[0]),
        })?;
        if lambda != xs.len() + 1 {
            return Err(Error::MalformedInput {
                line: line_no,
                msg: format!("lambda must ascend from 1; expected {}, got {lambda}", xs.len() + 1),
            });
        }
        let x: f64 = cols[1].parse().map_err(|_| Error::MalformedInput {
            line: line_no,
            msg: format!("column `x`: cannot parse `{}`", cols[1]),
        })?;
        let sigma: f64 = cols[2].parse().map_err(|_| Error::MalformedInput {
            line: line_no,
            msg: format!("column `sigma`: cannot parse `{}`", cols[2]),
        })?;
        xs.push(x);
        sigmas.push(sigma);
    }
    if xs.is_empty() {
        return Err(Error::MalformedInput { line: 1, msg: "no data rows".into() });
    }
    let profile = NoiseProfile::new(sigmas)?;
    SequenceData::new(xs, profile)
}
