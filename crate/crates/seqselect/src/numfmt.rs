//! Significant-digit rounding for text output.
//!
//! All CSV and JSON emitters round floats to a fixed number of significant
//! digits (6 by default, widened via `--precision`) so that outputs are
//! stable byte-for-byte across runs and easy to diff.

/// Round `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let d = digits.max(1) as i32;
    let mag = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(d - 1 - mag);
    if !factor.is_finite() || factor == 0.0 {
        // scaling would overflow; x already has fewer meaningful digits
        return x;
    }
    (x * factor).round() / factor
}

/// Shortest decimal representation of `x` rounded to `digits` significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    format!("{}", round_sig(x, digits))
}
