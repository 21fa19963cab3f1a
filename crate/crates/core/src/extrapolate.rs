//! Limits of slowly converging sequences by a guarded Aitken Δ² step.

use alloc::vec::Vec;

/// Aitken is applied only when the last difference ratio `q` satisfies
/// `|q| < MAX_RATIO`; otherwise the tail is not geometric enough to trust.
pub const MAX_RATIO: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ExtrapolationMethod {
    Aitken,
    LastValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extrapolation {
    pub value: f64,
    pub method: ExtrapolationMethod,
    /// `Δ_last / Δ_prev` of the input sequence, when defined.
    pub ratio: Option<f64>,
    /// Difference to the previous estimate of the same kind.
    pub error_estimate: f64,
}

/// The Aitken Δ² transform `x_{k+2} - Δ²/(Δ_{k+1} - Δ_k)`; entries with a
/// vanishing second difference are passed through.
pub fn aitken(seq: &[f64]) -> Vec<f64> {
    seq.windows(3)
        .map(|w| {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let den = d2 - d1;
            if den == 0.0 {
                w[2]
            } else {
                w[2] - d2 * d2 / den
            }
        })
        .collect()
}

fn estimate(seq: &[f64]) -> (f64, ExtrapolationMethod, Option<f64>) {
    let n = seq.len();
    let last = seq[n - 1];
    if n < 3 {
        return (last, ExtrapolationMethod::LastValue, None);
    }
    let d1 = seq[n - 2] - seq[n - 3];
    let d2 = last - seq[n - 2];
    if d1 == 0.0 {
        return (last, ExtrapolationMethod::LastValue, None);
    }
    let q = d2 / d1;
    if q.is_finite() && q.abs() < MAX_RATIO {
        (last + d2 * q / (1.0 - q), ExtrapolationMethod::Aitken, Some(q))
    } else {
        (last, ExtrapolationMethod::LastValue, Some(q))
    }
}

/// Guarded Aitken estimate of `lim x_k` from the last three terms.
pub fn extrapolate_limit(seq: &[f64]) -> Option<Extrapolation> {
    if seq.is_empty() {
        return None;
    }
    let (value, method, ratio) = estimate(seq);
    let error_estimate = if seq.len() >= 2 {
        let (prev, _, _) = estimate(&seq[..seq.len() - 1]);
        (value - prev).abs()
    } else {
        f64::INFINITY
    };
    Some(Extrapolation {
        value,
        method,
        ratio,
        error_estimate,
    })
}
