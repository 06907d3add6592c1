//! Weighted validation scores for the lab-study questionnaires.
//!
//! Accuracy `a`, time `t` and confidence `c` are on a 0-100 scale, clicks
//! `m` on 0-1; the click term enters as `(1 - m) * 100` so every term shares
//! the 0-100 scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ScoreWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be a nonnegative real"
                )));
            }
        }
        if alpha + beta + gamma + delta == 0.0 {
            return Err(Error::ZeroWeightSum);
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn equal() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabStudyRecord {
    pub accuracy: f64,
    pub time_norm: f64,
    pub clicks_norm: f64,
    pub confidence: f64,
}

impl LabStudyRecord {
    pub fn new(accuracy: f64, time_norm: f64, clicks_norm: f64, confidence: f64) -> Result<Self> {
        check_range("accuracy", accuracy, 100.0)?;
        check_range("time", time_norm, 100.0)?;
        check_range("clicks", clicks_norm, 1.0)?;
        check_range("confidence", confidence, 100.0)?;
        Ok(Self {
            accuracy,
            time_norm,
            clicks_norm,
            confidence,
        })
    }
}

fn check_range(name: &str, v: f64, max: f64) -> Result<()> {
    if !(0.0..=max).contains(&v) {
        return Err(Error::InvalidParams(format!(
            "{name} = {v} outside [0, {max}]"
        )));
    }
    Ok(())
}

/// `(a * alpha + t * beta) / (alpha + beta)`.
pub fn score_task1(accuracy: f64, time_norm: f64, w: &ScoreWeights) -> Result<f64> {
    check_range("accuracy", accuracy, 100.0)?;
    check_range("time", time_norm, 100.0)?;
    let denom = w.alpha + w.beta;
    if denom == 0.0 {
        return Err(Error::ZeroWeightSum);
    }
    Ok((accuracy * w.alpha + time_norm * w.beta) / denom)
}

/// `(a*alpha + t*beta + (1 - m)*100*gamma + c*delta) / (alpha + beta + gamma + delta)`.
pub fn score_task2(r: &LabStudyRecord, w: &ScoreWeights) -> Result<f64> {
    let denom = w.alpha + w.beta + w.gamma + w.delta;
    if denom == 0.0 {
        return Err(Error::ZeroWeightSum);
    }
    let clicks = (1.0 - r.clicks_norm) * 100.0;
    Ok(
        (r.accuracy * w.alpha + r.time_norm * w.beta + clicks * w.gamma + r.confidence * w.delta)
            / denom,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfidenceLabel {
    HighlyConfident,
    Confident,
    SomewhatConfident,
    NotConfident,
    NotConfidentAtAll,
}

pub fn confidence_value(label: ConfidenceLabel) -> f64 {
    match label {
        ConfidenceLabel::HighlyConfident => 100.0,
        ConfidenceLabel::Confident => 80.0,
        ConfidenceLabel::SomewhatConfident => 60.0,
        ConfidenceLabel::NotConfident => 40.0,
        ConfidenceLabel::NotConfidentAtAll => 0.0,
    }
}

/// Maps raw answer times of a session onto 0-100 where the fastest answer
/// scores 100 and the slowest 0. A session with a single distinct time
/// scores 100 everywhere.
pub fn normalize_times(raw: &[f64]) -> Vec<f64> {
    let (lo, hi) = min_max(raw);
    raw.iter()
        .map(|&t| {
            if hi > lo {
                100.0 * (1.0 - (t - lo) / (hi - lo))
            } else {
                100.0
            }
        })
        .collect()
}

/// Min-max scales raw click counts of a session onto [0, 1]; a session with
/// a single distinct count maps to 0.
pub fn normalize_clicks(raw: &[f64]) -> Vec<f64> {
    let (lo, hi) = min_max(raw);
    raw.iter()
        .map(|&m| if hi > lo { (m - lo) / (hi - lo) } else { 0.0 })
        .collect()
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}
