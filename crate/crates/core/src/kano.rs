//! Kano typing of attributes and detection of threshold values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordeval::ReinforcementProfile;
use crate::significance::SignificanceFlags;

/// Reinforcement below this is treated as negligible influence.
pub const DEFAULT_TAU: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KanoLabel {
    /// Moves satisfaction both ways.
    Performance,
    /// Can only cause dissatisfaction.
    Basic,
    /// Can only add satisfaction.
    Excitement,
    Negligible,
}

impl KanoLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            KanoLabel::Performance => "performance",
            KanoLabel::Basic => "basic",
            KanoLabel::Excitement => "excitement",
            KanoLabel::Negligible => "negligible",
        }
    }
}

impl fmt::Display for KanoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

pub fn validate_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("tau must lie in (0, 1), got {tau}")))
    }
}

/// Labels an attribute from its aggregate factors. An undefined factor counts
/// as below `tau`.
pub fn classify_attribute(up: Option<f64>, down: Option<f64>, tau: f64) -> KanoLabel {
    let hi = |x: Option<f64>| x.is_some_and(|v| v >= tau);
    match (hi(up), hi(down)) {
        (true, true) => KanoLabel::Performance,
        (false, true) => KanoLabel::Basic,
        (true, false) => KanoLabel::Excitement,
        (false, false) => KanoLabel::Negligible,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFinding {
    pub attribute: String,
    pub value: i32,
    pub direction: Direction,
    pub factor: f64,
    pub significant: bool,
}

/// Every significant value-level cell, plus every non-significant cell whose
/// factor reaches `tau`. Ordered by attribute position, value, then direction
/// (down before up).
pub fn detect_thresholds(
    profile: &ReinforcementProfile,
    flags: &SignificanceFlags,
    tau: f64,
) -> Vec<ThresholdFinding> {
    let mut out = Vec::new();
    for (attr, fl) in profile.attributes.iter().zip(&flags.attributes) {
        for (o, v) in attr.scale.values().enumerate() {
            let cells = [
                (Direction::Down, attr.down[o], fl.down[o]),
                (Direction::Up, attr.up[o], fl.up[o]),
            ];
            for (direction, cell, significant) in cells {
                let Some(factor) = cell.probability() else { continue };
                if significant || factor >= tau {
                    out.push(ThresholdFinding {
                        attribute: attr.name.clone(),
                        value: v,
                        direction,
                        factor,
                        significant,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeKano {
    pub attribute: String,
    pub label: KanoLabel,
    pub thresholds: Vec<ThresholdFinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KanoReport {
    pub tau: f64,
    pub attributes: Vec<AttributeKano>,
}

/// Aggregate-level labels with the value-level thresholds alongside.
pub fn kano_report(
    profile: &ReinforcementProfile,
    flags: &SignificanceFlags,
    tau: f64,
) -> Result<KanoReport> {
    validate_tau(tau)?;
    if profile.attributes.len() != flags.attributes.len() {
        return Err(Error::MismatchedShapes("profile and flags differ in attribute count".into()));
    }
    let mut thresholds = detect_thresholds(profile, flags, tau).into_iter().peekable();
    let attributes = profile
        .attributes
        .iter()
        .map(|a| {
            let mut mine = Vec::new();
            while let Some(t) = thresholds.next_if(|t| t.attribute == a.name) {
                mine.push(t);
            }
            AttributeKano {
                attribute: a.name.clone(),
                label: classify_attribute(
                    a.up_aggregate().probability(),
                    a.down_aggregate().probability(),
                    tau,
                ),
                thresholds: mine,
            }
        })
        .collect();
    Ok(KanoReport { tau, attributes })
}
