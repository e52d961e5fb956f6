//! Seeded generator for datasets with planted Kano-type attributes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{OrdinalDataset, Row, Scale};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlantedKind {
    /// Contributes its value linearly.
    Performance,
    /// Contributes `min(value, pivot)`: saturates above the pivot.
    Basic,
    /// Contributes `max(value - pivot, 0)`: flat up to the pivot.
    Excitement,
    /// Contributes nothing.
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedAttribute {
    pub name: String,
    pub kind: PlantedKind,
    /// Only read for basic and excitement attributes.
    #[serde(default)]
    pub pivot: i32,
    #[serde(default)]
    pub scale: Scale,
}

impl PlantedAttribute {
    pub fn new(name: impl Into<String>, kind: PlantedKind, pivot: i32) -> Self {
        PlantedAttribute { name: name.into(), kind, pivot, scale: Scale::likert5() }
    }

    fn contribution(&self, v: i32) -> i32 {
        match self.kind {
            PlantedKind::Performance => v,
            PlantedKind::Basic => v.min(self.pivot),
            PlantedKind::Excitement => (v - self.pivot).max(0),
            PlantedKind::Noise => 0,
        }
    }

    fn contribution_range(&self) -> (i32, i32) {
        let s = self.scale;
        (self.contribution(s.min()), self.contribution(s.max()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub attributes: Vec<PlantedAttribute>,
    /// Standard deviation of Gaussian noise added to the normalized
    /// contribution sum (which spans [0, 1]).
    pub noise: f64,
    #[serde(default)]
    pub response_scale: Scale,
    #[serde(default = "default_response_name")]
    pub response_name: String,
}

fn default_response_name() -> String {
    "response".into()
}

impl SyntheticSpec {
    pub fn new(n: usize, attributes: Vec<PlantedAttribute>, noise: f64) -> Self {
        SyntheticSpec {
            n,
            attributes,
            noise,
            response_scale: Scale::likert5(),
            response_name: default_response_name(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::InvalidSpec(format!("noise {} outside [0, 1]", self.noise)));
        }
        if !self.attributes.iter().any(|a| a.kind != PlantedKind::Noise) {
            return Err(Error::InvalidSpec("no planted attribute".into()));
        }
        for a in &self.attributes {
            if matches!(a.kind, PlantedKind::Basic | PlantedKind::Excitement)
                && !a.scale.contains(a.pivot)
            {
                return Err(Error::InvalidSpec(format!(
                    "pivot {} of `{}` outside scale {}",
                    a.pivot, a.name, a.scale
                )));
            }
        }
        Ok(())
    }
}

/// Draws every attribute uniformly over its scale and sets the response to
/// the contribution sum mapped affinely onto the response scale (plus noise),
/// rounded half-up and clamped. Identical `(spec, seed)` give identical data.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<OrdinalDataset> {
    spec.validate()?;
    let (lo, hi) = spec
        .attributes
        .iter()
        .map(PlantedAttribute::contribution_range)
        .fold((0i64, 0i64), |(l, h), (a, b)| (l + a as i64, h + b as i64));
    if hi <= lo {
        return Err(Error::InvalidSpec("planted attributes have no effect range".into()));
    }
    let rs = spec.response_scale;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..spec.n)
        .map(|i| {
            let values: Vec<i32> = spec
                .attributes
                .iter()
                .map(|a| rng.random_range(a.scale.min()..=a.scale.max()))
                .collect();
            let sum: i64 = spec
                .attributes
                .iter()
                .zip(&values)
                .map(|(a, &v)| a.contribution(v) as i64)
                .sum();
            let mut level = (sum - lo) as f64 / (hi - lo) as f64;
            if spec.noise > 0.0 {
                let eps: f64 = StandardNormal.sample(&mut rng);
                level += spec.noise * eps;
            }
            let raw = rs.min() as f64 + level * rs.span() as f64;
            let response = ((raw + 0.5).floor() as i64).clamp(rs.min() as i64, rs.max() as i64);
            Row {
                id: (i + 1).to_string(),
                values: values.into_iter().map(Some).collect(),
                response: Some(response as i32),
            }
        })
        .collect();
    OrdinalDataset::new(
        spec.attributes.iter().map(|a| (a.name.clone(), a.scale)).collect(),
        (spec.response_name.clone(), rs),
        rows,
    )
}
