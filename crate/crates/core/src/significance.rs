//! Permutation null distributions for reinforcement factors and the
//! box-and-whiskers statistics used to judge significance.
//!
//! Each resample shuffles the response column and recomputes the whole
//! profile over the unchanged neighbor lists. Resample `b` draws from its own
//! ChaCha stream `(seed, b)`, so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{OrdinalDataset, Scale};
use crate::error::{Error, Result};
use crate::ordeval::{profile_with_responses, FactorCell, Neighborhoods, OrdEvalParams, ReinforcementProfile};

pub const DEFAULT_RESAMPLES: usize = 200;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const MIN_RESAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceParams {
    pub resamples: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl SignificanceParams {
    pub fn new(seed: u64) -> Self {
        SignificanceParams { resamples: DEFAULT_RESAMPLES, alpha: DEFAULT_ALPHA, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resamples < MIN_RESAMPLES {
            return Err(Error::InvalidParams(format!(
                "resamples must be at least {MIN_RESAMPLES}, got {}",
                self.resamples
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::InvalidParams(format!("alpha must lie in (0, 0.5), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Nearest-rank percentile of ascending `sorted`: the element at rank
/// `ceil(p * m)` (1-based), rank at least 1.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    assert!(m > 0, "percentile of an empty sample");
    // the epsilon absorbs representation error in products like 0.025 * 200
    let rank = ((p * m as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(m) - 1]
}

/// Quartile box with whiskers at the `alpha/2` and `1 - alpha/2` percentiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBox {
    pub whisker_low: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_high: f64,
    pub sample_count: usize,
}

impl ConfidenceBox {
    pub fn from_samples(samples: &[f64], alpha: f64) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        Some(ConfidenceBox {
            whisker_low: nearest_rank(&s, alpha / 2.0),
            q1: nearest_rank(&s, 0.25),
            median: nearest_rank(&s, 0.5),
            q3: nearest_rank(&s, 0.75),
            whisker_high: nearest_rank(&s, 1.0 - alpha / 2.0),
            sample_count: s.len(),
        })
    }

    pub fn is_ordered(&self) -> bool {
        self.whisker_low <= self.q1
            && self.q1 <= self.median
            && self.median <= self.q3
            && self.q3 <= self.whisker_high
    }
}

/// Resampled values of one factor cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellNull {
    /// Defined resampled values, in resample order.
    pub samples: Vec<f64>,
    pub resamples: usize,
    pub confidence: Option<ConfidenceBox>,
    /// Undefined in at least half of the resamples.
    pub unassessable: bool,
}

impl CellNull {
    fn from_draws(draws: Vec<Option<f64>>, alpha: f64) -> Self {
        let resamples = draws.len();
        let samples: Vec<f64> = draws.into_iter().flatten().collect();
        let undefined = resamples - samples.len();
        CellNull {
            confidence: ConfidenceBox::from_samples(&samples, alpha),
            unassessable: 2 * undefined >= resamples,
            samples,
            resamples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeNull {
    pub name: String,
    pub scale: Scale,
    pub up: Vec<CellNull>,
    pub down: Vec<CellNull>,
    pub up_aggregate: CellNull,
    pub down_aggregate: CellNull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistribution {
    pub params: SignificanceParams,
    pub attributes: Vec<AttributeNull>,
}

/// Null distribution of every factor under random permutation of the response.
pub fn null_distribution(
    ds: &OrdinalDataset,
    params: &OrdEvalParams,
    sp: &SignificanceParams,
) -> Result<NullDistribution> {
    sp.validate()?;
    let hoods = Neighborhoods::compute(ds, params)?;
    Ok(null_with_neighborhoods(ds, &hoods, sp))
}

pub(crate) fn null_with_neighborhoods(
    ds: &OrdinalDataset,
    hoods: &Neighborhoods,
    sp: &SignificanceParams,
) -> NullDistribution {
    let observed = ds.responses();
    let profiles: Vec<ReinforcementProfile> = (0..sp.resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(sp.seed);
            rng.set_stream(b as u64);
            let mut responses = observed.clone();
            responses.shuffle(&mut rng);
            profile_with_responses(ds, hoods, &responses)
        })
        .collect();

    let collect = |pick: &dyn Fn(&ReinforcementProfile) -> FactorCell| -> CellNull {
        CellNull::from_draws(profiles.iter().map(|p| pick(p).probability()).collect(), sp.alpha)
    };
    let attributes = ds
        .attribute_names()
        .iter()
        .zip(ds.scales())
        .enumerate()
        .map(|(a, (name, &scale))| AttributeNull {
            name: name.clone(),
            scale,
            up: (0..scale.len()).map(|o| collect(&|p| p.attributes[a].up[o])).collect(),
            down: (0..scale.len()).map(|o| collect(&|p| p.attributes[a].down[o])).collect(),
            up_aggregate: collect(&|p| p.attributes[a].up_aggregate()),
            down_aggregate: collect(&|p| p.attributes[a].down_aggregate()),
        })
        .collect();
    NullDistribution { params: *sp, attributes }
}

/// Significance of every cell of one attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeFlags {
    pub up: Vec<bool>,
    pub down: Vec<bool>,
    pub up_aggregate: bool,
    pub down_aggregate: bool,
}

impl AttributeFlags {
    pub fn any(&self) -> bool {
        self.up_aggregate || self.down_aggregate || self.up.iter().chain(&self.down).any(|&f| f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignificanceFlags {
    pub attributes: Vec<AttributeFlags>,
}

/// One-sided rule: a defined, assessable factor is significant iff it is
/// strictly above the upper whisker of its null box.
pub fn is_significant(observed: FactorCell, null: &CellNull) -> bool {
    match (observed.probability(), &null.confidence) {
        (Some(p), Some(b)) if !null.unassessable => p > b.whisker_high,
        _ => false,
    }
}

pub fn significance_flags(
    profile: &ReinforcementProfile,
    nd: &NullDistribution,
) -> Result<SignificanceFlags> {
    if profile.attributes.len() != nd.attributes.len() {
        return Err(Error::MismatchedShapes(format!(
            "{} attributes in profile, {} in null distribution",
            profile.attributes.len(),
            nd.attributes.len()
        )));
    }
    let attributes = profile
        .attributes
        .iter()
        .zip(&nd.attributes)
        .map(|(p, n)| {
            if p.name != n.name || p.scale != n.scale || p.up.len() != n.up.len() || p.down.len() != n.down.len() {
                return Err(Error::MismatchedShapes(format!("attribute `{}` vs `{}`", p.name, n.name)));
            }
            Ok(AttributeFlags {
                up: p.up.iter().zip(&n.up).map(|(&c, cn)| is_significant(c, cn)).collect(),
                down: p.down.iter().zip(&n.down).map(|(&c, cn)| is_significant(c, cn)).collect(),
                up_aggregate: is_significant(p.up_aggregate(), &n.up_aggregate),
                down_aggregate: is_significant(p.down_aggregate(), &n.down_aggregate),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SignificanceFlags { attributes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, PlantedAttribute, PlantedKind, SyntheticSpec};
    use crate::ordeval::reinforcement_profile;

    fn cell_null(samples: Vec<f64>, resamples: usize, alpha: f64) -> CellNull {
        let mut draws: Vec<Option<f64>> = samples.into_iter().map(Some).collect();
        draws.resize(resamples, None);
        CellNull::from_draws(draws, alpha)
    }

    #[test]
    fn degenerate_box() {
        let b = ConfidenceBox::from_samples(&[0.5; 40], 0.05).unwrap();
        assert_eq!(
            (b.whisker_low, b.q1, b.median, b.q3, b.whisker_high),
            (0.5, 0.5, 0.5, 0.5, 0.5)
        );
        assert_eq!(b.sample_count, 40);
    }

    #[test]
    fn nearest_rank_whiskers_on_hundred_samples() {
        // ranks ceil(0.025*100) = 3 and ceil(0.975*100) = 98
        let s: Vec<f64> = (1..=100).rev().map(|i| i as f64 / 100.0).collect();
        let b = ConfidenceBox::from_samples(&s, 0.05).unwrap();
        assert_eq!(b.whisker_low, 0.03);
        assert_eq!(b.whisker_high, 0.98);
        assert_eq!(b.q1, 0.25);
        assert_eq!(b.median, 0.50);
        assert_eq!(b.q3, 0.75);
    }

    #[test]
    fn nearest_rank_is_exact_on_integral_products() {
        // 0.025 * 200 is 5 in exact arithmetic
        let s: Vec<f64> = (1..=200).map(|i| i as f64).collect();
        assert_eq!(nearest_rank(&s, 0.025), 5.0);
        assert_eq!(nearest_rank(&s, 0.975), 195.0);
        assert_eq!(nearest_rank(&s, 0.0), 1.0);
        assert_eq!(nearest_rank(&s, 1.0), 200.0);
    }

    #[test]
    fn flag_rule() {
        let null = cell_null(vec![0.7; 40], 40, 0.05);
        let obs = |s, n| FactorCell { successes: s, pair_count: n };
        assert!(is_significant(obs(9, 10), &null));
        assert!(!is_significant(obs(7, 10), &null));
        assert!(!is_significant(obs(0, 0), &null));
    }

    #[test]
    fn sparse_cells_are_unassessable() {
        let half = cell_null(vec![0.1; 20], 40, 0.05);
        assert!(half.unassessable);
        assert!(!is_significant(FactorCell { successes: 1, pair_count: 1 }, &half));
        let most = cell_null(vec![0.1; 21], 40, 0.05);
        assert!(!most.unassessable);
        assert!(cell_null(vec![], 40, 0.05).confidence.is_none());
    }

    #[test]
    fn params_validation() {
        assert!(SignificanceParams::new(1).validate().is_ok());
        let mut p = SignificanceParams::new(1);
        p.resamples = 19;
        assert!(p.validate().is_err());
        p.resamples = 20;
        p.alpha = 0.5;
        assert!(p.validate().is_err());
        p.alpha = 0.0;
        assert!(p.validate().is_err());
    }

    fn small_set() -> OrdinalDataset {
        let spec = SyntheticSpec::new(
            60,
            vec![
                PlantedAttribute::new("p", PlantedKind::Performance, 0),
                PlantedAttribute::new("z", PlantedKind::Noise, 0),
            ],
            0.1,
        );
        generate_synthetic(&spec, 5).unwrap()
    }

    #[test]
    fn identity_permutation_reproduces_observed() {
        let ds = small_set();
        let params = OrdEvalParams { k: 8 };
        let hoods = Neighborhoods::compute(&ds, &params).unwrap();
        let observed = reinforcement_profile(&ds, &params).unwrap();
        assert_eq!(profile_with_responses(&ds, &hoods, &ds.responses()), observed);
    }

    #[test]
    fn deterministic_and_ordered() {
        let ds = small_set();
        let params = OrdEvalParams { k: 8 };
        let sp = SignificanceParams { resamples: 50, alpha: 0.05, seed: 9 };
        let a = null_distribution(&ds, &params, &sp).unwrap();
        let b = null_distribution(&ds, &params, &sp).unwrap();
        assert_eq!(a, b);
        for attr in &a.attributes {
            for c in attr.up.iter().chain(&attr.down).chain([&attr.up_aggregate, &attr.down_aggregate]) {
                if let Some(bx) = c.confidence {
                    assert!(bx.is_ordered());
                }
            }
        }
        let other = null_distribution(&ds, &params, &SignificanceParams { seed: 10, ..sp }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn planted_attribute_beats_its_null() {
        let ds = small_set();
        let params = OrdEvalParams { k: 8 };
        let sp = SignificanceParams { resamples: 100, alpha: 0.05, seed: 1 };
        let profile = reinforcement_profile(&ds, &params).unwrap();
        let nd = null_distribution(&ds, &params, &sp).unwrap();
        let flags = significance_flags(&profile, &nd).unwrap();
        assert!(flags.attributes[0].up_aggregate);
        assert!(flags.attributes[0].down_aggregate);
    }

    #[test]
    fn mismatched_shapes() {
        let ds = small_set();
        let params = OrdEvalParams { k: 8 };
        let sp = SignificanceParams { resamples: 20, alpha: 0.05, seed: 1 };
        let profile = reinforcement_profile(&ds, &params).unwrap();
        let mut nd = null_distribution(&ds, &params, &sp).unwrap();
        nd.attributes.pop();
        assert!(matches!(significance_flags(&profile, &nd), Err(Error::MismatchedShapes(_))));
        let mut nd = null_distribution(&ds, &params, &sp).unwrap();
        nd.attributes[1].name = "other".into();
        assert!(matches!(significance_flags(&profile, &nd), Err(Error::MismatchedShapes(_))));
    }
}
