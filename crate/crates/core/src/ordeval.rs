//! Value-level reinforcement factors estimated among similar respondents.
//!
//! For every labeled row `R` and each of its `k` nearest rows `H`, and for every
//! attribute `A` with `j = A(R)`:
//!
//! * if `A(H) > j` the pair is evidence for the upward factor of `j`, and a
//!   success when the response of `H` is higher than that of `R`;
//! * if `A(H) < j` the pair is evidence for the downward factor of `j`, and a
//!   success when the response of `H` is lower.
//!
//! `U_j` and `D_j` are the success frequencies. Pairs with a missing value in
//! `A` or a missing response are skipped for `A`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, OrdinalDataset, Scale};
use crate::error::{Error, Result};

pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdEvalParams {
    /// Context size: number of nearest rows consulted per row.
    pub k: usize,
}

impl Default for OrdEvalParams {
    fn default() -> Self {
        OrdEvalParams { k: DEFAULT_K }
    }
}

impl OrdEvalParams {
    /// `k` clamped to `1..=n-1`.
    pub fn effective_k(&self, n: usize) -> usize {
        self.k.clamp(1, n.saturating_sub(1).max(1))
    }
}

/// Success and pair tallies behind one reinforcement factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FactorCell {
    pub successes: u64,
    pub pair_count: u64,
}

impl FactorCell {
    /// `None` when no pair supports the cell.
    pub fn probability(&self) -> Option<f64> {
        (self.pair_count > 0).then(|| self.successes as f64 / self.pair_count as f64)
    }

    pub fn is_defined(&self) -> bool {
        self.pair_count > 0
    }

    fn record(&mut self, success: bool) {
        self.pair_count += 1;
        self.successes += success as u64;
    }

    fn merge(self, other: FactorCell) -> FactorCell {
        FactorCell {
            successes: self.successes + other.successes,
            pair_count: self.pair_count + other.pair_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeProfile {
    pub name: String,
    pub scale: Scale,
    /// Indexed by offset into `scale`.
    pub up: Vec<FactorCell>,
    pub down: Vec<FactorCell>,
}

impl AttributeProfile {
    fn empty(name: &str, scale: Scale) -> Self {
        AttributeProfile {
            name: name.to_owned(),
            scale,
            up: vec![FactorCell::default(); scale.len()],
            down: vec![FactorCell::default(); scale.len()],
        }
    }

    pub fn up_at(&self, value: i32) -> FactorCell {
        self.up[self.scale.offset(value)]
    }

    pub fn down_at(&self, value: i32) -> FactorCell {
        self.down[self.scale.offset(value)]
    }

    /// Pair-count-weighted mean over the value-level upward cells.
    pub fn up_aggregate(&self) -> FactorCell {
        self.up.iter().fold(FactorCell::default(), |a, &c| a.merge(c))
    }

    pub fn down_aggregate(&self) -> FactorCell {
        self.down.iter().fold(FactorCell::default(), |a, &c| a.merge(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReinforcementProfile {
    pub attributes: Vec<AttributeProfile>,
}

impl ReinforcementProfile {
    pub fn attribute(&self, name: &str) -> Option<&AttributeProfile> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

/// Attribute-level `(U, D)` aggregates of attribute `attr`.
pub fn attribute_factors(profile: &ReinforcementProfile, attr: usize) -> (FactorCell, FactorCell) {
    let a = &profile.attributes[attr];
    (a.up_aggregate(), a.down_aggregate())
}

/// Mean per-attribute difference `|v1 - v2| / (max - min)`; a missing value on
/// either side contributes 0.5. The response is not part of the metric.
pub fn distance(r1: &[Cell], r2: &[Cell], scales: &[Scale]) -> f64 {
    debug_assert_eq!(r1.len(), scales.len());
    debug_assert_eq!(r2.len(), scales.len());
    if scales.is_empty() {
        return 0.0;
    }
    let mut parts: Vec<f64> = r1
        .iter()
        .zip(r2)
        .zip(scales)
        .map(|((a, b), s)| match (a, b) {
            (Some(a), Some(b)) => (a - b).abs() as f64 / s.span() as f64,
            _ => 0.5,
        })
        .collect();
    // summing in sorted order makes the result independent of column order
    parts.sort_by(f64::total_cmp);
    parts.iter().sum::<f64>() / scales.len() as f64
}

/// The `k` rows nearest to row `i` (excluding `i`), ascending by distance with
/// ties broken by row index. `k` is clamped to `n - 1`.
pub fn nearest_neighbors(ds: &OrdinalDataset, i: usize, k: usize) -> Vec<usize> {
    let me = &ds.row(i).values;
    let mut cand: Vec<(f64, usize)> = ds
        .rows()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, r)| (distance(me, &r.values, ds.scales()), j))
        .collect();
    let k = k.min(cand.len());
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < cand.len() && k > 0 {
        cand.select_nth_unstable_by(k - 1, cmp);
        cand.truncate(k);
    }
    cand.truncate(k);
    cand.sort_by(cmp);
    cand.into_iter().map(|(_, j)| j).collect()
}

/// Neighbor lists of every row. The response plays no part, so one set of
/// lists serves every permutation of the response column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhoods {
    lists: Vec<Vec<usize>>,
}

impl Neighborhoods {
    pub fn compute(ds: &OrdinalDataset, params: &OrdEvalParams) -> Result<Self> {
        if ds.n() < 2 {
            return Err(Error::TooFewRows { needed: 2, got: ds.n() });
        }
        let k = params.effective_k(ds.n());
        let lists = (0..ds.n())
            .into_par_iter()
            .map(|i| nearest_neighbors(ds, i, k))
            .collect();
        Ok(Neighborhoods { lists })
    }

    pub fn of(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }
}

/// Upward and downward reinforcement factors of every attribute value.
pub fn reinforcement_profile(
    ds: &OrdinalDataset,
    params: &OrdEvalParams,
) -> Result<ReinforcementProfile> {
    let hoods = Neighborhoods::compute(ds, params)?;
    Ok(profile_with_responses(ds, &hoods, &ds.responses()))
}

/// Tallies the profile using `responses[i]` as the response of row `i`.
pub(crate) fn profile_with_responses(
    ds: &OrdinalDataset,
    hoods: &Neighborhoods,
    responses: &[Cell],
) -> ReinforcementProfile {
    debug_assert_eq!(responses.len(), ds.n());
    let mut attrs: Vec<AttributeProfile> = ds
        .attribute_names()
        .iter()
        .zip(ds.scales())
        .map(|(n, &s)| AttributeProfile::empty(n, s))
        .collect();

    for (i, r) in ds.rows().iter().enumerate() {
        let Some(cr) = responses[i] else { continue };
        for &h in hoods.of(i) {
            let Some(ch) = responses[h] else { continue };
            let hv = &ds.row(h).values;
            for (a, prof) in attrs.iter_mut().enumerate() {
                let (Some(j), Some(x)) = (r.values[a], hv[a]) else { continue };
                let off = prof.scale.offset(j);
                if x > j {
                    prof.up[off].record(ch > cr);
                } else if x < j {
                    prof.down[off].record(ch < cr);
                }
            }
        }
    }
    ReinforcementProfile { attributes: attrs }
}
