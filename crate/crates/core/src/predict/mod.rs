//! Interpretable classifiers for the ordinal response, stratified k-fold
//! validation, and ranking of unlabeled units by predicted response.

mod bayes;
mod tree;

pub use bayes::{predict_nb, train_naive_bayes, train_naive_bayes_with, NBModel, NaiveBayesLearner};
pub use tree::{predict_tree, train_decision_tree, Node, TreeLearner, TreeModel, TreeParams};

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, OrdinalDataset, Scale};
use crate::error::{Error, Result};

pub const DEFAULT_FOLDS: usize = 10;

/// Probability of each response value, indexed by offset into `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseDistribution {
    pub scale: Scale,
    pub probs: Vec<f64>,
}

impl ResponseDistribution {
    /// Normalized `counts`, uniform when they sum to zero.
    pub fn from_counts(scale: Scale, counts: &[f64]) -> Self {
        let total: f64 = counts.iter().sum();
        let probs = if total > 0.0 {
            counts.iter().map(|c| c / total).collect()
        } else {
            vec![1.0 / scale.len() as f64; scale.len()]
        };
        ResponseDistribution { scale, probs }
    }

    pub fn probability(&self, value: i32) -> f64 {
        self.probs[self.scale.offset(value)]
    }

    /// Most probable value; ties go to the lower value.
    pub fn predicted(&self) -> i32 {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        self.scale.min() + best as i32
    }
}

pub trait Classifier: Send + Sync {
    fn predict(&self, row: &[Cell]) -> ResponseDistribution;
}

pub trait Learner: Sync {
    fn name(&self) -> &str;
    fn fit(&self, ds: &OrdinalDataset) -> Result<Box<dyn Classifier>>;
}

impl Classifier for Box<dyn Classifier> {
    fn predict(&self, row: &[Cell]) -> ResponseDistribution {
        (**self).predict(row)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub size: usize,
    pub exact: usize,
    pub within_one: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVReport {
    pub learner: String,
    pub folds: usize,
    pub seed: u64,
    pub n: usize,
    pub exact_accuracy: f64,
    pub within_one_accuracy: f64,
    pub majority_baseline: f64,
    pub per_fold: Vec<FoldResult>,
}

/// Fold index of every row. Rows are shuffled with `seed`, grouped by
/// response value (ascending, shuffled order kept within a group) and dealt
/// round-robin, so every fold gets each response value within one row of
/// every other fold.
pub fn stratified_folds(responses: &[i32], folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..responses.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.sort_by_key(|&i| responses[i]);
    let mut assignment = vec![0; responses.len()];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % folds;
    }
    assignment
}

/// Frequency of the most common response among labeled rows.
pub fn majority_baseline(ds: &OrdinalDataset) -> f64 {
    let scale = ds.response_scale();
    let mut counts = vec![0usize; scale.len()];
    let mut n = 0;
    for r in ds.rows() {
        if let Some(c) = r.response {
            counts[scale.offset(c)] += 1;
            n += 1;
        }
    }
    if n == 0 {
        return 0.0;
    }
    *counts.iter().max().unwrap() as f64 / n as f64
}

/// k-fold cross-validation over the labeled rows of `ds`.
pub fn cross_validate(
    ds: &OrdinalDataset,
    learner: &dyn Learner,
    folds: usize,
    seed: u64,
) -> Result<CVReport> {
    if folds < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 folds, got {folds}")));
    }
    let labeled: Vec<usize> = (0..ds.n()).filter(|&i| ds.row(i).response.is_some()).collect();
    if labeled.len() < folds {
        return Err(Error::TooFewRows { needed: folds, got: labeled.len() });
    }
    let ds = ds.subset(&labeled);
    let responses: Vec<i32> = ds.rows().iter().map(|r| r.response.unwrap()).collect();
    let assignment = stratified_folds(&responses, folds, seed);

    let per_fold = (0..folds)
        .into_par_iter()
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..ds.n()).partition(|&i| assignment[i] == f);
            let model = learner.fit(&ds.subset(&train))?;
            let mut exact = 0;
            let mut within_one = 0;
            for &i in &test {
                let pred = model.predict(&ds.row(i).values).predicted();
                let diff = (pred - responses[i]).abs();
                exact += (diff == 0) as usize;
                within_one += (diff <= 1) as usize;
            }
            Ok(FoldResult { fold: f, size: test.len(), exact, within_one })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = ds.n() as f64;
    Ok(CVReport {
        learner: learner.name().to_owned(),
        folds,
        seed,
        n: ds.n(),
        exact_accuracy: per_fold.iter().map(|f| f.exact).sum::<usize>() as f64 / n,
        within_one_accuracy: per_fold.iter().map(|f| f.within_one).sum::<usize>() as f64 / n,
        majority_baseline: majority_baseline(&ds),
        per_fold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedUnit {
    pub row_id: String,
    pub predicted: i32,
    /// Indexed by offset into the response scale.
    pub distribution: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPredictions {
    pub learner: String,
    pub response_scale: Scale,
    pub units: Vec<RankedUnit>,
}

/// Predicts every unlabeled unit and sorts by predicted value (highest
/// first), ties by row id ascending.
pub fn rank_targets(
    model: &dyn Classifier,
    learner: &str,
    unlabeled: &OrdinalDataset,
) -> RankedPredictions {
    let mut units: Vec<RankedUnit> = unlabeled
        .rows()
        .iter()
        .map(|r| {
            let d = model.predict(&r.values);
            RankedUnit { row_id: r.id.clone(), predicted: d.predicted(), distribution: d.probs }
        })
        .collect();
    units.sort_by(|a, b| match b.predicted.cmp(&a.predicted) {
        Ordering::Equal => a.row_id.cmp(&b.row_id),
        o => o,
    });
    RankedPredictions { learner: learner.to_owned(), response_scale: unlabeled.response_scale(), units }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Row;

    struct Fixed(Scale, i32);
    impl Classifier for Fixed {
        fn predict(&self, _row: &[Cell]) -> ResponseDistribution {
            let mut counts = vec![0.0; self.0.len()];
            counts[self.0.offset(self.1)] = 1.0;
            ResponseDistribution::from_counts(self.0, &counts)
        }
    }

    /// Predicts whatever the first attribute says.
    struct Echo;
    impl Classifier for Echo {
        fn predict(&self, row: &[Cell]) -> ResponseDistribution {
            Fixed(Scale::likert5(), row[0].unwrap_or(1)).predict(row)
        }
    }

    fn ds(rows: Vec<(Vec<Cell>, Cell)>) -> OrdinalDataset {
        let a = rows[0].0.len();
        OrdinalDataset::new(
            (0..a).map(|i| (format!("q{i}"), Scale::likert5())).collect(),
            ("sat".into(), Scale::likert5()),
            rows.into_iter()
                .enumerate()
                .map(|(i, (values, response))| Row { id: format!("u{i:02}"), values, response })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn argmax_ties_go_low() {
        let d = ResponseDistribution { scale: Scale::likert5(), probs: vec![0.1, 0.4, 0.1, 0.4, 0.0] };
        assert_eq!(d.predicted(), 2);
        let u = ResponseDistribution::from_counts(Scale::likert5(), &[0.0; 5]);
        assert_eq!(u.predicted(), 1);
        assert_eq!(u.probability(3), 0.2);
    }

    #[test]
    fn folds_are_stratified() {
        let responses: Vec<i32> = (0..57).map(|i| 1 + (i * 7 % 5)).collect();
        let a = stratified_folds(&responses, 10, 3);
        assert_eq!(a, stratified_folds(&responses, 10, 3));
        for v in 1..=5 {
            let mut per = vec![0; 10];
            for (i, &f) in a.iter().enumerate() {
                if responses[i] == v {
                    per[f] += 1;
                }
            }
            let (mn, mx) = (per.iter().min().unwrap(), per.iter().max().unwrap());
            assert!(mx - mn <= 1, "value {v}: {per:?}");
        }
    }

    #[test]
    fn ranking_order() {
        // four units predicted 5, six predicted 4
        let rows: Vec<(Vec<Cell>, Cell)> = (0..10)
            .map(|i| (vec![Some(if i % 5 < 2 { 5 } else { 4 })], None))
            .collect();
        let u = ds(rows);
        let r = rank_targets(&Echo, "echo", &u);
        let got: Vec<(i32, &str)> = r.units.iter().map(|x| (x.predicted, x.row_id.as_str())).collect();
        assert_eq!(
            got,
            [
                (5, "u00"), (5, "u01"), (5, "u05"), (5, "u06"),
                (4, "u02"), (4, "u03"), (4, "u04"), (4, "u07"), (4, "u08"), (4, "u09"),
            ]
        );
        let empty = u.subset(&[]);
        assert!(rank_targets(&Echo, "echo", &empty).units.is_empty());
    }

    struct EchoLearner;
    impl Learner for EchoLearner {
        fn name(&self) -> &str {
            "echo"
        }
        fn fit(&self, _ds: &OrdinalDataset) -> Result<Box<dyn Classifier>> {
            Ok(Box::new(Echo))
        }
    }

    #[test]
    fn perfect_learner_scores_one() {
        let rows = (0..30).map(|i| (vec![Some(1 + i % 5)], Some(1 + i % 5))).collect();
        let r = cross_validate(&ds(rows), &EchoLearner, 10, 1).unwrap();
        assert_eq!(r.exact_accuracy, 1.0);
        assert_eq!(r.within_one_accuracy, 1.0);
        assert_eq!(r.majority_baseline, 0.2);
        assert_eq!(r.per_fold.iter().map(|f| f.size).sum::<usize>(), 30);
    }

    #[test]
    fn too_few_rows_for_folds() {
        let rows = (0..9).map(|i| (vec![Some(1 + i % 5)], Some(1))).collect();
        assert_eq!(
            cross_validate(&ds(rows), &EchoLearner, 10, 1).unwrap_err(),
            Error::TooFewRows { needed: 10, got: 9 }
        );
    }
}
