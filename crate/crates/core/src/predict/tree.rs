//! Multiway decision tree grown greedily on gain ratio.

use serde::{Deserialize, Serialize};

use super::{Classifier, Learner, ResponseDistribution};
use crate::dataset::{Cell, OrdinalDataset, Scale};
use crate::error::{Error, Result};

const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    /// A split needs at least two children with this many rows.
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// Split impure nodes even when no attribute has positive gain (needed
    /// for parity-like patterns).
    pub allow_zero_gain: bool,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { min_leaf: 2, max_depth: None, allow_zero_gain: false }
    }
}

impl TreeParams {
    /// Grows until every leaf is pure or no attribute separates its rows.
    pub fn unbounded() -> Self {
        TreeParams { min_leaf: 1, max_depth: None, allow_zero_gain: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        /// Training rows per response value.
        counts: Vec<f64>,
    },
    Split {
        attribute: usize,
        /// One slot per attribute value; `None` where no training row had it.
        children: Vec<Option<Node>>,
        /// Offset of the child with the most training rows, taken by missing
        /// and unseen values.
        heaviest: usize,
        counts: Vec<f64>,
    },
}

impl Node {
    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { children, .. } => {
                1 + children.iter().flatten().map(Node::depth).max().unwrap_or(0)
            }
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { children, .. } => children.iter().flatten().map(Node::leaves).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub params: TreeParams,
    pub scales: Vec<Scale>,
    pub response_scale: Scale,
    pub root: Node,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaves(&self) -> usize {
        self.root.leaves()
    }
}

fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}

struct Grower<'a> {
    ds: &'a OrdinalDataset,
    classes: Vec<usize>,
    params: TreeParams,
}

struct Candidate {
    attribute: usize,
    ratio: f64,
    gain: f64,
}

impl Grower<'_> {
    fn class_counts(&self, rows: &[usize]) -> Vec<f64> {
        let mut counts = vec![0.0; self.ds.response_scale().len()];
        for &r in rows {
            counts[self.classes[r]] += 1.0;
        }
        counts
    }

    /// C4.5-style gain ratio: gain over rows with a known value, scaled by the
    /// known fraction; split information counts the missing rows as their
    /// own branch.
    fn evaluate(&self, rows: &[usize], a: usize) -> Option<Candidate> {
        let scale = self.ds.scales()[a];
        let k = self.ds.response_scale().len();
        let mut per_value = vec![vec![0.0; k]; scale.len()];
        let mut missing = 0.0;
        for &r in rows {
            match self.ds.row(r).values[a] {
                Some(v) => per_value[scale.offset(v)][self.classes[r]] += 1.0,
                None => missing += 1.0,
            }
        }
        let sizes: Vec<f64> = per_value.iter().map(|c| c.iter().sum()).collect();
        let known: f64 = sizes.iter().sum();
        let big_enough = sizes.iter().filter(|&&s| s >= self.params.min_leaf as f64).count();
        if known == 0.0 || big_enough < 2 {
            return None;
        }
        let mut known_counts = vec![0.0; k];
        for c in &per_value {
            for (t, x) in known_counts.iter_mut().zip(c) {
                *t += x;
            }
        }
        let remainder: f64 = per_value
            .iter()
            .zip(&sizes)
            .map(|(c, &s)| s / known * entropy(c))
            .sum();
        let total = rows.len() as f64;
        let gain = known / total * (entropy(&known_counts) - remainder);
        let mut branch_sizes = sizes.clone();
        branch_sizes.push(missing);
        let split_info = entropy(&branch_sizes);
        if split_info <= 0.0 {
            return None;
        }
        Some(Candidate { attribute: a, ratio: gain / split_info, gain })
    }

    fn grow(&self, rows: Vec<usize>, depth: usize, used: &mut Vec<bool>) -> Node {
        let counts = self.class_counts(&rows);
        let pure = counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        let depth_reached = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_reached {
            return Node::Leaf { counts };
        }
        let mut best: Option<Candidate> = None;
        for a in (0..self.ds.n_attributes()).filter(|&a| !used[a]) {
            let Some(c) = self.evaluate(&rows, a) else { continue };
            let admissible = if self.params.allow_zero_gain { c.gain > -GAIN_EPS } else { c.gain > GAIN_EPS };
            if admissible && best.as_ref().is_none_or(|b| c.ratio > b.ratio) {
                best = Some(c);
            }
        }
        let Some(best) = best else { return Node::Leaf { counts } };

        let a = best.attribute;
        let scale = self.ds.scales()[a];
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); scale.len()];
        let mut unknown = Vec::new();
        for &r in &rows {
            match self.ds.row(r).values[a] {
                Some(v) => parts[scale.offset(v)].push(r),
                None => unknown.push(r),
            }
        }
        let heaviest = heaviest_index(parts.iter().map(Vec::len));
        parts[heaviest].extend(unknown);
        used[a] = true;
        let children = parts
            .into_iter()
            .map(|p| (!p.is_empty()).then(|| self.grow(p, depth + 1, used)))
            .collect();
        used[a] = false;
        Node::Split { attribute: a, children, heaviest, counts }
    }
}

fn heaviest_index(sizes: impl Iterator<Item = usize>) -> usize {
    let mut best = (0, 0);
    for (i, s) in sizes.enumerate() {
        if s > best.1 {
            best = (i, s);
        }
    }
    best.0
}

pub fn train_decision_tree(ds: &OrdinalDataset, params: &TreeParams) -> Result<TreeModel> {
    if params.min_leaf == 0 {
        return Err(Error::InvalidParams("min_leaf must be at least 1".into()));
    }
    let rows: Vec<usize> = (0..ds.n()).filter(|&i| ds.row(i).response.is_some()).collect();
    if rows.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let rs = ds.response_scale();
    let classes = ds
        .rows()
        .iter()
        .map(|r| r.response.map(|c| rs.offset(c)).unwrap_or(0))
        .collect();
    let grower = Grower { ds, classes, params: *params };
    let root = grower.grow(rows, 0, &mut vec![false; ds.n_attributes()]);
    Ok(TreeModel { params: *params, scales: ds.scales().to_vec(), response_scale: rs, root })
}

/// Leaf distribution reached by `row`. Missing or unseen split values follow
/// the heaviest child.
pub fn predict_tree(model: &TreeModel, row: &[Cell]) -> ResponseDistribution {
    let mut node = &model.root;
    loop {
        match node {
            Node::Leaf { counts } => {
                return ResponseDistribution::from_counts(model.response_scale, counts)
            }
            Node::Split { attribute, children, heaviest, .. } => {
                let scale = model.scales[*attribute];
                let slot = row[*attribute]
                    .filter(|v| scale.contains(*v))
                    .map(|v| scale.offset(v))
                    .filter(|&o| children[o].is_some())
                    .unwrap_or(*heaviest);
                node = children[slot].as_ref().expect("heaviest child exists");
            }
        }
    }
}

impl Classifier for TreeModel {
    fn predict(&self, row: &[Cell]) -> ResponseDistribution {
        predict_tree(self, row)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TreeLearner {
    pub params: TreeParams,
}

impl Learner for TreeLearner {
    fn name(&self) -> &str {
        "decision_tree"
    }

    fn fit(&self, ds: &OrdinalDataset) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_decision_tree(ds, &self.params)?))
    }
}
