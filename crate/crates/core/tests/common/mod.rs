#![allow(dead_code)]

use ordeval::dataset::{Cell, OrdinalDataset, Row, Scale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random dataset: `n` rows, `a` attributes on small random scales, roughly
/// `missing` of the attribute cells absent. Every row has a response.
pub fn random_dataset(seed: u64, n: usize, a: usize, missing: f64) -> OrdinalDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales: Vec<Scale> = (0..a)
        .map(|_| {
            let lo = rng.random_range(-1..=2);
            let span = rng.random_range(1..=4);
            Scale::new(lo, lo + span).unwrap()
        })
        .collect();
    let rs = Scale::new(1, rng.random_range(2..=5)).unwrap();
    let rows = (0..n)
        .map(|i| Row {
            id: format!("r{i}"),
            values: scales
                .iter()
                .map(|s| (!rng.random_bool(missing)).then(|| rng.random_range(s.min()..=s.max())))
                .collect(),
            response: Some(rng.random_range(rs.min()..=rs.max())),
        })
        .collect();
    let attrs = scales.iter().enumerate().map(|(i, &s)| (format!("q{i}"), s)).collect();
    OrdinalDataset::new(attrs, ("y".into(), rs), rows).unwrap()
}

pub fn dataset_from(values: &[Vec<Cell>], responses: &[Cell], scale: Scale) -> OrdinalDataset {
    let a = values[0].len();
    let attrs = (0..a).map(|i| (format!("q{i}"), scale)).collect();
    let rows = values
        .iter()
        .zip(responses)
        .enumerate()
        .map(|(i, (v, &c))| Row { id: format!("{}", i + 1), values: v.clone(), response: c })
        .collect();
    OrdinalDataset::new(attrs, ("y".into(), scale), rows).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distance times a common denominator, so ties are compared exactly.
fn scaled_distance(ds: &OrdinalDataset, x: usize, y: usize) -> i64 {
    let spans: Vec<i64> = ds.scales().iter().map(|s| (s.max() - s.min()) as i64).collect();
    let l = spans.iter().fold(2i64, |acc, &s| acc / gcd(acc, s) * s);
    let (rx, ry) = (&ds.rows()[x].values, &ds.rows()[y].values);
    (0..spans.len())
        .map(|a| match (rx[a], ry[a]) {
            (Some(u), Some(v)) => (u - v).abs() as i64 * (l / spans[a]),
            _ => l / 2,
        })
        .sum()
}

/// Tallies `(successes, pairs)` per attribute value for `U` and `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAttribute {
    pub up: Vec<(u64, u64)>,
    pub down: Vec<(u64, u64)>,
}

impl OracleAttribute {
    pub fn up_factor(&self, off: usize) -> Option<f64> {
        let (s, p) = self.up[off];
        (p > 0).then(|| s as f64 / p as f64)
    }

    pub fn down_factor(&self, off: usize) -> Option<f64> {
        let (s, p) = self.down[off];
        (p > 0).then(|| s as f64 / p as f64)
    }

    pub fn up_aggregate(&self) -> Option<f64> {
        let (s, p) = self.up.iter().fold((0, 0), |a, c| (a.0 + c.0, a.1 + c.1));
        (p > 0).then(|| s as f64 / p as f64)
    }

    pub fn down_aggregate(&self) -> Option<f64> {
        let (s, p) = self.down.iter().fold((0, 0), |a, c| (a.0 + c.0, a.1 + c.1));
        (p > 0).then(|| s as f64 / p as f64)
    }
}

/// Brute force: for every labeled row R, take its `k` nearest rows by exact
/// distance (row index breaks ties), enumerate each ordered pair (R, H) and
/// count, per attribute, how often a higher (lower) value at H comes with a
/// higher (lower) response.
pub fn oracle_profile(ds: &OrdinalDataset, k: usize) -> Vec<OracleAttribute> {
    let n = ds.n();
    let k = k.clamp(1, n - 1);
    let mut out: Vec<OracleAttribute> = ds
        .scales()
        .iter()
        .map(|s| OracleAttribute { up: vec![(0, 0); s.len()], down: vec![(0, 0); s.len()] })
        .collect();
    for r in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&h| h != r).collect();
        others.sort_by_key(|&h| (scaled_distance(ds, r, h), h));
        for &h in &others[..k] {
            let (Some(cr), Some(ch)) = (ds.rows()[r].response, ds.rows()[h].response) else { continue };
            for (a, scale) in ds.scales().iter().enumerate() {
                let (Some(j), Some(x)) = (ds.rows()[r].values[a], ds.rows()[h].values[a]) else { continue };
                let off = (j - scale.min()) as usize;
                if x > j {
                    out[a].up[off].1 += 1;
                    if ch > cr {
                        out[a].up[off].0 += 1;
                    }
                }
                if x < j {
                    out[a].down[off].1 += 1;
                    if ch < cr {
                        out[a].down[off].0 += 1;
                    }
                }
            }
        }
    }
    out
}

/// Largest absolute gap between profile and oracle, `INFINITY` if any cell
/// differs in definedness.
pub fn oracle_gap(profile: &ordeval::ordeval::ReinforcementProfile, oracle: &[OracleAttribute]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut cmp = |p: Option<f64>, o: Option<f64>| match (p, o) {
        (Some(p), Some(o)) => worst = worst.max((p - o).abs()),
        (None, None) => {}
        _ => worst = f64::INFINITY,
    };
    assert_eq!(profile.attributes.len(), oracle.len());
    for (p, o) in profile.attributes.iter().zip(oracle) {
        for off in 0..p.up.len() {
            cmp(p.up[off].probability(), o.up_factor(off));
            cmp(p.down[off].probability(), o.down_factor(off));
        }
        cmp(p.up_aggregate().probability(), o.up_aggregate());
        cmp(p.down_aggregate().probability(), o.down_aggregate());
    }
    worst
}

pub fn csv_with_header(header: &str, rows: &[&str]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}
