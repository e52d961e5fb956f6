//! Ordinal survey datasets: declared scales, rows with optional cells, and the
//! labeled/unlabeled partition used by the prediction stage.

mod csv_io;
mod synthetic;

pub use csv_io::{parse_dataset, validate_csv, ColumnSummary, Schema, ValidationSummary};
pub use synthetic::{generate_synthetic, PlantedAttribute, PlantedKind, SyntheticSpec};

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single answer; `None` is a missing answer.
pub type Cell = Option<i32>;

/// Closed integer range of admissible answers, e.g. a 1..5 Likert scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScaleRepr", into = "ScaleRepr")]
pub struct Scale {
    min: i32,
    max: i32,
}

#[derive(Serialize, Deserialize)]
struct ScaleRepr {
    min: i32,
    max: i32,
}

impl TryFrom<ScaleRepr> for Scale {
    type Error = Error;
    fn try_from(r: ScaleRepr) -> Result<Self> {
        Scale::new(r.min, r.max)
    }
}

impl From<Scale> for ScaleRepr {
    fn from(s: Scale) -> Self {
        ScaleRepr { min: s.min, max: s.max }
    }
}

impl Scale {
    pub fn new(min: i32, max: i32) -> Result<Self> {
        if max <= min {
            return Err(Error::InvalidScale { min, max });
        }
        Ok(Scale { min, max })
    }

    /// The five-point agreement scale, 1 (totally disagree) to 5 (totally agree).
    pub const fn likert5() -> Self {
        Scale { min: 1, max: 5 }
    }

    pub fn min(&self) -> i32 {
        self.min
    }

    pub fn max(&self) -> i32 {
        self.max
    }

    /// `max - min`, always positive.
    pub fn span(&self) -> i32 {
        self.max - self.min
    }

    /// Number of distinct values.
    pub fn len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: i32) -> bool {
        (self.min..=self.max).contains(&v)
    }

    pub fn values(&self) -> RangeInclusive<i32> {
        self.min..=self.max
    }

    /// Zero-based offset of `v` inside the scale. `v` must be contained.
    pub fn offset(&self, v: i32) -> usize {
        debug_assert!(self.contains(v));
        (v - self.min) as usize
    }
}

impl Default for Scale {
    fn default() -> Self {
        Scale::likert5()
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

impl FromStr for Scale {
    type Err = Error;

    /// Parses `MIN..MAX`, e.g. `1..5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("scale `{s}` is not of the form MIN..MAX"));
        let (lo, hi) = s.trim().split_once("..").ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        Scale::new(lo, hi)
    }
}

/// One respondent (or unit): attribute answers in column order plus the response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub id: String,
    pub values: Vec<Cell>,
    pub response: Cell,
}

/// Respondents × ordinal attributes with an ordinal response column.
///
/// Every present value lies within its column's scale and every row has one
/// cell per attribute; the constructors enforce both. A dataset may be empty
/// only when produced by a split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalDataset {
    attribute_names: Vec<String>,
    scales: Vec<Scale>,
    response_name: String,
    response_scale: Scale,
    id_column: Option<String>,
    rows: Vec<Row>,
}

impl OrdinalDataset {
    pub fn new(
        attributes: Vec<(String, Scale)>,
        response: (String, Scale),
        rows: Vec<Row>,
    ) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::NoAttributes);
        }
        let (attribute_names, scales): (Vec<_>, Vec<_>) = attributes.into_iter().unzip();
        let mut seen = std::collections::HashSet::new();
        for name in attribute_names.iter().chain(std::iter::once(&response.0)) {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let ds = OrdinalDataset {
            attribute_names,
            scales,
            response_name: response.0,
            response_scale: response.1,
            id_column: None,
            rows: Vec::new(),
        };
        ds.with_rows(rows)
    }

    /// Names the CSV column that carries row ids. Without one, ids are the
    /// 1-based row numbers and are not written back out.
    pub fn with_id_column(mut self, name: Option<String>) -> Result<Self> {
        if let Some(n) = &name {
            if self.attribute_names.contains(n) || *n == self.response_name {
                return Err(Error::DuplicateColumn(n.clone()));
            }
        }
        self.id_column = name;
        Ok(self)
    }

    /// Same schema, different rows.
    pub fn with_rows(&self, rows: Vec<Row>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.values.len() != self.scales.len() {
                return Err(Error::MalformedCsv {
                    row: i + 1,
                    message: format!(
                        "expected {} attribute cells, found {}",
                        self.scales.len(),
                        row.values.len()
                    ),
                });
            }
            for (j, (cell, scale)) in row.values.iter().zip(&self.scales).enumerate() {
                if let Some(v) = cell {
                    if !scale.contains(*v) {
                        return Err(Error::SchemaViolation {
                            row: i + 1,
                            column: self.attribute_names[j].clone(),
                            value: v.to_string(),
                        });
                    }
                }
            }
            if let Some(v) = row.response {
                if !self.response_scale.contains(v) {
                    return Err(Error::SchemaViolation {
                        row: i + 1,
                        column: self.response_name.clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(OrdinalDataset {
            attribute_names: self.attribute_names.clone(),
            scales: self.scales.clone(),
            response_name: self.response_name.clone(),
            response_scale: self.response_scale,
            id_column: self.id_column.clone(),
            rows,
        })
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        OrdinalDataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            ..self.schema_only()
        }
    }

    /// Reorders (or drops) attribute columns; `order[i]` is the source column
    /// of output column `i`.
    pub fn select_attributes(&self, order: &[usize]) -> Result<Self> {
        let attrs = order
            .iter()
            .map(|&j| (self.attribute_names[j].clone(), self.scales[j]))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                id: r.id.clone(),
                values: order.iter().map(|&j| r.values[j]).collect(),
                response: r.response,
            })
            .collect();
        OrdinalDataset::new(attrs, (self.response_name.clone(), self.response_scale), rows)?
            .with_id_column(self.id_column.clone())
    }

    fn schema_only(&self) -> Self {
        OrdinalDataset {
            attribute_names: self.attribute_names.clone(),
            scales: self.scales.clone(),
            response_name: self.response_name.clone(),
            response_scale: self.response_scale,
            id_column: self.id_column.clone(),
            rows: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.scales.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|n| n == name)
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn response_scale(&self) -> Scale {
        self.response_scale
    }

    pub fn id_column(&self) -> Option<&str> {
        self.id_column.as_deref()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn responses(&self) -> Vec<Cell> {
        self.rows.iter().map(|r| r.response).collect()
    }

    /// Serializes back to the CSV dialect accepted by [`parse_dataset`].
    pub fn to_csv(&self) -> String {
        csv_io::write_csv(self)
    }
}

/// Partitions rows by response presence: `(labeled, unlabeled)`, each in
/// input order.
pub fn split_labeled(ds: &OrdinalDataset) -> (OrdinalDataset, OrdinalDataset) {
    let (labeled, unlabeled): (Vec<Row>, Vec<Row>) =
        ds.rows.iter().cloned().partition(|r| r.response.is_some());
    (
        OrdinalDataset { rows: labeled, ..ds.schema_only() },
        OrdinalDataset { rows: unlabeled, ..ds.schema_only() },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, values: &[Cell], response: Cell) -> Row {
        Row { id: id.into(), values: values.to_vec(), response }
    }

    fn five_rows() -> OrdinalDataset {
        let s = Scale::likert5();
        OrdinalDataset::new(
            vec![("q1".into(), s), ("q2".into(), s)],
            ("sat".into(), s),
            vec![
                row("a", &[Some(1), Some(2)], Some(3)),
                row("b", &[Some(2), None], None),
                row("c", &[Some(3), Some(3)], Some(4)),
                row("d", &[Some(4), Some(5)], None),
                row("e", &[None, Some(1)], Some(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn scale_rejects_degenerate_range() {
        assert_eq!(Scale::new(3, 3), Err(Error::InvalidScale { min: 3, max: 3 }));
        assert!(Scale::new(5, 1).is_err());
        assert_eq!(Scale::new(1, 7).unwrap().len(), 7);
    }

    #[test]
    fn scale_from_str() {
        assert_eq!("1..5".parse::<Scale>().unwrap(), Scale::likert5());
        assert_eq!(" 0 .. 10 ".parse::<Scale>().unwrap(), Scale::new(0, 10).unwrap());
        assert!("1-5".parse::<Scale>().is_err());
        assert!("5..1".parse::<Scale>().is_err());
    }

    #[test]
    fn split_partitions_by_response_presence() {
        let ds = five_rows();
        let (l, u) = split_labeled(&ds);
        assert_eq!((l.n(), u.n()), (3, 2));
        let ids: Vec<_> = l.rows().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "c", "e"]);
        let ids: Vec<_> = u.rows().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["b", "d"]);
    }

    #[test]
    fn split_edge_cases() {
        let ds = five_rows();
        let all: Vec<Row> = ds
            .rows()
            .iter()
            .cloned()
            .map(|mut r| {
                r.response = Some(2);
                r
            })
            .collect();
        let (l, u) = split_labeled(&ds.with_rows(all.clone()).unwrap());
        assert_eq!((l.n(), u.n()), (5, 0));

        let none: Vec<Row> = all
            .into_iter()
            .map(|mut r| {
                r.response = None;
                r
            })
            .collect();
        let (l, u) = split_labeled(&ds.with_rows(none).unwrap());
        assert_eq!((l.n(), u.n()), (0, 5));
    }

    #[test]
    fn constructor_rejects_out_of_scale_and_duplicates() {
        let s = Scale::likert5();
        let err = OrdinalDataset::new(
            vec![("q1".into(), s)],
            ("sat".into(), s),
            vec![row("1", &[Some(6)], Some(1))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::SchemaViolation { row: 1, .. }));
        let err = OrdinalDataset::new(
            vec![("q1".into(), s), ("q1".into(), s)],
            ("sat".into(), s),
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicateColumn("q1".into()));
    }

    #[test]
    fn select_attributes_reorders_cells() {
        let ds = five_rows();
        let swapped = ds.select_attributes(&[1, 0]).unwrap();
        assert_eq!(swapped.attribute_names(), ["q2", "q1"]);
        assert_eq!(swapped.row(0).values, vec![Some(2), Some(1)]);
    }
}
