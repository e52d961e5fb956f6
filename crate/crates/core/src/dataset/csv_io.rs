use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Cell, OrdinalDataset, Row, Scale};
use crate::error::{Error, Result};

/// How to read a CSV file: which column is the response, which (if any)
/// carries row ids, and the scale of every other column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub response: String,
    #[serde(default)]
    pub id_column: Option<String>,
    #[serde(default)]
    pub default_scale: Scale,
    #[serde(default)]
    pub scales: BTreeMap<String, Scale>,
}

impl Schema {
    /// All columns on the 1..5 Likert scale unless overridden.
    pub fn new(response: impl Into<String>) -> Self {
        Schema {
            response: response.into(),
            id_column: None,
            default_scale: Scale::likert5(),
            scales: BTreeMap::new(),
        }
    }

    pub fn with_id_column(mut self, name: impl Into<String>) -> Self {
        self.id_column = Some(name.into());
        self
    }

    pub fn with_default_scale(mut self, scale: Scale) -> Self {
        self.default_scale = scale;
        self
    }

    pub fn with_scale(mut self, column: impl Into<String>, scale: Scale) -> Self {
        self.scales.insert(column.into(), scale);
        self
    }

    pub fn scale_for(&self, column: &str) -> Scale {
        self.scales.get(column).copied().unwrap_or(self.default_scale)
    }
}

struct Layout {
    header: Vec<String>,
    id_pos: Option<usize>,
    response_pos: usize,
    attr_pos: Vec<usize>,
    attr_scales: Vec<Scale>,
    response_scale: Scale,
}

struct Scanned {
    layout: Layout,
    rows: Vec<Row>,
    problems: Vec<Error>,
    n_records: usize,
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn read_layout(rdr: &mut csv::Reader<&[u8]>, schema: &Schema) -> Result<Layout> {
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::MalformedCsv { row: 0, message: e.to_string() })?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(Error::MalformedCsv { row: 0, message: "missing header row".into() });
    }
    for (i, h) in header.iter().enumerate() {
        if header[..i].contains(h) {
            return Err(Error::DuplicateColumn(h.clone()));
        }
    }
    let response_pos = header
        .iter()
        .position(|h| *h == schema.response)
        .ok_or_else(|| Error::MissingResponseColumn(schema.response.clone()))?;
    let id_pos = match &schema.id_column {
        Some(id) => Some(
            header
                .iter()
                .position(|h| h == id)
                .ok_or_else(|| Error::MissingColumn(id.clone()))?,
        ),
        None => None,
    };
    let attr_pos: Vec<usize> = (0..header.len())
        .filter(|&i| i != response_pos && Some(i) != id_pos)
        .collect();
    if attr_pos.is_empty() {
        return Err(Error::NoAttributes);
    }
    let attr_scales = attr_pos.iter().map(|&i| schema.scale_for(&header[i])).collect();
    Ok(Layout {
        response_scale: schema.scale_for(&schema.response),
        header,
        id_pos,
        response_pos,
        attr_pos,
        attr_scales,
    })
}

fn parse_cell(raw: &str, scale: Scale) -> std::result::Result<Cell, ()> {
    if raw.is_empty() {
        return Ok(None);
    }
    match raw.parse::<i32>() {
        Ok(v) if scale.contains(v) => Ok(Some(v)),
        _ => Err(()),
    }
}

fn scan(text: &str, schema: &Schema, stop_at_first: bool) -> Result<Scanned> {
    let mut rdr = reader(text);
    let layout = read_layout(&mut rdr, schema)?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut n_records = 0;

    for (r, record) in rdr.records().enumerate() {
        let row_no = r + 1;
        n_records += 1;
        let record = match record {
            Ok(rec) => rec,
            Err(e) => {
                problems.push(Error::MalformedCsv { row: row_no, message: e.to_string() });
                if stop_at_first {
                    break;
                }
                continue;
            }
        };
        if record.len() != layout.header.len() {
            problems.push(Error::MalformedCsv {
                row: row_no,
                message: format!("expected {} fields, found {}", layout.header.len(), record.len()),
            });
            if stop_at_first {
                break;
            }
            continue;
        }
        let mut bad = false;
        let mut check = |pos: usize, scale: Scale, problems: &mut Vec<Error>| -> Cell {
            let raw = &record[pos];
            parse_cell(raw, scale).unwrap_or_else(|()| {
                bad = true;
                problems.push(Error::SchemaViolation {
                    row: row_no,
                    column: layout.header[pos].clone(),
                    value: raw.to_owned(),
                });
                None
            })
        };
        let values: Vec<Cell> = layout
            .attr_pos
            .iter()
            .zip(&layout.attr_scales)
            .map(|(&p, &s)| check(p, s, &mut problems))
            .collect();
        let response = check(layout.response_pos, layout.response_scale, &mut problems);
        if bad {
            if stop_at_first {
                break;
            }
            continue;
        }
        let id = match layout.id_pos {
            Some(p) => record[p].to_owned(),
            None => row_no.to_string(),
        };
        rows.push(Row { id, values, response });
    }
    Ok(Scanned { layout, rows, problems, n_records })
}

/// Parses comma-separated text with a header row. Empty cells are missing;
/// every other cell must be an integer inside its column's scale. Columns other
/// than the response and the id column become attributes, in header order.
pub fn parse_dataset(csv_text: &str, schema: &Schema) -> Result<OrdinalDataset> {
    let scanned = scan(csv_text, schema, true)?;
    if let Some(first) = scanned.problems.into_iter().next() {
        return Err(first);
    }
    if scanned.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let l = scanned.layout;
    let attrs = l
        .attr_pos
        .iter()
        .zip(&l.attr_scales)
        .map(|(&p, &s)| (l.header[p].clone(), s))
        .collect();
    OrdinalDataset::new(attrs, (l.header[l.response_pos].clone(), l.response_scale), scanned.rows)?
        .with_id_column(schema.id_column.clone())
}

pub(super) fn write_csv(ds: &OrdinalDataset) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let cell = |c: &Cell| c.map(|v| v.to_string()).unwrap_or_default();

    let mut header: Vec<&str> = Vec::with_capacity(ds.n_attributes() + 2);
    header.extend(ds.id_column());
    header.extend(ds.attribute_names().iter().map(String::as_str));
    header.push(ds.response_name());
    w.write_record(&header).expect("in-memory write");

    for row in ds.rows() {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        if ds.id_column().is_some() {
            rec.push(row.id.clone());
        }
        rec.extend(row.values.iter().map(cell));
        rec.push(cell(&row.response));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Per-column answer statistics gathered by [`validate_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSummary {
    pub name: String,
    pub scale: Scale,
    pub is_response: bool,
    pub missing: usize,
    /// Answer counts indexed by offset into `scale`.
    pub counts: Vec<usize>,
}

impl ColumnSummary {
    /// Scale values no respondent chose.
    pub fn unused_values(&self) -> Vec<i32> {
        self.scale
            .values()
            .zip(&self.counts)
            .filter(|(_, &c)| c == 0)
            .map(|(v, _)| v)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub n_rows: usize,
    pub problems: Vec<Error>,
    pub columns: Vec<ColumnSummary>,
}

impl ValidationSummary {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty() && self.n_rows > 0
    }
}

impl fmt::Display for ValidationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows: {}", self.n_rows)?;
        if self.n_rows == 0 {
            writeln!(f, "error: {}", Error::EmptyDataset)?;
        }
        for p in &self.problems {
            writeln!(f, "violation: {p}")?;
        }
        writeln!(f, "{:<24} {:>7} {:>8}  counts", "column", "scale", "missing")?;
        for c in &self.columns {
            let counts = c
                .scale
                .values()
                .zip(&c.counts)
                .map(|(v, n)| format!("{v}:{n}"))
                .collect::<Vec<_>>()
                .join(" ");
            let role = if c.is_response { " (response)" } else { "" };
            writeln!(
                f,
                "{:<24} {:>7} {:>8}  {}{}",
                c.name,
                c.scale.to_string(),
                c.missing,
                counts,
                role
            )?;
            let unused = c.unused_values();
            if !unused.is_empty() {
                let list = unused.iter().map(i32::to_string).collect::<Vec<_>>().join(", ");
                writeln!(f, "  warning: `{}` never answered with {}", c.name, list)?;
            }
        }
        Ok(())
    }
}

/// Checks every cell instead of stopping at the first problem. Only header
/// problems (missing response column, duplicates) are returned as `Err`.
pub fn validate_csv(csv_text: &str, schema: &Schema) -> Result<ValidationSummary> {
    let scanned = scan(csv_text, schema, false)?;
    let l = &scanned.layout;
    let mut columns: Vec<ColumnSummary> = l
        .attr_pos
        .iter()
        .zip(&l.attr_scales)
        .map(|(&p, &s)| (p, s, false))
        .chain(std::iter::once((l.response_pos, l.response_scale, true)))
        .map(|(p, scale, is_response)| ColumnSummary {
            name: l.header[p].clone(),
            scale,
            is_response,
            missing: 0,
            counts: vec![0; scale.len()],
        })
        .collect();
    let n_attr = l.attr_pos.len();
    for row in &scanned.rows {
        for (c, cell) in row.values.iter().chain(std::iter::once(&row.response)).enumerate() {
            let col = &mut columns[c];
            match cell {
                Some(v) => col.counts[col.scale.offset(*v)] += 1,
                None => col.missing += 1,
            }
        }
    }
    debug_assert_eq!(columns.len(), n_attr + 1);
    Ok(ValidationSummary { n_rows: scanned.n_records, problems: scanned.problems, columns })
}
