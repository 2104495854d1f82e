//! Bundled regression tables of published values and a runner that
//! recomputes each row.
//!
//! Each file under `data/tables` is CSV with `#` comments and the columns
//! `label, quantity, stack, method, channel, expected, tol`.

use serde::{Deserialize, Serialize};

use crate::capacity::{threshold, Model, ThresholdOptions, DEFAULT_EXACT_TOL};
use crate::channel::ChannelFamily;
use crate::error::{Error, Result};
use crate::optimize::nonadditivity_at_hashing;

const BUNDLED: [(&str, &str); 7] = [
    ("table1", include_str!("../data/tables/table1.csv")),
    ("table2", include_str!("../data/tables/table2.csv")),
    ("table6", include_str!("../data/tables/table6.csv")),
    ("table7", include_str!("../data/tables/table7.csv")),
    ("table9", include_str!("../data/tables/table9.csv")),
    ("table10", include_str!("../data/tables/table10.csv")),
    ("table11", include_str!("../data/tables/table11.csv")),
];

pub fn table_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Threshold,
    /// Hashing point of the row's channel family.
    HashingPoint,
    /// Rate at the hashing point of the row's custom family.
    Nonadditivity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub quantity: Quantity,
    pub stack: String,
    pub method: String,
    pub channel: String,
    pub expected: f64,
    pub tol: f64,
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Spec(format!("table row: {e}"))))
        .collect()
}

pub fn load_table(name: &str) -> Result<Vec<TableRow>> {
    let text = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Spec(format!("{name} (bundled tables: {})", table_names().collect::<Vec<_>>().join(", "))))?;
    parse_table(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub label: String,
    pub quantity: Quantity,
    pub stack: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub error: Option<String>,
    pub tol: f64,
    pub pass: bool,
}

impl RowOutcome {
    pub fn diff(&self) -> Option<f64> {
        self.computed.map(|c| c - self.expected)
    }
}

/// Recomputes one row; `tol` overrides the row's tolerance.
pub fn evaluate_row(row: &TableRow) -> Result<f64> {
    let model = Model::build(&row.stack, &row.method)?;
    let family: ChannelFamily = row.channel.parse()?;
    match row.quantity {
        Quantity::Threshold => {
            let opts = ThresholdOptions {
                tol: Some((0.1 * row.tol).min(DEFAULT_EXACT_TOL)),
                ..Default::default()
            };
            Ok(threshold(&model, &family, &opts)?.threshold)
        }
        Quantity::HashingPoint | Quantity::Nonadditivity => {
            let ChannelFamily::Custom(c) = family else {
                return crate::channel::hashing_point(&family);
            };
            let (p, q) = nonadditivity_at_hashing(&model, &c)?;
            Ok(if row.quantity == Quantity::HashingPoint { p } else { q })
        }
    }
}

pub fn run_row(row: &TableRow, tol: Option<f64>) -> RowOutcome {
    let tol = tol.unwrap_or(row.tol);
    let (computed, error) = match evaluate_row(row) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RowOutcome {
        label: row.label.clone(),
        quantity: row.quantity,
        stack: row.stack.clone(),
        expected: row.expected,
        computed,
        error,
        tol,
        pass: computed.is_some_and(|c| (c - row.expected).abs() <= tol),
    }
}

pub fn run_table(name: &str, tol: Option<f64>) -> Result<Vec<RowOutcome>> {
    Ok(load_table(name)?.iter().map(|r| run_row(r, tol)).collect())
}
