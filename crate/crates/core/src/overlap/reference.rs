//! The published 2×3×3 overlap table, verbatim: row = orbit `ψ_j`, column = target `ψ_i`,
//! both running over `ψ₆ … ψ₁₇`.

use crate::catalog::{StateId, PSI_FIRST};

const ROWS: [[&str; 12]; 12] = [
    ["x", "1", "2/3", "2/3", "2/3", "3/4", "3/4", "3/4", "0.5625", "3/4", "3/4", "0.65"],
    ["3/4", "x", "2/3", "2/3", "2/3", "3/4", "3/4", "0.5433", "0.5625", "0.7", "3/4", "0.6129"],
    ["1", "1", "x", "2/3", "2/3", "0.875", "3/4", "3/4", "3/4", "3/4", "3/4", "0.7252"],
    ["1", "1", "2/3", "x", "2/3", "3/4", "0.875", "3/4", "3/4", "3/4", "3/4", "0.7252"],
    ["1", "1", "1", "1", "x", "0.875", "0.875", "0.8333", "3/4", "0.9045", "1", "0.7955"],
    ["1", "1", "1", "2/3", "2/3", "x", "3/4", "3/4", "3/4", "3/4", "3/4", "0.8"],
    ["1", "1", "2/3", "1", "2/3", "3/4", "x", "3/4", "3/4", "3/4", "3/4", "0.8"],
    ["1", "1", "1", "1", "0.8333", "1", "1", "x", "1", "0.95", "1", "1"],
    ["1", "1", "1", "1", "2/3", "0.875", "0.875", "0.8125", "x", "3/4", "3/4", "0.8"],
    ["1", "1", "1", "1", "1", "1", "1", "1", "1", "x", "1", "1"],
    ["1", "1", "1", "1", "0.7357", "0.875", "0.875", "0.7706", "3/4", "3/4", "x", "0.8"],
    ["1", "1", "1", "1", "0.795", "1", "1", "0.8958", "1", "0.875", "1", "x"],
];

/// Entries printed as fractions or short decimals that are treated as exact targets.
const EXACT_TEXTS: [&str; 8] = ["2/3", "3/4", "0.875", "0.8", "0.95", "0.5625", "0.8333", "0.8125"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precision {
    /// Fraction-like entries.
    Exact,
    /// Entries printed with a few decimals only.
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PublishedCell {
    Diagonal,
    Saturated,
    Value { value: f64, text: &'static str, precision: Precision },
}

fn parse(text: &'static str) -> PublishedCell {
    match text {
        "x" => PublishedCell::Diagonal,
        "1" => PublishedCell::Saturated,
        _ => {
            let value = match text.split_once('/') {
                Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
                None => text.parse().unwrap(),
            };
            let precision = if EXACT_TEXTS.contains(&text) { Precision::Exact } else { Precision::Low };
            PublishedCell::Value { value, text, precision }
        }
    }
}

/// Published cell for orbit `ψ_orbit` and target `ψ_target` (indices 6..=17).
pub fn published_cell(orbit: u8, target: u8) -> PublishedCell {
    parse(ROWS[(orbit - PSI_FIRST) as usize][(target - PSI_FIRST) as usize])
}

/// The whole table as a summary with the catalog ids.
pub fn published_table() -> super::TableSummary {
    let ids = StateId::all_psi();
    let cells = (0..12)
        .map(|j| {
            (0..12)
                .map(|i| match parse(ROWS[j][i]) {
                    PublishedCell::Diagonal => super::CellValue::SelfPair,
                    PublishedCell::Saturated => super::CellValue::Value { lambda: 1.0, saturated: true },
                    PublishedCell::Value { value, .. } => {
                        super::CellValue::Value { lambda: value, saturated: false }
                    }
                })
                .collect()
        })
        .collect();
    super::TableSummary { ids, cells }
}
