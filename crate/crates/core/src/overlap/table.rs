use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{maximize_slocc_overlap, OptimizerConfig, OverlapResult};
use crate::catalog::{representative, StateId};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Fractions recognised when rendering human-readable tables.
const FRACTIONS: [(f64, &str); 10] = [
    (1.0 / 2.0, "1/2"),
    (9.0 / 16.0, "9/16"),
    (2.0 / 3.0, "2/3"),
    (7.0 / 10.0, "7/10"),
    (3.0 / 4.0, "3/4"),
    (4.0 / 5.0, "4/5"),
    (5.0 / 6.0, "5/6"),
    (7.0 / 8.0, "7/8"),
    (9.0 / 10.0, "9/10"),
    (19.0 / 20.0, "19/20"),
];

/// The fraction within 1e-9 of `v`, if any.
pub fn as_fraction(v: f64) -> Option<&'static str> {
    FRACTIONS.iter().find(|(f, _)| (v - f).abs() <= 1e-9).map(|(_, s)| *s)
}

/// Full results: `cells[j][i]` is target `ids[i]` against the orbit of `ids[j]`;
/// `None` on the diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapTable {
    pub ids: Vec<StateId>,
    pub config: OptimizerConfig,
    pub cells: Vec<Vec<Option<OverlapResult>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CellValue {
    SelfPair,
    Value { lambda: f64, saturated: bool },
}

/// Values and saturation flags only; what CSV files carry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableSummary {
    pub ids: Vec<StateId>,
    pub cells: Vec<Vec<CellValue>>,
}

pub fn overlap_table(ids: &[StateId], cfg: &OptimizerConfig) -> Result<OverlapTable> {
    cfg.validate()?;
    let states = ids.iter().map(representative).collect::<Result<Vec<_>>>()?;
    if let Some(first) = states.first() {
        if let Some((k, _)) = states.iter().enumerate().find(|(_, s)| s.dims() != first.dims()) {
            return Err(Error::Shape(format!("{} has dims {:?}, {} has {:?}",
                ids[k], states[k].dims(), ids[0], first.dims())));
        }
    }
    let n = ids.len();
    let flat: Vec<Option<OverlapResult>> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let (j, i) = (c / n, c % n);
            if i == j {
                Ok(None)
            } else {
                maximize_slocc_overlap(&states[i], &states[j], cfg).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let mut it = flat.into_iter();
    let cells = (0..n).map(|_| it.by_ref().take(n).collect()).collect();
    Ok(OverlapTable { ids: ids.to_vec(), config: cfg.clone(), cells })
}

impl OverlapTable {
    pub fn summary(&self) -> TableSummary {
        let cells = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        None => CellValue::SelfPair,
                        Some(r) => CellValue::Value { lambda: r.lambda, saturated: r.saturated },
                    })
                    .collect()
            })
            .collect();
        TableSummary { ids: self.ids.clone(), cells }
    }

    pub fn to_json(&self, version: &str) -> Value {
        json!({
            "schemaVersion": SCHEMA_VERSION,
            "version": version,
            "config": self.config,
            "ids": self.ids,
            "cells": self.cells,
        })
    }
}

impl TableSummary {
    pub fn get(&self, orbit: &StateId, target: &StateId) -> Option<CellValue> {
        let j = self.ids.iter().position(|x| x == orbit)?;
        let i = self.ids.iter().position(|x| x == target)?;
        Some(self.cells[j][i])
    }

    /// `sat[j][i]` for off-diagonal saturated cells.
    pub fn saturation_pattern(&self) -> Vec<Vec<bool>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| matches!(c, CellValue::Value { saturated: true, .. })).collect())
            .collect()
    }

    /// Header row and column of ids; cells `self`, `1*` or six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("orbit/target");
        for id in &self.ids {
            out.push(',');
            out.push_str(&id.to_string());
        }
        out.push('\n');
        for (id, row) in self.ids.iter().zip(&self.cells) {
            out.push_str(&id.to_string());
            for c in row {
                out.push(',');
                out.push_str(&match c {
                    CellValue::SelfPair => "self".to_string(),
                    CellValue::Value { saturated: true, .. } => "1*".to_string(),
                    CellValue::Value { lambda, .. } => format!("{lambda:.6}"),
                });
            }
            out.push('\n');
        }
        out
    }

    /// Aligned grid with fraction rendering, for terminals.
    pub fn to_text(&self) -> String {
        let w = 9;
        let mut out = format!("{:>w$}", "");
        for id in &self.ids {
            out.push_str(&format!("{:>w$}", id.to_string()));
        }
        out.push('\n');
        for (id, row) in self.ids.iter().zip(&self.cells) {
            out.push_str(&format!("{:>w$}", id.to_string()));
            for c in row {
                let s = match c {
                    CellValue::SelfPair => "x".to_string(),
                    CellValue::Value { saturated: true, .. } => "1*".to_string(),
                    CellValue::Value { lambda, .. } => {
                        as_fraction(*lambda).map(str::to_string).unwrap_or_else(|| format!("{lambda:.4}"))
                    }
                };
                out.push_str(&format!("{s:>w$}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(m);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty table".into()))?;
        let ids = header
            .split(',')
            .skip(1)
            .map(|s| s.trim().parse::<StateId>())
            .collect::<Result<Vec<_>>>()?;
        let mut cells = Vec::new();
        for (j, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != ids.len() + 1 {
                return Err(bad(format!("row {} has {} fields", j + 1, fields.len())));
            }
            let row_id: StateId = fields[0].parse()?;
            if ids.get(j) != Some(&row_id) {
                return Err(bad(format!("row {} labelled {row_id}, expected header order", j + 1)));
            }
            let row = fields[1..]
                .iter()
                .enumerate()
                .map(|(i, f)| match *f {
                    "self" | "x" if i == j => Ok(CellValue::SelfPair),
                    "1*" => Ok(CellValue::Value { lambda: 1.0, saturated: true }),
                    v => v
                        .parse::<f64>()
                        .map(|lambda| CellValue::Value { lambda, saturated: false })
                        .map_err(|_| bad(format!("cell ({}, {}) = `{v}`", j + 1, i + 1))),
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(row);
        }
        if cells.len() != ids.len() {
            return Err(bad(format!("{} rows for {} ids", cells.len(), ids.len())));
        }
        Ok(Self { ids, cells })
    }

    /// Reads the JSON written by [`OverlapTable::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let ids: Vec<StateId> = serde_json::from_value(v.get("ids").cloned().ok_or_else(|| bad("missing ids"))?)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let rows = v.get("cells").and_then(Value::as_array).ok_or_else(|| bad("missing cells"))?;
        if rows.len() != ids.len() {
            return Err(bad("row count differs from id count"));
        }
        let mut cells = Vec::new();
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            if row.len() != ids.len() {
                return Err(bad("column count differs from id count"));
            }
            cells.push(
                row.iter()
                    .map(|c| {
                        if c.is_null() {
                            return Ok(CellValue::SelfPair);
                        }
                        let lambda = c.get("lambda").and_then(Value::as_f64).ok_or_else(|| bad("cell without lambda"))?;
                        let saturated = c.get("saturated").and_then(Value::as_bool).ok_or_else(|| bad("cell without flag"))?;
                        Ok(CellValue::Value { lambda, saturated })
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Self { ids, cells })
    }

    /// Accepts either format, sniffing for a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Self::from_json(&v)
        } else {
            Self::from_csv(text)
        }
    }
}
