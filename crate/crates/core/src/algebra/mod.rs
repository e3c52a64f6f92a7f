//! Boolean relations derived from a template and their polymorphisms.
//!
//! The central object is the [`HMatrix`]: one row per domain element `d`,
//! holding `(f_1(d), ..., f_k(d), 0, 1)`. The two trailing columns are the
//! constant functions `bot` and `top`. Closure of the row set under the
//! four Boolean operations of [`BooleanOperation`], together with the
//! pointwise order of the first two rows, decides tractability.

mod closure;
mod core;
mod extend;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Element, Template, RESERVED_NAMES};

pub use self::closure::{closed_under, ClosureReport};
pub(crate) use self::closure::for_each_tuple;
pub use self::core::{compute_core, Core, Retraction};
pub use self::extend::{extend_operation, preserves_graphs, OperationTable, PreservationReport};

/// A Boolean tuple, e.g. one row of an [`HMatrix`].
pub type Row = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("tuples have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("relation is not closed under {op}: labels {witness:?} produce a missing row")]
    NotClosed {
        op: BooleanOperation,
        witness: Vec<Element>,
    },
}

/// The four Boolean polymorphisms the classification is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BooleanOperation {
    /// Ternary two-out-of-three.
    Major,
    /// Ternary `x + y + z mod 2`.
    Minor,
    /// Binary conjunction (minimum).
    Meet,
    /// Binary disjunction (maximum).
    Join,
}

impl BooleanOperation {
    pub const ALL: [BooleanOperation; 4] = [
        BooleanOperation::Major,
        BooleanOperation::Minor,
        BooleanOperation::Meet,
        BooleanOperation::Join,
    ];

    pub fn arity(self) -> usize {
        match self {
            BooleanOperation::Major | BooleanOperation::Minor => 3,
            BooleanOperation::Meet | BooleanOperation::Join => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BooleanOperation::Major => "major",
            BooleanOperation::Minor => "minor",
            BooleanOperation::Meet => "meet",
            BooleanOperation::Join => "join",
        }
    }

    /// Applies the operation to Boolean arguments; `args.len()` must equal
    /// the arity.
    #[inline]
    pub fn apply(self, args: &[bool]) -> bool {
        debug_assert_eq!(args.len(), self.arity());
        match self {
            BooleanOperation::Major => {
                (args[0] && args[1]) || (args[1] && args[2]) || (args[0] && args[2])
            }
            BooleanOperation::Minor => args[0] ^ args[1] ^ args[2],
            BooleanOperation::Meet => args[0] && args[1],
            BooleanOperation::Join => args[0] || args[1],
        }
    }

    /// Coordinate-wise application to equally long rows.
    pub fn apply_rows(self, rows: &[&[bool]]) -> Row {
        let width = rows[0].len();
        let mut args = vec![false; rows.len()];
        (0..width)
            .map(|c| {
                for (a, r) in args.iter_mut().zip(rows) {
                    *a = r[c];
                }
                self.apply(&args)
            })
            .collect()
    }
}

impl std::fmt::Display for BooleanOperation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Pointwise `a <= b` (non-strict) on Boolean tuples.
pub fn tuple_leq(a: &[bool], b: &[bool]) -> Result<bool, AlgebraError> {
    if a.len() != b.len() {
        return Err(AlgebraError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).all(|(&x, &y)| !x || y))
}

/// The H-normal form of a template with `bot` and `top` columns appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMatrix {
    columns: Vec<String>,
    rows: Vec<Row>,
    row_index: HashMap<Row, Element>,
}

pub fn build_h_matrix(tmpl: &Template) -> HMatrix {
    let mut columns: Vec<String> = tmpl.functions().iter().map(|f| f.name().to_string()).collect();
    columns.extend(RESERVED_NAMES.iter().map(|s| s.to_string()));
    let rows = tmpl
        .domain()
        .elements()
        .map(|d| {
            let mut row: Row = tmpl.functions().iter().map(|f| f.bit(d)).collect();
            row.push(false);
            row.push(true);
            row
        })
        .collect();
    HMatrix::from_rows(columns, rows)
}

impl HMatrix {
    /// A matrix from explicit rows; row `d` is labelled `d`. Used directly
    /// for arbitrary Boolean relations (no constant columns are added).
    pub fn from_rows(columns: Vec<String>, rows: Vec<Row>) -> Self {
        assert!(rows.iter().all(|r| r.len() == columns.len()), "ragged matrix");
        let mut row_index = HashMap::new();
        for (d, r) in rows.iter().enumerate() {
            row_index.entry(r.clone()).or_insert(d);
        }
        Self {
            columns,
            rows,
            row_index,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// Number of labels (rows, counting duplicates).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, label: Element) -> &[bool] {
        &self.rows[label]
    }

    /// Least label carrying `row`.
    pub fn row_index(&self, row: &[bool]) -> Option<Element> {
        self.row_index.get(row).copied()
    }

    pub fn contains(&self, row: &[bool]) -> bool {
        self.row_index.contains_key(row)
    }

    /// Distinct rows in label order of first occurrence.
    pub fn distinct_rows(&self) -> Vec<Row> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(d, r)| self.row_index[*r] == *d)
            .map(|(_, r)| r.clone())
            .collect()
    }

    /// Drops columns that are constant over all rows.
    pub fn without_constant_columns(&self) -> HMatrix {
        let keep: Vec<usize> = (0..self.width())
            .filter(|&c| self.rows.iter().any(|r| r[c] != self.rows[0][c]))
            .collect();
        HMatrix::from_rows(
            keep.iter().map(|&c| self.columns[c].clone()).collect(),
            self.rows
                .iter()
                .map(|r| keep.iter().map(|&c| r[c]).collect())
                .collect(),
        )
    }

    /// Aligned text rendering: `d | f1 f2 ... bot top`.
    pub fn render(&self) -> String {
        let label_w = self.len().saturating_sub(1).to_string().len();
        let widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let mut out = format!("{:>label_w$} |", "");
        for c in &self.columns {
            out.push(' ');
            out.push_str(c);
        }
        out.push('\n');
        for (d, r) in self.rows.iter().enumerate() {
            out.push_str(&format!("{d:>label_w$} |"));
            for (bit, w) in r.iter().zip(&widths) {
                out.push_str(&format!(" {:>w$}", u8::from(*bit)));
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn row_string(row: &[bool]) -> String {
    row.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
