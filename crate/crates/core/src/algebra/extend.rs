//! Lifting a Boolean polymorphism of the row set to an operation on the
//! whole domain, using the row labels as a numbering.

use super::closure::for_each_tuple;
use super::{closed_under, AlgebraError, BooleanOperation, ClosureReport, HMatrix};
use crate::model::{Element, Template};

/// A total operation `D^arity -> D`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationTable {
    arity: usize,
    size: usize,
    table: Vec<Element>,
}

impl OperationTable {
    pub fn from_fn(arity: usize, size: usize, f: impl Fn(&[Element]) -> Element) -> Self {
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for_each_tuple(size, arity, |args| {
            table.push(f(args));
            true
        });
        Self { arity, size, table }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, args: &[Element]) -> Element {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.table[idx]
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|a| self.get(&vec![a; self.arity]) == a)
    }
}

/// Extends `op` from the rows of `m` to all labels.
///
/// Ternary operations follow their defining identities whenever two
/// arguments coincide; otherwise the value is the least label of the
/// coordinate-wise image row. Binary operations are idempotent on the
/// diagonal and use the least label elsewhere.
pub fn extend_operation(m: &HMatrix, op: BooleanOperation) -> Result<OperationTable, AlgebraError> {
    if let ClosureReport::Witness { labels, .. } = closed_under(m, op) {
        return Err(AlgebraError::NotClosed {
            op,
            witness: labels,
        });
    }
    let by_rows = |args: &[Element]| {
        let rows: Vec<&[bool]> = args.iter().map(|&d| m.row(d)).collect();
        m.row_index(&op.apply_rows(&rows))
            .expect("closed row set contains every image")
    };
    let table = match op {
        BooleanOperation::Major => OperationTable::from_fn(3, m.len(), |a| {
            let (x, y, z) = (a[0], a[1], a[2]);
            if x == y || x == z {
                x
            } else if y == z {
                y
            } else {
                by_rows(a)
            }
        }),
        BooleanOperation::Minor => OperationTable::from_fn(3, m.len(), |a| {
            let (x, y, z) = (a[0], a[1], a[2]);
            if x == y {
                z
            } else if x == z {
                y
            } else if y == z {
                x
            } else {
                by_rows(a)
            }
        }),
        BooleanOperation::Meet | BooleanOperation::Join => {
            OperationTable::from_fn(2, m.len(), |a| if a[0] == a[1] { a[0] } else { by_rows(a) })
        }
    };
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreservationReport {
    Preserved,
    /// `f(q(args)) != q(f(args))`.
    Witness { function: String, args: Vec<Element> },
}

impl PreservationReport {
    pub fn is_preserved(&self) -> bool {
        matches!(self, PreservationReport::Preserved)
    }
}

/// Checks that `q` is a polymorphism of every function graph of `tmpl`.
pub fn preserves_graphs(q: &OperationTable, tmpl: &Template) -> PreservationReport {
    assert_eq!(q.size(), tmpl.size(), "operation and template domains differ");
    for f in tmpl.functions() {
        let mut report = PreservationReport::Preserved;
        let mut images = vec![0; q.arity()];
        for_each_tuple(tmpl.size(), q.arity(), |args| {
            for (img, &a) in images.iter_mut().zip(args) {
                *img = f.apply(a);
            }
            if f.apply(q.get(args)) == q.get(&images) {
                true
            } else {
                report = PreservationReport::Witness {
                    function: f.name().to_string(),
                    args: args.to_vec(),
                };
                false
            }
        });
        if !report.is_preserved() {
            return report;
        }
    }
    PreservationReport::Preserved
}
