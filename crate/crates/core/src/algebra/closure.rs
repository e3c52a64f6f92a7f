use serde::Serialize;

use super::{BooleanOperation, HMatrix, Row};
use crate::model::Element;

/// Outcome of a closure check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureReport {
    Closed,
    /// The least label tuple (lexicographically) whose coordinate-wise image
    /// is not a row, together with that image.
    Witness { labels: Vec<Element>, image: Row },
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureReport::Closed)
    }

    pub fn witness(&self) -> Option<&[Element]> {
        match self {
            ClosureReport::Closed => None,
            ClosureReport::Witness { labels, .. } => Some(labels),
        }
    }
}

/// Odometer over `0..n` tuples of length `arity`, in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, arity: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; arity];
    loop {
        if !visit(&t) {
            return;
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Checks whether the row set of `m` is closed under `op`, trying every
/// label tuple (repetitions included).
pub fn closed_under(m: &HMatrix, op: BooleanOperation) -> ClosureReport {
    let mut report = ClosureReport::Closed;
    for_each_tuple(m.len(), op.arity(), |labels| {
        let args: Vec<&[bool]> = labels.iter().map(|&d| m.row(d)).collect();
        let image = op.apply_rows(&args);
        if m.contains(&image) {
            true
        } else {
            report = ClosureReport::Witness {
                labels: labels.to_vec(),
                image,
            };
            false
        }
    });
    report
}
