//! Minority-closed systems: every relation is an affine subspace of
//! `GF(2)^k`, described by parity checks; the whole system is one linear
//! system.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{verified, SolveError};
use crate::encoder::{BooleanSystem, RelationId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("empty row set")]
    Empty,
    #[error("rows have different lengths")]
    Ragged,
    #[error("{rows} rows do not form a coset (dimension {dim})")]
    NotACoset { rows: usize, dim: usize },
}

/// `base ⊕ span(basis)`, together with the parity checks cutting it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineHull {
    pub base: Vec<bool>,
    pub basis: Vec<Vec<bool>>,
    /// `(c, b)` means `⊕_{i: c[i]} x_i = b`.
    pub checks: Vec<(Vec<bool>, bool)>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every point of the coset, in no particular order.
    pub fn points(&self) -> Vec<Vec<bool>> {
        let mut out = vec![self.base.clone()];
        for b in &self.basis {
            let shifted: Vec<Vec<bool>> = out.iter().map(|p| xor(p, b)).collect();
            out.extend(shifted);
        }
        out
    }
}

fn xor(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn dot(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).fold(false, |acc, (x, y)| acc ^ (x & y))
}

/// Reduced row-echelon form of `vectors`, with pivot columns.
fn rref(vectors: &[Vec<bool>], width: usize) -> (Vec<Vec<bool>>, Vec<usize>) {
    let mut rows: Vec<Vec<bool>> = vectors.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] {
                let pivot = rows[r].clone();
                rows[i] = xor(&rows[i], &pivot);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Computes the affine hull of `rows` and checks that it adds nothing.
pub fn affine_hull(rows: &[Vec<bool>]) -> Result<AffineHull, HullError> {
    let set: BTreeSet<&Vec<bool>> = rows.iter().collect();
    let base = (*set.first().ok_or(HullError::Empty)?).clone();
    let width = base.len();
    if set.iter().any(|r| r.len() != width) {
        return Err(HullError::Ragged);
    }

    let mut basis: Vec<Vec<bool>> = Vec::new();
    for r in &set {
        let d = xor(r, &base);
        let mut candidate = basis.clone();
        candidate.push(d.clone());
        if rref(&candidate, width).0.len() > basis.len() {
            basis.push(d);
        }
    }
    let dim = basis.len();
    if dim >= usize::BITS as usize || set.len() != 1 << dim {
        return Err(HullError::NotACoset {
            rows: set.len(),
            dim,
        });
    }
    let hull_points: BTreeSet<Vec<bool>> = AffineHull {
        base: base.clone(),
        basis: basis.clone(),
        checks: Vec::new(),
    }
    .points()
    .into_iter()
    .collect();
    if hull_points.iter().ne(set.iter().copied()) {
        return Err(HullError::NotACoset {
            rows: set.len(),
            dim,
        });
    }

    // null space of the basis: one vector per free column
    let (reduced, pivots) = rref(&basis, width);
    let checks = (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut c = vec![false; width];
            c[free] = true;
            for (row, &p) in reduced.iter().zip(&pivots) {
                c[p] = row[free];
            }
            let rhs = dot(&c, &base);
            (c, rhs)
        })
        .collect();
    Ok(AffineHull {
        base,
        basis,
        checks,
    })
}

/// Sparse parity equations over `GF(2)`, kept in echelon form as they are
/// added: each stored equation has a distinct leading (smallest) variable.
#[derive(Debug, Clone, Default)]
pub struct LinearSystemGF2 {
    num_vars: usize,
    equations: Vec<(Vec<usize>, bool)>,
    pivot_of: HashMap<usize, usize>,
    inconsistent: bool,
}

/// Symmetric difference of two sorted variable lists.
fn merge_xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl LinearSystemGF2 {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            ..Self::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.equations.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Adds `⊕ vars = rhs`; repeated variables cancel.
    pub fn push(&mut self, vars: &[usize], rhs: bool) {
        let mut eq: Vec<usize> = Vec::with_capacity(vars.len());
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        for v in sorted {
            assert!(v < self.num_vars, "variable {v} out of range");
            if eq.last() == Some(&v) {
                eq.pop();
            } else {
                eq.push(v);
            }
        }
        let mut rhs = rhs;
        while let Some(&lead) = eq.first() {
            match self.pivot_of.get(&lead) {
                Some(&k) => {
                    let (other, b) = &self.equations[k];
                    eq = merge_xor(&eq, other);
                    rhs ^= b;
                }
                None => {
                    self.pivot_of.insert(lead, self.equations.len());
                    self.equations.push((eq, rhs));
                    return;
                }
            }
        }
        if rhs {
            self.inconsistent = true;
        }
    }

    /// Back-substitution with free variables set to 0.
    pub fn solve(&self) -> Option<Vec<bool>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![false; self.num_vars];
        let mut order: Vec<&(Vec<usize>, bool)> = self.equations.iter().collect();
        order.sort_unstable_by_key(|(vars, _)| std::cmp::Reverse(vars[0]));
        for (vars, rhs) in order {
            x[vars[0]] = vars[1..].iter().fold(*rhs, |acc, &v| acc ^ x[v]);
        }
        Some(x)
    }
}

pub fn solve_affine(sys: &BooleanSystem) -> Result<Option<Vec<bool>>, SolveError> {
    let mut checks = Vec::new();
    for r in RelationId::ALL {
        let hull = affine_hull(sys.relation(r))
            .map_err(|e| SolveError::Internal(format!("relation {r:?}: {e}")))?;
        checks.push(hull.checks);
    }
    let mut lin = LinearSystemGF2::new(sys.num_vars());
    let mut vars = Vec::new();
    for c in sys.constraints() {
        let s = sys.scope(c);
        for (coeffs, rhs) in &checks[s.relation.index()] {
            vars.clear();
            vars.extend(s.scope.iter().zip(coeffs).filter(|(_, &c)| c).map(|(&v, _)| v));
            lin.push(&vars, *rhs);
        }
        if !lin.is_consistent() {
            return Ok(None);
        }
    }
    match lin.solve() {
        None => Ok(None),
        Some(asg) => verified(sys, asg, "GF(2) elimination"),
    }
}
