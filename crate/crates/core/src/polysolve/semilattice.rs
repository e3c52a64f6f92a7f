//! Meet- or join-closed systems: generalized arc consistency, then the
//! least (or greatest) surviving value everywhere.

use std::collections::VecDeque;

use super::{verified, SolveError};
use crate::encoder::{BooleanSystem, BoolVar, Scoped};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

const ZERO: u8 = 0b01;
const ONE: u8 = 0b10;

fn mask(b: bool) -> u8 {
    if b {
        ONE
    } else {
        ZERO
    }
}

/// Per Boolean variable, the surviving subset of `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets(Vec<u8>);

impl CandidateSets {
    pub fn allows(&self, var: BoolVar, value: bool) -> bool {
        self.0[var] & mask(value) != 0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extract(&self, dir: Direction) -> Vec<bool> {
        self.0
            .iter()
            .map(|&m| match dir {
                Direction::Min => m & ZERO == 0,
                Direction::Max => m & ONE != 0,
            })
            .collect()
    }
}

/// Generalized arc consistency over all constraints of `sys`, processed
/// from a FIFO worklist seeded in constraint order. `None` on wipeout.
pub fn gac(sys: &BooleanSystem) -> Option<CandidateSets> {
    let scoped: Vec<Scoped> = sys.scoped();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); sys.num_vars()];
    for (i, s) in scoped.iter().enumerate() {
        for &v in &s.scope {
            watch[v].push(i);
        }
    }
    let mut cand = vec![ZERO | ONE; sys.num_vars()];
    let mut queued = vec![true; scoped.len()];
    let mut queue: VecDeque<usize> = (0..scoped.len()).collect();
    let mut support = Vec::new();
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        let s = &scoped[i];
        support.clear();
        support.resize(s.scope.len(), 0u8);
        for t in sys.relation(s.relation) {
            if s.scope.iter().zip(t).all(|(&v, &b)| cand[v] & mask(b) != 0) {
                for (acc, &b) in support.iter_mut().zip(t) {
                    *acc |= mask(b);
                }
            }
        }
        for (&v, &sup) in s.scope.iter().zip(&support) {
            let next = cand[v] & sup;
            if next == cand[v] {
                continue;
            }
            if next == 0 {
                return None;
            }
            cand[v] = next;
            for &j in &watch[v] {
                if j != i && !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Some(CandidateSets(cand))
}

pub fn solve_semilattice(sys: &BooleanSystem, dir: Direction) -> Result<Option<Vec<bool>>, SolveError> {
    match gac(sys) {
        None => Ok(None),
        Some(cand) => verified(sys, cand.extract(dir), "semilattice extraction"),
    }
}
