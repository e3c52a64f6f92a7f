//! Reference solvers working on the original domain, without any
//! encoding.

use thiserror::Error;

use crate::algebra::for_each_tuple;
use crate::model::{evaluate, Assignment, Element, Instance, NormalizedInstance, Primitive, Template, VarId};

/// Largest search space `enumerate_solutions` accepts.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;
pub const ENUMERATION_MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vars} variables over {size} values exceed the enumeration guard")]
    GuardExceeded { vars: usize, size: usize },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Subset of the domain as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ValueSet(Vec<u64>);

impl ValueSet {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *words.last_mut().expect("n > 0") = (1 << (n % 64)) - 1;
        }
        ValueSet(words)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Keeps only values satisfying `keep`; returns `false` if none remain.
    fn retain(&mut self, mut keep: impl FnMut(Element) -> bool) -> bool {
        for (i, w) in self.0.iter_mut().enumerate() {
            let mut bits = *w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if !keep(i * 64 + b) {
                    *w &= !(1 << b);
                }
            }
        }
        self.0.iter().any(|&w| w != 0)
    }

    fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

struct Search<'a> {
    tmpl: &'a Template,
    inst: &'a NormalizedInstance,
    watch: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Prunes neighbours of the freshly assigned `x`.
    fn forward_check(&self, cand: &mut [ValueSet], x: VarId, a: Element) -> bool {
        for &ci in &self.watch[x] {
            let Primitive::Apply { func, arg, result } = self.inst.constraints()[ci] else {
                continue;
            };
            let f = &self.tmpl.functions()[func];
            let ok = if arg == result {
                f.apply(a) == a
            } else if arg == x {
                let fa = f.apply(a);
                cand[result].retain(|d| d == fa)
            } else {
                cand[arg].retain(|d| f.apply(d) == a)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn run(&self, cand: Vec<ValueSet>, assigned: &mut Vec<bool>, values: &mut Vec<Element>) -> bool {
        let next = (0..cand.len())
            .filter(|&v| !assigned[v])
            .min_by_key(|&v| (cand[v].len(), v));
        let Some(x) = next else {
            return true;
        };
        assigned[x] = true;
        for a in cand[x].iter() {
            let mut c = cand.clone();
            c[x].retain(|d| d == a);
            if self.forward_check(&mut c, x, a) {
                values[x] = a;
                if self.run(c, assigned, values) {
                    return true;
                }
            }
        }
        assigned[x] = false;
        false
    }
}

/// Depth-first search with forward checking over `Apply` constraints,
/// smallest candidate set first (ties by variable id), values ascending.
/// Returns one value per normalized variable.
pub fn solve_backtracking(inst: &NormalizedInstance, tmpl: &Template) -> Option<Vec<Element>> {
    let n = tmpl.size();
    let mut cand = vec![ValueSet::full(n); inst.num_vars()];
    let mut watch = vec![Vec::new(); inst.num_vars()];
    for (i, c) in inst.constraints().iter().enumerate() {
        match *c {
            Primitive::Pin { var, value } => {
                if !cand[var].retain(|d| d == value) {
                    return None;
                }
            }
            Primitive::Apply { func, arg, result } => {
                let f = &tmpl.functions()[func];
                if !cand[result].retain(|d| d <= 1) {
                    return None;
                }
                if arg == result && !cand[arg].retain(|d| f.apply(d) == d) {
                    return None;
                }
                watch[arg].push(i);
                if result != arg {
                    watch[result].push(i);
                }
            }
        }
    }
    let search = Search { tmpl, inst, watch };
    let mut assigned = vec![false; inst.num_vars()];
    let mut values = vec![0; inst.num_vars()];
    if !search.run(cand, &mut assigned, &mut values) {
        return None;
    }
    debug_assert!(inst.satisfied_by(tmpl, &values));
    Some(values)
}

/// All models of `inst`, variables in name order, assignments in
/// lexicographic order, at most `limit` of them.
pub fn enumerate_solutions(inst: &Instance, tmpl: &Template, limit: usize) -> Result<Vec<Assignment>, OracleError> {
    let mut names: Vec<&str> = inst.variables();
    names.sort_unstable();
    let (vars, size) = (names.len(), tmpl.size());
    let space = (size as u64).checked_pow(vars as u32);
    if vars > ENUMERATION_MAX_VARS || space.is_none_or(|s| s > ENUMERATION_LIMIT) {
        return Err(OracleError::GuardExceeded { vars, size });
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_tuple(size, vars, |t| {
        if out.len() >= limit {
            return false;
        }
        let asg: Assignment = names.iter().zip(t).map(|(&n, &d)| (n, d)).collect();
        match evaluate(inst, tmpl, &asg) {
            Ok(true) => out.push(asg),
            Ok(false) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        true
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}
