//! Templates, instances and assignments.
//!
//! A [`Template`] is a finite domain `0..n` together with named unary
//! functions whose values all lie in `{0, 1}`. An [`Instance`] is a
//! conjunction of equations over those functions. Before any solver sees
//! an instance it is brought into primitive form by [`normalize_instance`]:
//! equalities are eliminated by merging variables and `f(x) = g(y)` is
//! split through a fresh variable.

mod parse;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_instance, parse_template, render_instance, render_template, ParseError};

/// Column names appended by the toolkit to every H-matrix.
pub const RESERVED_NAMES: [&str; 2] = ["bot", "top"];

/// A domain element.
pub type Element = usize;

/// Index of a variable inside a [`NormalizedInstance`].
pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain size {0} is below 2 (elements 0 and 1 are required)")]
    DomainTooSmall(usize),
    #[error("function `{name}` has {found} entries, expected {expected}")]
    TableLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("function `{name}` has entry {value} at position {position}; entries must be 0 or 1")]
    NonBooleanEntry {
        name: String,
        position: usize,
        value: usize,
    },
    #[error("duplicate function name `{0}`")]
    DuplicateFunction(String),
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("variable `{0}` has the same name as a template function")]
    NameCollision(String),
    #[error("pin `{var} := {value}` is outside the domain 0..{size}")]
    PinOutOfRange {
        var: String,
        value: Element,
        size: usize,
    },
    #[error("assignment has no value for variable `{0}`")]
    AssignmentNotTotal(String),
    #[error("assignment gives `{var}` the value {value}, outside the domain 0..{size}")]
    ValueOutOfRange {
        var: String,
        value: Element,
        size: usize,
    },
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The finite chain `0 < 1 < ... < n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domain {
    size: usize,
}

impl Domain {
    pub fn new(size: usize) -> Result<Self, ModelError> {
        if size < 2 {
            return Err(ModelError::DomainTooSmall(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }
}

/// A unary function `D -> {0, 1}` given by its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoBooleanFunction {
    name: String,
    table: Vec<u8>,
}

impl CoBooleanFunction {
    pub fn new(name: impl Into<String>, table: Vec<u8>) -> Result<Self, ModelError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ModelError::InvalidName(name));
        }
        if RESERVED_NAMES.contains(&name.as_str()) {
            return Err(ModelError::ReservedName(name));
        }
        if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(ModelError::NonBooleanEntry {
                name,
                position,
                value: value as usize,
            });
        }
        Ok(Self { name, table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, d: Element) -> Element {
        self.table[d] as Element
    }

    #[inline]
    pub fn bit(&self, d: Element) -> bool {
        self.table[d] == 1
    }
}

/// A finite domain together with an ordered list of co-Boolean functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    domain: Domain,
    functions: Vec<CoBooleanFunction>,
}

impl Template {
    pub fn new(domain_size: usize, functions: Vec<CoBooleanFunction>) -> Result<Self, ModelError> {
        let domain = Domain::new(domain_size)?;
        let mut seen = HashSet::new();
        for f in &functions {
            if f.table.len() != domain_size {
                return Err(ModelError::TableLength {
                    name: f.name.clone(),
                    expected: domain_size,
                    found: f.table.len(),
                });
            }
            if !seen.insert(f.name.as_str()) {
                return Err(ModelError::DuplicateFunction(f.name.clone()));
            }
        }
        Ok(Self { domain, functions })
    }

    /// Builds a template from already-validated functions without the
    /// `n >= 2` check. Only cores use this: a core may collapse to a single
    /// element.
    pub(crate) fn core_unchecked(domain_size: usize, functions: Vec<CoBooleanFunction>) -> Self {
        debug_assert!(domain_size >= 1);
        debug_assert!(functions.iter().all(|f| f.table.len() == domain_size));
        Self {
            domain: Domain { size: domain_size },
            functions,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.size
    }

    pub fn functions(&self) -> &[CoBooleanFunction] {
        &self.functions
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&CoBooleanFunction> {
        self.functions.iter().find(|f| f.name == name)
    }
}

/// One equation of an instance, as written in the instance file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `f(x) = y`
    Apply {
        func: String,
        arg: String,
        result: String,
    },
    /// `x == y`
    Equal(String, String),
    /// `f(x) = g(y)`
    ApplyApply {
        left_fn: String,
        left_arg: String,
        right_fn: String,
        right_arg: String,
    },
    /// `x := d`
    Pin { var: String, value: Element },
}

impl Constraint {
    pub fn apply(func: &str, arg: &str, result: &str) -> Self {
        Constraint::Apply {
            func: func.into(),
            arg: arg.into(),
            result: result.into(),
        }
    }

    pub fn equal(a: &str, b: &str) -> Self {
        Constraint::Equal(a.into(), b.into())
    }

    pub fn apply_apply(left_fn: &str, left_arg: &str, right_fn: &str, right_arg: &str) -> Self {
        Constraint::ApplyApply {
            left_fn: left_fn.into(),
            left_arg: left_arg.into(),
            right_fn: right_fn.into(),
            right_arg: right_arg.into(),
        }
    }

    pub fn pin(var: &str, value: Element) -> Self {
        Constraint::Pin {
            var: var.into(),
            value,
        }
    }

    pub fn variables(&self) -> Vec<&str> {
        match self {
            Constraint::Apply { arg, result, .. } => vec![arg, result],
            Constraint::Equal(a, b) => vec![a, b],
            Constraint::ApplyApply {
                left_arg,
                right_arg,
                ..
            } => vec![left_arg, right_arg],
            Constraint::Pin { var, .. } => vec![var],
        }
    }

    fn functions(&self) -> Vec<&str> {
        match self {
            Constraint::Apply { func, .. } => vec![func],
            Constraint::ApplyApply {
                left_fn, right_fn, ..
            } => vec![left_fn, right_fn],
            _ => vec![],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Apply { func, arg, result } => write!(f, "{func}({arg}) = {result}"),
            Constraint::Equal(a, b) => write!(f, "{a} == {b}"),
            Constraint::ApplyApply {
                left_fn,
                left_arg,
                right_fn,
                right_arg,
            } => write!(f, "{left_fn}({left_arg}) = {right_fn}({right_arg})"),
            Constraint::Pin { var, value } => write!(f, "{var} := {value}"),
        }
    }
}

/// A nonempty conjunction of constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    constraints: Vec<Constraint>,
}

impl Instance {
    /// Returns `None` for an empty constraint list.
    pub fn new(constraints: Vec<Constraint>) -> Option<Self> {
        if constraints.is_empty() {
            None
        } else {
            Some(Self { constraints })
        }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in &self.constraints {
            for v in c.variables() {
                if seen.insert(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn check_against(&self, tmpl: &Template) -> Result<(), ModelError> {
        for c in &self.constraints {
            for name in c.functions() {
                if tmpl.function(name).is_none() {
                    return Err(ModelError::UnknownFunction(name.to_string()));
                }
            }
            for v in c.variables() {
                if tmpl.function(v).is_some() {
                    return Err(ModelError::NameCollision(v.to_string()));
                }
            }
            if let Constraint::Pin { var, value } = c {
                if *value >= tmpl.size() {
                    return Err(ModelError::PinOutOfRange {
                        var: var.clone(),
                        value: *value,
                        size: tmpl.size(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A total map from variable names to domain elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<String, Element>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.0.get(var).copied()
    }

    pub fn insert(&mut self, var: impl Into<String>, value: Element) {
        self.0.insert(var.into(), value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries sorted by variable name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Element)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, Element)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Element)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Checks an assignment against every constraint of `inst`.
pub fn evaluate(inst: &Instance, tmpl: &Template, asg: &Assignment) -> Result<bool, ModelError> {
    let value = |v: &str| -> Result<Element, ModelError> {
        let d = asg
            .get(v)
            .ok_or_else(|| ModelError::AssignmentNotTotal(v.to_string()))?;
        if d >= tmpl.size() {
            return Err(ModelError::ValueOutOfRange {
                var: v.to_string(),
                value: d,
                size: tmpl.size(),
            });
        }
        Ok(d)
    };
    let func = |name: &str| {
        tmpl.function(name)
            .ok_or_else(|| ModelError::UnknownFunction(name.to_string()))
    };
    let mut ok = true;
    for c in inst.constraints() {
        let holds = match c {
            Constraint::Apply { func: f, arg, result } => func(f)?.apply(value(arg)?) == value(result)?,
            Constraint::Equal(a, b) => value(a)? == value(b)?,
            Constraint::ApplyApply {
                left_fn,
                left_arg,
                right_fn,
                right_arg,
            } => func(left_fn)?.apply(value(left_arg)?) == func(right_fn)?.apply(value(right_arg)?),
            Constraint::Pin { var, value: d } => value(var)? == *d,
        };
        // keep going so that a missing variable is always reported
        ok &= holds;
    }
    Ok(ok)
}

/// A constraint of a normalized instance; functions are referred to by
/// their index in the template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Apply {
        func: usize,
        arg: VarId,
        result: VarId,
    },
    Pin { var: VarId, value: Element },
}

/// An instance with only `Apply` and `Pin` constraints over dense
/// variable ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    vars: Vec<String>,
    first_fresh: usize,
    constraints: Vec<Primitive>,
    merge: BTreeMap<String, String>,
}

/// Result of normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Ready(NormalizedInstance),
    /// Two different values were pinned to one class of merged variables.
    TriviallyUnsat {
        var: String,
        values: (Element, Element),
    },
}

impl Normalized {
    pub fn ready(self) -> Option<NormalizedInstance> {
        match self {
            Normalized::Ready(n) => Some(n),
            Normalized::TriviallyUnsat { .. } => None,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // The smaller index (earlier first occurrence) becomes the root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Eliminates `==` by merging variables and splits `f(x) = g(y)` into
/// `f(x) = z, g(y) = z` with a fresh `z`.
///
/// The representative of a merged class is its variable with the earliest
/// first occurrence.
pub fn normalize_instance(inst: &Instance, tmpl: &Template) -> Result<Normalized, ModelError> {
    inst.check_against(tmpl)?;

    let names = inst.variables();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut uf = UnionFind::new(names.len());
    for c in inst.constraints() {
        if let Constraint::Equal(a, b) = c {
            uf.union(index[a.as_str()], index[b.as_str()]);
        }
    }

    let mut var_of_root = vec![usize::MAX; names.len()];
    let mut vars = Vec::new();
    let mut merge = BTreeMap::new();
    for (i, &name) in names.iter().enumerate() {
        let root = uf.find(i);
        if root == i {
            var_of_root[i] = vars.len();
            vars.push(name.to_string());
        } else {
            merge.insert(name.to_string(), names[root].to_string());
        }
    }
    let rep = |uf: &mut UnionFind, name: &str| var_of_root[uf.find(index[name])];

    let taken: HashSet<&str> = names.iter().copied().collect();
    let first_fresh = vars.len();
    let mut fresh_counter = 0usize;
    let mut fresh = |vars: &mut Vec<String>| {
        let name = loop {
            let candidate = format!("_z{fresh_counter}");
            fresh_counter += 1;
            if !taken.contains(candidate.as_str()) {
                break candidate;
            }
        };
        vars.push(name);
        vars.len() - 1
    };

    let mut pins: HashMap<VarId, Element> = HashMap::new();
    let mut constraints = Vec::new();
    for c in inst.constraints() {
        match c {
            Constraint::Apply { func, arg, result } => constraints.push(Primitive::Apply {
                func: tmpl.function_index(func).expect("checked above"),
                arg: rep(&mut uf, arg),
                result: rep(&mut uf, result),
            }),
            Constraint::Equal(..) => {}
            Constraint::ApplyApply {
                left_fn,
                left_arg,
                right_fn,
                right_arg,
            } => {
                let z = fresh(&mut vars);
                constraints.push(Primitive::Apply {
                    func: tmpl.function_index(left_fn).expect("checked above"),
                    arg: rep(&mut uf, left_arg),
                    result: z,
                });
                constraints.push(Primitive::Apply {
                    func: tmpl.function_index(right_fn).expect("checked above"),
                    arg: rep(&mut uf, right_arg),
                    result: z,
                });
            }
            Constraint::Pin { var, value } => {
                let r = rep(&mut uf, var);
                match pins.get(&r) {
                    Some(&old) if old != *value => {
                        return Ok(Normalized::TriviallyUnsat {
                            var: vars[r].clone(),
                            values: (old, *value),
                        });
                    }
                    Some(_) => {}
                    None => {
                        pins.insert(r, *value);
                        constraints.push(Primitive::Pin {
                            var: r,
                            value: *value,
                        });
                    }
                }
            }
        }
    }

    Ok(Normalized::Ready(NormalizedInstance {
        vars,
        first_fresh,
        constraints,
        merge,
    }))
}

impl NormalizedInstance {
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, id: VarId) -> &str {
        &self.vars[id]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_fresh(&self, id: VarId) -> bool {
        id >= self.first_fresh
    }

    pub fn constraints(&self) -> &[Primitive] {
        &self.constraints
    }

    /// Non-representative variables mapped to their representative.
    pub fn merge_map(&self) -> &BTreeMap<String, String> {
        &self.merge
    }

    pub fn representative<'a>(&'a self, name: &'a str) -> &'a str {
        self.merge.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Pin value per variable, if any.
    pub fn pins(&self) -> Vec<Option<Element>> {
        let mut out = vec![None; self.vars.len()];
        for c in &self.constraints {
            if let Primitive::Pin { var, value } = *c {
                out[var] = Some(value);
            }
        }
        out
    }

    /// Rewrites every pin value through `map`; fails with the first
    /// variable whose pin has no image.
    pub fn map_pins(
        &self,
        map: impl Fn(Element) -> Option<Element>,
    ) -> Result<Self, (String, Element)> {
        let mut out = self.clone();
        for c in &mut out.constraints {
            if let Primitive::Pin { var, value } = c {
                *value = map(*value).ok_or_else(|| (self.vars[*var].clone(), *value))?;
            }
        }
        Ok(out)
    }

    /// Checks a dense assignment (indexed by [`VarId`]).
    pub fn satisfied_by(&self, tmpl: &Template, values: &[Element]) -> bool {
        values.len() == self.vars.len()
            && values.iter().all(|&v| v < tmpl.size())
            && self.constraints.iter().all(|c| match *c {
                Primitive::Apply { func, arg, result } => {
                    tmpl.functions()[func].apply(values[arg]) == values[result]
                }
                Primitive::Pin { var, value } => values[var] == value,
            })
    }

    /// Expands a dense solution to an assignment over the original
    /// variables (fresh variables dropped, merged variables restored).
    pub fn expand(&self, values: &[Element]) -> Assignment {
        let mut asg: Assignment = self.vars[..self.first_fresh]
            .iter()
            .zip(values)
            .map(|(n, &v)| (n.clone(), v))
            .collect();
        for (var, rep) in &self.merge {
            let id = self.var_id(rep).expect("representative is a variable");
            asg.insert(var.clone(), values[id]);
        }
        asg
    }
}
