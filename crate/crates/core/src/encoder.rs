//! Boolean encoding of normalized instances through the H-matrix.
//!
//! Every instance variable `x` gets one Boolean variable per matrix column,
//! `y[x, i]`, and the tuple `y[x, ..]` must be a row of the matrix. A
//! variable `z` that occurs as the result of some `f_i(x) = z` also gets a
//! value bit `v[z]`, linked by `v[z] = y[x, i]`; since `z` then holds a
//! value in `{0, 1}`, its own row must be `row(v[z])`, expressed by the
//! two-tuple relation `B = {(0, row(0)), (1, row(1))}`.
//!
//! Rows determine all function values, so a Boolean solution maps back to
//! a domain solution by picking any label with the assigned row. Pins fix
//! the row and are restored verbatim when lifting. A variable pinned to an
//! element outside `{0, 1}` cannot be a function value; that conflict is
//! detected up front.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{HMatrix, Row};
use crate::model::{Element, NormalizedInstance, Primitive, VarId};

/// Index of a Boolean variable.
pub type BoolVar = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("pin `{var} := {value}` names an element outside the core domain 0..{size}")]
    PinOutsideCore {
        var: String,
        value: Element,
        size: usize,
    },
    #[error("matrix has {0} row(s); a Boolean encoding needs rows for 0 and 1")]
    DegenerateMatrix(usize),
    #[error("Boolean assignment does not satisfy the system: {0}")]
    NotASolution(String),
}

/// The relations a [`BooleanSystem`] is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    /// Distinct rows of the H-matrix.
    Rows,
    /// `{00, 11}`.
    Equality,
    /// `{(0, row(0)), (1, row(1))}`.
    BoolRow,
    Unit0,
    Unit1,
}

impl RelationId {
    pub const ALL: [RelationId; 5] = [
        RelationId::Rows,
        RelationId::Equality,
        RelationId::BoolRow,
        RelationId::Unit0,
        RelationId::Unit1,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolConstraint {
    /// `y[x, ..]` is a row of the matrix.
    RowMembership(VarId),
    /// `v[result] = y[arg, column]`.
    ValueLink {
        arg: VarId,
        result: VarId,
        column: usize,
    },
    /// `(v[z], y[z, ..])` lies in `B`.
    BoolRow(VarId),
    Unit { var: BoolVar, value: bool },
}

/// Correspondence between instance variables and Boolean variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    width: usize,
    pins: Vec<Option<Element>>,
    value_var: Vec<Option<BoolVar>>,
    num_bool_vars: usize,
}

impl VarMap {
    pub fn num_instance_vars(&self) -> usize {
        self.pins.len()
    }

    pub fn num_bool_vars(&self) -> usize {
        self.num_bool_vars
    }

    pub fn row_var(&self, x: VarId, column: usize) -> BoolVar {
        x * self.width + column
    }

    pub fn row_vars(&self, x: VarId) -> std::ops::Range<BoolVar> {
        x * self.width..(x + 1) * self.width
    }

    /// `v[x]`, present iff `x` is the result of some application.
    pub fn value_var(&self, x: VarId) -> Option<BoolVar> {
        self.value_var[x]
    }

    pub fn pin(&self, x: VarId) -> Option<Element> {
        self.pins[x]
    }
}

/// A constraint instantiated on concrete Boolean variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scoped {
    pub relation: RelationId,
    pub scope: Vec<BoolVar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanSystem {
    map: VarMap,
    columns: Vec<String>,
    relations: [Vec<Row>; 5],
    constraints: Vec<BoolConstraint>,
}

/// Result of [`encode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoding {
    System(Box<BooleanSystem>, VarMap),
    /// A variable pinned outside `{0, 1}` is also a function value.
    TriviallyUnsat { var: String, value: Element },
}

/// Builds the Boolean system of `inst` over the matrix `m` of the same
/// (core) template.
pub fn encode(inst: &NormalizedInstance, m: &HMatrix) -> Result<Encoding, EncodeError> {
    if m.len() < 2 {
        return Err(EncodeError::DegenerateMatrix(m.len()));
    }
    let pins = inst.pins();
    for (x, pin) in pins.iter().enumerate() {
        if let Some(d) = *pin {
            if d >= m.len() {
                return Err(EncodeError::PinOutsideCore {
                    var: inst.var_name(x).to_string(),
                    value: d,
                    size: m.len(),
                });
            }
        }
    }

    let n = inst.num_vars();
    let width = m.width();
    let mut value_var = vec![None; n];
    let mut next = n * width;
    for c in inst.constraints() {
        if let Primitive::Apply { result, .. } = *c {
            if value_var[result].is_none() {
                if let Some(d) = pins[result] {
                    if d > 1 {
                        return Ok(Encoding::TriviallyUnsat {
                            var: inst.var_name(result).to_string(),
                            value: d,
                        });
                    }
                }
                value_var[result] = Some(next);
                next += 1;
            }
        }
    }
    let map = VarMap {
        width,
        pins,
        value_var,
        num_bool_vars: next,
    };

    let mut constraints: Vec<BoolConstraint> = (0..n).map(BoolConstraint::RowMembership).collect();
    let mut has_bool_row = vec![false; n];
    for c in inst.constraints() {
        match *c {
            Primitive::Apply { func, arg, result } => {
                constraints.push(BoolConstraint::ValueLink {
                    arg,
                    result,
                    column: func,
                });
                if !has_bool_row[result] {
                    has_bool_row[result] = true;
                    constraints.push(BoolConstraint::BoolRow(result));
                }
            }
            Primitive::Pin { var, value } => {
                for (i, &bit) in m.row(value).iter().enumerate() {
                    constraints.push(BoolConstraint::Unit {
                        var: map.row_var(var, i),
                        value: bit,
                    });
                }
                if let Some(v) = map.value_var(var) {
                    constraints.push(BoolConstraint::Unit {
                        var: v,
                        value: value == 1,
                    });
                }
            }
        }
    }

    let with_value = |bit: bool, row: &[bool]| {
        let mut t = vec![bit];
        t.extend_from_slice(row);
        t
    };
    let relations = [
        m.distinct_rows(),
        vec![vec![false, false], vec![true, true]],
        vec![with_value(false, m.row(0)), with_value(true, m.row(1))],
        vec![vec![false]],
        vec![vec![true]],
    ];
    let sys = BooleanSystem {
        map: map.clone(),
        columns: m.columns().to_vec(),
        relations,
        constraints,
    };
    Ok(Encoding::System(Box::new(sys), map))
}

impl BooleanSystem {
    pub fn num_vars(&self) -> usize {
        self.map.num_bool_vars
    }

    pub fn constraints(&self) -> &[BoolConstraint] {
        &self.constraints
    }

    pub fn var_map(&self) -> &VarMap {
        &self.map
    }

    pub fn relation(&self, id: RelationId) -> &[Row] {
        &self.relations[id.index()]
    }

    pub fn scope(&self, c: &BoolConstraint) -> Scoped {
        let m = &self.map;
        match *c {
            BoolConstraint::RowMembership(x) => Scoped {
                relation: RelationId::Rows,
                scope: m.row_vars(x).collect(),
            },
            BoolConstraint::ValueLink {
                arg,
                result,
                column,
            } => Scoped {
                relation: RelationId::Equality,
                scope: vec![
                    m.value_var(result).expect("results carry a value bit"),
                    m.row_var(arg, column),
                ],
            },
            BoolConstraint::BoolRow(z) => {
                let mut scope = vec![m.value_var(z).expect("results carry a value bit")];
                scope.extend(m.row_vars(z));
                Scoped {
                    relation: RelationId::BoolRow,
                    scope,
                }
            }
            BoolConstraint::Unit { var, value } => Scoped {
                relation: if value { RelationId::Unit1 } else { RelationId::Unit0 },
                scope: vec![var],
            },
        }
    }

    /// Every constraint with its relation and scope, in insertion order.
    pub fn scoped(&self) -> Vec<Scoped> {
        self.constraints.iter().map(|c| self.scope(c)).collect()
    }

    /// Index of the first violated constraint, if any.
    pub fn first_violation(&self, asg: &[bool]) -> Option<usize> {
        assert_eq!(asg.len(), self.num_vars(), "assignment length");
        self.constraints.iter().position(|c| {
            let s = self.scope(c);
            let tuple: Row = s.scope.iter().map(|&v| asg[v]).collect();
            !self.relation(s.relation).contains(&tuple)
        })
    }

    pub fn is_satisfied_by(&self, asg: &[bool]) -> bool {
        self.first_violation(asg).is_none()
    }

    fn var_label(&self, v: BoolVar) -> String {
        let m = &self.map;
        if v < m.num_instance_vars() * m.width {
            format!("y[{},{}]", v / m.width, self.columns[v % m.width])
        } else {
            let x = m
                .value_var
                .iter()
                .position(|&o| o == Some(v))
                .expect("value bit");
            format!("v[{x}]")
        }
    }

    /// A DIMACS-like listing: a `p` header, `c` lines naming variables,
    /// then one constraint per line with 1-based variable numbers.
    pub fn dump(&self) -> String {
        let mut out = format!("p cobool {} {}\n", self.num_vars(), self.constraints.len());
        for v in 0..self.num_vars() {
            let _ = writeln!(out, "c {} {}", v + 1, self.var_label(v));
        }
        let vars = |s: &[BoolVar]| s.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ");
        for c in &self.constraints {
            let s = self.scope(c);
            let _ = match *c {
                BoolConstraint::RowMembership(x) => writeln!(out, "row {x} : {}", vars(&s.scope)),
                BoolConstraint::ValueLink { arg, result, column } => {
                    writeln!(out, "link {arg} {result} {} : {}", self.columns[column], vars(&s.scope))
                }
                BoolConstraint::BoolRow(z) => writeln!(out, "boolrow {z} : {}", vars(&s.scope)),
                BoolConstraint::Unit { var, value } => {
                    writeln!(out, "unit {} {}", var + 1, u8::from(value))
                }
            };
        }
        out
    }
}

/// Maps a satisfying Boolean assignment back to domain values, one per
/// normalized variable.
///
/// Pinned variables take their pin, function results take their value
/// bit, every other variable takes the least label with its assigned row.
pub fn lift(ba: &[bool], vm: &VarMap, m: &HMatrix) -> Result<Vec<Element>, EncodeError> {
    if ba.len() != vm.num_bool_vars {
        return Err(EncodeError::NotASolution(format!(
            "expected {} variables, got {}",
            vm.num_bool_vars,
            ba.len()
        )));
    }
    (0..vm.num_instance_vars())
        .map(|x| {
            let row = &ba[vm.row_vars(x)];
            let value = if let Some(d) = vm.pin(x) {
                d
            } else if let Some(v) = vm.value_var(x) {
                Element::from(ba[v])
            } else {
                m.row_index(row).ok_or_else(|| {
                    EncodeError::NotASolution(format!("variable {x} has a row outside the matrix"))
                })?
            };
            if m.row(value) != row {
                return Err(EncodeError::NotASolution(format!(
                    "variable {x} takes {value} but its row does not match"
                )));
            }
            Ok(value)
        })
        .collect()
}
