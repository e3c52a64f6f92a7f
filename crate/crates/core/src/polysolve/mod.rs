//! Polynomial-time engines for Boolean systems closed under a classified
//! operation.

mod affine;
mod semilattice;
mod twosat;

pub use affine::{affine_hull, solve_affine, AffineHull, HullError, LinearSystemGF2};
pub use semilattice::{gac, solve_semilattice, CandidateSets, Direction};
pub use twosat::{solve_majority, ImplicationGraph, Lit};

use thiserror::Error;

use crate::classifier::TractabilityReason;
use crate::encoder::BooleanSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Solves `sys` with the engine licensed by `reason`. `Ok(None)` is UNSAT.
pub fn solve_tractable(
    sys: &BooleanSystem,
    reason: TractabilityReason,
) -> Result<Option<Vec<bool>>, SolveError> {
    match reason {
        TractabilityReason::MajorityClosed => solve_majority(sys),
        TractabilityReason::MinorityClosed => solve_affine(sys),
        TractabilityReason::MeetClosedOrdered => solve_semilattice(sys, Direction::Min),
        TractabilityReason::JoinClosedOrdered => solve_semilattice(sys, Direction::Max),
        TractabilityReason::DegenerateCore => Err(SolveError::Contract(
            "a degenerate core has no Boolean encoding".into(),
        )),
    }
}

/// Final re-check shared by all engines.
fn verified(sys: &BooleanSystem, asg: Vec<bool>, engine: &str) -> Result<Option<Vec<bool>>, SolveError> {
    match sys.first_violation(&asg) {
        None => Ok(Some(asg)),
        Some(i) => Err(SolveError::Internal(format!(
            "{engine} produced an assignment violating constraint {i} ({:?})",
            sys.constraints()[i]
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_h_matrix;
    use crate::classifier::classify;
    use crate::encoder::{encode, lift, Encoding};
    use crate::fixtures;
    use crate::model::{normalize_instance, parse_instance, Element, Template};

    fn solve(t: &Template, src: &str) -> Option<Vec<Element>> {
        let n = normalize_instance(&parse_instance(src).unwrap(), t)
            .unwrap()
            .ready()
            .unwrap();
        let m = build_h_matrix(t);
        let reason = classify(t).verdict.reason().unwrap();
        match encode(&n, &m).unwrap() {
            Encoding::System(sys, vm) => solve_tractable(&sys, reason)
                .unwrap()
                .map(|ba| lift(&ba, &vm, &m).unwrap()),
            Encoding::TriviallyUnsat { .. } => None,
        }
    }

    #[test]
    fn horn_application_takes_least_rows() {
        assert_eq!(solve(&fixtures::horn(), "f1(x) = y"), Some(vec![2, 0]));
    }

    #[test]
    fn horn_equal_columns() {
        assert_eq!(solve(&fixtures::horn(), "f1(x) = y\nf2(x) = y"), Some(vec![2, 0]));
    }

    #[test]
    fn affine_equal_columns_is_sat() {
        let t = fixtures::affine();
        let v = solve(&t, "f2(x) = y\nf3(x) = y").unwrap();
        let (f2, f3) = (t.function("f2").unwrap(), t.function("f3").unwrap());
        assert_eq!(f2.apply(v[0]), v[1]);
        assert_eq!(f3.apply(v[0]), v[1]);
    }

    #[test]
    fn not_chain() {
        let v = solve(&fixtures::not(), "neg(x) = y\nneg(y) = z").unwrap();
        assert_eq!(v[1], 1 - v[0]);
        assert_eq!(v[2], v[0]);
        assert_eq!(solve(&fixtures::not(), "neg(x) = x"), None);
    }

    #[test]
    fn contradictory_units_on_every_engine() {
        let cases = [
            (fixtures::not(), "neg(x) = y\nx := 0\ny := 0"),
            (fixtures::affine(), "f1(x) = y\nx := 1\ny := 0"),
            (fixtures::horn(), "f1(x) = y\nx := 4\ny := 0"),
        ];
        for (t, src) in cases {
            assert_eq!(solve(&t, src), None, "{src}");
        }
    }

    #[test]
    fn degenerate_reason_is_rejected() {
        let t = fixtures::not();
        let n = normalize_instance(&parse_instance("neg(x) = y").unwrap(), &t)
            .unwrap()
            .ready()
            .unwrap();
        let Encoding::System(sys, _) = encode(&n, &build_h_matrix(&t)).unwrap() else {
            panic!()
        };
        assert!(matches!(
            solve_tractable(&sys, TractabilityReason::DegenerateCore),
            Err(SolveError::Contract(_))
        ));
    }
}
