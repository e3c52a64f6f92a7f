//! Seeded random templates and instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{CoBooleanFunction, Constraint, Element, Instance, ModelError, Template};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("domain size must be at least 2, got {0}")]
    DomainTooSmall(usize),
    #[error("at least one function is required")]
    NoFunctions,
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("pin probability {0} is outside [0, 1]")]
    PinProbability(f64),
    #[error("empty pin set")]
    EmptyPinSet,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Probability that a non-pin constraint is an equality.
const EQUAL_PROBABILITY: f64 = 0.1;

/// `k` functions `f1..fk` on `0..n` with uniformly random tables.
pub fn random_template(seed: u64, n: usize, k: usize) -> Result<Template, GenError> {
    if n < 2 {
        return Err(GenError::DomainTooSmall(n));
    }
    if k == 0 {
        return Err(GenError::NoFunctions);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let functions = (1..=k)
        .map(|i| {
            let table = (0..n).map(|_| u8::from(rng.gen::<bool>())).collect();
            CoBooleanFunction::new(format!("f{i}"), table)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Template::new(n, functions)?)
}

/// Parameters of [`random_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParams<'a> {
    pub vars: usize,
    pub constraints: usize,
    pub pin_probability: f64,
    /// Elements pins may name; every domain element when `None`.
    pub pin_elements: Option<&'a [Element]>,
}

/// Variables are named `x0..x{vars-1}`. Each constraint is a pin with the
/// given probability, otherwise an equality (one in ten) or an application
/// of a uniform function to a uniform pair of variables.
pub fn random_instance(seed: u64, tmpl: &Template, p: &InstanceParams) -> Result<Instance, GenError> {
    if p.vars == 0 {
        return Err(GenError::ZeroCount("variable count"));
    }
    if p.constraints == 0 {
        return Err(GenError::ZeroCount("constraint count"));
    }
    if !(0.0..=1.0).contains(&p.pin_probability) {
        return Err(GenError::PinProbability(p.pin_probability));
    }
    if p.pin_elements.is_some_and(<[Element]>::is_empty) {
        return Err(GenError::EmptyPinSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..p.vars).map(|i| format!("x{i}")).collect();
    let constraints = (0..p.constraints)
        .map(|_| {
            let a = &names[rng.gen_range(0..p.vars)];
            if rng.gen_bool(p.pin_probability) {
                let value = match p.pin_elements {
                    Some(set) => set[rng.gen_range(0..set.len())],
                    None => rng.gen_range(0..tmpl.size()),
                };
                return Constraint::pin(a, value);
            }
            let b = &names[rng.gen_range(0..p.vars)];
            if rng.gen_bool(EQUAL_PROBABILITY) {
                Constraint::equal(a, b)
            } else {
                let f = &tmpl.functions()[rng.gen_range(0..tmpl.functions().len())];
                Constraint::apply(f.name(), a, b)
            }
        })
        .collect();
    Ok(Instance::new(constraints).expect("at least one constraint"))
}
