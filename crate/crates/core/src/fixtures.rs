//! The six reference templates shipped in `fixtures/`.

use crate::model::{parse_template, Template};

pub const NOT: &str = include_str!("../../../fixtures/fix_not.cbt");
pub const ONE_IN_THREE: &str = include_str!("../../../fixtures/fix_1in3.cbt");
pub const AFFINE: &str = include_str!("../../../fixtures/fix_affine.cbt");
pub const HORN: &str = include_str!("../../../fixtures/fix_horn.cbt");
pub const NONORD: &str = include_str!("../../../fixtures/fix_nonord.cbt");
pub const COLLAPSE: &str = include_str!("../../../fixtures/fix_collapse.cbt");

/// `(file stem, source)` for every fixture.
pub const ALL: [(&str, &str); 6] = [
    ("fix_not", NOT),
    ("fix_1in3", ONE_IN_THREE),
    ("fix_affine", AFFINE),
    ("fix_horn", HORN),
    ("fix_nonord", NONORD),
    ("fix_collapse", COLLAPSE),
];

fn load(src: &str) -> Template {
    parse_template(src).expect("fixture parses")
}

pub fn not() -> Template {
    load(NOT)
}

pub fn one_in_three() -> Template {
    load(ONE_IN_THREE)
}

pub fn affine() -> Template {
    load(AFFINE)
}

pub fn horn() -> Template {
    load(HORN)
}

pub fn nonord() -> Template {
    load(NONORD)
}

pub fn collapse() -> Template {
    load(COLLAPSE)
}

pub fn all() -> Vec<(&'static str, Template)> {
    ALL.iter().map(|(name, src)| (*name, load(src))).collect()
}
