#![allow(dead_code)]

use largen::analysis::Solution;
use largen::{
    parse_potential, solve, BigReal, MassConvention, PrecisionContext, ProblemSpec, State,
};

pub const DIGITS: u32 = 100;

pub fn ctx() -> PrecisionContext {
    PrecisionContext::new(DIGITS).unwrap()
}

pub fn spec(potential: &str, l: u32, state: u8, mass: MassConvention, order: usize) -> ProblemSpec {
    ProblemSpec::new(
        parse_potential(potential).unwrap(),
        3,
        l,
        State::from_index(state).unwrap(),
        mass,
        order,
        ctx(),
    )
    .unwrap()
}

pub fn run(potential: &str, l: u32, state: u8, mass: MassConvention, order: usize) -> Solution {
    solve(&spec(potential, l, state, mass, order)).unwrap()
}

pub fn num(text: &str) -> BigReal {
    ctx().parse(text).unwrap()
}

/// Asserts |actual - expected| ≤ tol with a readable message.
pub fn assert_close(actual: &BigReal, expected: &str, tol: &str, what: &str) {
    let diff = (actual - &num(expected)).abs();
    assert!(
        diff <= num(tol),
        "{what}: got {}, expected {expected} ± {tol} (off by {})",
        actual.to_sci_string(15),
        diff.to_sci_string(3)
    );
}

/// Every potential used in the ground-state tables, with its mass convention.
pub const TABLE_POTENTIALS: &[(&str, MassConvention)] = &[
    ("-1/r", MassConvention::M1),
    ("r^2", MassConvention::TwoM1),
    ("r^2 + 0.1*r^2/(1 + 0.1*r^2)", MassConvention::TwoM1),
    ("r^2 - 0.0406*r^2/(1 + 0.01*r^2)", MassConvention::TwoM1),
    ("-2^1.7*r^(-0.2)", MassConvention::M1),
    ("-2^0.8*r^(-0.8)", MassConvention::M1),
    ("0.5*r^2", MassConvention::M1),
    ("2^3.5*r", MassConvention::M1),
    ("-r^(-1.5)", MassConvention::TwoM1),
    ("-r^(-1.25)", MassConvention::TwoM1),
    ("r^0.15", MassConvention::TwoM1),
    ("r^0.5", MassConvention::TwoM1),
    ("r^0.75", MassConvention::TwoM1),
    ("r^1.5", MassConvention::TwoM1),
    ("r^3", MassConvention::TwoM1),
    ("r^4", MassConvention::TwoM1),
    ("r^5", MassConvention::TwoM1),
    ("ln(r)", MassConvention::TwoM1),
];
