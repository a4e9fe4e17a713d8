#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qgame::LocalOperator;

/// General 2x2 unitary: a global phase times an SU(2) element.
pub fn unitary() -> impl Strategy<Value = LocalOperator> {
    (0.0..PI, -PI..PI, -PI..PI, -PI..PI)
        .prop_map(|(t, m, n, g)| LocalOperator::su2(t, m, n).scale(Complex64::from_polar(1.0, g)))
}

pub fn pairs(n: usize) -> impl Strategy<Value = Vec<(LocalOperator, LocalOperator)>> {
    proptest::collection::vec((unitary(), unitary()), n)
}
