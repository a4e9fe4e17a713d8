//! Decides whether an entangled N-qubit state can reproduce a classical
//! two-strategy game when every player is restricted to two local unitaries,
//! and simulates the resulting quantum game.
//!
//! Conventions used throughout:
//! * players are numbered from 1, and player `i` owns bit `i - 1` of a basis index;
//! * joint strategies are indexed from 0 with `k = Σ (l_i - 1)·2^{i-1}`;
//! * complex numbers serialize as `[re, im]`, matrices row-major.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod game;
pub mod oracle;
pub mod ortho;
pub mod qcore;
pub mod search;
pub mod states;

pub use error::{Error, Result};
pub use qcore::{LocalOperator, PureState, SchmidtForm};

/// Unitarity tolerance for operators.
pub const UNITARY_TOL: f64 = 1e-12;
/// Largest norm drift accepted (and silently corrected) when building a state.
pub const NORM_TOL: f64 = 1e-6;
/// Default tolerance on off-diagonal overlaps for feasibility decisions.
pub const FEASIBILITY_TOL: f64 = 1e-9;
