//! Dense pure states, single-qubit operators and the two-qubit Schmidt form.

mod operator;
mod schmidt;
mod state;

pub use operator::LocalOperator;
pub use schmidt::{schmidt_decompose, SchmidtForm};
pub use state::{PureState, MAX_QUBITS};

pub(crate) use state::{apply_in_place, dot};
