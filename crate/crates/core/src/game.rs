//! Classical payoff tables and the quantum protocol: the referee distributes
//! `|Ψ⟩`, players apply local unitaries, and the referee measures in an
//! orthonormal basis whose outcome `j` pays out row `j` of the table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ortho::{joint_index, referee_projectors, OperatorAssignment};
use crate::qcore::{dot, LocalOperator, PureState};
use crate::FEASIBILITY_TOL;

const ORTHONORMAL_TOL: f64 = 1e-9;
const NEGATIVE_FLOOR: f64 = -1e-12;
const SUM_TOL: f64 = 1e-10;

/// N-player, two-strategy game; `payoffs[k]` holds every player's payoff
/// for joint strategy `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub players: usize,
    pub payoffs: Vec<Vec<f64>>,
}

impl GameSpec {
    pub fn new(players: usize, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        let spec = Self { players, payoffs };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.players == 0 || self.players > 24 {
            return Err(Error::MalformedGame(format!("{} players", self.players)));
        }
        let rows = 1usize << self.players;
        if self.payoffs.len() != rows {
            return Err(Error::MalformedGame(format!(
                "{} payoff rows, expected 2^{} = {rows}",
                self.payoffs.len(),
                self.players
            )));
        }
        for (k, row) in self.payoffs.iter().enumerate() {
            if row.len() != self.players {
                return Err(Error::MalformedGame(format!(
                    "row {k} has {} payoffs, expected {}",
                    row.len(),
                    self.players
                )));
            }
            if row.iter().any(|p| !p.is_finite()) {
                return Err(Error::MalformedGame(format!("row {k} has a non-finite payoff")));
            }
        }
        Ok(())
    }
}

/// Payoff vector of the classical game for the given choices in `{1, 2}`.
pub fn classical_payoff(spec: &GameSpec, choices: &[u8]) -> Result<Vec<f64>> {
    spec.validate()?;
    if choices.len() != spec.players {
        return Err(Error::CountMismatch {
            expected: spec.players,
            got: choices.len(),
        });
    }
    Ok(spec.payoffs[joint_index(choices)?.k()].clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayResult {
    pub distribution: Vec<f64>,
    pub expected_payoffs: Vec<f64>,
}

fn orthonormality_error(projectors: &[PureState]) -> f64 {
    let mut worst = 0.0f64;
    for (j, p) in projectors.iter().enumerate() {
        for (k, q) in projectors.iter().enumerate().skip(j) {
            let z = dot(p.amplitudes(), q.amplitudes());
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((z - num_complex::Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Outcome distribution `p_j = |⟨φ_j| (⊗ ops)|Ψ⟩|²` and expected payoffs.
pub fn play_quantum(
    state: &PureState,
    chosen_ops: &[LocalOperator],
    projectors: &[PureState],
    spec: &GameSpec,
) -> Result<PlayResult> {
    spec.validate()?;
    let n = state.n_qubits();
    if spec.players != n {
        return Err(Error::DimensionMismatch(spec.players, n));
    }
    if projectors.len() != state.dim() {
        return Err(Error::CountMismatch {
            expected: state.dim(),
            got: projectors.len(),
        });
    }
    if let Some(p) = projectors.iter().find(|p| p.n_qubits() != n) {
        return Err(Error::DimensionMismatch(p.n_qubits(), n));
    }
    let dev = orthonormality_error(projectors);
    if !(dev <= ORTHONORMAL_TOL) {
        return Err(Error::NotOrthonormal(dev));
    }
    play_validated(state, chosen_ops, projectors, spec)
}

/// [`play_quantum`] once the inputs have been checked.
fn play_validated(
    state: &PureState,
    chosen_ops: &[LocalOperator],
    projectors: &[PureState],
    spec: &GameSpec,
) -> Result<PlayResult> {
    let n = state.n_qubits();
    let out = state.apply_joint(chosen_ops)?;
    let mut distribution: Vec<f64> = projectors
        .iter()
        .map(|p| dot(p.amplitudes(), out.amplitudes()).norm_sqr())
        .collect();
    if let Some(p) = distribution.iter().find(|p| **p < NEGATIVE_FLOOR) {
        return Err(Error::InvalidDistribution(format!("probability {p:e}")));
    }
    distribution.iter_mut().for_each(|p| *p = p.max(0.0));
    let sum: f64 = distribution.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}")));
    }
    distribution.iter_mut().for_each(|p| *p /= sum);
    let expected_payoffs = (0..n)
        .map(|i| distribution.iter().zip(&spec.payoffs).map(|(p, row)| p * row[i]).sum())
        .collect();
    Ok(PlayResult {
        distribution,
        expected_payoffs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproductionReport {
    pub reproduced: bool,
    /// Worst `|p_k - 1|` over all joint strategies `k`.
    pub worst_probability_deviation: f64,
    pub worst_payoff_deviation: f64,
}

/// Plays every joint strategy with the witness operators and compares the
/// quantum payoffs to the classical table.
pub fn reproduction_check(state: &PureState, witness: &OperatorAssignment, spec: &GameSpec) -> Result<ReproductionReport> {
    let projectors = referee_projectors(state, witness, FEASIBILITY_TOL)?;
    let payoff_scale = spec
        .payoffs
        .iter()
        .flatten()
        .fold(1.0f64, |s, p| s.max(p.abs()));
    let mut worst_p = 0.0f64;
    let mut worst_pay = 0.0f64;
    // validates the inputs and projectors once, for row 0
    let first = play_quantum(state, &witness.select(0), &projectors, spec)?;
    for k in 0..state.dim() {
        let result = match k {
            0 => first.clone(),
            _ => play_validated(state, &witness.select(k), &projectors, spec)?,
        };
        worst_p = worst_p.max((result.distribution[k] - 1.0).abs());
        for (q, c) in result.expected_payoffs.iter().zip(&spec.payoffs[k]) {
            worst_pay = worst_pay.max((q - c).abs());
        }
    }
    let reproduced = worst_p <= FEASIBILITY_TOL && worst_pay <= 2.0 * FEASIBILITY_TOL * payoff_scale;
    Ok(ReproductionReport {
        reproduced,
        worst_probability_deviation: worst_p,
        worst_payoff_deviation: worst_pay,
    })
}
