//! Constructors for Dicke, W and GHZ-like states, seeded random states, and
//! transport of witnesses along local-unitary equivalences.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ortho::OperatorAssignment;
use crate::qcore::{PureState, MAX_QUBITS};

/// A named family of states, or an explicit one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateFamily {
    /// `|N-m, m⟩/√C(N,m)`.
    Dicke { n: usize, m: usize },
    /// `(|0…0⟩ + e^{i·phase}|1…1⟩)/√2`.
    Ghz { n: usize, phase: f64 },
    /// `Dicke(N, 1)`, defined for N ≥ 3.
    W { n: usize },
    /// Any two-qubit pure state.
    TwoQubit { state: PureState },
    /// A state outside the analytic families.
    Custom {
        state: PureState,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<String>,
    },
}

impl StateFamily {
    /// Two-qubit state already in Schmidt form `alpha|00⟩ + beta|11⟩`.
    pub fn two_qubit_schmidt(alpha: f64, beta: f64) -> Result<Self> {
        let z = Complex64::new(0.0, 0.0);
        let state = PureState::new(2, vec![Complex64::new(alpha, 0.0), z, z, Complex64::new(beta, 0.0)])?;
        Ok(Self::TwoQubit { state })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Self::Dicke { n, .. } | Self::Ghz { n, .. } | Self::W { n } => *n,
            Self::TwoQubit { .. } => 2,
            Self::Custom { state, .. } => state.n_qubits(),
        }
    }

    pub fn prepare(&self) -> Result<PureState> {
        match self {
            Self::Dicke { n, m } => dicke(*n, *m),
            Self::Ghz { n, phase } => ghz(*n, *phase),
            Self::W { n } => w_state(*n),
            Self::TwoQubit { state } => {
                if state.n_qubits() != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "two-qubit family holds a {}-qubit state",
                        state.n_qubits()
                    )));
                }
                Ok(state.clone())
            }
            Self::Custom { state, .. } => Ok(state.clone()),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke state with `m` excitations: amplitude `1/√C(N,m)` on every basis
/// index of Hamming weight `m`.
pub fn dicke(n: usize, m: usize) -> Result<PureState> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!("Dicke excitation count {m} > N = {n}")));
    }
    let amp = Complex64::new(1.0 / binomial(n, m).sqrt(), 0.0);
    let amps = (0..1usize << n)
        .map(|b| {
            if b.count_ones() as usize == m {
                amp
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(PureState::from_raw(n, amps))
}

/// W state `|N-1, 1⟩/√N`, N ≥ 3. The two-qubit case is the Bell state `dicke(2, 1)`.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("W state needs N >= 3, got {n}")));
    }
    dicke(n, 1)
}

/// GHZ-like state `(|0…0⟩ + e^{i·phase}|1…1⟩)/√2`, N ≥ 2.
pub fn ghz(n: usize, phase: f64) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ state needs N >= 2, got {n}")));
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    let dim = 1usize << n;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(h, 0.0);
    amps[dim - 1] = Complex64::from_polar(h, phase);
    Ok(PureState::from_raw(n, amps))
}

/// Seeded state drawn from the unitarily invariant (Haar) measure: i.i.d.
/// complex Gaussian amplitudes, normalized.
pub fn random_state(n_qubits: usize, seed: u64) -> Result<PureState> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalize(n_qubits, amps)
}

/// Moves a witness for `|Ψ⟩` to one for `(⊗ w_i)|Ψ⟩`: each pair becomes
/// `(u_i w_i†, v_i w_i†)`, canonicalized to determinant 1.
pub fn transport_witness(
    witness: &OperatorAssignment,
    rotations: &[crate::LocalOperator],
) -> Result<OperatorAssignment> {
    if rotations.len() != witness.n_players() {
        return Err(Error::CountMismatch {
            expected: witness.n_players(),
            got: rotations.len(),
        });
    }
    let pairs = witness
        .pairs()
        .iter()
        .zip(rotations)
        .map(|((u, v), w)| {
            let back = w.adjoint();
            Ok(((*u * back).canonicalize()?, (*v * back).canonicalize()?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorAssignment::new(pairs))
}
