use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LocalOperator;
use crate::error::{Error, Result};
use crate::NORM_TOL;

/// Largest register we will allocate a dense vector for.
pub const MAX_QUBITS: usize = 24;

/// Dense N-qubit pure state.
///
/// Player `i` (1-based) owns bit `i - 1` of the basis index, so the basis
/// state with bits `b_1 … b_N` lives at index `Σ b_i·2^{i-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    Ok(1usize << n_qubits)
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

impl PureState {
    /// Builds a state from amplitudes whose norm is within `1e-6` of one,
    /// renormalizing the result.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = Self::validated_norm(n_qubits, &amplitudes)?;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(Self::rescaled(n_qubits, amplitudes, norm))
    }

    /// Builds a state from any nonzero amplitude vector, rescaling it to unit norm.
    pub fn normalize(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = Self::validated_norm(n_qubits, &amplitudes)?;
        Ok(Self::rescaled(n_qubits, amplitudes, norm))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    fn validated_norm(n_qubits: usize, amplitudes: &[Complex64]) -> Result<f64> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::LengthMismatch {
                n_qubits,
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm = norm_sqr(amplitudes).sqrt();
        if !norm.is_finite() {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(norm)
    }

    fn rescaled(n_qubits: usize, mut amplitudes: Vec<Complex64>, norm: f64) -> Self {
        let inv = 1.0 / norm;
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        Self { n_qubits, amplitudes }
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// Applies `op` to the qubit of `player` (1-based), identity elsewhere.
    pub fn apply_local(&self, player: usize, op: &LocalOperator) -> Result<Self> {
        if player == 0 || player > self.n_qubits {
            return Err(Error::PlayerOutOfRange {
                player,
                n_qubits: self.n_qubits,
            });
        }
        let mut out = self.clone();
        apply_in_place(&mut out.amplitudes, player - 1, op);
        Ok(out)
    }

    /// Applies `ops[i]` to the qubit of player `i + 1` for every player.
    pub fn apply_joint(&self, ops: &[LocalOperator]) -> Result<Self> {
        if ops.len() != self.n_qubits {
            return Err(Error::CountMismatch {
                expected: self.n_qubits,
                got: ops.len(),
            });
        }
        let mut out = self.clone();
        for (bit, op) in ops.iter().enumerate() {
            apply_in_place(&mut out.amplitudes, bit, op);
        }
        Ok(out)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }
}

/// `Σ conj(a_i)·b_i`.
#[inline]
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

/// Applies a single-qubit operator to bit `bit` of a dense amplitude vector.
#[inline]
pub(crate) fn apply_in_place(amps: &mut [Complex64], bit: usize, op: &LocalOperator) {
    let stride = 1usize << bit;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for lo in base..base + stride {
            let hi = lo + stride;
            let (a0, a1) = op.apply(amps[lo], amps[hi]);
            amps[lo] = a0;
            amps[hi] = a1;
        }
        base += stride << 1;
    }
}
