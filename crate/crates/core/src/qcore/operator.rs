use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::UNITARY_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entries below this magnitude are skipped when picking the phase branch
/// of the canonical special-unitary form.
const CANONICAL_ZERO: f64 = 1e-12;

/// A single-qubit unitary, stored as a general 2x2 matrix `[[a, b], [c, d]]`.
///
/// Determinant -1 operators such as the Pauli matrices are kept as-is; the
/// special-unitary representative is available through [`LocalOperator::canonicalize`].
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[Complex64; 2]; 2]", into = "[[Complex64; 2]; 2]")]
pub struct LocalOperator {
    m: [[Complex64; 2]; 2],
}

impl LocalOperator {
    /// Builds an operator, rejecting matrices that are not unitary within `UNITARY_TOL`.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::with_tolerance(entries, UNITARY_TOL)
    }

    pub fn with_tolerance(entries: [[Complex64; 2]; 2], tol: f64) -> Result<Self> {
        let op = Self { m: entries };
        let dev = op.unitarity_error();
        if !(dev <= tol) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(op)
    }

    pub(crate) const fn from_entries_unchecked(entries: [[Complex64; 2]; 2]) -> Self {
        Self { m: entries }
    }

    pub const fn identity() -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn pauli_x() -> Self {
        Self::from_entries_unchecked([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn pauli_y() -> Self {
        Self::from_entries_unchecked([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn pauli_z() -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]])
    }

    /// `iσ_y = [[0, 1], [-1, 0]]`, the second classical strategy of the Eisert scheme.
    pub const fn i_sigma_y() -> Self {
        Self::from_entries_unchecked([[ZERO, ONE], [Complex64::new(-1.0, 0.0), ZERO]])
    }

    /// `diag(1, e^{iδ})`.
    pub fn phase_gate(delta: f64) -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, delta)]])
    }

    /// Special-unitary parametrization
    /// `[[cosθ e^{iμ}, sinθ e^{iν}], [-sinθ e^{-iν}, cosθ e^{-iμ}]]`.
    pub fn su2(theta: f64, mu: f64, nu: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_entries_unchecked([
            [Complex64::from_polar(c, mu), Complex64::from_polar(s, nu)],
            [-Complex64::from_polar(s, -nu), Complex64::from_polar(c, -mu)],
        ])
    }

    /// Hermitian trace-free reflection
    /// `[[cosθ, e^{iφ} sinθ], [e^{-iφ} sinθ, -cosθ]]` (determinant -1).
    pub fn reflection(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_entries_unchecked([
            [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)],
            [Complex64::from_polar(s, -phi), Complex64::new(-c, 0.0)],
        ])
    }

    /// Anti-diagonal reflection `[[0, e^{iφ}], [e^{-iφ}, 0]]`.
    pub fn anti_diagonal(phi: f64) -> Self {
        Self::reflection(std::f64::consts::FRAC_PI_2, phi)
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::from_entries_unchecked([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let m = &self.m;
        Self::from_entries_unchecked([[z * m[0][0], z * m[0][1]], [z * m[1][0], z * m[1][1]]])
    }

    /// Max-entry deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                let d = (p.m[r][c] - target).norm();
                if d.is_nan() {
                    return f64::INFINITY;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max-entry distance between two operators.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    /// Returns `e^{iγ}·U` with determinant 1.
    ///
    /// Of the two branches `γ` and `γ + π`, the one whose first entry (in
    /// reading order) above `1e-12` in magnitude has argument in `(-π/2, π/2]`
    /// is returned.
    pub fn canonicalize(&self) -> Result<Self> {
        let dev = self.unitarity_error();
        if !(dev <= UNITARY_TOL) {
            return Err(Error::NotUnitary(dev));
        }
        let half = Complex64::from_polar(1.0, -0.5 * self.determinant().arg());
        let v = self.scale(half);
        let lead = v.m.iter().flatten().find(|z| z.norm() > CANONICAL_ZERO);
        match lead {
            Some(z) if !(z.arg() > -std::f64::consts::FRAC_PI_2 && z.arg() <= std::f64::consts::FRAC_PI_2) => {
                Ok(v.scale(-ONE))
            }
            _ => Ok(v),
        }
    }

    /// Applies the operator to a single-qubit amplitude pair.
    #[inline]
    pub fn apply(&self, a0: Complex64, a1: Complex64) -> (Complex64, Complex64) {
        (
            self.m[0][0] * a0 + self.m[0][1] * a1,
            self.m[1][0] * a0 + self.m[1][1] * a1,
        )
    }
}

impl Mul for LocalOperator {
    type Output = LocalOperator;

    fn mul(self, rhs: LocalOperator) -> LocalOperator {
        let (a, b) = (&self.m, &rhs.m);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        LocalOperator::from_entries_unchecked(out)
    }
}

impl Default for LocalOperator {
    fn default() -> Self {
        Self::identity()
    }
}

impl TryFrom<[[Complex64; 2]; 2]> for LocalOperator {
    type Error = Error;

    fn try_from(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<LocalOperator> for [[Complex64; 2]; 2] {
    fn from(op: LocalOperator) -> Self {
        op.m
    }
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}
