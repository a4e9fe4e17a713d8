use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LocalOperator, PureState};
use crate::error::{Error, Result};

/// `alpha|00⟩ + beta|11⟩` together with the local rotations that produce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtForm {
    pub alpha: f64,
    pub beta: f64,
    /// `(R_1, R_2)` with `(R_1 ⊗ R_2)|ψ⟩ = alpha|00⟩ + beta|11⟩`.
    pub local_rotations: (LocalOperator, LocalOperator),
}

type Vec2 = [Complex64; 2];

fn normalize2(v: Vec2) -> Vec2 {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Rotates `v` so its leading nonzero entry is positive real.
fn fix_phase(v: Vec2) -> Vec2 {
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let ph = Complex64::from_polar(1.0, -lead.arg());
    [v[0] * ph, v[1] * ph]
}

/// Unit vector orthogonal to `v`, chosen so `[v | w]` has determinant 1.
fn complement(v: Vec2) -> Vec2 {
    [-v[1].conj(), v[0].conj()]
}

/// Eigenvector of the 2x2 Hermitian matrix `[[a, b], [b*, d]]` for its larger eigenvalue.
fn top_eigvec(a: f64, b: Complex64, d: f64) -> (f64, Vec2) {
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let lambda = mean + (half_gap * half_gap + b.norm_sqr()).sqrt();
    // Two candidate null vectors of (H - λ); keep the better-conditioned one.
    let c1 = [b, Complex64::new(lambda - a, 0.0)];
    let c2 = [Complex64::new(lambda - d, 0.0), b.conj()];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let v = if n1.max(n2) <= 1e-300 {
        // H is a multiple of the identity
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    } else if n1 >= n2 {
        normalize2(c1)
    } else {
        normalize2(c2)
    };
    (lambda, fix_phase(v))
}

/// Schmidt decomposition of a two-qubit state.
///
/// With the amplitude matrix `A[b1][b2]` (player 1 indexes rows), `A = U S V†`
/// and the returned rotations are `R_1 = U†`, `R_2 = Vᵀ`.
pub fn schmidt_decompose(state: &PureState) -> Result<SchmidtForm> {
    if state.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "Schmidt decomposition needs 2 qubits, got {}",
            state.n_qubits()
        )));
    }
    let amp = state.amplitudes();
    // little-endian: index = b1 + 2·b2
    let a = [[amp[0], amp[2]], [amp[1], amp[3]]];
    let mul_a = |v: Vec2| -> Vec2 { [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]] };

    // A†A
    let h00 = a[0][0].norm_sqr() + a[1][0].norm_sqr();
    let h11 = a[0][1].norm_sqr() + a[1][1].norm_sqr();
    let h01 = a[0][0].conj() * a[0][1] + a[1][0].conj() * a[1][1];
    let (_, v1) = top_eigvec(h00, h01, h11);
    let v2 = complement(v1);

    let av1 = mul_a(v1);
    let alpha = (av1[0].norm_sqr() + av1[1].norm_sqr()).sqrt();
    let u1 = [av1[0] / alpha, av1[1] / alpha];
    let mut u2 = complement(u1);
    // make u2†A v2 real and non-negative
    let av2 = mul_a(v2);
    let z = u2[0].conj() * av2[0] + u2[1].conj() * av2[1];
    if z.norm() > 0.0 {
        let ph = Complex64::from_polar(1.0, z.arg());
        u2 = [u2[0] * ph, u2[1] * ph];
    }
    let beta = z.norm();

    let r1 = LocalOperator::from_entries_unchecked([[u1[0].conj(), u1[1].conj()], [u2[0].conj(), u2[1].conj()]]);
    let r2 = LocalOperator::from_entries_unchecked([[v1[0], v1[1]], [v2[0], v2[1]]]);
    Ok(SchmidtForm {
        alpha,
        beta,
        local_rotations: (r1, r2),
    })
}
