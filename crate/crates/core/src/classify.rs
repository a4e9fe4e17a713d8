//! Analytic verdicts for the named state families.
//!
//! * Dicke states with unequal numbers of zeros and ones: every relative
//!   operator must be anti-diagonal, and every pair of players then needs a
//!   phase difference of `π/2 (mod π)`. On three or more players those
//!   constraints contain an odd cycle, which is contradictory.
//! * `|N/2, N/2⟩` for even N ≥ 6: infeasible by a case analysis on the
//!   two- and four-player overlap conditions; the residual functions for those
//!   conditions are exposed here and checked against brute-force overlaps in
//!   [`crate::oracle`].
//! * GHZ-like states, every two-qubit state, `|1,1⟩` and `|2,2⟩`: feasible,
//!   with a witness that is verified numerically before it is returned.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ortho::{gram_matrix, residual_of_relative, OperatorAssignment, GRAM_CAP};
use crate::qcore::{schmidt_decompose, LocalOperator, PureState};
use crate::states::{dicke, ghz, transport_witness, StateFamily};
use crate::FEASIBILITY_TOL;

/// Schmidt coefficients at or below this are treated as a product state.
pub const PRODUCT_TOL: f64 = 1e-8;

/// Pairwise constraints `φ_i - φ_j ≡ π/2 (mod π)` on `n_vars` phases.
///
/// Measured in units of `π/2`, each constraint says the difference is odd, so
/// the system is a parity problem on a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseConstraintSystem {
    n_vars: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl PhaseConstraintSystem {
    pub fn new(n_vars: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n_vars || b >= n_vars {
                return Err(Error::InvalidArgument(format!("constraint ({a}, {b}) outside {n_vars} variables")));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-constraint on variable {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n_vars, edges: set })
    }

    /// Every pair constrained, as produced by a symmetric state.
    pub fn complete(n_vars: usize) -> Self {
        let edges = (0..n_vars)
            .flat_map(|a| (a + 1..n_vars).map(move |b| (a, b)))
            .collect();
        Self { n_vars, edges }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn edges(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.edges.iter()
    }

    pub fn constrains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vars];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Outcome of the parity analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PhaseFeasibility {
    /// `phases[i]` in units of `π/2` (0 or 1) satisfies every constraint.
    Feasible { phases: Vec<u8> },
    /// An odd cycle of constraints; variables listed in order, closing back to the first.
    Infeasible { cycle: Vec<usize> },
}

impl PhaseFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }
}

/// Two-colors the constraint graph by breadth-first search. A conflict edge
/// closes an odd cycle through the BFS tree, which is returned as the
/// certificate.
pub fn phase_system_feasible(sys: &PhaseConstraintSystem) -> PhaseFeasibility {
    let adj = sys.adjacency();
    let n = sys.n_vars;
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            let ca = color[a].unwrap();
            for &b in &adj[a] {
                match color[b] {
                    None => {
                        color[b] = Some(1 - ca);
                        parent[b] = a;
                        depth[b] = depth[a] + 1;
                        queue.push_back(b);
                    }
                    Some(cb) if cb == ca => {
                        return PhaseFeasibility::Infeasible {
                            cycle: odd_cycle(a, b, &parent, &depth),
                        };
                    }
                    Some(_) => {}
                }
            }
        }
    }
    PhaseFeasibility::Feasible {
        phases: color.into_iter().map(|c| c.unwrap_or(0)).collect(),
    }
}

/// Joins the tree paths from `a` and `b` to their common ancestor; with the
/// edge `a-b` this is a cycle of odd length because `a` and `b` share a color.
fn odd_cycle(a: usize, b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Checks an odd-cycle certificate against the system.
///
/// Summing the constraints `φ_a - φ_b = π/2 + n_ab·π` around a closed cycle
/// gives `0` on the left and `(len/2 + Σn)·π` on the right; for odd `len`
/// that is an odd multiple of `π/2`, never zero. Returns true when the
/// cycle is closed, uses only constrained pairs and has odd length.
pub fn certificate_is_contradiction(sys: &PhaseConstraintSystem, cycle: &[usize]) -> bool {
    if cycle.len() < 3 || cycle.len().is_multiple_of(2) {
        return false;
    }
    let closed = cycle.iter().zip(cycle.iter().cycle().skip(1));
    // Σ over edges of the right-hand side in units of π/2 is Σ(1 + 2n) ≡ len (mod 2).
    let rhs_parity = closed
        .map(|(&a, &b)| if sys.constrains(a, b) { Some(1u64) } else { None })
        .try_fold(0u64, |acc, e| e.map(|e| acc + e));
    matches!(rhs_parity, Some(p) if p % 2 == 1)
}

/// Structure forced on a relative operator by the one-player overlaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SinglePlayerRequirement {
    /// Diagonal vanishes: `[[0, e^{iφ}], [e^{-iφ}, 0]]`.
    AntiDiagonal,
    /// Real diagonal `±cosθ`: `[[cosθ, e^{iφ}sinθ], [e^{-iφ}sinθ, -cosθ]]`.
    TraceFree,
}

/// Real 2x2 system for `x = a + ib` encoding `(N-m)·x - m·x* = 0`, the
/// vanishing one-player overlap for a relative operator `[[x, y], [y*, -x*]]`.
pub fn single_player_system(n: usize, m: usize) -> Result<[[f64; 2]; 2]> {
    if n < 2 || m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= N-1, got N={n}, m={m}")));
    }
    let (zeros, ones) = ((n - m) as f64, m as f64);
    // real part: (zeros - ones)·a, imaginary part: (zeros + ones)·b
    Ok([[zeros - ones, 0.0], [0.0, zeros + ones]])
}

/// Dimension of the real solution space of a 2x2 homogeneous system.
pub fn null_space_dim(a: [[f64; 2]; 2]) -> usize {
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return 2;
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() > 1e-12 * scale * scale {
        0
    } else {
        1
    }
}

/// What the one-player overlaps force on every relative operator of `Dicke(N, m)`.
pub fn single_player_constraint(n: usize, m: usize) -> Result<SinglePlayerRequirement> {
    let sys = single_player_system(n, m)?;
    Ok(match null_space_dim(sys) {
        0 => SinglePlayerRequirement::AntiDiagonal,
        _ => SinglePlayerRequirement::TraceFree,
    })
}

fn check_even(n: usize, min: usize) -> Result<()> {
    if !n.is_multiple_of(2) || n < min {
        return Err(Error::InvalidArgument(format!("need even N >= {min}, got {n}")));
    }
    Ok(())
}

/// `cosθ_i cosθ_j - (N/2)·cos(φ_i - φ_j)·sinθ_i sinθ_j`; vanishes exactly
/// when the two-player overlap on `|N/2, N/2⟩` does.
pub fn halfhalf_pair_residual(theta_i: f64, phi_i: f64, theta_j: f64, phi_j: f64, n: usize) -> Result<f64> {
    check_even(n, 2)?;
    Ok(theta_i.cos() * theta_j.cos() - 0.5 * n as f64 * (phi_i - phi_j).cos() * theta_i.sin() * theta_j.sin())
}

/// Four-player condition on `|N/2, N/2⟩`, valid where the pair conditions hold:
/// `24/(N(N-2))·Π cosθ - (cosβ_1 + cosβ_2 + cosβ_3)·Π sinθ` with
/// `β_1 = φ_i+φ_j-φ_k-φ_l`, `β_2 = φ_i-φ_j+φ_k-φ_l`, `β_3 = φ_i-φ_j-φ_k+φ_l`.
pub fn halfhalf_quad_residual(theta: [f64; 4], phi: [f64; 4], n: usize) -> Result<f64> {
    check_even(n, 4)?;
    let [pi, pj, pk, pl] = phi;
    let betas = [pi + pj - pk - pl, pi - pj + pk - pl, pi - pj - pk + pl];
    let cos_sum: f64 = betas.iter().map(|b| b.cos()).sum();
    let cos_prod: f64 = theta.iter().map(|t| t.cos()).product();
    let sin_prod: f64 = theta.iter().map(|t| t.sin()).product();
    let nf = n as f64;
    Ok(24.0 / (nf * (nf - 2.0)) * cos_prod - cos_sum * sin_prod)
}

/// `6N/(N-2)` against the largest possible `|cosβ_1 + cosβ_2 + cosβ_3|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub max_rhs: f64,
    pub contradiction: bool,
}

pub fn bound_check(n: usize) -> Result<BoundCheck> {
    check_even(n, 6)?;
    let nf = n as f64;
    let lhs = 6.0 * nf / (nf - 2.0);
    let max_rhs = 3.0;
    Ok(BoundCheck {
        lhs,
        max_rhs,
        contradiction: lhs > max_rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    Infeasible,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    GhzWitness,
    TwoQubitSchmidt,
    HalfHalfWitness,
    PhaseContradiction,
    TheoremHalfhalf,
    NoAnalyticVerdict,
    SearchResidual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<OperatorAssignment>,
    /// Largest off-diagonal overlap of the witness, as verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_off_diagonal: Option<f64>,
    /// Odd cycle of players (1-based) whose phase constraints contradict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl Verdict {
    fn bare(status: Status, reason: Reason) -> Self {
        Self {
            status,
            reason,
            witness: None,
            max_off_diagonal: None,
            certificate: None,
            bound: None,
            residual: None,
        }
    }

    /// Undetermined verdict carrying a numerical residual floor.
    pub fn undetermined(residual: Option<f64>) -> Self {
        let reason = if residual.is_some() {
            Reason::SearchResidual
        } else {
            Reason::NoAnalyticVerdict
        };
        Self {
            residual,
            ..Self::bare(Status::Undetermined, reason)
        }
    }

    /// Feasible verdict; fails unless the witness passes at `FEASIBILITY_TOL`.
    pub fn feasible(state: &PureState, witness: OperatorAssignment, reason: Reason) -> Result<Self> {
        let worst = verify_witness(state, &witness, FEASIBILITY_TOL)?;
        Ok(Self {
            witness: Some(witness),
            max_off_diagonal: Some(worst),
            ..Self::bare(Status::Feasible, reason)
        })
    }
}

/// Largest off-diagonal overlap of the witness, or an error above `tol`.
///
/// Past the Gram cap the bound `max |G_αβ| ≤ √J` is used instead.
pub fn verify_witness(state: &PureState, witness: &OperatorAssignment, tol: f64) -> Result<f64> {
    let worst = if witness.n_players() <= GRAM_CAP {
        gram_matrix(state, witness)?.max_off_diagonal()
    } else {
        residual_of_relative(state, witness.relative())?.sqrt()
    };
    if !(worst <= tol) {
        return Err(Error::NotDistinguishable(worst));
    }
    Ok(worst)
}

/// The GHZ phase on which `{I, iσ_y}` for every player is a witness:
/// `π/2` for even N, `0` for odd N.
pub fn ghz_canonical_phase(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        FRAC_PI_2
    } else {
        0.0
    }
}

/// `{I, iσ_y}` on every player for the canonical phase, moved to `phase` by
/// a phase gate on player 1.
pub fn ghz_witness(n: usize, phase: f64) -> Result<OperatorAssignment> {
    let base = OperatorAssignment::uniform(n, LocalOperator::identity(), LocalOperator::i_sigma_y());
    let mut rotations = vec![LocalOperator::identity(); n];
    rotations[0] = LocalOperator::phase_gate(phase - ghz_canonical_phase(n));
    transport_witness(&base, &rotations)
}

/// `{I, σ_x}` on player 1 and `{I, iσ_y}` on player 2, moved from the
/// Schmidt form back to `state`.
pub fn two_qubit_witness(state: &PureState) -> Result<OperatorAssignment> {
    let form = schmidt_decompose(state)?;
    if form.beta <= PRODUCT_TOL {
        return Err(Error::ProductState(format!("Schmidt coefficient {:e}", form.beta)));
    }
    let base = OperatorAssignment::new(vec![
        (LocalOperator::identity(), LocalOperator::pauli_x()),
        (LocalOperator::identity(), LocalOperator::i_sigma_y()),
    ]);
    let (r1, r2) = form.local_rotations;
    transport_witness(&base, &[r1.adjoint(), r2.adjoint()])
}

/// `u_i = I`, `v_{1,2,3} = (√2σ_z + σ_x)/√3`, `v_4 = σ_y` for `|2,2⟩`.
pub fn halfhalf_four_witness() -> OperatorAssignment {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    let v = LocalOperator::from_entries_unchecked([
        [Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
        [Complex64::new(b, 0.0), Complex64::new(-a, 0.0)],
    ]);
    let id = LocalOperator::identity();
    OperatorAssignment::new(vec![(id, v), (id, v), (id, v), (id, LocalOperator::pauli_y())])
}

fn classify_dicke(n: usize, m: usize) -> Result<Verdict> {
    if m > n {
        return Err(Error::InvalidArgument(format!("Dicke excitation count {m} > N = {n}")));
    }
    if m == 0 || m == n {
        return Err(Error::ProductState(format!("Dicke({n}, {m}) is a basis state")));
    }
    let state = dicke(n, m)?;
    if n == 2 {
        return Verdict::feasible(&state, two_qubit_witness(&state)?, Reason::TwoQubitSchmidt);
    }
    if 2 * m != n {
        debug_assert_eq!(single_player_constraint(n, m)?, SinglePlayerRequirement::AntiDiagonal);
        let sys = PhaseConstraintSystem::complete(n);
        return match phase_system_feasible(&sys) {
            PhaseFeasibility::Infeasible { cycle } => Ok(Verdict {
                certificate: Some(cycle.into_iter().map(|p| p + 1).collect()),
                ..Verdict::bare(Status::Infeasible, Reason::PhaseContradiction)
            }),
            PhaseFeasibility::Feasible { .. } => unreachable!("complete graph on >= 3 vertices has a triangle"),
        };
    }
    if n == 4 {
        return Verdict::feasible(&state, halfhalf_four_witness(), Reason::HalfHalfWitness);
    }
    Ok(Verdict {
        bound: Some(bound_check(n)?),
        ..Verdict::bare(Status::Infeasible, Reason::TheoremHalfhalf)
    })
}

/// Analytic verdict for a state family. Custom states are left undetermined.
pub fn classify_state(family: &StateFamily) -> Result<Verdict> {
    match family {
        StateFamily::Dicke { n, m } => classify_dicke(*n, *m),
        StateFamily::W { n } => {
            if *n < 3 {
                return Err(Error::InvalidArgument(format!("W state needs N >= 3, got {n}")));
            }
            classify_dicke(*n, 1)
        }
        StateFamily::Ghz { n, phase } => {
            let state = ghz(*n, *phase)?;
            Verdict::feasible(&state, ghz_witness(*n, *phase)?, Reason::GhzWitness)
        }
        StateFamily::TwoQubit { .. } => {
            let state = family.prepare()?;
            Verdict::feasible(&state, two_qubit_witness(&state)?, Reason::TwoQubitSchmidt)
        }
        StateFamily::Custom { .. } => Ok(Verdict::undetermined(None)),
    }
}

/// Points where the pair condition holds for every pair among `k` players of
/// `|N/2, N/2⟩`: one player carries an extra phase `x`, the rest share
/// `cot θ = √(N/2)`, and any subset is shifted by `π` with `cot θ` negated.
///
/// Returns `(θ, φ)` for the `k` players.
pub fn pair_feasible_angles(n: usize, k: usize, special: usize, x: f64, shift: f64, flips: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let root = (0.5 * n as f64).sqrt();
    let mut theta = Vec::with_capacity(k);
    let mut phi = Vec::with_capacity(k);
    for i in 0..k {
        let sign = if flips.get(i).copied().unwrap_or(false) { -1.0 } else { 1.0 };
        let (t, p) = if i == special { (root * x.cos(), shift + x) } else { (root, shift) };
        let t = sign * t;
        let p = if sign < 0.0 { p + PI } else { p };
        theta.push(1.0f64.atan2(t));
        phi.push(p);
    }
    (theta, phi)
}
