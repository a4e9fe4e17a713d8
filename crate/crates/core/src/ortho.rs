//! Joint-strategy indexing, the Gram matrix of the 2^N output states, and
//! the referee's measurement basis.
//!
//! Every overlap `⟨Φ_α|Φ_β⟩` factorizes as `⟨Ψ| ⊗_i M_i |Ψ⟩` where `M_i` is the
//! identity, `m_i = u_i†v_i` or `m_i†` depending on how the two joint
//! strategies compare at player `i`. There are only `3^N` such patterns, so
//! the Gram matrix is built from `3^N` expectation values instead of `4^N`
//! inner products.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{apply_in_place, dot, LocalOperator, PureState};

/// Largest N for which the full `2^N x 2^N` Gram matrix is materialized.
pub const GRAM_CAP: usize = 10;
/// Largest N for which the residual is evaluated through pattern expectations.
pub const RESIDUAL_CAP: usize = 12;

/// Each player's pair of strategies `(u_i, v_i)` and the relative operator `u_i†v_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "AssignmentRepr", into = "AssignmentRepr")]
pub struct OperatorAssignment {
    pairs: Vec<(LocalOperator, LocalOperator)>,
    relative: Vec<LocalOperator>,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    u: LocalOperator,
    v: LocalOperator,
}

#[derive(Serialize, Deserialize)]
struct AssignmentRepr {
    pairs: Vec<PairRepr>,
}

impl From<AssignmentRepr> for OperatorAssignment {
    fn from(r: AssignmentRepr) -> Self {
        Self::new(r.pairs.into_iter().map(|p| (p.u, p.v)).collect())
    }
}

impl From<OperatorAssignment> for AssignmentRepr {
    fn from(a: OperatorAssignment) -> Self {
        Self {
            pairs: a.pairs.into_iter().map(|(u, v)| PairRepr { u, v }).collect(),
        }
    }
}

impl OperatorAssignment {
    pub fn new(pairs: Vec<(LocalOperator, LocalOperator)>) -> Self {
        let relative = pairs.iter().map(|(u, v)| u.adjoint() * *v).collect();
        Self { pairs, relative }
    }

    /// Every player gets the same pair.
    pub fn uniform(n_players: usize, u: LocalOperator, v: LocalOperator) -> Self {
        Self::new(vec![(u, v); n_players])
    }

    /// `u_i = I`, `v_i = relative[i]`.
    pub fn from_relative(relative: Vec<LocalOperator>) -> Self {
        Self::new(relative.into_iter().map(|m| (LocalOperator::identity(), m)).collect())
    }

    pub fn n_players(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(LocalOperator, LocalOperator)] {
        &self.pairs
    }

    pub fn relative(&self) -> &[LocalOperator] {
        &self.relative
    }

    /// Operators played under joint strategy `k`: bit `i` of `k` selects `v_{i+1}`.
    pub fn select(&self, k: usize) -> Vec<LocalOperator> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, (u, v))| if (k >> i) & 1 == 1 { *v } else { *u })
            .collect()
    }
}

/// A joint pure strategy: player choices in `{1, 2}` and the 0-based index
/// `k = Σ (choice_i - 1)·2^{i-1}`. Output state `Φ_k` here is `Φ_{k+1}` in
/// 1-based labelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointStrategyIndex {
    k: usize,
    choices: Vec<u8>,
}

impl JointStrategyIndex {
    pub fn from_choices(choices: &[u8]) -> Result<Self> {
        if choices.is_empty() || choices.len() >= usize::BITS as usize {
            return Err(Error::InvalidArgument(format!("{} choices", choices.len())));
        }
        let mut k = 0;
        for (i, &c) in choices.iter().enumerate() {
            match c {
                1 => {}
                2 => k |= 1 << i,
                other => return Err(Error::InvalidChoice(other)),
            }
        }
        Ok(Self {
            k,
            choices: choices.to_vec(),
        })
    }

    pub fn from_index(k: usize, n_players: usize) -> Result<Self> {
        if n_players == 0 || n_players >= usize::BITS as usize || k >> n_players != 0 {
            return Err(Error::InvalidArgument(format!("index {k} out of range for {n_players} players")));
        }
        let choices = (0..n_players).map(|i| 1 + ((k >> i) & 1) as u8).collect();
        Ok(Self { k, choices })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn choices(&self) -> &[u8] {
        &self.choices
    }

    pub fn n_players(&self) -> usize {
        self.choices.len()
    }
}

/// `joint_index(choices)`.
pub fn joint_index(choices: &[u8]) -> Result<JointStrategyIndex> {
    JointStrategyIndex::from_choices(choices)
}

/// How two joint strategies compare at one player.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Diff {
    Same,
    /// bra plays `u`, ket plays `v`: factor `m = u†v`.
    Forward,
    /// bra plays `v`, ket plays `u`: factor `m†`.
    Backward,
}

impl Diff {
    fn digit(self) -> usize {
        match self {
            Diff::Same => 0,
            Diff::Forward => 1,
            Diff::Backward => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferencePattern(pub Vec<Diff>);

impl DifferencePattern {
    pub fn between(bra: &JointStrategyIndex, ket: &JointStrategyIndex) -> Result<Self> {
        if bra.n_players() != ket.n_players() {
            return Err(Error::DimensionMismatch(bra.n_players(), ket.n_players()));
        }
        Ok(Self::from_indices(bra.k, ket.k, bra.n_players()))
    }

    pub(crate) fn from_indices(bra: usize, ket: usize, n: usize) -> Self {
        Self(
            (0..n)
                .map(|i| match ((bra >> i) & 1, (ket >> i) & 1) {
                    (0, 1) => Diff::Forward,
                    (1, 0) => Diff::Backward,
                    _ => Diff::Same,
                })
                .collect(),
        )
    }

    /// Base-3 code, player 1 in the least significant digit.
    pub fn code(&self) -> usize {
        self.0.iter().rev().fold(0, |acc, d| acc * 3 + d.digit())
    }

    pub fn same_count(&self) -> usize {
        self.0.iter().filter(|d| **d == Diff::Same).count()
    }
}

/// `difference_pattern(bra, ket)`.
pub fn difference_pattern(bra: &JointStrategyIndex, ket: &JointStrategyIndex) -> Result<DifferencePattern> {
    DifferencePattern::between(bra, ket)
}

fn check_players(state: &PureState, n: usize) -> Result<()> {
    if state.n_qubits() != n {
        return Err(Error::CountMismatch {
            expected: state.n_qubits(),
            got: n,
        });
    }
    Ok(())
}

/// `⟨Ψ| ⊗_i M_i |Ψ⟩` for the given pattern.
pub fn gram_entry(state: &PureState, assignment: &OperatorAssignment, pattern: &DifferencePattern) -> Result<Complex64> {
    check_players(state, assignment.n_players())?;
    check_players(state, pattern.0.len())?;
    let mut buf = state.amplitudes().to_vec();
    for (bit, (d, m)) in pattern.0.iter().zip(assignment.relative()).enumerate() {
        match d {
            Diff::Same => {}
            Diff::Forward => apply_in_place(&mut buf, bit, m),
            Diff::Backward => apply_in_place(&mut buf, bit, &m.adjoint()),
        }
    }
    Ok(dot(state.amplitudes(), &buf))
}

/// Depth-first walk over players `n-1 … 0` filling `out[code]` for every
/// pattern whose higher digits are already fixed by the caller.
struct PatternWalker<'a> {
    psi: &'a [Complex64],
    ops: &'a [[LocalOperator; 2]],
    scratch: Vec<Vec<Complex64>>,
}

impl PatternWalker<'_> {
    fn new<'a>(psi: &'a [Complex64], ops: &'a [[LocalOperator; 2]], depth: usize) -> PatternWalker<'a> {
        PatternWalker {
            psi,
            ops,
            scratch: vec![vec![Complex64::new(0.0, 0.0); psi.len()]; depth],
        }
    }

    /// `src`: `None` for the base vector, `Some(j)` for `scratch[j]`.
    /// Players `0..=top` are still free; `out` holds their `3^{top+1}` codes.
    fn walk(&mut self, base: Option<&[Complex64]>, src: Option<usize>, top: usize, out: &mut [Complex64]) {
        let chunk = out.len() / 3;
        for digit in 0..3 {
            let slot = &mut out[digit * chunk..(digit + 1) * chunk];
            let next = match digit {
                0 => src,
                _ => {
                    // scratch is indexed by player; the input always belongs to a higher one
                    let (lo, hi) = self.scratch.split_at_mut(top + 1);
                    let dst = &mut lo[top];
                    match src {
                        Some(j) => dst.copy_from_slice(&hi[j - top - 1]),
                        None => dst.copy_from_slice(base.unwrap_or(self.psi)),
                    }
                    apply_in_place(dst, top, &self.ops[top][digit - 1]);
                    Some(top)
                }
            };
            if top == 0 {
                let v = match next {
                    Some(j) => &self.scratch[j][..],
                    None => base.unwrap_or(self.psi),
                };
                slot[0] = dot(self.psi, v);
            } else {
                self.walk(base, next, top - 1, slot);
            }
        }
    }
}

/// All `3^N` pattern expectations, indexed by [`DifferencePattern::code`].
pub(crate) fn pattern_expectations(psi: &[Complex64], relative: &[LocalOperator], parallel: bool) -> Vec<Complex64> {
    let n = relative.len();
    let ops: Vec<[LocalOperator; 2]> = relative.iter().map(|m| [*m, m.adjoint()]).collect();
    let total = 3usize.pow(n as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    // Fix the top `fixed` players per task when running in parallel.
    let fixed = if parallel && n >= 6 { 3.min(n - 1) } else { 0 };
    if fixed == 0 {
        let mut w = PatternWalker::new(psi, &ops, n);
        w.walk(None, None, n - 1, &mut out);
        return out;
    }
    let free = n - fixed;
    let chunk = 3usize.pow(free as u32);
    out.par_chunks_mut(chunk).enumerate().for_each(|(prefix, slot)| {
        let mut base = psi.to_vec();
        // same application order as the serial walk (highest player first)
        for player in (free..n).rev() {
            let digit = prefix / 3usize.pow((player - free) as u32) % 3;
            if digit > 0 {
                apply_in_place(&mut base, player, &ops[player][digit - 1]);
            }
        }
        let mut w = PatternWalker::new(psi, &ops, free);
        w.walk(Some(&base), None, free - 1, slot);
    });
    out
}

/// `J = Σ_{α<β} |G_αβ|²` computed from pattern expectations: a pattern with
/// `s` Same slots covers `2^s` ordered index pairs.
pub(crate) fn residual_from_expectations(expectations: &[Complex64], n: usize) -> f64 {
    let mut total = 0.0;
    for (code, e) in expectations.iter().enumerate().skip(1) {
        let mut c = code;
        let mut same = 0;
        for _ in 0..n {
            if c % 3 == 0 {
                same += 1;
            }
            c /= 3;
        }
        total += (1u64 << same) as f64 * e.norm_sqr();
    }
    0.5 * total
}

/// Residual of the assignment `(I, relative_i)` on `state` without building the Gram matrix.
pub fn residual_of_relative(state: &PureState, relative: &[LocalOperator]) -> Result<f64> {
    check_players(state, relative.len())?;
    if relative.len() > RESIDUAL_CAP {
        return Err(Error::OverCap {
            n: relative.len(),
            cap: RESIDUAL_CAP,
        });
    }
    let e = pattern_expectations(state.amplitudes(), relative, true);
    Ok(residual_from_expectations(&e, relative.len()))
}

/// Serial variant used inside the optimizer, where parallelism lives at the start level.
pub(crate) fn residual_serial(psi: &[Complex64], relative: &[LocalOperator]) -> f64 {
    let e = pattern_expectations(psi, relative, false);
    residual_from_expectations(&e, relative.len())
}

/// Overlaps `⟨Φ_α|Φ_β⟩` of all output states, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    n_players: usize,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    /// Wraps a row-major square matrix of side `2^n_players`.
    pub fn from_entries(n_players: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n_players;
        if entries.len() != dim * dim {
            return Err(Error::CountMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { n_players, entries })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn dim(&self) -> usize {
        1 << self.n_players
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn diagonal_error(&self) -> f64 {
        (0..self.dim())
            .map(|i| (self.get(i, i) - Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise distance to another Gram matrix of the same size.
    pub fn distance(&self, other: &GramMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Gram matrix of the `2^N` output states of `assignment` on `state`.
pub fn gram_matrix(state: &PureState, assignment: &OperatorAssignment) -> Result<GramMatrix> {
    gram_matrix_capped(state, assignment, GRAM_CAP)
}

pub fn gram_matrix_capped(state: &PureState, assignment: &OperatorAssignment, cap: usize) -> Result<GramMatrix> {
    let n = assignment.n_players();
    check_players(state, n)?;
    if n > cap {
        return Err(Error::OverCap { n, cap });
    }
    let e = pattern_expectations(state.amplitudes(), assignment.relative(), true);
    let dim = 1usize << n;
    // per-bit code contribution: (bra_bit, ket_bit) -> digit·3^i
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    entries.par_chunks_mut(dim).enumerate().for_each(|(bra, row)| {
        for (ket, slot) in row.iter_mut().enumerate() {
            let diff = bra ^ ket;
            let mut code = 0;
            let mut bits = diff;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                code += if (ket >> i) & 1 == 1 { pow3[i] } else { 2 * pow3[i] };
                bits &= bits - 1;
            }
            *slot = e[code];
        }
    });
    Ok(GramMatrix { n_players: n, entries })
}

/// `J = Σ_{α<β} |G_αβ|²`; zero exactly when the output states are orthonormal.
pub fn residual(g: &GramMatrix) -> f64 {
    let dim = g.dim();
    let mut total = 0.0;
    for r in 0..dim {
        for c in r + 1..dim {
            total += g.get(r, c).norm_sqr();
        }
    }
    total
}

/// True iff every off-diagonal overlap is at most `tol` in magnitude.
pub fn is_distinguishable(g: &GramMatrix, tol: f64) -> bool {
    g.max_off_diagonal() <= tol
}

/// Orthonormal measurement basis `{|φ_j⟩}` with `|⟨φ_j|Φ_k⟩|² = δ_jk`,
/// ordered by joint-strategy index.
///
/// The output states are re-orthonormalized by modified Gram-Schmidt,
/// always processing the remaining vector of largest residual norm next
/// (lowest index on ties).
pub fn referee_projectors(state: &PureState, assignment: &OperatorAssignment, tol: f64) -> Result<Vec<PureState>> {
    let g = gram_matrix(state, assignment)?;
    let worst = g.max_off_diagonal();
    if !(worst <= tol) {
        return Err(Error::NotDistinguishable(worst));
    }
    let n = state.n_qubits();
    let dim = 1usize << n;
    let mut work: Vec<Vec<Complex64>> = (0..dim)
        .map(|k| {
            let mut buf = state.amplitudes().to_vec();
            for (bit, op) in assignment.select(k).iter().enumerate() {
                apply_in_place(&mut buf, bit, op);
            }
            buf
        })
        .collect();
    let mut done = vec![false; dim];
    for _ in 0..dim {
        let (pivot, norm) = (0..dim)
            .filter(|k| !done[*k])
            .map(|k| (k, work[k].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()))
            .fold((usize::MAX, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if norm <= 0.0 {
            return Err(Error::NotDistinguishable(1.0));
        }
        let inv = 1.0 / norm;
        work[pivot].iter_mut().for_each(|a| *a *= inv);
        done[pivot] = true;
        let q = work[pivot].clone();
        for k in 0..dim {
            if !done[k] {
                let proj = dot(&q, &work[k]);
                for (a, b) in work[k].iter_mut().zip(&q) {
                    *a -= proj * b;
                }
            }
        }
    }
    Ok(work.into_iter().map(|amps| PureState::from_raw(n, amps)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke, ghz, random_state};
    use std::f64::consts::PI;

    #[test]
    fn joint_index_examples() {
        assert_eq!(joint_index(&[1, 1, 1]).unwrap().k(), 0);
        assert_eq!(joint_index(&[2, 1, 1]).unwrap().k(), 1);
        assert_eq!(joint_index(&[2, 2, 2]).unwrap().k(), 7);
        assert_eq!(joint_index(&[1, 3]), Err(Error::InvalidChoice(3)));
        assert!(joint_index(&[]).is_err());
    }

    #[test]
    fn joint_index_is_a_bijection() {
        for n in 1..=6 {
            let mut seen = vec![false; 1 << n];
            for k in 0..1usize << n {
                let idx = JointStrategyIndex::from_index(k, n).unwrap();
                let again = joint_index(idx.choices()).unwrap();
                assert_eq!(again.k(), k);
                assert!(!seen[again.k()]);
                seen[again.k()] = true;
            }
        }
    }

    #[test]
    fn difference_pattern_examples() {
        let a = JointStrategyIndex::from_index(0, 3).unwrap();
        let b = JointStrategyIndex::from_index(3, 3).unwrap();
        assert_eq!(difference_pattern(&a, &a).unwrap().0, vec![Diff::Same; 3]);
        assert_eq!(
            difference_pattern(&a, &b).unwrap().0,
            vec![Diff::Forward, Diff::Forward, Diff::Same]
        );
        assert_eq!(
            difference_pattern(&b, &a).unwrap().0,
            vec![Diff::Backward, Diff::Backward, Diff::Same]
        );
    }

    #[test]
    fn all_same_pattern_gives_one() {
        let s = random_state(3, 4).unwrap();
        let a = OperatorAssignment::uniform(3, LocalOperator::identity(), LocalOperator::su2(0.3, 0.2, 0.1));
        let e = gram_entry(&s, &a, &DifferencePattern(vec![Diff::Same; 3])).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn w_state_two_anti_diagonal_slots() {
        for n in 3..=6 {
            let w = dicke(n, 1).unwrap();
            let (p1, p2) = (0.7, -1.9);
            let mut rel = vec![LocalOperator::identity(); n];
            rel[0] = LocalOperator::anti_diagonal(p1);
            rel[1] = LocalOperator::anti_diagonal(p2);
            let mut pat = vec![Diff::Same; n];
            pat[0] = Diff::Forward;
            pat[1] = Diff::Forward;
            let e = gram_entry(&w, &OperatorAssignment::from_relative(rel), &DifferencePattern(pat)).unwrap();
            let expected = 2.0 / n as f64 * (p1 - p2).cos();
            assert!((e - Complex64::new(expected, 0.0)).norm() < 1e-13, "n={n}: {e}");
        }
    }

    #[test]
    fn w3_single_anti_diagonal_slot_vanishes() {
        let w = dicke(3, 1).unwrap();
        let rel = vec![LocalOperator::anti_diagonal(0.4), LocalOperator::identity(), LocalOperator::identity()];
        let pat = DifferencePattern(vec![Diff::Forward, Diff::Same, Diff::Same]);
        let e = gram_entry(&w, &OperatorAssignment::from_relative(rel), &pat).unwrap();
        assert!(e.norm() <= 1.0 / 3.0);
        assert!(e.norm() < 1e-15);
    }

    #[test]
    fn identical_strategies_give_all_ones() {
        let s = random_state(3, 9).unwrap();
        let u = LocalOperator::su2(0.4, 1.0, -0.3);
        let g = gram_matrix(&s, &OperatorAssignment::uniform(3, u, u)).unwrap();
        for z in g.entries() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
        let j = residual(&g);
        assert!((j - 4.0 * 7.0).abs() < 1e-11);
    }

    #[test]
    fn residual_of_identity_gram_is_zero() {
        let dim = 4;
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            e[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        let g = GramMatrix::from_entries(2, e).unwrap();
        assert_eq!(residual(&g), 0.0);
        assert!(is_distinguishable(&g, 1e-9));
    }

    #[test]
    fn ghz_even_witness_is_distinguishable() {
        let g = gram_matrix(
            &ghz(4, PI / 2.0).unwrap(),
            &OperatorAssignment::uniform(4, LocalOperator::identity(), LocalOperator::i_sigma_y()),
        )
        .unwrap();
        assert!(is_distinguishable(&g, 1e-9));
        assert!(g.max_off_diagonal() < 1e-12);
    }

    #[test]
    fn ghz_odd_with_phase_i_is_not() {
        // (i·σ_y)^{⊗3} maps Φ_0 onto a multiple of Φ_7 when the relative phase is i.
        let g = gram_matrix(
            &ghz(3, PI / 2.0).unwrap(),
            &OperatorAssignment::uniform(3, LocalOperator::identity(), LocalOperator::i_sigma_y()),
        )
        .unwrap();
        assert!((g.get(0, 7).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residual_without_materializing_matches() {
        for n in 2..=5 {
            let s = random_state(n, 100 + n as u64).unwrap();
            let rel: Vec<_> = (0..n)
                .map(|i| LocalOperator::su2(0.2 + i as f64, 0.5 * i as f64, -0.3))
                .collect();
            let g = gram_matrix(&s, &OperatorAssignment::from_relative(rel.clone())).unwrap();
            let a = residual(&g);
            let b = residual_of_relative(&s, &rel).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + a), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn parallel_and_serial_patterns_are_bit_identical() {
        let n = 7;
        let s = random_state(n, 5).unwrap();
        let rel: Vec<_> = (0..n).map(|i| LocalOperator::su2(0.1 * i as f64, 0.7, 1.1 - i as f64)).collect();
        let a = pattern_expectations(s.amplitudes(), &rel, true);
        let b = pattern_expectations(s.amplitudes(), &rel, false);
        assert_eq!(a, b);
    }

    #[test]
    fn caps_are_enforced() {
        let s = dicke(11, 1).unwrap();
        let a = OperatorAssignment::uniform(11, LocalOperator::identity(), LocalOperator::pauli_x());
        assert!(matches!(gram_matrix(&s, &a), Err(Error::OverCap { n: 11, cap: 10 })));
        let s = dicke(13, 1).unwrap();
        assert!(matches!(
            residual_of_relative(&s, &[LocalOperator::pauli_x(); 13]),
            Err(Error::OverCap { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn referee_projectors_rejects_overlapping_outputs() {
        let w = dicke(3, 1).unwrap();
        let a = OperatorAssignment::uniform(3, LocalOperator::identity(), LocalOperator::i_sigma_y());
        assert!(matches!(
            referee_projectors(&w, &a, 1e-9),
            Err(Error::NotDistinguishable(_))
        ));
    }

    #[test]
    fn referee_projectors_for_ghz() {
        for n in [2usize, 4] {
            let s = ghz(n, PI / 2.0).unwrap();
            let a = OperatorAssignment::uniform(n, LocalOperator::identity(), LocalOperator::i_sigma_y());
            let proj = referee_projectors(&s, &a, 1e-9).unwrap();
            assert_eq!(proj.len(), 1 << n);
            for (j, p) in proj.iter().enumerate() {
                for (k, q) in proj.iter().enumerate() {
                    let z = p.inner_product(q).unwrap();
                    let target = if j == k { 1.0 } else { 0.0 };
                    assert!((z - Complex64::new(target, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
