use proptest::prelude::*;
use qgame::classify::{
    certificate_is_contradiction, classify_state, null_space_dim, phase_system_feasible, single_player_constraint,
    single_player_system, verify_witness, PhaseConstraintSystem, PhaseFeasibility, SinglePlayerRequirement, Status,
};
use qgame::oracle::halfhalf_corroboration;
use qgame::states::StateFamily;

#[test]
fn off_half_dicke_single_player_system_has_trivial_null_space() {
    for n in 3..=6 {
        for m in 1..n {
            if 2 * m == n {
                continue;
            }
            assert_eq!(null_space_dim(single_player_system(n, m).unwrap()), 0, "({n},{m})");
            assert_eq!(single_player_constraint(n, m).unwrap(), SinglePlayerRequirement::AntiDiagonal);
            // no nonzero x on a grid solves (N-m)x - m x* = 0 either
            for a in -5..=5 {
                for b in -5..=5 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let (re, im) = (a as f64, b as f64);
                    let r = ((n - m) as f64 - m as f64) * re;
                    let i = ((n - m) as f64 + m as f64) * im;
                    assert!(r.abs() + i.abs() > 0.0);
                }
            }
        }
    }
}

#[test]
fn halfhalf_six_pair_solutions_break_a_quad_condition() {
    let (qualified, floor) = halfhalf_corroboration(10_000, 6, 6).unwrap();
    assert_eq!(qualified, 10_000);
    assert!(floor > 1e-3, "quad residual floor {floor:e}");
}

#[test]
fn feasible_verdicts_carry_checked_witnesses() {
    let families = [
        StateFamily::Ghz { n: 5, phase: 0.4 },
        StateFamily::Dicke { n: 4, m: 2 },
        StateFamily::Dicke { n: 2, m: 1 },
    ];
    for f in families {
        let v = classify_state(&f).unwrap();
        assert_eq!(v.status, Status::Feasible);
        let state = f.prepare().unwrap();
        assert!(verify_witness(&state, v.witness.as_ref().unwrap(), 1e-9).unwrap() <= 1e-9);
    }
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=len))
    })
}

proptest! {
    #[test]
    fn phase_solver_returns_valid_certificates((n, edges) in graph()) {
        let sys = PhaseConstraintSystem::new(n, edges.clone()).unwrap();
        match phase_system_feasible(&sys) {
            PhaseFeasibility::Feasible { phases } => {
                for (a, b) in edges {
                    prop_assert_ne!(phases[a], phases[b]);
                }
            }
            PhaseFeasibility::Infeasible { cycle } => {
                prop_assert!(cycle.len() % 2 == 1);
                prop_assert!(certificate_is_contradiction(&sys, &cycle));
            }
        }
    }
}
