//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use qgame::classify::{
    bound_check, classify_state, ghz_canonical_phase, ghz_witness, halfhalf_four_witness, phase_system_feasible,
    two_qubit_witness, PhaseConstraintSystem, Reason, Status,
};
use qgame::game::{play_quantum, reproduction_check, GameSpec};
use qgame::oracle;
use qgame::ortho::{gram_matrix, OperatorAssignment};
use qgame::search::{optimize, SearchConfig};
use qgame::states::{dicke, ghz, random_state, transport_witness, StateFamily};
use qgame::{Error, LocalOperator, PureState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn payoff_table(n: usize) -> GameSpec {
    let rows = (0..1usize << n)
        .map(|k| (0..n).map(|i| ((7 * k + 3 * i) % 11) as f64 - 5.0).collect())
        .collect();
    GameSpec::new(n, rows).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut worst_g = 0.0f64;
    let mut worst_p = 0.0f64;
    for n in 2..=8 {
        // literal {I, iσ_y} on the phase where it is a witness
        let s = ghz(n, ghz_canonical_phase(n)).map_err(fail)?;
        let w = OperatorAssignment::uniform(n, LocalOperator::identity(), LocalOperator::i_sigma_y());
        let g = gram_matrix(&s, &w).map_err(fail)?.max_off_diagonal();
        let r = reproduction_check(&s, &w, &payoff_table(n)).map_err(fail)?;
        ensure(g <= 1e-12, format!("N={n}: max |G| = {g:e}"))?;
        ensure(r.reproduced && r.worst_probability_deviation <= 1e-10, format!("N={n}: {r:?}"))?;
        // default phase π/2 with the transported witness
        let s = ghz(n, FRAC_PI_2).map_err(fail)?;
        let w = ghz_witness(n, FRAC_PI_2).map_err(fail)?;
        let g2 = gram_matrix(&s, &w).map_err(fail)?.max_off_diagonal();
        let r2 = reproduction_check(&s, &w, &payoff_table(n)).map_err(fail)?;
        ensure(g2 <= 1e-12, format!("N={n}, phase π/2: max |G| = {g2:e}"))?;
        ensure(r2.reproduced && r2.worst_probability_deviation <= 1e-10, format!("N={n}, phase π/2: {r2:?}"))?;
        worst_g = worst_g.max(g).max(g2);
        worst_p = worst_p.max(r.worst_probability_deviation).max(r2.worst_probability_deviation);
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 5.0, format!("took {secs:.2} s"))?;
    Ok(format!("N=2..8 max|G|={worst_g:.1e} worst|p-1|={worst_p:.1e} in {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let s = dicke(4, 2).map_err(fail)?;
    let w = halfhalf_four_witness();
    let g = gram_matrix(&s, &w).map_err(fail)?;
    let dist = g.max_off_diagonal().max(g.diagonal_error());
    ensure(dist <= 1e-12, format!("distance from identity {dist:e}"))?;
    let r = reproduction_check(&s, &w, &payoff_table(4)).map_err(fail)?;
    ensure(r.reproduced, format!("{r:?}"))?;
    Ok(format!("Gram within {dist:.1e} of identity"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let state = random_state(2, seed).map_err(fail)?;
        let v = classify_state(&StateFamily::TwoQubit { state: state.clone() }).map_err(fail)?;
        ensure(v.status == Status::Feasible, format!("seed {seed}: {:?}", v.status))?;
        let w = v.witness.ok_or("no witness")?;
        let g = gram_matrix(&state, &w).map_err(fail)?.max_off_diagonal();
        ensure(g <= 1e-10, format!("seed {seed}: max |G| = {g:e}"))?;
        worst = worst.max(g);
    }
    // rank-1 boundary: the guard refuses, the untransported witness still works
    let product = StateFamily::two_qubit_schmidt(1.0, 1e-9).map_err(fail)?;
    let state = product.prepare().map_err(fail)?;
    let guarded = classify_state(&product);
    ensure(
        matches!(guarded, Err(Error::ProductState(_))),
        format!("product guard not triggered: {guarded:?}"),
    )?;
    ensure(matches!(two_qubit_witness(&state), Err(Error::ProductState(_))), "witness builder not guarded")?;
    let direct = OperatorAssignment::new(vec![
        (LocalOperator::identity(), LocalOperator::pauli_x()),
        (LocalOperator::identity(), LocalOperator::i_sigma_y()),
    ]);
    let g = gram_matrix(&state, &direct).map_err(fail)?.max_off_diagonal();
    ensure(g <= 1e-10, format!("boundary witness max |G| = {g:e}"))?;
    Ok(format!("100 states, worst max|G|={worst:.1e}; beta=1e-9 guarded, boundary witness {g:.1e}"))
}

fn brute_bipartite(n: usize, adj: &[u32]) -> bool {
    if n == 0 {
        return true;
    }
    (0u32..1 << (n - 1)).any(|c| {
        let color = c << 1;
        (0..n).all(|v| {
            let same = if color >> v & 1 == 1 { color } else { !color };
            adj[v] & same == 0
        })
    })
}

fn agrees(n: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    let sys = PhaseConstraintSystem::new(n, edges.iter().copied()).map_err(fail)?;
    let mut adj = vec![0u32; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let fast = phase_system_feasible(&sys).is_feasible();
    ensure(fast == brute_bipartite(n, &adj), format!("disagree on n={n} edges={edges:?}"))
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn edges_of(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect()
}

/// Canonical form: lexicographically smallest edge mask over all relabelings.
fn canonical(n: usize, edges: &[(usize, usize)]) -> u64 {
    let pairs = all_pairs(n);
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mask = edges.iter().fold(0u64, |m, &(a, b)| m | 1 << index(perm[a], perm[b]));
        best = best.min(mask);
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return best;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn criterion_4() -> Outcome {
    let mut checked = 0usize;
    for n in 3..=8 {
        let v = classify_state(&StateFamily::W { n }).map_err(fail)?;
        ensure(v.status == Status::Infeasible && v.certificate.is_some(), format!("W_{n}: {v:?}"))?;
        for m in 1..n {
            if 2 * m == n {
                continue;
            }
            let v = classify_state(&StateFamily::Dicke { n, m }).map_err(fail)?;
            ensure(
                v.status == Status::Infeasible && v.reason == Reason::PhaseContradiction,
                format!("Dicke({n},{m}): {:?}", v.status),
            )?;
            let cycle: Vec<usize> = v.certificate.ok_or("missing certificate")?.iter().map(|p| p - 1).collect();
            let sys = PhaseConstraintSystem::complete(n);
            ensure(
                qgame::classify::certificate_is_contradiction(&sys, &cycle),
                format!("Dicke({n},{m}): bad certificate"),
            )?;
            checked += 1;
        }
    }
    // every labeled graph up to 7 vertices
    let mut graphs = 0usize;
    let mut six_classes = BTreeSet::new();
    for n in 0..=7 {
        let pairs = all_pairs(n);
        for mask in 0u64..1 << pairs.len() {
            let edges = edges_of(&pairs, mask);
            agrees(n, &edges)?;
            if n == 6 {
                six_classes.insert(canonical(6, &edges));
            }
            graphs += 1;
        }
    }
    // every 8-vertex isomorphism class, reached by adding two vertices to
    // each 6-vertex class in all possible ways
    let pairs6 = all_pairs(6);
    let mut extended = 0usize;
    for &rep in &six_classes {
        let base = edges_of(&pairs6, rep);
        for n7 in 0u32..1 << 6 {
            for n8 in 0u32..1 << 7 {
                let mut edges = base.clone();
                edges.extend((0..6).filter(|v| n7 >> v & 1 == 1).map(|v| (v, 6)));
                edges.extend((0..7).filter(|v| n8 >> v & 1 == 1).map(|v| (v, 7)));
                agrees(8, &edges)?;
                extended += 1;
            }
        }
    }
    ensure(six_classes.len() == 156, format!("{} six-vertex classes, expected 156", six_classes.len()))?;
    Ok(format!(
        "{checked} Dicke/W states infeasible with certificates; 2-coloring agrees on {graphs} labeled graphs (n<=7) and {extended} 8-vertex graphs covering all classes"
    ))
}

fn criterion_5() -> Outcome {
    for n in [2usize, 4] {
        let v = classify_state(&StateFamily::Dicke { n, m: n / 2 }).map_err(fail)?;
        ensure(v.status == Status::Feasible, format!("Dicke({n},{}): {:?}", n / 2, v.status))?;
    }
    for n in [6usize, 8] {
        let v = classify_state(&StateFamily::Dicke { n, m: n / 2 }).map_err(fail)?;
        ensure(v.status == Status::Infeasible, format!("Dicke({n},{}): {:?}", n / 2, v.status))?;
    }
    for (n, lhs) in [(6usize, 9.0), (8, 8.0)] {
        let b = bound_check(n).map_err(fail)?;
        ensure(
            (b.lhs - lhs).abs() < 1e-12 && b.max_rhs == 3.0 && b.contradiction,
            format!("bound_check({n}) = {b:?}"),
        )?;
    }
    Ok("N=2,4 feasible; N=6,8 infeasible; bounds (9,3,true) and (8,3,true)".into())
}

fn criterion_6() -> Outcome {
    let e3 = oracle::eq3(1000, 3).map_err(fail)?;
    let e10 = oracle::eq10(1000, 10).map_err(fail)?;
    let e7 = oracle::eq7(16, 7).map_err(fail)?;
    let e12 = oracle::eq12(1000, 12, 6).map_err(fail)?;
    let e13 = oracle::eq13(1000, 13, 6).map_err(fail)?;
    for r in [&e3, &e10, &e7] {
        ensure(r.max_deviation <= 1e-12, format!("{}: deviation {:e}", r.check, r.max_deviation))?;
    }
    for r in [&e12, &e13] {
        ensure(
            r.max_deviation <= 1e-9 && r.zero_set_mismatches == Some(0) && r.constant.is_some(),
            format!("{r:?}"),
        )?;
    }
    ensure(e12.zero_samples.unwrap_or(0) > 0, "eq12 never exercised its zero set")?;
    Ok(format!(
        "eq3 {:.1e}, eq10 {:.1e}, eq7 {:.1e}; eq12 k={:.6} dev {:.1e} ({} zeros); eq13 k={:.6} dev {:.1e}",
        e3.max_deviation,
        e10.max_deviation,
        e7.max_deviation,
        e12.constant.unwrap(),
        e12.max_deviation,
        e12.zero_samples.unwrap(),
        e13.constant.unwrap(),
        e13.max_deviation
    ))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let cfg = SearchConfig {
        starts: 50,
        seed: 2024,
        ..SearchConfig::default()
    };
    let mut summary = Vec::new();
    for (name, state) in [("GHZ_4", ghz(4, FRAC_PI_2)), ("Dicke(4,2)", dicke(4, 2))] {
        let state = state.map_err(fail)?;
        let r = optimize(&state, &cfg).map_err(fail)?;
        ensure(r.converged && r.best_residual <= 1e-9, format!("{name}: J = {:e}", r.best_residual))?;
        summary.push(format!("{name} J={:.1e}", r.best_residual));
    }
    let w3 = dicke(3, 1).map_err(fail)?;
    let cfg_w = SearchConfig { starts: 200, ..cfg };
    let a = optimize(&w3, &cfg_w).map_err(fail)?;
    let b = optimize(&w3, &cfg_w).map_err(fail)?;
    ensure(!a.converged && a.best_residual > 1e-9, format!("W_3 floor {:e}", a.best_residual))?;
    ensure(a == b, "repeat invocation differs")?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1} s"))?;
    summary.push(format!("W_3 floor J={:.6} (repeatable)", a.best_residual));
    Ok(format!("{} in {secs:.1}s", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let w3 = dicke(3, 1).map_err(fail)?;
    let restricted = OperatorAssignment::uniform(3, LocalOperator::identity(), LocalOperator::i_sigma_y());
    let basis = (0..8).map(|k| PureState::basis(3, k)).collect::<Result<Vec<_>, _>>().map_err(fail)?;
    let game = payoff_table(3);
    let mut smallest_max = 1.0f64;
    for k in 0..8 {
        let r = play_quantum(&w3, &restricted.select(k), &basis, &game).map_err(fail)?;
        let sum: f64 = r.distribution.iter().sum();
        ensure((sum - 1.0).abs() <= 1e-10, format!("row {k}: sum {sum}"))?;
        smallest_max = smallest_max.min(r.distribution.iter().cloned().fold(0.0, f64::max));
    }
    ensure(smallest_max < 1.0 - 1e-3, format!("every distribution degenerate ({smallest_max})"))?;
    Ok(format!("smallest max_j p_j = {smallest_max:.6}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let base_state = ghz(3, FRAC_PI_2).map_err(fail)?;
    let base = ghz_witness(3, FRAC_PI_2).map_err(fail)?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let rot: Vec<LocalOperator> = (0..3).map(|_| oracle::random_unitary(&mut rng)).collect();
        let state = base_state.apply_joint(&rot).map_err(fail)?;
        let w = transport_witness(&base, &rot).map_err(fail)?;
        let g = gram_matrix(&state, &w).map_err(fail)?.max_off_diagonal();
        ensure(g <= 1e-10, format!("max |G| = {g:e}"))?;
        worst = worst.max(g);
    }
    Ok(format!("50 rotation sets, worst max|G|={worst:.1e}"))
}

fn main() {
    // `cargo test` passes harness flags; only a listing request needs handling.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [Criterion; 9] = [
        ("GHZ witness reproduces the classical game", criterion_1),
        ("|2,2> witness gives identity Gram", criterion_2),
        ("two-qubit universality", criterion_3),
        ("W/Dicke infeasibility certificates", criterion_4),
        ("half-half theorem encoding", criterion_5),
        ("formula oracles", criterion_6),
        ("search behavior", criterion_7),
        ("probability-distribution fallback", criterion_8),
        ("transport invariance", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
