//! Multistart Nelder-Mead search for witness operators.
//!
//! Only the relative operators `m_i = u_i†v_i` enter the Gram matrix, so the
//! search fixes `u_i = I` and optimizes three angles per player,
//! `m(θ, μ, ν) = [[cosθ e^{iμ}, sinθ e^{iν}], [-sinθ e^{-iν}, cosθ e^{-iμ}]]`.
//! A converged search yields a witness; a failed one is only evidence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ortho::{residual_serial, OperatorAssignment};
use crate::qcore::{LocalOperator, PureState};
use crate::FEASIBILITY_TOL;

/// Starts are run in fixed-size batches; the search stops after the first
/// batch containing a converged start, independent of thread count.
pub const START_BATCH: usize = 8;

pub const MAX_SEARCH_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iterations: usize,
    pub feasibility_tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            max_iterations: 4000,
            feasibility_tol: FEASIBILITY_TOL,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartOutcome {
    pub start: usize,
    pub residual: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_residual: f64,
    pub best_start: usize,
    /// `(θ, μ, ν)` per player for the best start.
    pub best_angles: Vec<[f64; 3]>,
    pub best_relative: Vec<LocalOperator>,
    pub starts_completed: usize,
    pub converged: bool,
    pub per_start: Vec<StartOutcome>,
}

/// Relative operators from a flat `[θ_1, μ_1, ν_1, θ_2, …]` vector.
pub fn relative_from_angles(x: &[f64]) -> Vec<LocalOperator> {
    x.chunks_exact(3).map(|a| LocalOperator::su2(a[0], a[1], a[2])).collect()
}

/// Independent random stream for one start.
fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    rng
}

fn initial_point(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n)
        .flat_map(|_| {
            let theta = rng.random_range(0.0..PI);
            let mu = rng.random_range(-PI..PI);
            let nu = rng.random_range(-PI..PI);
            [theta, mu, nu]
        })
        .collect()
}

struct StartRun {
    x: Vec<f64>,
    outcome: StartOutcome,
    trace: Vec<f64>,
}

fn run_start(psi: &[num_complex::Complex64], n: usize, config: &SearchConfig, start: usize) -> StartRun {
    let mut rng = start_rng(config.seed, start);
    let x0 = initial_point(n, &mut rng);
    let objective = |x: &[f64]| residual_serial(psi, &relative_from_angles(x));
    // Stop once max |G_αβ| ≤ √J ≤ tol is guaranteed.
    let target = config.feasibility_tol * config.feasibility_tol;
    let nm = nelder_mead::minimize(objective, &x0, 0.6, target, config.max_iterations);
    StartRun {
        outcome: StartOutcome {
            start,
            residual: nm.f,
            iterations: nm.iterations,
            evaluations: nm.evaluations,
        },
        x: nm.x,
        trace: nm.trace,
    }
}

fn check_config(state: &PureState, config: &SearchConfig) -> Result<()> {
    let n = state.n_qubits();
    if !(2..=MAX_SEARCH_QUBITS).contains(&n) {
        return Err(Error::OverCap {
            n,
            cap: MAX_SEARCH_QUBITS,
        });
    }
    if config.starts == 0 {
        return Err(Error::InvalidArgument("search needs at least one start".into()));
    }
    if !(config.feasibility_tol > 0.0) {
        return Err(Error::InvalidArgument("feasibility tolerance must be positive".into()));
    }
    Ok(())
}

/// Runs up to `config.starts` local searches and keeps the lowest residual
/// (lowest start index on ties).
pub fn optimize(state: &PureState, config: &SearchConfig) -> Result<SearchResult> {
    check_config(state, config)?;
    let n = state.n_qubits();
    let psi = state.amplitudes();
    let mut runs: Vec<StartRun> = Vec::with_capacity(config.starts);
    let mut next = 0;
    while next < config.starts {
        let end = (next + START_BATCH).min(config.starts);
        let batch: Vec<StartRun> = (next..end)
            .into_par_iter()
            .map(|s| run_start(psi, n, config, s))
            .collect();
        let hit = batch.iter().any(|r| r.outcome.residual <= config.feasibility_tol);
        runs.extend(batch);
        next = end;
        if hit {
            break;
        }
    }
    let best = runs
        .iter()
        .min_by(|a, b| {
            a.outcome
                .residual
                .total_cmp(&b.outcome.residual)
                .then(a.outcome.start.cmp(&b.outcome.start))
        })
        .expect("at least one start");
    let best_angles: Vec<[f64; 3]> = best.x.chunks_exact(3).map(|a| [a[0], a[1], a[2]]).collect();
    Ok(SearchResult {
        best_residual: best.outcome.residual,
        best_start: best.outcome.start,
        best_relative: relative_from_angles(&best.x),
        best_angles,
        starts_completed: runs.len(),
        converged: best.outcome.residual <= config.feasibility_tol,
        per_start: runs.iter().map(|r| r.outcome.clone()).collect(),
    })
}

/// Best-residual trajectory of a single start, one entry per iteration.
pub fn start_trace(state: &PureState, config: &SearchConfig, start: usize) -> Result<Vec<f64>> {
    check_config(state, config)?;
    Ok(run_start(state.amplitudes(), state.n_qubits(), config, start).trace)
}

/// `u_i = I`, `v_i = m_i` from a converged search.
pub fn extract_witness(result: &SearchResult) -> Result<OperatorAssignment> {
    if !result.converged {
        return Err(Error::NotConverged(result.best_residual));
    }
    Ok(OperatorAssignment::from_relative(result.best_relative.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub best_residual: f64,
    pub converged: bool,
}

/// One [`optimize`] run per qubit count.
pub fn residual_profile<F>(family: F, ns: &[usize], config: &SearchConfig) -> Result<Vec<ProfileRow>>
where
    F: Fn(usize) -> Result<PureState>,
{
    ns.iter()
        .map(|&n| {
            let r = optimize(&family(n)?, config)?;
            Ok(ProfileRow {
                n,
                best_residual: r.best_residual,
                converged: r.converged,
            })
        })
        .collect()
}

mod nelder_mead {
    //! Adaptive-parameter Nelder-Mead with restarts around the incumbent.

    pub(super) struct Outcome {
        pub x: Vec<f64>,
        pub f: f64,
        pub iterations: usize,
        pub evaluations: usize,
        pub trace: Vec<f64>,
    }

    const MAX_RESTARTS: usize = 12;

    pub(super) fn minimize<F>(f: F, x0: &[f64], step: f64, target: f64, max_iter: usize) -> Outcome
    where
        F: Fn(&[f64]) -> f64,
    {
        let d = x0.len();
        let df = d as f64;
        let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / df, 0.75 - 0.5 / df, 1.0 - 1.0 / df);
        let mut evals = 0usize;
        let mut eval = |x: &[f64]| {
            evals += 1;
            f(x)
        };

        let mut best_x = x0.to_vec();
        let mut best_f = eval(x0);
        let mut trace = Vec::new();
        let mut iter = 0usize;
        let mut scale = step;

        for _ in 0..=MAX_RESTARTS {
            if best_f <= target || iter >= max_iter {
                break;
            }
            let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
            simplex.push((best_x.clone(), best_f));
            for i in 0..d {
                let mut x = best_x.clone();
                x[i] += scale;
                let fx = eval(&x);
                simplex.push((x, fx));
            }
            sort(&mut simplex);

            while iter < max_iter && simplex[0].1 > target {
                iter += 1;
                let centroid: Vec<f64> = (0..d)
                    .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / df)
                    .collect();
                let worst = simplex[d].clone();
                let along = |t: f64| -> Vec<f64> {
                    centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
                };
                let xr = along(alpha);
                let fr = eval(&xr);
                if fr < simplex[0].1 {
                    let xe = along(alpha * gamma);
                    let fe = eval(&xe);
                    simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
                } else if fr < simplex[d - 1].1 {
                    simplex[d] = (xr, fr);
                } else {
                    let (xc, fc) = if fr < worst.1 {
                        let xc = along(alpha * rho);
                        let fc = eval(&xc);
                        (xc, fc)
                    } else {
                        let xc = along(-rho);
                        let fc = eval(&xc);
                        (xc, fc)
                    };
                    if fc < fr.min(worst.1) {
                        simplex[d] = (xc, fc);
                    } else {
                        let x_best = simplex[0].0.clone();
                        for vertex in simplex.iter_mut().skip(1) {
                            let x: Vec<f64> = x_best
                                .iter()
                                .zip(&vertex.0)
                                .map(|(b, v)| b + sigma * (v - b))
                                .collect();
                            let fx = eval(&x);
                            *vertex = (x, fx);
                        }
                    }
                }
                sort(&mut simplex);
                trace.push(simplex[0].1);

                let spread = simplex[d].1 - simplex[0].1;
                let diameter = simplex
                    .iter()
                    .skip(1)
                    .map(|(x, _)| {
                        x.iter()
                            .zip(&simplex[0].0)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                if diameter < 1e-13 || spread <= 1e-16 * simplex[0].1.abs() && diameter < 1e-8 {
                    break;
                }
            }
            if simplex[0].1 < best_f || (simplex[0].1 == best_f && simplex[0].0 != best_x) {
                best_x = simplex[0].0.clone();
                best_f = simplex[0].1;
            }
            scale = (scale * 0.25).max(1e-6);
        }
        Outcome {
            x: best_x,
            f: best_f,
            iterations: iter,
            evaluations: evals,
            trace,
        }
    }

    fn sort(simplex: &mut [(Vec<f64>, f64)]) {
        // stable, so ties keep insertion order
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn minimizes_a_shifted_quadratic() {
            let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2) + (x[2] - 0.5).powi(2);
            let out = minimize(f, &[0.0, 0.0, 0.0], 0.5, 1e-20, 5000);
            assert!(out.f <= 1e-20, "{}", out.f);
            assert!((out.x[0] - 1.0).abs() < 1e-9);
        }

        #[test]
        fn rosenbrock() {
            let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
            let out = minimize(f, &[-1.2, 1.0], 0.5, 1e-16, 10_000);
            assert!(out.f < 1e-12, "{}", out.f);
        }

        #[test]
        fn trace_is_monotone() {
            let f = |x: &[f64]| x.iter().map(|v| v.sin().powi(2) + 0.1 * v * v).sum::<f64>();
            let out = minimize(f, &[1.0, -2.0, 0.3, 2.5], 0.5, 0.0, 2000);
            for w in out.trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-15);
            }
        }
    }
}
