use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qgame::classify::{classify_state, Status};
use qgame::game::{classical_payoff, play_quantum};
use qgame::oracle::{self, OracleReport};
use qgame::ortho::{gram_matrix, joint_index, referee_projectors, residual_of_relative, GRAM_CAP};
use qgame::search::{optimize, residual_profile, ProfileRow, SearchConfig};
use qgame::states::{dicke, ghz};
use qgame::PureState;
use serde_json::{json, Value};

use crate::error::{exit, CliError, CliResult};
use crate::input::{parse_choices, parse_ns, parse_state_spec, prepare, read_game, read_witness};
use crate::record::RunRecord;

#[derive(Debug, Parser)]
#[command(name = "qgame", version, about = "Distinguishability of classical games under shared entanglement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Decision tolerance on overlaps (or on the residual, for search).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output format; csv is only available for `profile`.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Eq3,
    Eq7,
    Eq10,
    Eq12,
    Eq13,
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    DickeHalf,
    W,
    Ghz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic verdict for a state: dicke:N,m | ghz:N[,phase] | w:N | file:PATH
    Classify { state: String },
    /// Multistart search for a witness
    Search {
        state: String,
        #[arg(long, default_value_t = 50)]
        starts: usize,
        #[arg(long = "max-iter", default_value_t = 4000)]
        max_iter: usize,
    },
    /// Check a witness file against a state
    Verify {
        state: String,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Play one round of the quantum game
    Play {
        state: String,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated choices in {1, 2}, player 1 first
        #[arg(long)]
        choices: String,
        /// Fail unless the witness outputs are orthonormal
        #[arg(long = "require-classical")]
        require_classical: bool,
    },
    /// Closed-form formulas against brute-force overlaps
    Oracle {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Grid steps per phase (eq7)
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Qubit count (eq12, eq13) or number of phases (phase)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Best search residual for a family across qubit counts
    Profile {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated qubit counts
        #[arg(long)]
        ns: String,
        #[arg(long, default_value_t = 50)]
        starts: usize,
        #[arg(long = "max-iter", default_value_t = 4000)]
        max_iter: usize,
    },
}

/// What a command hands back to `main`.
pub struct Output {
    pub record: RunRecord,
    pub exit_code: i32,
    /// Replaces the JSON record on stdout when set.
    pub csv: Option<String>,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn check_tol(tol: f64) -> CliResult<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let started = Instant::now();
    if cli.out == OutFormat::Csv && !matches!(cli.command, Command::Profile { .. }) {
        return Err(CliError::Usage("--out csv is only supported by profile".into()));
    }
    let tol = check_tol(cli.tol.unwrap_or(qgame::FEASIBILITY_TOL))?;
    let (name, inputs, result, code, seed, csv) = match &cli.command {
        Command::Classify { state } => {
            let verdict = classify_state(&parse_state_spec(state)?)?;
            let code = match verdict.status {
                Status::Feasible => exit::OK,
                Status::Infeasible => exit::INFEASIBLE,
                Status::Undetermined => exit::UNDETERMINED,
            };
            ("classify", json!({ "state": state }), to_value(&verdict), code, None, None)
        }
        Command::Search {
            state,
            starts,
            max_iter,
        } => {
            let psi = prepare(&parse_state_spec(state)?)?;
            let config = SearchConfig {
                starts: *starts,
                max_iterations: *max_iter,
                feasibility_tol: tol,
                seed: cli.seed,
            };
            let r = optimize(&psi, &config)?;
            let code = if r.converged { exit::OK } else { exit::UNDETERMINED };
            (
                "search",
                json!({ "state": state, "config": config }),
                to_value(&r),
                code,
                Some(cli.seed),
                None,
            )
        }
        Command::Verify { state, witness } => {
            let psi = prepare(&parse_state_spec(state)?)?;
            let w = read_witness(witness, psi.n_qubits())?;
            let (worst, method) = if psi.n_qubits() <= GRAM_CAP {
                (gram_matrix(&psi, &w)?.max_off_diagonal(), "gram")
            } else {
                (residual_of_relative(&psi, w.relative())?.sqrt(), "residual-bound")
            };
            let pass = worst <= tol;
            let result = json!({ "pass": pass, "max_off_diagonal": worst, "tol": tol, "method": method });
            let inputs = json!({ "state": state, "witness": witness });
            ("verify", inputs, result, if pass { exit::OK } else { exit::UNDETERMINED }, None, None)
        }
        Command::Play {
            state,
            witness,
            game,
            choices,
            require_classical,
        } => {
            let psi = prepare(&parse_state_spec(state)?)?;
            let w = read_witness(witness, psi.n_qubits())?;
            let g = read_game(game)?;
            let choices = parse_choices(choices)?;
            if choices.len() != psi.n_qubits() {
                return Err(CliError::Usage(format!(
                    "{} choices for {} players",
                    choices.len(),
                    psi.n_qubits()
                )));
            }
            let k = joint_index(&choices)?.k();
            let (projectors, measurement) = match referee_projectors(&psi, &w, tol) {
                Ok(p) => (p, "referee"),
                Err(e @ qgame::Error::NotDistinguishable(_)) if *require_classical => return Err(e.into()),
                Err(qgame::Error::NotDistinguishable(_)) => (
                    (0..psi.dim())
                        .map(|j| PureState::basis(psi.n_qubits(), j))
                        .collect::<qgame::Result<Vec<_>>>()?,
                    "computational",
                ),
                Err(e) => return Err(e.into()),
            };
            let r = play_quantum(&psi, &w.select(k), &projectors, &g)?;
            let result = json!({
                "k": k,
                "measurement": measurement,
                "distribution": r.distribution,
                "expected_payoffs": r.expected_payoffs,
                "classical_payoffs": classical_payoff(&g, &choices)?,
            });
            let inputs = json!({ "state": state, "witness": witness, "game": game, "choices": choices });
            ("play", inputs, result, exit::OK, None, None)
        }
        Command::Oracle { check, samples, steps, n } => {
            let report = run_oracle(*check, *samples, *steps, *n, cli.seed)?;
            let code = if oracle_passes(*check, &report) { exit::OK } else { exit::UNDETERMINED };
            let inputs = json!({ "check": check_name(*check), "samples": samples, "steps": steps, "n": n });
            ("oracle", inputs, to_value(&report), code, Some(cli.seed), None)
        }
        Command::Profile {
            family,
            ns,
            starts,
            max_iter,
        } => {
            let ns = parse_ns(ns)?;
            let config = SearchConfig {
                starts: *starts,
                max_iterations: *max_iter,
                feasibility_tol: tol,
                seed: cli.seed,
            };
            let rows = match family {
                Family::DickeHalf => residual_profile(|n| dicke(n, n / 2), &ns, &config)?,
                Family::W => residual_profile(|n| dicke(n, 1), &ns, &config)?,
                Family::Ghz => residual_profile(|n| ghz(n, FRAC_PI_2), &ns, &config)?,
            };
            let csv = (cli.out == OutFormat::Csv).then(|| profile_csv(&rows));
            let inputs = json!({ "family": family_name(*family), "ns": ns, "config": config });
            ("profile", inputs, to_value(&rows), exit::OK, Some(cli.seed), csv)
        }
    };
    let record = RunRecord::new(name, inputs, result, started.elapsed().as_secs_f64(), seed);
    Ok(Output {
        record,
        exit_code: code,
        csv,
    })
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Eq3 => "eq3",
        Check::Eq7 => "eq7",
        Check::Eq10 => "eq10",
        Check::Eq12 => "eq12",
        Check::Eq13 => "eq13",
        Check::Phase => "phase",
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::DickeHalf => "dicke-half",
        Family::W => "w",
        Family::Ghz => "ghz",
    }
}

fn run_oracle(check: Check, samples: usize, steps: usize, n: Option<usize>, seed: u64) -> CliResult<OracleReport> {
    Ok(match check {
        Check::Eq3 => oracle::eq3(samples, seed)?,
        Check::Eq10 => oracle::eq10(samples, seed)?,
        Check::Eq7 => oracle::eq7(steps, seed)?,
        Check::Eq12 => oracle::eq12(samples, seed, n.unwrap_or(6))?,
        Check::Eq13 => oracle::eq13(samples, seed, n.unwrap_or(6))?,
        Check::Phase => oracle::phase(n.unwrap_or(3))?,
    })
}

fn oracle_passes(check: Check, r: &OracleReport) -> bool {
    match check {
        Check::Eq3 | Check::Eq7 | Check::Eq10 => r.max_deviation <= 1e-12,
        Check::Eq12 | Check::Eq13 => r.max_deviation <= 1e-9 && r.zero_set_mismatches == Some(0),
        Check::Phase => r.max_deviation == 0.0,
    }
}

fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut s = String::from("n,best_residual,converged\n");
    for r in rows {
        s.push_str(&format!("{},{:e},{}\n", r.n, r.best_residual, r.converged));
    }
    s
}
