//! State specs (`dicke:N,m`, `ghz:N[,phase]`, `w:N`, `file:PATH`) and the
//! JSON file formats for states, witnesses and games.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use num_complex::Complex64;
use qgame::game::GameSpec;
use qgame::ortho::OperatorAssignment;
use qgame::states::StateFamily;
use qgame::PureState;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `{"n": N, "amplitudes": [[re, im], ...]}`, little-endian basis order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn numbers<T: std::str::FromStr>(spec: &str, body: &str) -> CliResult<Vec<T>> {
    body.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("cannot parse '{t}' in state spec '{spec}'")))
        })
        .collect()
}

/// Parses a state spec. GHZ defaults to phase `π/2`; a two-qubit file
/// becomes the two-qubit family, any other file a custom state.
pub fn parse_state_spec(spec: &str) -> CliResult<StateFamily> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("state spec '{spec}' lacks a 'kind:' prefix")))?;
    let arity = |got: usize, allowed: &[usize]| {
        if allowed.contains(&got) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("wrong number of parameters in '{spec}'")))
        }
    };
    match kind {
        "dicke" => {
            let v: Vec<usize> = numbers(spec, body)?;
            arity(v.len(), &[2])?;
            Ok(StateFamily::Dicke { n: v[0], m: v[1] })
        }
        "w" => {
            let v: Vec<usize> = numbers(spec, body)?;
            arity(v.len(), &[1])?;
            Ok(StateFamily::W { n: v[0] })
        }
        "ghz" => {
            let parts: Vec<&str> = body.split(',').collect();
            arity(parts.len(), &[1, 2])?;
            let n: Vec<usize> = numbers(spec, parts[0])?;
            let phase = match parts.get(1) {
                Some(p) => numbers::<f64>(spec, p)?[0],
                None => FRAC_PI_2,
            };
            Ok(StateFamily::Ghz { n: n[0], phase })
        }
        "file" => {
            let file: StateFile = read_json(Path::new(body))?;
            let state = PureState::new(file.n, file.amplitudes)?;
            if state.n_qubits() == 2 {
                Ok(StateFamily::TwoQubit { state })
            } else {
                Ok(StateFamily::Custom {
                    state,
                    source: Some(body.to_string()),
                })
            }
        }
        other => Err(CliError::Usage(format!("unknown state kind '{other}'"))),
    }
}

/// Prepares the state, mapping constructor argument errors to usage errors.
pub fn prepare(family: &StateFamily) -> CliResult<PureState> {
    Ok(family.prepare()?)
}

pub fn read_witness(path: &Path, n: usize) -> CliResult<OperatorAssignment> {
    let w: OperatorAssignment = read_json(path)?;
    if w.n_players() != n {
        return Err(CliError::Data(format!("witness has {} players, state has {n}", w.n_players())));
    }
    Ok(w)
}

pub fn read_game(path: &Path) -> CliResult<GameSpec> {
    let g: GameSpec = read_json(path)?;
    g.validate()?;
    Ok(g)
}

pub fn parse_choices(text: &str) -> CliResult<Vec<u8>> {
    text.split(',')
        .map(|t| match t.trim() {
            "1" => Ok(1),
            "2" => Ok(2),
            other => Err(CliError::Usage(format!("choice '{other}' is not 1 or 2"))),
        })
        .collect()
}

pub fn parse_ns(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad qubit count '{t}'"))))
        .collect()
}
