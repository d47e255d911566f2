//! JSON exchange format for strategies.
//!
//! ```json
//! {
//!   "variables": [{"name": "e", "owner": "env", "type": "bool"}, ...],
//!   "memory_values": 2,
//!   "initial_memory": 1,
//!   "table": [[0, {"e": 0, "s": 0}, {"e": 1}, 0, {"s": 1}], ...]
//! }
//! ```
//!
//! Each row is (memory, current state, next input, next memory, next
//! output). Rows are sorted by memory, state and input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::StrategyAutomaton;
use crate::expr::{Domain, Owner, VarDecl};
use crate::game::GameStructure;

type Valuation = BTreeMap<String, i64>;

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum OwnerTag {
    Env,
    Sys,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "lowercase")]
enum TypeTag {
    Bool,
    Int { lo: i64, hi: i64 },
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct VarEntry {
    name: String,
    owner: OwnerTag,
    #[serde(flatten)]
    ty: TypeTag,
}

#[derive(Serialize, Deserialize, Debug)]
struct StrategyFile {
    variables: Vec<VarEntry>,
    memory_values: u32,
    initial_memory: u32,
    table: Vec<(u32, Valuation, Valuation, u32, Valuation)>,
}

#[derive(Debug, Error)]
pub enum StrategyFileError {
    #[error("malformed strategy file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("strategy variables do not match the game: {0}")]
    VariableMismatch(String),
    #[error("row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error("initial memory {0} out of range")]
    BadMemory(u32),
}

fn entry(v: &VarDecl) -> VarEntry {
    VarEntry {
        name: v.name.clone(),
        owner: match v.owner {
            Owner::Env => OwnerTag::Env,
            Owner::Sys => OwnerTag::Sys,
        },
        ty: match v.domain {
            Domain::Bool => TypeTag::Bool,
            Domain::Int { lo, hi } => TypeTag::Int { lo, hi },
        },
    }
}

fn valuation(vars: &[VarDecl], values: &[i64]) -> Valuation {
    vars.iter()
        .zip(values)
        .map(|(v, &x)| (v.name.clone(), x))
        .collect()
}

/// Serialises `strat` (built for `game`) as JSON.
pub fn export_strategy(game: &GameStructure, strat: &StrategyAutomaton) -> String {
    let vars = game.vars();
    let ne = game.num_env_vars();
    let table = strat
        .transitions(game)
        .map(|t| {
            (
                t.memory,
                valuation(vars, &game.decode(t.state)),
                valuation(&vars[..ne], &game.decode_input(t.input)),
                t.next_memory,
                valuation(&vars[ne..], &game.decode_output(t.output)),
            )
        })
        .collect();
    let file = StrategyFile {
        variables: vars.iter().map(entry).collect(),
        memory_values: strat.memory_values(),
        initial_memory: strat.initial_memory(),
        table,
    };
    serde_json::to_string_pretty(&file).expect("strategy serialises")
}

fn values_of(vars: &[VarDecl], val: &Valuation, what: &str) -> Result<Vec<i64>, String> {
    if val.len() != vars.len() {
        return Err(format!(
            "{what} has {} values, expected {}",
            val.len(),
            vars.len()
        ));
    }
    vars.iter()
        .map(|v| {
            let x = *val
                .get(&v.name)
                .ok_or_else(|| format!("{what} lacks `{}`", v.name))?;
            if v.domain.contains(x) {
                Ok(x)
            } else {
                Err(format!("{what}: `{}` = {x} is out of range", v.name))
            }
        })
        .collect()
}

/// Reads a strategy for `game`, checking that the variables agree and that
/// every row pairs a valid input with a valid output.
pub fn import_strategy(
    game: &GameStructure,
    text: &str,
) -> Result<StrategyAutomaton, StrategyFileError> {
    let file: StrategyFile = serde_json::from_str(text)?;
    let expected: Vec<VarEntry> = game.vars().iter().map(entry).collect();
    if file.variables != expected {
        let names = |vs: &[VarEntry]| {
            vs.iter()
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        };
        return Err(StrategyFileError::VariableMismatch(format!(
            "file has [{}], game has [{}]",
            names(&file.variables),
            names(&expected)
        )));
    }
    if file.memory_values == 0 || file.initial_memory >= file.memory_values {
        return Err(StrategyFileError::BadMemory(file.initial_memory));
    }
    let vars = game.vars();
    let ne = game.num_env_vars();
    let mut a = StrategyAutomaton::new(game, file.memory_values, file.initial_memory);
    for (row, (m, sv, xv, m2, yv)) in file.table.iter().enumerate() {
        let bad = |reason: String| StrategyFileError::BadRow { row, reason };
        if *m >= file.memory_values || *m2 >= file.memory_values {
            return Err(bad("memory value out of range".into()));
        }
        let s = game
            .encode(&values_of(vars, sv, "state").map_err(bad)?)
            .expect("checked domains");
        let x = game
            .encode_input(&values_of(&vars[..ne], xv, "input").map_err(bad)?)
            .expect("checked domains");
        let y = game
            .encode_output(&values_of(&vars[ne..], yv, "output").map_err(bad)?)
            .expect("checked domains");
        let Some(e) = game.find_entry(s, x) else {
            return Err(bad("input is not valid at the state".into()));
        };
        if game.entry_outputs(e).binary_search(&y).is_err() {
            return Err(bad("output is not valid for the state and input".into()));
        }
        a.set_entry(*m, e, *m2, y);
    }
    Ok(a)
}
