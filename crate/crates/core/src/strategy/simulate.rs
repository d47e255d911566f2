//! Playing a strategy against an environment.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::StrategyAutomaton;
use crate::expr::Owner;
use crate::game::{GameStructure, InputIndex, OutputIndex, StateIndex};

/// Why a play stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The environment policy stopped (script exhausted or the player quit).
    Running,
    /// No valid input exists; the system wins.
    EnvDeadlock,
    /// The strategy had no valid answer; the strategy is faulty.
    SysUndefined,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayTrace {
    /// `states[k]` is the state before step k; one more state than steps.
    pub states: Vec<StateIndex>,
    pub memory: Vec<u32>,
    pub inputs: Vec<InputIndex>,
    pub outputs: Vec<OutputIndex>,
    pub termination: Termination,
}

impl PlayTrace {
    pub fn steps(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("start state {0} does not satisfy the initial condition")]
    BadStart(StateIndex),
    #[error("step {step}: input is not valid at the current state")]
    InvalidInput { step: usize, input: InputIndex },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Chooses environment inputs.
pub trait EnvPolicy {
    /// The input for step `step` at `state`. `valid` is nonempty. `None`
    /// stops the play.
    fn choose(
        &mut self,
        game: &GameStructure,
        step: usize,
        state: StateIndex,
        valid: &[InputIndex],
    ) -> Result<Option<InputIndex>, SimError>;

    /// Called after the system answers.
    fn observe(&mut self, _game: &GameStructure, _output: OutputIndex, _next: StateIndex) {}
}

/// Uniformly random valid inputs, reproducible from a seed.
pub struct RandomEnv {
    rng: ChaCha8Rng,
}

impl RandomEnv {
    pub fn new(seed: u64) -> Self {
        RandomEnv {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl EnvPolicy for RandomEnv {
    fn choose(
        &mut self,
        _: &GameStructure,
        _: usize,
        _: StateIndex,
        valid: &[InputIndex],
    ) -> Result<Option<InputIndex>, SimError> {
        Ok(valid.choose(&mut self.rng).copied())
    }
}

/// A fixed sequence of inputs; stops when exhausted.
pub struct ScriptedEnv {
    inputs: Vec<InputIndex>,
}

impl ScriptedEnv {
    pub fn new(inputs: Vec<InputIndex>) -> Self {
        ScriptedEnv { inputs }
    }
}

impl EnvPolicy for ScriptedEnv {
    fn choose(
        &mut self,
        _: &GameStructure,
        step: usize,
        _: StateIndex,
        valid: &[InputIndex],
    ) -> Result<Option<InputIndex>, SimError> {
        match self.inputs.get(step) {
            None => Ok(None),
            Some(&x) if valid.binary_search(&x).is_ok() => Ok(Some(x)),
            Some(&x) => Err(SimError::InvalidInput { step, input: x }),
        }
    }
}

/// A human at a terminal. Shows the state and the valid inputs, reads a
/// choice by number or as `name=value` pairs, and re-prompts on bad input.
/// `q` or end of input stops the play.
pub struct TerminalEnv<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> TerminalEnv<R, W> {
    pub fn new(input: R, output: W) -> Self {
        TerminalEnv { input, output }
    }
}

impl<R: BufRead, W: Write> EnvPolicy for TerminalEnv<R, W> {
    fn choose(
        &mut self,
        game: &GameStructure,
        step: usize,
        state: StateIndex,
        valid: &[InputIndex],
    ) -> Result<Option<InputIndex>, SimError> {
        writeln!(self.output, "step {step}: {}", game.format_state(state))?;
        for (k, &x) in valid.iter().enumerate() {
            let vals = game.decode_input(x);
            writeln!(
                self.output,
                "  [{k}] {}",
                game.format_values(&vals, Some(Owner::Env))
            )?;
        }
        loop {
            write!(self.output, "input> ")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Ok(None);
            }
            let line = line.trim();
            if line == "q" || line == "quit" {
                return Ok(None);
            }
            let picked = match line.parse::<usize>() {
                Ok(k) => valid.get(k).copied(),
                Err(_) => parse_input(game, line).filter(|x| valid.contains(x)),
            };
            match picked {
                Some(x) => return Ok(Some(x)),
                None => writeln!(self.output, "not a valid input here, try again")?,
            }
        }
    }

    fn observe(&mut self, game: &GameStructure, output: OutputIndex, _next: StateIndex) {
        let vals = game.decode_output(output);
        let names = &game.vars()[game.num_env_vars()..];
        let text: Vec<String> = names
            .iter()
            .zip(&vals)
            .map(|(v, val)| format!("{}={}", v.name, val))
            .collect();
        let _ = writeln!(self.output, "system: {}", text.join(" "));
    }
}

/// Parses `name=value` pairs (separated by spaces or commas) assigning every
/// environment variable.
pub fn parse_input(game: &GameStructure, text: &str) -> Option<InputIndex> {
    let ne = game.num_env_vars();
    let mut vals: Vec<Option<i64>> = vec![None; ne];
    for part in text.split([' ', ',', '\t']).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=')?;
        let idx = game.vars()[..ne]
            .iter()
            .position(|v| v.name == name.trim())?;
        vals[idx] = Some(value.trim().parse().ok()?);
    }
    let vals: Option<Vec<i64>> = vals.into_iter().collect();
    game.encode_input(&vals?)
}

/// Plays `strat` from `start` for at most `max_steps` steps.
pub fn simulate(
    game: &GameStructure,
    strat: &StrategyAutomaton,
    start: StateIndex,
    env: &mut dyn EnvPolicy,
    max_steps: usize,
) -> Result<PlayTrace, SimError> {
    if !game.init().contains(start) {
        return Err(SimError::BadStart(start));
    }
    let mut trace = PlayTrace {
        states: vec![start],
        memory: vec![strat.initial_memory()],
        inputs: Vec::new(),
        outputs: Vec::new(),
        termination: Termination::StepLimit,
    };
    let (mut s, mut m) = (start, strat.initial_memory());
    for step in 0..max_steps {
        let valid = game.valid_inputs(s);
        if valid.is_empty() {
            trace.termination = Termination::EnvDeadlock;
            return Ok(trace);
        }
        let Some(x) = env.choose(game, step, s, valid)? else {
            trace.termination = Termination::Running;
            return Ok(trace);
        };
        let Some((m2, y)) = strat
            .step(game, m, s, x)
            .filter(|&(_, y)| game.is_valid_output(s, x, y))
        else {
            trace.inputs.push(x);
            trace.termination = Termination::SysUndefined;
            return Ok(trace);
        };
        s = game.successor(x, y);
        m = m2;
        env.observe(game, y, s);
        trace.inputs.push(x);
        trace.outputs.push(y);
        trace.states.push(s);
        trace.memory.push(m);
    }
    Ok(trace)
}
