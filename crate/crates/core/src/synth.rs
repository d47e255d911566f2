//! One entry point over both engines.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::decomp::{check_singletons, solve_decomposed, Decision, DecompError, SubgameStats};
use crate::game::{GameStructure, StateSet};
use crate::solver::{check_realizable, solve_gr1, Verdict};
use crate::strategy::StrategyAutomaton;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Decompose when every guarantee is a single state, else monolithic.
    Auto,
    Monolithic,
    Decomposed,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "monolithic" => Ok(Mode::Monolithic),
            "decomposed" => Ok(Mode::Decomposed),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Monolithic,
    Decomposed,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Monolithic => "monolithic",
            Engine::Decomposed => "decomposed",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub engine: Engine,
    pub verdict: Verdict,
    /// Present when realizable.
    pub strategy: Option<StrategyAutomaton>,
    /// The winning set computed (monolithic) or certified (decomposed).
    pub winning: StateSet,
    /// Outer iterations of the monolithic solver.
    pub z_iterations: Option<usize>,
    /// μ layers per reach game: per guarantee (monolithic, final round) or
    /// per solved subgame (decomposed).
    pub reach_iterations: Vec<usize>,
    pub subgames: Vec<SubgameStats>,
    pub decision: Option<Decision>,
    /// Wall-clock time of the solver call, strategy extraction included.
    pub millis: f64,
}

pub fn synthesize(
    game: &GameStructure,
    mode: Mode,
    workers: usize,
) -> Result<SynthesisResult, DecompError> {
    let start = Instant::now();
    let singletons = match mode {
        Mode::Monolithic => None,
        Mode::Decomposed => Some(check_singletons(game)?),
        Mode::Auto => check_singletons(game).ok(),
    };
    let Some(sm) = singletons else {
        let sol = solve_gr1(game);
        let verdict = check_realizable(game, &sol.winning);
        let realizable = verdict.is_realizable();
        return Ok(SynthesisResult {
            engine: Engine::Monolithic,
            verdict,
            strategy: realizable.then_some(sol.strategy),
            winning: sol.winning,
            z_iterations: Some(sol.z_iterations),
            reach_iterations: sol.reach_iterations,
            subgames: Vec::new(),
            decision: None,
            millis: start.elapsed().as_secs_f64() * 1e3,
        });
    };
    let res = solve_decomposed(game, &sm, workers);
    Ok(SynthesisResult {
        engine: Engine::Decomposed,
        verdict: res.verdict,
        strategy: res.strategy,
        winning: res.winning,
        z_iterations: None,
        reach_iterations: res.stats.iter().map(|s| s.iterations).collect(),
        subgames: res.stats,
        decision: Some(res.decision),
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Worker count used when none is given: one per subgame, capped by the
/// available cores.
pub fn default_workers(n_goals: usize) -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    (n_goals + 1).min(cores).max(1)
}
