//! Decomposition of GR(1) games whose guarantees are single states.
//!
//! When every guarantee ψ_i holds in exactly one state g_i, the game splits
//! into n + 1 reachability games over the same arena:
//!
//! * subgame 0 has an empty target and starts from θ; it is won only by
//!   starving some environment assumption;
//! * subgame j (1 ≤ j ≤ n) targets g_{j⊕1} and starts from g_j, plus θ when
//!   j = n.
//!
//! Subgames are independent and may be solved in parallel. If θ is inside
//! the blocking region the blocking strategy wins outright. Otherwise, if
//! each subgame is winnable from its start, the strategies are chained by a
//! counter over {1, …, n}: starting at n, the counter advances on reaching
//! the next goal and the matching subgame strategy takes over.
//!
//! A goal state counts as a winning start of its subgame when it lies in
//! ⊛W_j, where W_j is the subgame's winning set. With two or more goals this
//! is the same as g_j ∈ W_j. With a single goal, subgame 1 both starts and
//! ends at g_1, and the condition asks the system to come back to g_1
//! rather than merely stand on it.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use thiserror::Error;

use crate::game::{GameStructure, InputIndex, StateIndex, StateSet};
use crate::solver::{
    check_realizable, solve_reachability, ReachSolution, ReachabilityGame, Verdict,
};
use crate::strategy::StrategyAutomaton;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("the specification has no guarantees to decompose")]
    NoGoals,
    #[error("guarantee {goal} holds in {cardinality} states, not exactly one")]
    NotSingleton { goal: usize, cardinality: usize },
}

/// The goal state of each guarantee, with duplicates merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingletonMap {
    /// Distinct goal states, in order of first occurrence.
    pub goals: Vec<StateIndex>,
    /// For each original guarantee, its position in `goals`.
    pub merged_from: Vec<usize>,
}

impl SingletonMap {
    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }
}

pub fn check_singletons(game: &GameStructure) -> Result<SingletonMap, DecompError> {
    if game.sys_goals().is_empty() {
        return Err(DecompError::NoGoals);
    }
    let mut goals = Vec::new();
    let mut merged_from = Vec::new();
    for (i, set) in game.sys_goals().iter().enumerate() {
        let cardinality = set.count();
        if cardinality != 1 {
            return Err(DecompError::NotSingleton {
                goal: i + 1,
                cardinality,
            });
        }
        let g = set.first().expect("nonempty");
        let pos = goals.iter().position(|&h| h == g).unwrap_or_else(|| {
            goals.push(g);
            goals.len() - 1
        });
        merged_from.push(pos);
    }
    Ok(SingletonMap { goals, merged_from })
}

/// Target and initial set of one subgame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgame {
    pub target: StateSet,
    pub init: StateSet,
}

/// The n + 1 subgames; index 0 is the blocking game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPlan {
    pub subgames: Vec<Subgame>,
    pub goals: Vec<StateIndex>,
}

impl DecompositionPlan {
    /// Number of (merged) guarantees.
    pub fn n(&self) -> usize {
        self.goals.len()
    }

    pub fn reach_game<'g>(&self, game: &'g GameStructure, j: usize) -> ReachabilityGame<'g> {
        let sg = &self.subgames[j];
        ReachabilityGame::new(game, sg.target.clone(), sg.init.clone())
    }
}

pub fn build_subgames(game: &GameStructure, sm: &SingletonMap) -> DecompositionPlan {
    let n = sm.len();
    let single = |s: StateIndex| StateSet::from_indices(game.num_states(), [s]);
    let mut subgames = vec![Subgame {
        target: game.empty_set(),
        init: game.init().clone(),
    }];
    for j in 1..=n {
        let mut init = single(sm.goals[j - 1]);
        if j == n {
            init.union_with(game.init());
        }
        subgames.push(Subgame {
            target: single(sm.goals[j % n]),
            init,
        });
    }
    DecompositionPlan {
        subgames,
        goals: sm.goals.clone(),
    }
}

/// Timing and size of one solved subgame.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgameStats {
    pub index: usize,
    pub millis: f64,
    pub iterations: usize,
    pub winning_states: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// θ lies in the blocking region; the blocking strategy wins.
    Blocking,
    /// Every subgame is won from its start; strategies are chained.
    Composed,
    /// Subgame `failing` is not won from its start. `uncovered` are the
    /// initial states outside the certified winning set.
    Unrealizable {
        failing: usize,
        uncovered: Vec<StateIndex>,
    },
}

#[derive(Clone, Debug)]
pub struct DecomposedResult {
    pub decision: Decision,
    pub verdict: Verdict,
    pub strategy: Option<StrategyAutomaton>,
    /// States certified winning by the solved subgames.
    pub winning: StateSet,
    /// Stats of the solved subgames, by index.
    pub stats: Vec<SubgameStats>,
}

/// Solves the listed subgames with up to `workers` threads. Results are in
/// the order of `indices`.
pub fn solve_subgames(
    game: &GameStructure,
    plan: &DecompositionPlan,
    indices: &[usize],
    workers: usize,
) -> Vec<(ReachSolution, SubgameStats)> {
    let solve_one = |j: usize| {
        let start = Instant::now();
        let sol = solve_reachability(&plan.reach_game(game, j));
        let stats = SubgameStats {
            index: j,
            millis: start.elapsed().as_secs_f64() * 1e3,
            iterations: sol.iterations,
            winning_states: sol.winning.count(),
        };
        (sol, stats)
    };
    let workers = workers.clamp(1, indices.len().max(1));
    if workers == 1 {
        return indices.iter().map(|&j| solve_one(j)).collect();
    }
    let next = AtomicUsize::new(0);
    let mut done: Vec<(usize, (ReachSolution, SubgameStats))> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&j) = indices.get(k) else { break };
                        out.push((k, solve_one(j)));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("subgame worker panicked"))
            .collect()
    });
    done.sort_by_key(|(k, _)| *k);
    done.into_iter().map(|(_, r)| r).collect()
}

/// Whether subgame `j` is won from its start: every initial state for the
/// blocking game; for j ≥ 1 the goal g_j must lie in ⊛W_j, and for j = n
/// θ ⊆ W_n as well.
pub fn won_from_start(
    game: &GameStructure,
    plan: &DecompositionPlan,
    j: usize,
    sol: &ReachSolution,
) -> bool {
    if j == 0 {
        return plan.subgames[0].init.is_subset(&sol.winning);
    }
    game.forces_into(plan.goals[j - 1], &sol.winning)
        && (j < plan.n() || game.init().is_subset(&sol.winning))
}

/// The winning set of the original game, read off solved subgames: W_n if
/// every goal g_j lies in ⊛W_j, otherwise W_0.
pub fn characterize(
    game: &GameStructure,
    plan: &DecompositionPlan,
    solutions: &[ReachSolution],
) -> StateSet {
    let n = plan.n();
    let all_goals = (1..=n).all(|j| game.forces_into(plan.goals[j - 1], &solutions[j].winning));
    if all_goals {
        solutions[n].winning.clone()
    } else {
        solutions[0].winning.clone()
    }
}

/// Decides realizability through the subgames, and builds a strategy when
/// realizable. `workers` threads solve subgames 1..n after subgame 0.
pub fn solve_decomposed(
    game: &GameStructure,
    sm: &SingletonMap,
    workers: usize,
) -> DecomposedResult {
    let plan = build_subgames(game, sm);
    let n = plan.n();
    let (blocking, stats0) = solve_subgames(game, &plan, &[0], 1)
        .pop()
        .expect("one result");
    if game.init().is_subset(&blocking.winning) {
        return DecomposedResult {
            decision: Decision::Blocking,
            verdict: check_realizable(game, &blocking.winning),
            strategy: Some(blocking.to_automaton(game)),
            winning: blocking.winning,
            stats: vec![stats0],
        };
    }

    let indices: Vec<usize> = (1..=n).collect();
    let mut solutions = vec![blocking];
    let mut stats = vec![stats0];
    for (sol, st) in solve_subgames(game, &plan, &indices, workers) {
        solutions.push(sol);
        stats.push(st);
    }

    let failing = (1..=n).find(|&j| !won_from_start(game, &plan, j, &solutions[j]));
    let winning = characterize(game, &plan, &solutions);
    match failing {
        None => {
            let strategy = compose(game, &plan, &solutions)
                .expect("subgame strategies are defined on their winning sets");
            DecomposedResult {
                decision: Decision::Composed,
                verdict: check_realizable(game, &winning),
                strategy: Some(strategy),
                winning,
                stats,
            }
        }
        Some(failing) => {
            let uncovered: Vec<StateIndex> = game.init().difference(&winning).iter().collect();
            DecomposedResult {
                decision: Decision::Unrealizable {
                    failing,
                    uncovered: uncovered.clone(),
                },
                verdict: Verdict::Unrealizable { losing: uncovered },
                strategy: None,
                winning,
                stats,
            }
        }
    }
}

/// A reachable (memory, state, input) where the subgame strategy in charge
/// has no move.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no move for counter {counter} at state {state}, input {input}")]
pub struct ComposeError {
    /// One-based counter value.
    pub counter: usize,
    pub state: StateIndex,
    pub input: InputIndex,
}

/// Chains the subgame strategies. Memory value z stands for counter z + 1,
/// so the initial memory is n − 1. Only (memory, state) pairs reachable from
/// θ are filled in. With a single goal, the subgame in charge at g_1 has g_1
/// as its target; there the system moves back into W_1.
pub fn compose(
    game: &GameStructure,
    plan: &DecompositionPlan,
    solutions: &[ReachSolution],
) -> Result<StrategyAutomaton, ComposeError> {
    let n = plan.n();
    let mut a = StrategyAutomaton::new(game, n as u32, (n - 1) as u32);
    let mut seen = vec![StateSet::empty(game.num_states()); n];
    let mut queue = VecDeque::new();
    for s in game.init().iter() {
        seen[n - 1].insert(s);
        queue.push_back((n - 1, s));
    }
    while let Some((z, s)) = queue.pop_front() {
        let z_next = if s == plan.goals[(z + 1) % n] {
            (z + 1) % n
        } else {
            z
        };
        let sol = &solutions[z_next + 1];
        let at_target = plan.subgames[z_next + 1].target.contains(s);
        for e in game.entries(s) {
            let mv = if at_target {
                game.first_output_into(e, &sol.winning)
            } else {
                sol.entry_move(e)
            };
            let Some(y) = mv else {
                return Err(ComposeError {
                    counter: z + 1,
                    state: s,
                    input: game.entry_input(e),
                });
            };
            a.set_entry(z as u32, e, z_next as u32, y);
            let t = game.successor(game.entry_input(e), y);
            if seen[z_next].insert(t) {
                queue.push_back((z_next, t));
            }
        }
    }
    Ok(a)
}
