//! Reachability games under environment liveness assumptions.
//!
//! The system wins a play if it answers every valid input forever, and
//! either reaches the target or visits some environment goal only finitely
//! often. With S = νX. ⊛X, the states from which every input can be answered
//! forever, the winning set is
//!
//! ```text
//! μY. ⋁_j νX. (T ∧ S) ∨ ⊛Y ∨ (¬ψ_j ∧ ⊛X)
//! ```
//!
//! Each μ layer k and goal j give a core X_{k,j}. Target states of S enter
//! at the first layer and are not ranked. Any other state is ranked by the
//! first layer containing it and the lowest j whose core contains it. Its
//! move either makes progress into the previous layer, or stays in its core,
//! where it can only remain forever by avoiding ψ_j. Once the target is
//! reached the strategy just keeps the play inside S.
//! With no environment goals a single goal `true` stands in, so the game is
//! plain reachability.

use std::fmt;

use super::fixpoint::{PreCounter, Trap};
use crate::game::{GameStructure, OutputIndex, StateIndex, StateSet};
use crate::strategy::StrategyAutomaton;

const NO_MOVE: u32 = u32::MAX;

/// A reachability objective on a game.
#[derive(Clone, Debug)]
pub struct ReachabilityGame<'g> {
    pub game: &'g GameStructure,
    pub target: StateSet,
    pub init: StateSet,
}

impl<'g> ReachabilityGame<'g> {
    pub fn new(game: &'g GameStructure, target: StateSet, init: StateSet) -> Self {
        ReachabilityGame { game, target, init }
    }

    /// The environment goals the solver works with: the game's, or `[Σ]` if
    /// there are none.
    pub fn env_goals(&self) -> Vec<StateSet> {
        if self.game.env_goals().is_empty() {
            vec![self.game.full_set()]
        } else {
            self.game.env_goals().to_vec()
        }
    }
}

/// Layer and environment-goal index (both zero-based) of a ranked state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rank {
    pub layer: u32,
    pub goal: u32,
}

#[derive(Clone)]
pub struct ReachSolution {
    pub winning: StateSet,
    ranks: Vec<Option<Rank>>,
    /// Chosen output per game entry, defined on the safe region.
    moves: Vec<u32>,
    /// Number of μ layers that added states.
    pub iterations: usize,
}

impl fmt::Debug for ReachSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReachSolution")
            .field("winning", &self.winning)
            .field("iterations", &self.iterations)
            .finish()
    }
}

impl ReachSolution {
    pub fn rank(&self, s: StateIndex) -> Option<Rank> {
        self.ranks[s.index()]
    }

    /// The output chosen at game entry `e`.
    #[inline]
    pub fn entry_move(&self, e: usize) -> Option<OutputIndex> {
        let y = self.moves[e];
        (y != NO_MOVE).then_some(OutputIndex(y))
    }

    pub fn move_at(
        &self,
        game: &GameStructure,
        s: StateIndex,
        x: crate::game::InputIndex,
    ) -> Option<OutputIndex> {
        self.entry_move(game.find_entry(s, x)?)
    }

    /// The memoryless strategy as a one-state automaton.
    pub fn to_automaton(&self, game: &GameStructure) -> StrategyAutomaton {
        let mut a = StrategyAutomaton::new(game, 1, 0);
        for e in 0..game.num_entries() {
            if let Some(y) = self.entry_move(e) {
                a.set_entry(0, e, 0, y);
            }
        }
        a
    }

    /// Checks that every winning non-target state is ranked and that each of
    /// its moves enters the target, a lower layer, or a state of the same
    /// layer with an equal or lower goal index outside that goal. Every
    /// other state of the safe region must move inside it; states outside
    /// the safe region have no moves.
    pub fn check_rank_discipline(&self, rg: &ReachabilityGame<'_>) -> Result<(), String> {
        let g = rg.game;
        let goals = rg.env_goals();
        let safe = g.safe_region();
        for s in g.full_set().iter() {
            let winning = self.winning.contains(s);
            let rank = self.rank(s);
            if !safe.contains(s) {
                if winning || g.entries(s).any(|e| self.entry_move(e).is_some()) {
                    return Err(format!("unsafe state {s} is winning or has a move"));
                }
                continue;
            }
            let ranked = winning && !rg.target.contains(s);
            if rank.is_some() != ranked {
                return Err(format!("state {s} has rank {rank:?}"));
            }
            for e in g.entries(s) {
                let Some(y) = self.entry_move(e) else {
                    return Err(format!("no move at state {s}, entry {e}"));
                };
                if !g.entry_outputs(e).contains(&y) {
                    return Err(format!("invalid output at state {s}, entry {e}"));
                }
                let t = g.successor(g.entry_input(e), y);
                if !safe.contains(t) {
                    return Err(format!("move {s} -> {t} leaves the safe region"));
                }
                let Some(r) = rank else { continue };
                if rg.target.contains(t) {
                    continue;
                }
                let Some(rt) = self.rank(t) else {
                    return Err(format!("move {s} -> {t} leaves the winning set"));
                };
                let ok = rt.layer < r.layer
                    || (rt.layer == r.layer
                        && rt.goal <= r.goal
                        && !goals[r.goal as usize].contains(s));
                if !ok {
                    return Err(format!(
                        "move {s} {r:?} -> {t} {rt:?} breaks the rank order"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Solves a reachability game, extracting a memoryless winning strategy.
pub fn solve_reachability(rg: &ReachabilityGame<'_>) -> ReachSolution {
    let g = rg.game;
    let n = g.num_states();
    let goals = rg.env_goals();
    let not_goals: Vec<StateSet> = goals.iter().map(StateSet::complement).collect();

    let mut ranks: Vec<Option<Rank>> = vec![None; n];
    let mut moves = vec![NO_MOVE; g.num_entries()];
    let mut y = StateSet::empty(n);
    let mut pre_y = PreCounter::new(g);
    let mut trap = Trap::new(g);
    let mut layer = 0u32;
    let safe = g.safe_region();
    let reached = rg.target.intersection(safe);

    loop {
        let mut keep = y.union(&reached);
        keep.union_with(pre_y.pre());
        let mut next = y.clone();
        let mut fresh = Vec::new();
        for (j, not_goal) in not_goals.iter().enumerate() {
            let allowed = keep.union(not_goal);
            let core = trap.compute(g, &allowed, &keep);
            for s in core.iter() {
                if next.contains(s) {
                    continue;
                }
                next.insert(s);
                fresh.push(s);
                if rg.target.contains(s) {
                    continue;
                }
                ranks[s.index()] = Some(Rank {
                    layer,
                    goal: j as u32,
                });
                for e in g.entries(s) {
                    let y_out = g
                        .first_output_into(e, &y)
                        .or_else(|| g.first_output_into(e, &core))
                        .expect("core states have a move inside the core");
                    moves[e] = y_out.0;
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for &s in &fresh {
            pre_y.insert(g, s);
        }
        y = next;
        layer += 1;
    }

    for s in safe.iter() {
        if ranks[s.index()].is_some() {
            continue;
        }
        for e in g.entries(s) {
            moves[e] = g
                .first_output_into(e, safe)
                .expect("safe states can stay safe")
                .0;
        }
    }

    ReachSolution {
        winning: y,
        ranks,
        moves,
        iterations: layer as usize,
    }
}
