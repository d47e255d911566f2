//! Monolithic GR(1) solving.
//!
//! The outer greatest fixpoint is taken over a single set Z:
//!
//! ```text
//! Z ← ⋂_i reach(ψ_i^sys ∧ ⊛Z)
//! ```
//!
//! where `reach` is the reachability solver under the environment
//! assumptions. The strategy pursues one guarantee at a time. Memory holds
//! the index i of the guarantee being pursued; the system follows the
//! strategy of reach region i until it stands on ψ_i ∧ ⊛Z, then moves back
//! into Z and advances the index.

use super::reach::{solve_reachability, ReachSolution, ReachabilityGame};
use crate::game::{GameStructure, StateSet};
use crate::strategy::StrategyAutomaton;

#[derive(Clone, Debug)]
pub struct Gr1Solution {
    pub winning: StateSet,
    /// Memory value `i` means the strategy is heading for guarantee `i`
    /// (zero-based); initial memory is 0.
    pub strategy: StrategyAutomaton,
    /// Number of outer updates that shrank Z.
    pub z_iterations: usize,
    /// μ layers of each reach game in the final outer round.
    pub reach_iterations: Vec<usize>,
}

/// Solves the GR(1) game. With no guarantees this is the game of never
/// getting stuck, νX. ⊛X.
pub fn solve_gr1(game: &GameStructure) -> Gr1Solution {
    let n = game.sys_goals().len();
    if n == 0 {
        return solve_safety(game);
    }
    let mut z = game.full_set();
    let mut z_iterations = 0;
    loop {
        let cz = game.cpre(&z);
        let regions: Vec<ReachSolution> = game
            .sys_goals()
            .iter()
            .map(|goal| {
                let target = goal.intersection(&cz);
                solve_reachability(&ReachabilityGame::new(game, target, game.init().clone()))
            })
            .collect();
        let mut next = z.clone();
        for r in &regions {
            next.intersect_with(&r.winning);
        }
        debug_assert!(next.is_subset(&z), "Z iterates must shrink");
        if next == z {
            let strategy = extract(game, &z, &cz, &regions);
            return Gr1Solution {
                winning: z,
                strategy,
                z_iterations,
                reach_iterations: regions.iter().map(|r| r.iterations).collect(),
            };
        }
        z = next;
        z_iterations += 1;
    }
}

fn extract(
    game: &GameStructure,
    z: &StateSet,
    cz: &StateSet,
    regions: &[ReachSolution],
) -> StrategyAutomaton {
    let n = regions.len() as u32;
    let mut a = StrategyAutomaton::new(game, n, 0);
    for i in 0..n {
        let region = &regions[i as usize];
        let goal = &game.sys_goals()[i as usize];
        for s in region.winning.iter() {
            let reached = goal.contains(s) && cz.contains(s);
            for e in game.entries(s) {
                if reached {
                    let y = game
                        .first_output_into(e, z)
                        .expect("goal states in ⊛Z can re-enter Z");
                    a.set_entry(i, e, (i + 1) % n, y);
                } else if let Some(y) = region.entry_move(e) {
                    a.set_entry(i, e, i, y);
                }
            }
        }
    }
    a
}

fn solve_safety(game: &GameStructure) -> Gr1Solution {
    let mut z = game.full_set();
    let mut z_iterations = 0;
    loop {
        let next = game.cpre(&z);
        if next == z {
            break;
        }
        z.intersect_with(&next);
        z_iterations += 1;
    }
    let mut a = StrategyAutomaton::new(game, 1, 0);
    for s in z.iter() {
        for e in game.entries(s) {
            let y = game
                .first_output_into(e, &z)
                .expect("safe states stay safe");
            a.set_entry(0, e, 0, y);
        }
    }
    Gr1Solution {
        winning: z,
        strategy: a,
        z_iterations,
        reach_iterations: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_spec;
    use crate::game::build_game;

    const G1: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                      [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s\n";

    #[test]
    fn g1_and_g2() {
        let g1 = build_game(&parse_spec(G1).unwrap()).unwrap();
        let sol = solve_gr1(&g1);
        assert_eq!(sol.winning, g1.full_set());
        assert!(sol.z_iterations <= 2);
        let reach = solve_reachability(&ReachabilityGame::new(
            &g1,
            g1.sys_goals()[0].clone(),
            g1.init().clone(),
        ));
        assert_eq!(reach.winning, sol.winning);

        let g2 = build_game(&parse_spec(&format!("{G1}[SYS_SAFETY]\n!s'\n")).unwrap()).unwrap();
        assert!(solve_gr1(&g2).winning.is_empty());
    }

    #[test]
    fn no_guarantees_is_a_safety_game() {
        let text = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[SYS_SAFETY]\ns -> s'\ns' -> e'\n";
        let g = build_game(&parse_spec(text).unwrap()).unwrap();
        let sol = solve_gr1(&g);
        assert_eq!(sol.winning.count(), 2);
        assert_eq!(sol.strategy.memory_values(), 1);
    }

    #[test]
    fn memory_advances_on_goal_states() {
        let text = "[INPUT]\ne : bool\n[OUTPUT]\ns : 0..2\n[ENV_LIVENESS]\ne\n\
                    [SYS_LIVENESS]\ne & s = 1\ne & s = 2\n";
        let g = build_game(&parse_spec(text).unwrap()).unwrap();
        let sol = solve_gr1(&g);
        assert_eq!(sol.winning, g.full_set());
        for t in sol.strategy.transitions(&g) {
            let at_goal = g.sys_goals()[t.memory as usize].contains(t.state);
            let expected = if at_goal {
                (t.memory + 1) % 2
            } else {
                t.memory
            };
            assert_eq!(t.next_memory, expected);
        }
    }
}
