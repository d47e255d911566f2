//! Fixpoint engines: reachability under assumptions, and monolithic GR(1).

pub(crate) mod fixpoint;
pub mod gr1;
pub mod reach;

pub use fixpoint::naive_trap;
pub use gr1::{solve_gr1, Gr1Solution};
pub use reach::{solve_reachability, Rank, ReachSolution, ReachabilityGame};

use crate::game::{GameStructure, StateIndex, StateSet};

/// Outcome of comparing the initial states against a winning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Realizable,
    /// No state satisfies the initial condition, so the claim holds vacuously.
    VacuouslyRealizable,
    /// Initial states outside the winning set.
    Unrealizable {
        losing: Vec<StateIndex>,
    },
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        !matches!(self, Verdict::Unrealizable { .. })
    }
}

pub fn check_realizable(game: &GameStructure, winning: &StateSet) -> Verdict {
    let init = game.init();
    if init.is_empty() {
        return Verdict::VacuouslyRealizable;
    }
    let losing: Vec<StateIndex> = init.difference(winning).iter().collect();
    if losing.is_empty() {
        Verdict::Realizable
    } else {
        Verdict::Unrealizable { losing }
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
    fn verdicts() {
        let g1 = build_game(&parse_spec(G1).unwrap()).unwrap();
        assert_eq!(
            check_realizable(&g1, &solve_gr1(&g1).winning),
            Verdict::Realizable
        );

        let g2 = build_game(&parse_spec(&format!("{G1}[SYS_SAFETY]\n!s'\n")).unwrap()).unwrap();
        assert_eq!(
            check_realizable(&g2, &solve_gr1(&g2).winning),
            Verdict::Unrealizable {
                losing: vec![g2.encode(&[0, 0]).unwrap()]
            }
        );

        let vacuous =
            build_game(&parse_spec(&format!("{G1}[ENV_INIT]\nfalse\n")).unwrap()).unwrap();
        let v = check_realizable(&vacuous, &vacuous.empty_set());
        assert_eq!(v, Verdict::VacuouslyRealizable);
        assert!(v.is_realizable());
    }
}
