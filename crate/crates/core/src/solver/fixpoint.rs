//! Incremental building blocks for the fixpoint engines.

use crate::game::{GameStructure, StateIndex, StateSet};

/// Maintains ⊛Y for a set Y that only grows.
///
/// Per entry it counts the outputs leading into Y; per state it counts the
/// entries with no such output. A state is in ⊛Y once that count is zero.
pub(crate) struct PreCounter {
    into: Vec<u32>,
    blocked: Vec<u32>,
    set: StateSet,
    pre: StateSet,
}

impl PreCounter {
    pub fn new(game: &GameStructure) -> Self {
        let n = game.num_states();
        let mut blocked = vec![0u32; n];
        let mut pre = StateSet::empty(n);
        for (s, b) in blocked.iter_mut().enumerate() {
            let s = StateIndex(s as u32);
            *b = game.entries(s).len() as u32;
            if *b == 0 {
                pre.insert(s);
            }
        }
        PreCounter {
            into: vec![0; game.num_entries()],
            blocked,
            set: StateSet::empty(n),
            pre,
        }
    }

    pub fn insert(&mut self, game: &GameStructure, t: StateIndex) {
        if !self.set.insert(t) {
            return;
        }
        for &e in game.entry_preds(t) {
            let c = &mut self.into[e as usize];
            *c += 1;
            if *c == 1 {
                let s = game.entry_state(e as usize);
                let b = &mut self.blocked[s.index()];
                *b -= 1;
                if *b == 0 {
                    self.pre.insert(s);
                }
            }
        }
    }

    /// ⊛Y.
    pub fn pre(&self) -> &StateSet {
        &self.pre
    }
}

/// Scratch space for [`Trap::compute`].
///
/// Entry counters are initialised lazily: an entry not touched in the
/// current call is taken to have all its outputs inside the set, so a call
/// costs time proportional to the states it removes rather than to |Σ|.
pub(crate) struct Trap {
    /// (epoch, count) per entry.
    into: Vec<(u32, u32)>,
    epoch: u32,
    queue: Vec<StateIndex>,
}

impl Trap {
    pub fn new(game: &GameStructure) -> Self {
        Trap {
            into: vec![(0, 0); game.num_entries()],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    /// νX. allowed ∩ ⊛X, given that every state of `keep` is known to be in
    /// the result. `keep` must be a subset of `allowed`.
    pub fn compute(
        &mut self,
        game: &GameStructure,
        allowed: &StateSet,
        keep: &StateSet,
    ) -> StateSet {
        debug_assert!(keep.is_subset(allowed));
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.into.fill((0, 0));
            self.epoch = 1;
        }
        let mut x = allowed.clone();
        // States that may still be removed.
        let mut open = allowed.difference(keep);
        self.queue.clear();
        self.queue.extend(allowed.complement().iter());
        for s in game.sys_deadlocked().intersection(&open).iter() {
            open.remove(s);
            x.remove(s);
            self.queue.push(s);
        }
        while let Some(t) = self.queue.pop() {
            for &e in game.entry_preds(t) {
                let e = e as usize;
                let s = game.entry_state(e);
                if !open.contains(s) {
                    continue;
                }
                let slot = &mut self.into[e];
                if slot.0 != self.epoch {
                    *slot = (self.epoch, game.entry_outputs(e).len() as u32);
                }
                slot.1 -= 1;
                if slot.1 == 0 {
                    open.remove(s);
                    x.remove(s);
                    self.queue.push(s);
                }
            }
        }
        x
    }
}

/// νX. allowed ∩ ⊛X computed by plain iteration; used as a reference.
pub fn naive_trap(game: &GameStructure, allowed: &StateSet) -> StateSet {
    let mut x = allowed.clone();
    loop {
        let next = allowed.intersection(&game.cpre(&x));
        if next == x {
            return x;
        }
        x = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_spec;
    use crate::game::build_game;

    #[test]
    fn trap_matches_naive_iteration() {
        let text = "[INPUT]\nx : 0..2\n[OUTPUT]\ny : 0..3\n\
                    [ENV_SAFETY]\nx' != x\n[SYS_SAFETY]\ny' = y + 1 | y' = y - 1 | y' = x'\n";
        let g = build_game(&parse_spec(text).unwrap()).unwrap();
        let mut trap = Trap::new(&g);
        for mask in 0u32..(1 << 12) {
            let allowed =
                StateSet::from_indices(12, (0..12).filter(|i| mask >> i & 1 == 1).map(StateIndex));
            let empty = StateSet::empty(12);
            assert_eq!(trap.compute(&g, &allowed, &empty), naive_trap(&g, &allowed));
        }
    }

    #[test]
    fn pre_counter_tracks_cpre() {
        let text = "[INPUT]\nx : 0..2\n[OUTPUT]\ny : 0..3\n\
                    [ENV_SAFETY]\nx' != x\n[SYS_SAFETY]\ny' = y + 1 | y' = x'\n";
        let g = build_game(&parse_spec(text).unwrap()).unwrap();
        let mut pc = PreCounter::new(&g);
        let mut y = g.empty_set();
        assert_eq!(pc.pre(), &g.cpre(&y));
        for t in [5u32, 0, 11, 3, 7, 2, 9] {
            pc.insert(&g, StateIndex(t));
            y.insert(StateIndex(t));
            assert_eq!(pc.pre(), &g.cpre(&y));
        }
    }
}
