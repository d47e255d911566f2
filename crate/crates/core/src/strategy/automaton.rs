use crate::game::{GameStructure, InputIndex, OutputIndex, StateIndex};

const UNDEFINED: u32 = u32::MAX;

/// A finite-memory strategy: memory values `0..memory`, an initial value,
/// and a partial map from (memory, state, valid input) to (memory, output).
///
/// The table is dense over the entries of the game it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyAutomaton {
    memory: u32,
    initial: u32,
    entries: usize,
    table: Vec<(u32, u32)>,
}

/// One defined table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub memory: u32,
    pub state: StateIndex,
    pub input: InputIndex,
    pub next_memory: u32,
    pub output: OutputIndex,
}

impl StrategyAutomaton {
    /// An automaton with every move undefined.
    pub fn new(game: &GameStructure, memory: u32, initial: u32) -> Self {
        assert!(
            memory >= 1 && initial < memory,
            "initial memory out of range"
        );
        let entries = game.num_entries();
        StrategyAutomaton {
            memory,
            initial,
            entries,
            table: vec![(UNDEFINED, UNDEFINED); memory as usize * entries],
        }
    }

    pub fn memory_values(&self) -> u32 {
        self.memory
    }

    pub fn initial_memory(&self) -> u32 {
        self.initial
    }

    #[inline]
    pub fn set_entry(&mut self, mem: u32, entry: usize, next_mem: u32, y: OutputIndex) {
        debug_assert!(next_mem < self.memory);
        self.table[mem as usize * self.entries + entry] = (next_mem, y.0);
    }

    pub fn clear_entry(&mut self, mem: u32, entry: usize) {
        self.table[mem as usize * self.entries + entry] = (UNDEFINED, UNDEFINED);
    }

    #[inline]
    pub fn get_entry(&self, mem: u32, entry: usize) -> Option<(u32, OutputIndex)> {
        let (m, y) = *self.table.get(mem as usize * self.entries + entry)?;
        (m != UNDEFINED).then_some((m, OutputIndex(y)))
    }

    /// The move at (`mem`, `s`, `x`); `None` if `x` is invalid at `s` or the
    /// strategy is undefined there.
    pub fn step(
        &self,
        game: &GameStructure,
        mem: u32,
        s: StateIndex,
        x: InputIndex,
    ) -> Option<(u32, OutputIndex)> {
        if mem >= self.memory {
            return None;
        }
        self.get_entry(mem, game.find_entry(s, x)?)
    }

    pub fn set(
        &mut self,
        game: &GameStructure,
        mem: u32,
        s: StateIndex,
        x: InputIndex,
        next_mem: u32,
        y: OutputIndex,
    ) -> bool {
        match game.find_entry(s, x) {
            Some(e) => {
                self.set_entry(mem, e, next_mem, y);
                true
            }
            None => false,
        }
    }

    pub fn remove(&mut self, game: &GameStructure, mem: u32, s: StateIndex, x: InputIndex) {
        if let Some(e) = game.find_entry(s, x) {
            self.clear_entry(mem, e);
        }
    }

    pub fn num_defined(&self) -> usize {
        self.table.iter().filter(|(m, _)| *m != UNDEFINED).count()
    }

    /// Whether this automaton was built over a game with this many entries.
    pub fn fits(&self, game: &GameStructure) -> bool {
        self.entries == game.num_entries()
    }

    /// Defined rows in (memory, state, input) order.
    pub fn transitions<'a>(
        &'a self,
        game: &'a GameStructure,
    ) -> impl Iterator<Item = Transition> + 'a {
        (0..self.memory).flat_map(move |mem| {
            (0..self.entries).filter_map(move |e| {
                self.get_entry(mem, e)
                    .map(|(next_memory, output)| Transition {
                        memory: mem,
                        state: game.entry_state(e),
                        input: game.entry_input(e),
                        next_memory,
                        output,
                    })
            })
        })
    }

    /// Rows whose output is not valid for their (state, input).
    pub fn invalid_outputs<'a>(
        &'a self,
        game: &'a GameStructure,
    ) -> impl Iterator<Item = Transition> + 'a {
        self.transitions(game)
            .filter(move |t| !game.is_valid_output(t.state, t.input, t.output))
    }
}
