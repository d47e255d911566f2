//! The explicit game arena.
//!
//! A state is a full valuation of all variables, numbered in mixed radix with
//! the last declared variable varying fastest. Since environment variables
//! come first, a state index splits as `input * |Y| + output`, and the state
//! reached by playing input `x` and output `y` is exactly that index.
//!
//! Valid moves are precomputed into compressed tables. Each (state, valid
//! input) pair is an *entry*, numbered consecutively by state and input.

mod set;
mod tables;

use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use thiserror::Error;

use crate::expr::{Expr, Owner, SpecError, Specification, VarDecl};
use crate::solver::fixpoint::Trap;
pub use set::StateSet;
use tables::{ones, Enumerator, Layout};

/// Default limit on |Σ|.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;

macro_rules! index_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[repr(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

index_type!(
    /// Index of a full valuation.
    StateIndex
);
index_type!(
    /// Index of a valuation of the environment variables.
    InputIndex
);
index_type!(
    /// Index of a valuation of the system variables.
    OutputIndex
);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("state space has {states} states, above the limit of {cap}")]
    Capacity { states: u128, cap: u64 },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("formula refers to next-step values where only the current state is known")]
    Primed,
}

/// A two-player game arena with precomputed transition tables.
#[derive(Clone)]
pub struct GameStructure {
    spec: Specification,
    num_env: usize,
    strides: Vec<u64>,
    num_inputs: u32,
    num_outputs: u32,
    num_states: u32,
    /// `entry_offsets[s]..entry_offsets[s + 1]` are the entries of state `s`.
    entry_offsets: Vec<u32>,
    entry_input: Vec<InputIndex>,
    entry_state: Vec<StateIndex>,
    /// `output_offsets[e]..output_offsets[e + 1]` index `outputs`.
    output_offsets: Vec<u32>,
    outputs: Vec<OutputIndex>,
    /// Entries with at least one move into each state.
    pred_offsets: Vec<u32>,
    preds: Vec<u32>,
    init: StateSet,
    env_goals: Vec<StateSet>,
    sys_goals: Vec<StateSet>,
    env_deadlock: StateSet,
    sys_deadlock: StateSet,
    safe: OnceLock<StateSet>,
}

pub fn build_game(spec: &Specification) -> Result<GameStructure, GameError> {
    build_game_with_cap(spec, DEFAULT_STATE_CAP)
}

pub fn build_game_with_cap(spec: &Specification, cap: u64) -> Result<GameStructure, GameError> {
    spec.check()?;
    let states: u128 = spec.vars.iter().map(|v| v.domain.size() as u128).product();
    if states > cap as u128 || states > u32::MAX as u128 {
        return Err(GameError::Capacity { states, cap });
    }
    let num_env = spec.num_env_vars();
    let mut strides = vec![1u64; spec.vars.len()];
    for v in (0..spec.vars.len().saturating_sub(1)).rev() {
        strides[v] = strides[v + 1] * spec.vars[v + 1].domain.size();
    }
    let num_outputs: u64 = spec.vars[num_env..]
        .iter()
        .map(|v| v.domain.size())
        .product();
    let num_inputs: u64 = spec.vars[..num_env]
        .iter()
        .map(|v| v.domain.size())
        .product();
    let num_states = num_inputs * num_outputs;

    let layout = Layout {
        vars: &spec.vars,
        num_env,
        strides: strides.clone(),
        num_inputs,
        num_outputs,
    };
    let mut en = Enumerator::new(&layout, &spec.env_safety, &spec.sys_safety);

    let n = num_states as usize;
    let mut entry_offsets = Vec::with_capacity(n + 1);
    let mut entry_input = Vec::new();
    let mut entry_state = Vec::new();
    let mut output_offsets = vec![0u32];
    let mut outputs = Vec::new();
    let mut env_deadlock = StateSet::empty(n);
    let mut sys_deadlock = StateSet::empty(n);
    let (mut in_row, mut out_row) = (Vec::new(), Vec::new());
    entry_offsets.push(0u32);
    for s in 0..num_states {
        en.inputs(s, &mut in_row);
        let mut any_input = false;
        for x in ones(&in_row) {
            any_input = true;
            en.outputs(s, x as u64, &mut out_row);
            let before = outputs.len();
            outputs.extend(ones(&out_row).map(|y| OutputIndex(y as u32)));
            if outputs.len() == before {
                sys_deadlock.insert(StateIndex(s as u32));
            }
            entry_input.push(InputIndex(x as u32));
            entry_state.push(StateIndex(s as u32));
            output_offsets.push(outputs.len() as u32);
        }
        if !any_input {
            env_deadlock.insert(StateIndex(s as u32));
        }
        entry_offsets.push(entry_input.len() as u32);
    }

    // Reverse edges: for every successor state, the entries that can move there.
    let mut pred_count = vec![0u32; n + 1];
    for e in 0..entry_input.len() {
        let base = entry_input[e].0 as u64 * num_outputs;
        for y in &outputs[output_offsets[e] as usize..output_offsets[e + 1] as usize] {
            pred_count[(base + y.0 as u64) as usize + 1] += 1;
        }
    }
    for t in 0..n {
        pred_count[t + 1] += pred_count[t];
    }
    let pred_offsets = pred_count;
    let mut fill = pred_offsets.clone();
    let mut preds = vec![0u32; outputs.len()];
    for e in 0..entry_input.len() {
        let base = entry_input[e].0 as u64 * num_outputs;
        for y in &outputs[output_offsets[e] as usize..output_offsets[e + 1] as usize] {
            let t = (base + y.0 as u64) as usize;
            preds[fill[t] as usize] = e as u32;
            fill[t] += 1;
        }
    }

    let mut game = GameStructure {
        spec: spec.clone(),
        num_env,
        strides,
        num_inputs: num_inputs as u32,
        num_outputs: num_outputs as u32,
        num_states: num_states as u32,
        entry_offsets,
        entry_input,
        entry_state,
        output_offsets,
        outputs,
        pred_offsets,
        preds,
        init: StateSet::empty(n),
        env_goals: Vec::new(),
        sys_goals: Vec::new(),
        env_deadlock,
        sys_deadlock,
        safe: OnceLock::new(),
    };
    let theta = Expr::all(spec.env_init.iter().chain(&spec.sys_init).cloned());
    game.init = game.states_satisfying(&theta)?;
    game.env_goals = spec
        .env_liveness
        .iter()
        .map(|e| game.states_satisfying(e))
        .collect::<Result<_, _>>()?;
    game.sys_goals = spec
        .sys_liveness
        .iter()
        .map(|e| game.states_satisfying(e))
        .collect::<Result<_, _>>()?;
    Ok(game)
}

impl GameStructure {
    pub fn spec(&self) -> &Specification {
        &self.spec
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.spec.vars
    }

    pub fn num_env_vars(&self) -> usize {
        self.num_env
    }

    pub fn num_states(&self) -> usize {
        self.num_states as usize
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs as usize
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs as usize
    }

    pub fn num_entries(&self) -> usize {
        self.entry_input.len()
    }

    /// [[θ^env ∧ θ^sys]].
    pub fn init(&self) -> &StateSet {
        &self.init
    }

    pub fn env_goals(&self) -> &[StateSet] {
        &self.env_goals
    }

    pub fn sys_goals(&self) -> &[StateSet] {
        &self.sys_goals
    }

    /// States with no valid input.
    pub fn env_deadlocked(&self) -> &StateSet {
        &self.env_deadlock
    }

    /// States with some valid input that has no valid output.
    pub fn sys_deadlocked(&self) -> &StateSet {
        &self.sys_deadlock
    }

    /// States from which the system can answer every valid input forever,
    /// νX. ⊛X. Computed on first use.
    pub fn safe_region(&self) -> &StateSet {
        self.safe.get_or_init(|| {
            let full = self.full_set();
            Trap::new(self).compute(self, &full, &self.empty_set())
        })
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.num_states())
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.num_states())
    }

    #[inline]
    pub fn successor(&self, x: InputIndex, y: OutputIndex) -> StateIndex {
        StateIndex(x.0 * self.num_outputs + y.0)
    }

    #[inline]
    pub fn split(&self, s: StateIndex) -> (InputIndex, OutputIndex) {
        (
            InputIndex(s.0 / self.num_outputs),
            OutputIndex(s.0 % self.num_outputs),
        )
    }

    /// Entry ids of `s`, in ascending input order.
    #[inline]
    pub fn entries(&self, s: StateIndex) -> Range<usize> {
        self.entry_offsets[s.index()] as usize..self.entry_offsets[s.index() + 1] as usize
    }

    #[inline]
    pub fn entry_input(&self, e: usize) -> InputIndex {
        self.entry_input[e]
    }

    #[inline]
    pub fn entry_state(&self, e: usize) -> StateIndex {
        self.entry_state[e]
    }

    /// Valid outputs of entry `e`, ascending.
    #[inline]
    pub fn entry_outputs(&self, e: usize) -> &[OutputIndex] {
        &self.outputs[self.output_offsets[e] as usize..self.output_offsets[e + 1] as usize]
    }

    /// Entries having a move into `t`.
    #[inline]
    pub fn entry_preds(&self, t: StateIndex) -> &[u32] {
        &self.preds
            [self.pred_offsets[t.index()] as usize..self.pred_offsets[t.index() + 1] as usize]
    }

    /// Valid inputs at `s`, ascending.
    pub fn valid_inputs(&self, s: StateIndex) -> &[InputIndex] {
        let r = self.entries(s);
        &self.entry_input[r]
    }

    /// The entry for input `x` at `s`, if `x` is valid there.
    pub fn find_entry(&self, s: StateIndex, x: InputIndex) -> Option<usize> {
        let r = self.entries(s);
        self.entry_input[r.clone()]
            .binary_search(&x)
            .ok()
            .map(|i| r.start + i)
    }

    pub fn is_valid_input(&self, s: StateIndex, x: InputIndex) -> bool {
        self.find_entry(s, x).is_some()
    }

    /// Valid outputs at `s` under `x`; empty if `x` is invalid.
    pub fn valid_outputs(&self, s: StateIndex, x: InputIndex) -> &[OutputIndex] {
        match self.find_entry(s, x) {
            Some(e) => self.entry_outputs(e),
            None => &[],
        }
    }

    pub fn is_valid_output(&self, s: StateIndex, x: InputIndex, y: OutputIndex) -> bool {
        self.valid_outputs(s, x).binary_search(&y).is_ok()
    }

    /// The valuation of all variables at `s`, in declaration order.
    pub fn decode(&self, s: StateIndex) -> Vec<i64> {
        self.spec
            .vars
            .iter()
            .zip(&self.strides)
            .map(|(v, &st)| ((s.0 as u64 / st) % v.domain.size()) as i64 + v.domain.lo())
            .collect()
    }

    /// Inverse of [`decode`](Self::decode); `None` if a value is out of its domain
    /// or the length is wrong.
    pub fn encode(&self, values: &[i64]) -> Option<StateIndex> {
        if values.len() != self.spec.vars.len() {
            return None;
        }
        let mut idx = 0u64;
        for ((v, &st), &val) in self.spec.vars.iter().zip(&self.strides).zip(values) {
            if !v.domain.contains(val) {
                return None;
            }
            idx += (val - v.domain.lo()) as u64 * st;
        }
        Some(StateIndex(idx as u32))
    }

    /// Values of the environment variables under input `x`.
    pub fn decode_input(&self, x: InputIndex) -> Vec<i64> {
        let mut v = self.decode(self.successor(x, OutputIndex(0)));
        v.truncate(self.num_env);
        v
    }

    /// Values of the system variables under output `y`.
    pub fn decode_output(&self, y: OutputIndex) -> Vec<i64> {
        self.decode(self.successor(InputIndex(0), y))
            .split_off(self.num_env)
    }

    pub fn encode_input(&self, values: &[i64]) -> Option<InputIndex> {
        if values.len() != self.num_env {
            return None;
        }
        let mut full = values.to_vec();
        full.extend(self.spec.vars[self.num_env..].iter().map(|v| v.domain.lo()));
        self.encode(&full).map(|s| self.split(s).0)
    }

    pub fn encode_output(&self, values: &[i64]) -> Option<OutputIndex> {
        if values.len() != self.spec.vars.len() - self.num_env {
            return None;
        }
        let mut full: Vec<i64> = self.spec.vars[..self.num_env]
            .iter()
            .map(|v| v.domain.lo())
            .collect();
        full.extend_from_slice(values);
        self.encode(&full).map(|s| self.split(s).1)
    }

    /// `name=value` pairs for the variables owned by `owner` (or all, if `None`).
    pub fn format_values(&self, values: &[i64], owner: Option<Owner>) -> String {
        self.spec
            .vars
            .iter()
            .zip(values)
            .filter(|(v, _)| owner.is_none_or(|o| v.owner == o))
            .map(|(v, val)| format!("{}={}", v.name, val))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_state(&self, s: StateIndex) -> String {
        self.format_values(&self.decode(s), None)
    }

    /// [[e]] for an unprimed formula.
    pub fn states_satisfying(&self, e: &Expr) -> Result<StateSet, GameError> {
        if e.has_primed() {
            return Err(GameError::Primed);
        }
        let mut out = self.empty_set();
        let mut vals = vec![0i64; self.spec.vars.len()];
        for s in 0..self.num_states {
            for ((slot, v), &st) in vals.iter_mut().zip(&self.spec.vars).zip(&self.strides) {
                *slot = ((s as u64 / st) % v.domain.size()) as i64 + v.domain.lo();
            }
            if e.eval_total(&vals, &vals) {
                out.insert(StateIndex(s));
            }
        }
        Ok(out)
    }

    /// Does entry `e` have an output leading into `target`?
    #[inline]
    pub fn entry_can_reach(&self, e: usize, target: &StateSet) -> bool {
        let x = self.entry_input[e];
        self.entry_outputs(e)
            .iter()
            .any(|&y| target.contains(self.successor(x, y)))
    }

    /// The lowest output of entry `e` leading into `target`.
    #[inline]
    pub fn first_output_into(&self, e: usize, target: &StateSet) -> Option<OutputIndex> {
        let x = self.entry_input[e];
        self.entry_outputs(e)
            .iter()
            .copied()
            .find(|&y| target.contains(self.successor(x, y)))
    }

    /// Whether `s` lies in ⊛`target`.
    pub fn forces_into(&self, s: StateIndex, target: &StateSet) -> bool {
        self.entries(s).all(|e| self.entry_can_reach(e, target))
    }

    /// Controllable predecessor: states from which, whatever valid input the
    /// environment plays, the system has a valid output leading into `target`.
    /// States without a valid input are included.
    pub fn cpre(&self, target: &StateSet) -> StateSet {
        let mut out = self.empty_set();
        for s in 0..self.num_states {
            let s = StateIndex(s);
            if self.forces_into(s, target) {
                out.insert(s);
            }
        }
        out
    }
}

impl fmt::Debug for GameStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameStructure")
            .field("vars", &self.spec.vars)
            .field("states", &self.num_states)
            .field("entries", &self.entry_input.len())
            .field("moves", &self.outputs.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_spec;
    use proptest::prelude::*;

    const G1: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                      [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s\n";

    fn g1() -> GameStructure {
        build_game(&parse_spec(G1).unwrap()).unwrap()
    }

    fn g2() -> GameStructure {
        let text = format!("{G1}[SYS_SAFETY]\n!s'\n");
        build_game(&parse_spec(&text).unwrap()).unwrap()
    }

    fn st(g: &GameStructure, vals: &[i64]) -> StateIndex {
        g.encode(vals).unwrap()
    }

    #[test]
    fn g1_tables_are_complete() {
        let g = g1();
        assert_eq!(g.num_states(), 4);
        for s in 0..4 {
            let s = StateIndex(s);
            assert_eq!(g.valid_inputs(s).len(), 2);
            for &x in g.valid_inputs(s) {
                assert_eq!(g.valid_outputs(s, x).len(), 2);
            }
        }
        assert!(g.env_deadlocked().is_empty() && g.sys_deadlocked().is_empty());
        assert_eq!(g.init().iter().collect::<Vec<_>>(), vec![st(&g, &[0, 0])]);
    }

    #[test]
    fn g2_has_exactly_one_output() {
        let g = g2();
        for s in 0..4 {
            for &x in g.valid_inputs(StateIndex(s)) {
                assert_eq!(g.valid_outputs(StateIndex(s), x), &[OutputIndex(0)]);
            }
        }
    }

    #[test]
    fn grid_2x2_has_16_states() {
        let text = "[INPUT]\nxr : 0..1\nxc : 0..1\n[OUTPUT]\nyr : 0..1\nyc : 0..1\n";
        assert_eq!(
            build_game(&parse_spec(text).unwrap()).unwrap().num_states(),
            16
        );
    }

    #[test]
    fn states_satisfying_examples() {
        let g = g1();
        assert_eq!(g.states_satisfying(&Expr::Const(true)).unwrap().count(), 4);
        assert!(g.states_satisfying(&Expr::Const(false)).unwrap().is_empty());
        assert_eq!(
            g.sys_goals()[0].iter().collect::<Vec<_>>(),
            vec![st(&g, &[1, 1])]
        );
        let primed = crate::expr::parse_expr("s'", g.vars()).unwrap();
        assert_eq!(g.states_satisfying(&primed), Err(GameError::Primed));
    }

    #[test]
    fn cpre_examples() {
        let g = g1();
        assert_eq!(g.cpre(&g.full_set()), g.full_set());
        assert!(g.cpre(&g.sys_goals()[0]).is_empty());
    }

    #[test]
    fn env_deadlock_is_vacuously_controllable() {
        let text = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_SAFETY]\n!e\n!e'\n";
        let g = build_game(&parse_spec(text).unwrap()).unwrap();
        let d = st(&g, &[1, 0]);
        assert!(g.env_deadlocked().contains(d));
        assert!(g.cpre(&g.empty_set()).contains(d));
        assert!(!g.cpre(&g.empty_set()).contains(st(&g, &[0, 0])));
    }

    #[test]
    fn capacity_is_enforced() {
        let text = "[INPUT]\na : 0..999\n[OUTPUT]\nb : 0..999\n";
        let spec = parse_spec(text).unwrap();
        assert!(matches!(
            build_game_with_cap(&spec, 1000),
            Err(GameError::Capacity {
                states: 1_000_000,
                ..
            })
        ));
    }

    #[test]
    fn tables_match_direct_evaluation() {
        let text = "[INPUT]\nx : 0..3\nb : bool\n[OUTPUT]\ny : 0..2\n\
                    [ENV_SAFETY]\nx' != x | b'\nb -> x' < 3\n\
                    [SYS_SAFETY]\ny' = y + 1 | y' = x' - 1\n!(x' = 0 & y' = 2)\n";
        let spec = parse_spec(text).unwrap();
        let g = build_game(&spec).unwrap();
        let env = Expr::all(spec.env_safety.clone());
        let sys = Expr::all(spec.sys_safety.clone());
        for s in 0..g.num_states() as u32 {
            let s = StateIndex(s);
            let cur = g.decode(s);
            for x in 0..g.num_inputs() as u32 {
                let x = InputIndex(x);
                let mut next: Vec<Option<i64>> = g.decode_input(x).into_iter().map(Some).collect();
                let valid = env.eval(&cur, &next).unwrap();
                assert_eq!(g.is_valid_input(s, x), valid);
                if !valid {
                    continue;
                }
                next.push(None);
                for y in 0..g.num_outputs() as u32 {
                    let y = OutputIndex(y);
                    next[2] = Some(g.decode_output(y)[0]);
                    assert_eq!(
                        g.is_valid_output(s, x, y),
                        sys.eval(&cur, &next).unwrap(),
                        "s={s} x={x} y={y}"
                    );
                }
            }
        }
    }

    /// A random micro-game described by raw validity bits.
    fn random_game(ni: usize, no: usize, env_bits: &[bool], sys_bits: &[bool]) -> GameStructure {
        let ns = ni * no;
        let mut text = format!("[INPUT]\nx : 0..{}\n[OUTPUT]\ny : 0..{}\n", ni - 1, no - 1);
        text.push_str("[ENV_SAFETY]\n");
        let mut bad = Vec::new();
        for s in 0..ns {
            for x in 0..ni {
                if !env_bits[(s * ni + x) % env_bits.len()] {
                    bad.push(format!("(x = {} & y = {} & x' = {x})", s / no, s % no));
                }
            }
        }
        text.push_str(&format!(
            "!({})\n",
            if bad.is_empty() {
                "false".into()
            } else {
                bad.join(" | ")
            }
        ));
        text.push_str("[SYS_SAFETY]\n");
        bad.clear();
        for s in 0..ns {
            for x in 0..ni {
                for y in 0..no {
                    if !sys_bits[((s * ni + x) * no + y) % sys_bits.len()] {
                        bad.push(format!(
                            "(x = {} & y = {} & x' = {x} & y' = {y})",
                            s / no,
                            s % no
                        ));
                    }
                }
            }
        }
        text.push_str(&format!(
            "!({})\n",
            if bad.is_empty() {
                "false".into()
            } else {
                bad.join(" | ")
            }
        ));
        build_game(&parse_spec(&text).unwrap()).unwrap()
    }

    fn set_from(g: &GameStructure, bits: &[bool]) -> StateSet {
        StateSet::from_indices(
            g.num_states(),
            (0..g.num_states())
                .filter(|&i| bits[i % bits.len()])
                .map(|i| StateIndex(i as u32)),
        )
    }

    proptest! {
        #[test]
        fn cpre_is_monotone(ni in 1usize..4, no in 1usize..4,
                            env in prop::collection::vec(prop::bool::weighted(0.8), 1..40),
                            sys in prop::collection::vec(prop::bool::weighted(0.7), 1..80),
                            a in prop::collection::vec(any::<bool>(), 1..16),
                            b in prop::collection::vec(any::<bool>(), 1..16)) {
            let g = random_game(ni, no, &env, &sys);
            let a = set_from(&g, &a);
            let ab = a.union(&set_from(&g, &b));
            prop_assert!(g.cpre(&a).is_subset(&g.cpre(&ab)));
        }

        #[test]
        fn cpre_of_everything_excludes_sys_deadlocks(ni in 1usize..4, no in 1usize..4,
                            env in prop::collection::vec(prop::bool::weighted(0.8), 1..40),
                            sys in prop::collection::vec(prop::bool::weighted(0.6), 1..80)) {
            let g = random_game(ni, no, &env, &sys);
            prop_assert_eq!(g.cpre(&g.full_set()), g.sys_deadlocked().complement());
        }

        #[test]
        fn cpre_on_free_games_is_forall_exists(ni in 1usize..4, no in 1usize..4,
                            a in prop::collection::vec(any::<bool>(), 1..16)) {
            let g = random_game(ni, no, &[true], &[true]);
            let a = set_from(&g, &a);
            let expected = (0..ni).all(|x| (0..no).any(|y| a.contains(StateIndex((x * no + y) as u32))));
            let c = g.cpre(&a);
            for s in 0..g.num_states() {
                prop_assert_eq!(c.contains(StateIndex(s as u32)), expected);
            }
        }

        #[test]
        fn index_bijection(ni in 1usize..4, no in 1usize..4) {
            let g = random_game(ni, no, &[true], &[true]);
            for s in 0..g.num_states() as u32 {
                let s = StateIndex(s);
                prop_assert_eq!(g.encode(&g.decode(s)), Some(s));
                let (x, y) = g.split(s);
                prop_assert_eq!(g.successor(x, y), s);
                prop_assert_eq!(g.encode_input(&g.decode_input(x)), Some(x));
                prop_assert_eq!(g.encode_output(&g.decode_output(y)), Some(y));
            }
        }
    }
}
