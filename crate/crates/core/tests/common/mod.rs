//! Random game generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use gr1synth::expr::{Domain, Expr, Owner, Specification, Term, VarDecl};
use gr1synth::game::{build_game, GameStructure, InputIndex, OutputIndex, StateIndex, StateSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const G1: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n\
                      [ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                      [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s\n";

pub const G3: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : 0..2\n\
                      [ENV_INIT]\n!e\n[SYS_INIT]\ns = 0\n\
                      [ENV_LIVENESS]\ne\n\
                      [SYS_LIVENESS]\ne & s = 1\ne & s = 2\n";

pub fn g2() -> String {
    format!("{G1}[SYS_SAFETY]\n!s'\n")
}

pub fn game(text: &str) -> GameStructure {
    build_game(&gr1synth::expr::parse_spec(text).unwrap()).unwrap()
}

/// Shape of a random game over one env variable `e` and one sys variable `s`.
#[derive(Clone, Debug)]
pub struct Shape {
    pub env_values: i64,
    pub sys_values: i64,
    /// Most valid inputs per state.
    pub max_inputs: usize,
    /// Most valid outputs per (state, input).
    pub max_outputs: usize,
    pub env_goals: usize,
    pub sys_goals: usize,
}

fn state_is(e: i64, s: i64) -> Expr {
    Expr::and(Expr::eq(Term::var(0), e), Expr::eq(Term::var(1), s))
}

fn subset(rng: &mut ChaCha8Rng, values: i64, max: usize) -> Vec<i64> {
    let mut all: Vec<i64> = (0..values).collect();
    all.shuffle(rng);
    let k = rng.gen_range(0..=max.min(values as usize));
    let mut out = all[..k].to_vec();
    out.sort_unstable();
    out
}

/// A game with random transition tables, random assumption sets and
/// single-state guarantees.
pub fn random_spec(rng: &mut ChaCha8Rng, shape: &Shape) -> Specification {
    let (a, b) = (shape.env_values, shape.sys_values);
    let mut env_rows = Vec::new();
    let mut sys_rows = Vec::new();
    for e in 0..a {
        for s in 0..b {
            // Bias towards at least one input so deadlocks stay occasional.
            let mut inputs = subset(rng, a, shape.max_inputs);
            if inputs.is_empty() && rng.gen_bool(0.8) {
                inputs.push(rng.gen_range(0..a));
            }
            env_rows.push(Expr::implies(
                state_is(e, s),
                Expr::any(inputs.iter().map(|&x| Expr::eq(Term::next(0), x))),
            ));
            for x in 0..a {
                let mut outputs = subset(rng, b, shape.max_outputs);
                if outputs.is_empty() && rng.gen_bool(0.85) {
                    outputs.push(rng.gen_range(0..b));
                }
                sys_rows.push(Expr::implies(
                    Expr::and(state_is(e, s), Expr::eq(Term::next(0), x)),
                    Expr::any(outputs.iter().map(|&y| Expr::eq(Term::next(1), y))),
                ));
            }
        }
    }
    let env_liveness = (0..shape.env_goals)
        .map(|_| {
            let density = rng.gen_range(0.15..0.6);
            let mut states = Vec::new();
            for e in 0..a {
                for s in 0..b {
                    if rng.gen_bool(density) {
                        states.push(state_is(e, s));
                    }
                }
            }
            Expr::any(states)
        })
        .collect();
    let sys_liveness = (0..shape.sys_goals)
        .map(|_| state_is(rng.gen_range(0..a), rng.gen_range(0..b)))
        .collect();
    let init_of = |rng: &mut ChaCha8Rng, var: usize, values: i64| {
        let mut vals = subset(rng, values, 2);
        if vals.is_empty() {
            vals.push(0);
        }
        Expr::any(vals.into_iter().map(|v| Expr::eq(Term::var(var), v)))
    };
    Specification {
        vars: vec![
            VarDecl::new("e", Domain::Int { lo: 0, hi: a - 1 }, Owner::Env),
            VarDecl::new("s", Domain::Int { lo: 0, hi: b - 1 }, Owner::Sys),
        ],
        env_init: vec![init_of(rng, 0, a)],
        sys_init: vec![init_of(rng, 1, b)],
        env_safety: vec![Expr::all(env_rows)],
        sys_safety: vec![Expr::all(sys_rows)],
        env_liveness,
        sys_liveness,
    }
}

/// A random game with at most 64 states, 1 to 3 single-state guarantees and
/// 0 to 2 assumptions.
pub fn micro_game(seed: u64) -> GameStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env_values = rng.gen_range(2..=4);
    let sys_values = rng.gen_range(2..=(64 / env_values).min(8));
    let shape = Shape {
        env_values,
        sys_values,
        max_inputs: rng.gen_range(1..=env_values as usize),
        max_outputs: rng.gen_range(1..=3),
        env_goals: rng.gen_range(0..=2),
        sys_goals: rng.gen_range(1..=3),
    };
    build_game(&random_spec(&mut rng, &shape)).unwrap()
}

/// A game with six states, at most two valid inputs per state and at most
/// two valid outputs per (state, input).
pub fn tiny_game(seed: u64, sys_goals: usize) -> GameStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape {
        env_values: 3,
        sys_values: 2,
        max_inputs: 2,
        max_outputs: 2,
        env_goals: rng.gen_range(0..=2),
        sys_goals,
    };
    build_game(&random_spec(&mut rng, &shape)).unwrap()
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize, density: f64) -> StateSet {
    StateSet::from_indices(
        n,
        (0..n as u32)
            .filter(|_| rng.gen_bool(density))
            .map(StateIndex),
    )
}

/// Every memoryless system strategy: one output per (state, valid input)
/// pair that has any. Pairs without a valid output stay unanswered.
pub fn memoryless_strategies(game: &GameStructure) -> Vec<Vec<Option<OutputIndex>>> {
    let pairs: Vec<(StateIndex, InputIndex)> = (0..game.num_states() as u32)
        .map(StateIndex)
        .flat_map(|s| game.valid_inputs(s).iter().map(move |&x| (s, x)))
        .collect();
    let mut out = vec![Vec::new()];
    for &(s, x) in &pairs {
        let choices = game.valid_outputs(s, x);
        let mut next = Vec::new();
        for partial in &out {
            if choices.is_empty() {
                let mut p: Vec<Option<OutputIndex>> = partial.clone();
                p.push(None);
                next.push(p);
            }
            for &y in choices {
                let mut p = partial.clone();
                p.push(Some(y));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The successor graph of a memoryless strategy. `None` marks a state
/// where some valid input has no answer.
fn strategy_graph(game: &GameStructure, f: &[Option<OutputIndex>]) -> Vec<Option<Vec<usize>>> {
    let mut k = 0;
    (0..game.num_states() as u32)
        .map(StateIndex)
        .map(|s| {
            let mut succ = Vec::new();
            let mut stuck = false;
            for &x in game.valid_inputs(s) {
                match f[k] {
                    Some(y) => succ.push(game.successor(x, y).index()),
                    None => stuck = true,
                }
                k += 1;
            }
            (!stuck).then_some(succ)
        })
        .collect()
}

/// States reachable from `start` moving only through `through`; `start`
/// itself is always expanded.
fn reach_from(
    graph: &[Option<Vec<usize>>],
    start: usize,
    through: &dyn Fn(usize) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        if u != start && !through(u) {
            continue;
        }
        if let Some(succ) = &graph[u] {
            for &v in succ {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    seen
}

/// Whether the environment beats the fixed strategy from `start`.
///
/// It wins by driving the play to an unanswered input, or by finding a
/// cycle through `cycle_ok` states that meets every assumption and is
/// reached through `stem_ok` states.
fn env_beats(
    game: &GameStructure,
    graph: &[Option<Vec<usize>>],
    start: usize,
    stem_ok: &dyn Fn(usize) -> bool,
    cycle_ok: &dyn Fn(usize) -> bool,
) -> bool {
    let n = graph.len();
    let anywhere = reach_from(graph, start, &|_| true);
    if (0..n).any(|u| anywhere[u] && graph[u].is_none()) {
        return true;
    }
    if !stem_ok(start) {
        return false;
    }
    let stem = reach_from(graph, start, stem_ok);
    let goals: Vec<StateSet> = if game.env_goals().is_empty() {
        vec![game.full_set()]
    } else {
        game.env_goals().to_vec()
    };
    // Reachability inside the cycle region, one step at least.
    let inside: Vec<Vec<bool>> = (0..n)
        .map(|u| {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = graph[u]
                .iter()
                .flatten()
                .copied()
                .filter(|&v| cycle_ok(v))
                .collect();
            while let Some(v) = stack.pop() {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                if let Some(succ) = &graph[v] {
                    stack.extend(succ.iter().copied().filter(|&w| cycle_ok(w)));
                }
            }
            seen
        })
        .collect();
    (0..n).any(|u| {
        if !stem[u] || !stem_ok(u) || !cycle_ok(u) || !inside[u][u] {
            return false;
        }
        let component: Vec<usize> = (0..n)
            .filter(|&v| v == u || (inside[u][v] && inside[v][u]))
            .collect();
        goals
            .iter()
            .all(|g| component.iter().any(|&v| g.contains(StateIndex(v as u32))))
    })
}

fn enumerate_wins(
    game: &GameStructure,
    stem_ok: &dyn Fn(usize) -> bool,
    cycle_ok: &dyn Fn(usize) -> bool,
) -> StateSet {
    let mut win = game.empty_set();
    for f in memoryless_strategies(game) {
        let graph = strategy_graph(game, &f);
        for s in 0..game.num_states() {
            if !env_beats(game, &graph, s, stem_ok, cycle_ok) {
                win.insert(StateIndex(s as u32));
            }
        }
    }
    win
}

/// Winning set of the reachability game by enumeration of memoryless
/// strategies. A strategy wins from a state if every play stays answered
/// forever and either reaches `target` or starves some assumption.
pub fn oracle_reach(game: &GameStructure, target: &StateSet) -> StateSet {
    let off = |u: usize| !target.contains(StateIndex(u as u32));
    enumerate_wins(game, &off, &off)
}

/// Winning set of a GR(1) game with one guarantee, by enumeration of
/// memoryless strategies (enough for one guarantee): the environment needs
/// a reachable cycle that avoids the guarantee and meets every assumption.
pub fn oracle_gr1_single(game: &GameStructure) -> StateSet {
    assert_eq!(game.sys_goals().len(), 1);
    let goal = &game.sys_goals()[0];
    enumerate_wins(game, &|_| true, &|u| !goal.contains(StateIndex(u as u32)))
}
