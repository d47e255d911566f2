//! Model checking a strategy against the game.
//!
//! The product of strategy memory and game states is explored from the
//! initial memory and the given start states. Environment moves are free
//! among valid inputs and system moves are fixed by the strategy. Two things
//! are checked: the strategy answers every valid input at every reachable
//! node with a valid output, and no reachable cycle violates the objective.
//! Finite plays that end because the environment has no valid input count
//! as wins.

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::StrategyAutomaton;
use crate::game::{GameStructure, InputIndex, OutputIndex, StateIndex, StateSet};

/// Winning condition to check.
#[derive(Clone, Debug)]
pub enum Objective {
    /// Every guarantee infinitely often, provided every assumption holds
    /// infinitely often.
    Gr1,
    /// Reach the set, or violate some assumption.
    Reach(StateSet),
}

/// A node of the product graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProductNode {
    pub memory: u32,
    pub state: StateIndex,
}

/// A counterexample: follow `stem_inputs` from `stem[0]` through the stem,
/// then `cycle_inputs` around the cycle forever. The node after the last
/// stem node is `cycle[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<ProductNode>,
    pub stem_inputs: Vec<InputIndex>,
    pub cycle: Vec<ProductNode>,
    pub cycle_inputs: Vec<InputIndex>,
}

impl Lasso {
    pub fn start(&self) -> ProductNode {
        self.stem.first().copied().unwrap_or(self.cycle[0])
    }

    /// Inputs for `repeats` turns of the cycle after the stem.
    pub fn script(&self, repeats: usize) -> Vec<InputIndex> {
        let mut out = self.stem_inputs.clone();
        for _ in 0..repeats {
            out.extend_from_slice(&self.cycle_inputs);
        }
        out
    }
}

/// A reachable (memory, state, input) the strategy does not answer properly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Undefined {
    pub memory: u32,
    pub state: StateIndex,
    pub input: InputIndex,
    /// The output given, if any; present when it is not a valid output.
    pub invalid_output: Option<OutputIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Definedness violations, in discovery order, at most
    /// [`MAX_WITNESSES`].
    pub undefined: Vec<Undefined>,
    pub undefined_total: usize,
    /// A reachable cycle that violates the objective.
    pub lasso: Option<Lasso>,
    /// For GR(1), the guarantee (zero-based) the lasso never visits.
    pub missed_goal: Option<usize>,
    pub product_nodes: usize,
    pub product_edges: usize,
}

pub const MAX_WITNESSES: usize = 16;

impl ValidationReport {
    pub fn defined(&self) -> bool {
        self.undefined_total == 0
    }

    pub fn live(&self) -> bool {
        self.lasso.is_none()
    }

    pub fn passed(&self) -> bool {
        self.defined() && self.live()
    }
}

struct Product {
    nodes: Vec<ProductNode>,
    ids: HashMap<ProductNode, u32>,
    edges: Vec<Vec<(u32, InputIndex)>>,
    roots: Vec<u32>,
}

impl Product {
    fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

/// Validates a strategy from the initial states.
pub fn validate(
    game: &GameStructure,
    strat: &StrategyAutomaton,
    from: &StateSet,
) -> ValidationReport {
    validate_with(game, strat, from, &Objective::Gr1)
}

pub fn validate_with(
    game: &GameStructure,
    strat: &StrategyAutomaton,
    from: &StateSet,
    objective: &Objective,
) -> ValidationReport {
    let mut undefined = Vec::new();
    let mut undefined_total = 0;
    let product = explore(game, strat, from, |u| {
        undefined_total += 1;
        if undefined.len() < MAX_WITNESSES {
            undefined.push(u);
        }
    });
    let (lasso, missed_goal) = match objective {
        Objective::Gr1 => find_gr1_violation(game, &product),
        Objective::Reach(target) => (find_reach_violation(game, &product, target), None),
    };
    ValidationReport {
        undefined,
        undefined_total,
        lasso,
        missed_goal,
        product_nodes: product.nodes.len(),
        product_edges: product.edge_count(),
    }
}

fn explore(
    game: &GameStructure,
    strat: &StrategyAutomaton,
    from: &StateSet,
    mut report: impl FnMut(Undefined),
) -> Product {
    let mut p = Product {
        nodes: Vec::new(),
        ids: HashMap::new(),
        edges: Vec::new(),
        roots: Vec::new(),
    };
    let fits = strat.fits(game);
    let intern = |p: &mut Product, node: ProductNode, queue: &mut VecDeque<u32>| -> u32 {
        *p.ids.entry(node).or_insert_with(|| {
            let id = p.nodes.len() as u32;
            p.nodes.push(node);
            p.edges.push(Vec::new());
            queue.push_back(id);
            id
        })
    };
    let mut queue = VecDeque::new();
    for s in from.iter() {
        let node = ProductNode {
            memory: strat.initial_memory(),
            state: s,
        };
        let id = intern(&mut p, node, &mut queue);
        p.roots.push(id);
    }
    while let Some(id) = queue.pop_front() {
        let ProductNode { memory, state } = p.nodes[id as usize];
        for e in game.entries(state) {
            let x = game.entry_input(e);
            let mv = if fits {
                strat.get_entry(memory, e)
            } else {
                None
            };
            let Some((m2, y)) = mv else {
                report(Undefined {
                    memory,
                    state,
                    input: x,
                    invalid_output: None,
                });
                continue;
            };
            if game.entry_outputs(e).binary_search(&y).is_err() {
                report(Undefined {
                    memory,
                    state,
                    input: x,
                    invalid_output: Some(y),
                });
                continue;
            }
            let next = ProductNode {
                memory: m2,
                state: game.successor(x, y),
            };
            let nid = intern(&mut p, next, &mut queue);
            p.edges[id as usize].push((nid, x));
        }
    }
    p
}

/// Nodes reachable from the roots without entering `blocked`, with BFS parents.
fn reach_avoiding(p: &Product, blocked: impl Fn(u32) -> bool) -> Vec<Option<(u32, InputIndex)>> {
    const ROOT: (u32, InputIndex) = (u32::MAX, InputIndex(u32::MAX));
    let mut parent: Vec<Option<(u32, InputIndex)>> = vec![None; p.nodes.len()];
    let mut queue = VecDeque::new();
    for &r in &p.roots {
        if !blocked(r) && parent[r as usize].is_none() {
            parent[r as usize] = Some(ROOT);
            queue.push_back(r);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &(v, x) in &p.edges[u as usize] {
            if !blocked(v) && parent[v as usize].is_none() {
                parent[v as usize] = Some((u, x));
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Shortest path inside `allowed` from `from` to the first node satisfying
/// `goal`, taking at least one edge. Returns the nodes after `from` and the
/// inputs taken.
fn path_within(
    p: &Product,
    allowed: &HashSet<u32>,
    from: u32,
    goal: impl Fn(u32) -> bool,
) -> Option<(Vec<u32>, Vec<InputIndex>)> {
    let mut parent: HashMap<u32, (u32, InputIndex)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut visited = HashSet::new();
    while let Some(u) = queue.pop_front() {
        for &(v, x) in &p.edges[u as usize] {
            if !allowed.contains(&v) || visited.contains(&v) {
                continue;
            }
            visited.insert(v);
            parent.insert(v, (u, x));
            if goal(v) {
                let (mut nodes, mut inputs) = (vec![v], Vec::new());
                let mut cur = v;
                loop {
                    let (pu, px) = parent[&cur];
                    inputs.push(px);
                    if pu == from {
                        break;
                    }
                    nodes.push(pu);
                    cur = pu;
                }
                nodes.reverse();
                inputs.reverse();
                return Some((nodes, inputs));
            }
            queue.push_back(v);
        }
    }
    None
}

/// Looks for an SCC of the nodes accepted by `keep` (and reachable through
/// such nodes when `stem_avoids` is set) that is nontrivial and meets every
/// environment goal. Builds a lasso through it.
fn find_bad_scc(
    game: &GameStructure,
    p: &Product,
    keep: impl Fn(u32) -> bool,
    stem_avoids: bool,
) -> Option<Lasso> {
    let parent = if stem_avoids {
        reach_avoiding(p, |u| !keep(u))
    } else {
        reach_avoiding(p, |_| false)
    };
    let mut graph: DiGraph<u32, InputIndex> = DiGraph::new();
    let mut local = HashMap::new();
    for u in 0..p.nodes.len() as u32 {
        if keep(u) && parent[u as usize].is_some() {
            local.insert(u, graph.add_node(u));
        }
    }
    for (&u, &lu) in &local {
        for &(v, x) in &p.edges[u as usize] {
            if let Some(&lv) = local.get(&v) {
                graph.add_edge(lu, lv, x);
            }
        }
    }
    let goals = game.env_goals();
    let mut sccs = tarjan_scc(&graph);
    // Deterministic choice: the SCC containing the lowest product node.
    for scc in sccs.iter_mut() {
        scc.sort_by_key(|&n| graph[n]);
    }
    sccs.sort_by_key(|scc| graph[scc[0]]);
    for scc in sccs {
        let nontrivial = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        if !nontrivial {
            continue;
        }
        let members: HashSet<u32> = scc.iter().map(|&n: &NodeIndex| graph[n]).collect();
        let meets_all = goals.iter().all(|goal| {
            members
                .iter()
                .any(|&u| goal.contains(p.nodes[u as usize].state))
        });
        if !meets_all {
            continue;
        }
        let entry = graph[scc[0]];
        // Stem from a root to the SCC entry.
        let mut stem = Vec::new();
        let mut stem_inputs = Vec::new();
        let mut cur = entry;
        while let Some((pu, px)) = parent[cur as usize] {
            if pu == u32::MAX {
                break;
            }
            stem.push(pu);
            stem_inputs.push(px);
            cur = pu;
        }
        stem.reverse();
        stem_inputs.reverse();
        // Cycle through one node of every goal and back.
        let mut cycle = vec![entry];
        let mut cycle_inputs = Vec::new();
        let mut at = entry;
        for goal in goals {
            if goal.contains(p.nodes[at as usize].state) {
                continue;
            }
            let (nodes, inputs) = path_within(p, &members, at, |u| {
                goal.contains(p.nodes[u as usize].state)
            })?;
            at = *nodes.last().expect("nonempty path");
            cycle.extend(nodes);
            cycle_inputs.extend(inputs);
        }
        let (nodes, inputs) = path_within(p, &members, at, |u| u == entry)?;
        cycle.extend(&nodes[..nodes.len() - 1]);
        cycle_inputs.extend(inputs);
        let node = |u: u32| p.nodes[u as usize];
        return Some(Lasso {
            stem: stem.into_iter().map(node).collect(),
            stem_inputs,
            cycle: cycle.into_iter().map(node).collect(),
            cycle_inputs,
        });
    }
    None
}

fn find_gr1_violation(game: &GameStructure, p: &Product) -> (Option<Lasso>, Option<usize>) {
    for (j, goal) in game.sys_goals().iter().enumerate() {
        if let Some(l) = find_bad_scc(
            game,
            p,
            |u| !goal.contains(p.nodes[u as usize].state),
            false,
        ) {
            return (Some(l), Some(j));
        }
    }
    (None, None)
}

fn find_reach_violation(game: &GameStructure, p: &Product, target: &StateSet) -> Option<Lasso> {
    find_bad_scc(
        game,
        p,
        |u| !target.contains(p.nodes[u as usize].state),
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_spec;
    use crate::game::build_game;
    use crate::solver::{solve_gr1, solve_reachability, ReachabilityGame};

    const G1: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                      [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s\n";

    #[test]
    fn solved_strategy_passes() {
        let g = build_game(&parse_spec(G1).unwrap()).unwrap();
        let sol = solve_gr1(&g);
        let r = validate(&g, &sol.strategy, g.init());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn constant_output_fails_with_lasso() {
        let g = build_game(&parse_spec(G1).unwrap()).unwrap();
        let mut a = StrategyAutomaton::new(&g, 1, 0);
        for e in 0..g.num_entries() {
            a.set_entry(0, e, 0, OutputIndex(0));
        }
        let r = validate(&g, &a, g.init());
        assert!(r.defined());
        let lasso = r.lasso.expect("s stays 0 so e & s never holds");
        assert_eq!(r.missed_goal, Some(0));
        let on_cycle = g.encode(&[1, 0]).unwrap();
        assert!(lasso.cycle.iter().any(|n| n.state == on_cycle));
        assert!(!lasso.cycle_inputs.is_empty());
    }

    #[test]
    fn deleted_entry_is_reported() {
        let g = build_game(&parse_spec(G1).unwrap()).unwrap();
        let mut a = solve_gr1(&g).strategy;
        let s0 = g.encode(&[0, 0]).unwrap();
        let x1 = InputIndex(1);
        a.remove(&g, 0, s0, x1);
        let r = validate(&g, &a, g.init());
        assert!(!r.defined());
        assert_eq!(
            r.undefined[0],
            Undefined {
                memory: 0,
                state: s0,
                input: x1,
                invalid_output: None
            }
        );
    }

    #[test]
    fn reach_objective() {
        let g = build_game(&parse_spec(G1).unwrap()).unwrap();
        let rg = ReachabilityGame::new(&g, g.sys_goals()[0].clone(), g.init().clone());
        let sol = solve_reachability(&rg);
        let a = sol.to_automaton(&g);
        let obj = Objective::Reach(rg.target.clone());
        assert!(validate_with(&g, &a, g.init(), &obj).passed());
        // Blocking is impossible here, so the same strategy loses the
        // empty-target game.
        let r = validate_with(&g, &a, g.init(), &Objective::Reach(g.empty_set()));
        assert!(r.lasso.is_some());
    }
}
