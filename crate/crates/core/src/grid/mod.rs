//! Gridworld coordination instances.
//!
//! An uncontrolled agent (environment, `X_r`, `X_c`) and a robot (system,
//! `Y_r`, `Y_c`) move on a grid with walls. Each step either stays or moves
//! to a 4-neighbour inside the grid and off the walls, and the robot may not
//! step onto the agent's next cell. The agent is assumed to visit each cell
//! b_i infinitely often; the robot must be at a_i while the agent is at b_i,
//! infinitely often, for every i. Every guarantee fixes all four variables,
//! so the games decompose.
//!
//! Rows grow with `U`, columns with `R`.

pub mod bench;

use std::collections::{BTreeSet, VecDeque};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{Domain, Expr, Owner, Specification, Term, VarDecl};
use crate::game::{build_game, GameError, GameStructure, InputIndex};

pub type Cell = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    /// Sorted.
    pub walls: Vec<Cell>,
    /// (robot cell a_i, agent cell b_i).
    pub pairs: Vec<(Cell, Cell)>,
    pub agent_start: Cell,
    pub robot_start: Cell,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("no feasible placement after {attempts} attempts (seed {seed})")]
    RetriesExhausted { seed: u64, attempts: usize },
    #[error("invalid move `{0}`; expected one of U, D, L, R, S")]
    BadMove(String),
    #[error("move {step} leaves the free cells")]
    Blocked { step: usize },
}

/// Placement attempts per seed before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

impl GridSpec {
    pub fn is_wall(&self, c: Cell) -> bool {
        self.walls.binary_search(&c).is_ok()
    }

    pub fn in_bounds(&self, (r, c): (i64, i64)) -> bool {
        r >= 0 && c >= 0 && (r as usize) < self.rows && (c as usize) < self.cols
    }

    pub fn is_free(&self, (r, c): (i64, i64)) -> bool {
        self.in_bounds((r, c)) && !self.is_wall((r as usize, c as usize))
    }

    /// Free cells reachable from `c`, as a row-major mask.
    fn component(&self, from: Cell) -> Vec<bool> {
        let mut seen = vec![false; self.rows * self.cols];
        let mut queue = VecDeque::from([from]);
        seen[from.0 * self.cols + from.1] = true;
        while let Some((r, c)) = queue.pop_front() {
            for (dr, dc) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let next = (r as i64 + dr, c as i64 + dc);
                if self.is_free(next) {
                    let cell = (next.0 as usize, next.1 as usize);
                    let k = cell.0 * self.cols + cell.1;
                    if !seen[k] {
                        seen[k] = true;
                        queue.push_back(cell);
                    }
                }
            }
        }
        seen
    }

    /// All special cells lie in one connected free region.
    pub fn connected(&self) -> bool {
        let comp = self.component(self.agent_start);
        let at = |c: Cell| comp[c.0 * self.cols + c.1];
        at(self.robot_start) && self.pairs.iter().all(|&(a, b)| at(a) && at(b))
    }

    /// Number of stay-or-move options of a player standing at `c`.
    pub fn move_count(&self, c: Cell) -> usize {
        Move::ALL
            .iter()
            .filter(|m| self.is_free(m.apply(c)))
            .count()
    }
}

/// Samples an instance: exactly ⌊d·t²⌋ walls on a t×t grid, the agent on the
/// first free cell and the robot on the second (row-major), and n distinct
/// (a_i, b_i) pairs of free cells with a_i ≠ b_i. Placements whose special
/// cells are not all connected are resampled.
pub fn generate(seed: u64, t: usize, density: f64, n: usize) -> Result<GridSpec, GridError> {
    if t < 2 {
        return Err(GridError::Parameters(format!("grid size {t} < 2")));
    }
    if !(0.0..1.0).contains(&density) {
        return Err(GridError::Parameters(format!(
            "density {density} not in [0, 1)"
        )));
    }
    if n == 0 {
        return Err(GridError::Parameters("at least one goal is needed".into()));
    }
    let cells = t * t;
    let wall_count = (density * cells as f64).floor() as usize;
    let free = cells - wall_count;
    if free < 2 || free * (free - 1) < n {
        return Err(GridError::Parameters(format!(
            "{free} free cells cannot hold {n} goals"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut walls: Vec<Cell> = sample(&mut rng, cells, wall_count)
            .into_iter()
            .map(|k| (k / t, k % t))
            .collect();
        walls.sort_unstable();
        let wall_set: BTreeSet<Cell> = walls.iter().copied().collect();
        let free_cells: Vec<Cell> = (0..cells)
            .map(|k| (k / t, k % t))
            .filter(|c| !wall_set.contains(c))
            .collect();
        let mut pairs = Vec::with_capacity(n);
        while pairs.len() < n {
            let a = free_cells[rng.gen_range(0..free_cells.len())];
            let b = free_cells[rng.gen_range(0..free_cells.len())];
            if a != b && !pairs.contains(&(a, b)) {
                pairs.push((a, b));
            }
        }
        let gs = GridSpec {
            rows: t,
            cols: t,
            walls,
            pairs,
            agent_start: free_cells[0],
            robot_start: free_cells[1],
            seed,
        };
        if gs.connected() {
            return Ok(gs);
        }
    }
    Err(GridError::RetriesExhausted {
        seed,
        attempts: MAX_ATTEMPTS,
    })
}

const XR: usize = 0;
const XC: usize = 1;
const YR: usize = 2;
const YC: usize = 3;

fn at(r: usize, c: usize, vr: usize, vc: usize, primed: bool) -> Expr {
    let v = |i| if primed { Term::next(i) } else { Term::var(i) };
    Expr::and(Expr::eq(v(vr), r as i64), Expr::eq(v(vc), c as i64))
}

fn movement(vr: usize, vc: usize) -> Expr {
    let (r, c) = (Term::var(vr), Term::var(vc));
    let (r2, c2) = (Term::next(vr), Term::next(vc));
    let step = |dr: i64, dc: i64| {
        Expr::and(
            Expr::eq(r2.clone(), r.clone() + Term::Int(dr)),
            Expr::eq(c2.clone(), c.clone() + Term::Int(dc)),
        )
    };
    Expr::any([
        Expr::and(
            Expr::eq(r2.clone(), r.clone()),
            Expr::eq(c2.clone(), c.clone()),
        ),
        step(1, 0),
        step(-1, 0),
        step(0, 1),
        step(0, -1),
    ])
}

/// The GR(1) specification of an instance.
pub fn encode_spec(gs: &GridSpec) -> Specification {
    let rmax = gs.rows as i64 - 1;
    let cmax = gs.cols as i64 - 1;
    let int = |hi| Domain::Int { lo: 0, hi };
    let vars = vec![
        VarDecl::new("X_r", int(rmax), Owner::Env),
        VarDecl::new("X_c", int(cmax), Owner::Env),
        VarDecl::new("Y_r", int(rmax), Owner::Sys),
        VarDecl::new("Y_c", int(cmax), Owner::Sys),
    ];
    let mut env_safety = vec![movement(XR, XC)];
    let mut sys_safety = vec![movement(YR, YC)];
    for &(wr, wc) in &gs.walls {
        env_safety.push(Expr::not(at(wr, wc, XR, XC, true)));
        sys_safety.push(Expr::not(at(wr, wc, YR, YC, true)));
    }
    sys_safety.push(Expr::not(Expr::and(
        Expr::eq(Term::next(XR), Term::next(YR)),
        Expr::eq(Term::next(XC), Term::next(YC)),
    )));
    let (ar, ac) = gs.agent_start;
    let (rr, rc) = gs.robot_start;
    Specification {
        vars,
        env_init: vec![at(ar, ac, XR, XC, false)],
        sys_init: vec![at(rr, rc, YR, YC, false)],
        env_safety,
        sys_safety,
        env_liveness: gs
            .pairs
            .iter()
            .map(|&(_, (br, bc))| at(br, bc, XR, XC, false))
            .collect(),
        sys_liveness: gs
            .pairs
            .iter()
            .map(|&((a_r, a_c), (br, bc))| {
                Expr::and(at(a_r, a_c, YR, YC, false), at(br, bc, XR, XC, false))
            })
            .collect(),
    }
}

pub fn encode(gs: &GridSpec) -> Result<GameStructure, GameError> {
    build_game(&encode_spec(gs))
}

/// A single step of either player.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Stay,
    Up,
    Down,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 5] = [Move::Stay, Move::Up, Move::Down, Move::Left, Move::Right];

    pub fn apply(self, (r, c): Cell) -> (i64, i64) {
        let (r, c) = (r as i64, c as i64);
        match self {
            Move::Stay => (r, c),
            Move::Up => (r + 1, c),
            Move::Down => (r - 1, c),
            Move::Left => (r, c - 1),
            Move::Right => (r, c + 1),
        }
    }
}

/// Parses a comma- or space-separated list of `U`, `D`, `L`, `R`, `S`.
pub fn parse_moves(text: &str) -> Result<Vec<Move>, GridError> {
    text.split([',', ' ', '\n', '\t'])
        .filter(|p| !p.is_empty())
        .map(|p| match p.trim() {
            "U" | "u" => Ok(Move::Up),
            "D" | "d" => Ok(Move::Down),
            "L" | "l" => Ok(Move::Left),
            "R" | "r" => Ok(Move::Right),
            "S" | "s" => Ok(Move::Stay),
            other => Err(GridError::BadMove(other.to_string())),
        })
        .collect()
}

/// Agent positions and game inputs for a move script starting at `start`.
pub fn agent_script(
    gs: &GridSpec,
    game: &GameStructure,
    start: Cell,
    moves: &[Move],
) -> Result<(Vec<Cell>, Vec<InputIndex>), GridError> {
    let mut pos = start;
    let mut cells = Vec::new();
    let mut inputs = Vec::new();
    for (step, m) in moves.iter().enumerate() {
        let next = m.apply(pos);
        if !gs.is_free(next) {
            return Err(GridError::Blocked { step });
        }
        pos = (next.0 as usize, next.1 as usize);
        cells.push(pos);
        inputs.push(
            game.encode_input(&[pos.0 as i64, pos.1 as i64])
                .expect("free cells are in range"),
        );
    }
    Ok((cells, inputs))
}
