//! Benchmark sweeps over random gridworld instances.
//!
//! Every instance is solved by each requested mode on the same game. Verdicts
//! must agree across modes and every produced strategy must validate; either
//! failure aborts the run with the instance seed.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{encode, generate, GridError, GridSpec};
use crate::decomp::{check_singletons, solve_decomposed};
use crate::game::GameStructure;
use crate::solver::{check_realizable, solve_gr1};
use crate::strategy::validate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMode {
    Monolithic,
    DecomposedSerial,
    DecomposedParallel,
}

impl BenchMode {
    pub const ALL: [BenchMode; 3] = [
        BenchMode::Monolithic,
        BenchMode::DecomposedSerial,
        BenchMode::DecomposedParallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchMode::Monolithic => "monolithic",
            BenchMode::DecomposedSerial => "decomposed-serial",
            BenchMode::DecomposedParallel => "decomposed-parallel",
        }
    }
}

impl fmt::Display for BenchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for BenchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        BenchMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown bench mode `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub goals: Vec<usize>,
    pub instances: usize,
    pub modes: Vec<BenchMode>,
    pub seed: u64,
    /// Workers for the parallel mode.
    pub workers: usize,
    /// Resample instances until realizable.
    pub realizable_only: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance_id: usize,
    pub seed: u64,
    pub grid_t: usize,
    pub density: f64,
    pub n_goals: usize,
    pub mode: BenchMode,
    pub realizable: bool,
    pub wall_ms: f64,
    pub subgame_ms: Vec<f64>,
    /// Outer fixpoint iterations; `None` for the decomposed modes.
    pub z_iterations: Option<usize>,
    /// `None` when no strategy was produced.
    pub validated: Option<bool>,
    /// μ layers per reach game solved.
    pub reach_iterations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BenchError {
    #[error("no modes requested")]
    NoModes,
    #[error(transparent)]
    Generation(#[from] GridError),
    #[error("no realizable instance found from seed {seed} after {attempts} tries")]
    NoRealizable { seed: u64, attempts: usize },
    #[error("instance seed {seed}: modes disagree on realizability")]
    Disagreement { seed: u64 },
    #[error("instance seed {seed}: {mode} strategy failed validation")]
    ValidationFailed { seed: u64, mode: BenchMode },
}

/// Seeds tried per instance when only realizable instances are wanted.
pub const REALIZABLE_TRIES: usize = 200;

/// One benchmark instance: its grid, game and seed.
pub struct Instance {
    pub seed: u64,
    pub grid: GridSpec,
    pub game: GameStructure,
}

/// Generates the instance for `seed`, or with `realizable_only` the first
/// realizable instance among seeds derived from it.
pub fn make_instance(
    seed: u64,
    t: usize,
    density: f64,
    n: usize,
    realizable_only: bool,
) -> Result<Instance, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidate = seed;
    for _ in 0..REALIZABLE_TRIES {
        let grid = generate(candidate, t, density, n)?;
        let game = encode(&grid).expect("grid games fit the state cap");
        if !realizable_only {
            return Ok(Instance {
                seed: candidate,
                grid,
                game,
            });
        }
        let sm = check_singletons(&game).expect("grid goals are single states");
        if solve_decomposed(&game, &sm, 1).verdict.is_realizable() {
            return Ok(Instance {
                seed: candidate,
                grid,
                game,
            });
        }
        candidate = rng.next_u64();
    }
    Err(BenchError::NoRealizable {
        seed,
        attempts: REALIZABLE_TRIES,
    })
}

/// Solves `game` in `mode`, timing the solver call only.
pub fn run_mode(game: &GameStructure, mode: BenchMode, workers: usize) -> ModeOutcome {
    match mode {
        BenchMode::Monolithic => {
            let start = Instant::now();
            let sol = solve_gr1(game);
            let realizable = check_realizable(game, &sol.winning).is_realizable();
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let validated = realizable.then(|| validate(game, &sol.strategy, game.init()).passed());
            ModeOutcome {
                realizable,
                wall_ms,
                subgame_ms: Vec::new(),
                z_iterations: Some(sol.z_iterations),
                reach_iterations: sol.reach_iterations,
                validated,
            }
        }
        BenchMode::DecomposedSerial | BenchMode::DecomposedParallel => {
            let workers = if mode == BenchMode::DecomposedSerial {
                1
            } else {
                workers
            };
            let start = Instant::now();
            let sm = check_singletons(game).expect("grid goals are single states");
            let res = solve_decomposed(game, &sm, workers);
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let validated = res
                .strategy
                .as_ref()
                .map(|a| validate(game, a, game.init()).passed());
            ModeOutcome {
                realizable: res.verdict.is_realizable(),
                wall_ms,
                subgame_ms: res.stats.iter().map(|s| s.millis).collect(),
                z_iterations: None,
                reach_iterations: res.stats.iter().map(|s| s.iterations).collect(),
                validated,
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModeOutcome {
    pub realizable: bool,
    pub wall_ms: f64,
    pub subgame_ms: Vec<f64>,
    pub z_iterations: Option<usize>,
    pub reach_iterations: Vec<usize>,
    pub validated: Option<bool>,
}

/// Runs the sweep in the order sizes × densities × goals × instances,
/// calling `sink` on each record as it is produced.
pub fn run_bench(
    config: &BenchConfig,
    mut sink: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, BenchError> {
    if config.modes.is_empty() {
        return Err(BenchError::NoModes);
    }
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    let mut instance_id = 0;
    for &t in &config.sizes {
        for &density in &config.densities {
            for &n in &config.goals {
                for _ in 0..config.instances {
                    let inst =
                        make_instance(master.next_u64(), t, density, n, config.realizable_only)?;
                    let mut verdict = None;
                    for &mode in &config.modes {
                        let out = run_mode(&inst.game, mode, config.workers);
                        if *verdict.get_or_insert(out.realizable) != out.realizable {
                            return Err(BenchError::Disagreement { seed: inst.seed });
                        }
                        if out.validated == Some(false) {
                            return Err(BenchError::ValidationFailed {
                                seed: inst.seed,
                                mode,
                            });
                        }
                        let rec = BenchRecord {
                            instance_id,
                            seed: inst.seed,
                            grid_t: t,
                            density,
                            n_goals: n,
                            mode,
                            realizable: out.realizable,
                            wall_ms: out.wall_ms,
                            subgame_ms: out.subgame_ms,
                            z_iterations: out.z_iterations,
                            validated: out.validated,
                            reach_iterations: out.reach_iterations,
                        };
                        sink(&rec);
                        records.push(rec);
                    }
                    instance_id += 1;
                }
            }
        }
    }
    Ok(records)
}

pub const CSV_HEADER: [&str; 11] = [
    "instance_id",
    "seed",
    "grid_t",
    "density",
    "n_goals",
    "mode",
    "realizable",
    "wall_ms",
    "subgame_ms_list",
    "z_iterations",
    "validated",
];

const TIMING_COLUMNS: [&str; 2] = ["wall_ms", "subgame_ms_list"];

fn row(r: &BenchRecord) -> [String; 11] {
    [
        r.instance_id.to_string(),
        r.seed.to_string(),
        r.grid_t.to_string(),
        r.density.to_string(),
        r.n_goals.to_string(),
        r.mode.to_string(),
        r.realizable.to_string(),
        format!("{:.3}", r.wall_ms),
        r.subgame_ms
            .iter()
            .map(|ms| format!("{ms:.3}"))
            .collect::<Vec<_>>()
            .join(";"),
        r.z_iterations.map_or(String::new(), |z| z.to_string()),
        match r.validated {
            Some(true) => "pass".into(),
            Some(false) => "fail".into(),
            None => "none".into(),
        },
    ]
}

/// Writes records as CSV with a header. Without `timing`, the wall-clock
/// columns are left out, which makes the output reproducible.
pub fn write_csv<W: Write>(
    out: W,
    records: &[BenchRecord],
    timing: bool,
) -> Result<(), csv::Error> {
    let keep: Vec<bool> = CSV_HEADER
        .iter()
        .map(|h| timing || !TIMING_COLUMNS.contains(h))
        .collect();
    let pick = |fields: Vec<String>| -> Vec<String> {
        fields
            .into_iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(f, _)| f)
            .collect()
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(pick(CSV_HEADER.iter().map(|s| s.to_string()).collect()))?;
    for r in records {
        w.write_record(pick(row(r).to_vec()))?;
    }
    w.flush()?;
    Ok(())
}

/// Per-configuration timing summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub grid_t: usize,
    pub density: f64,
    pub n_goals: usize,
    pub mode: BenchMode,
    pub count: usize,
    pub realizable: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
}

pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    type Key = (usize, f64, usize, BenchMode);
    let mut groups: Vec<(Key, Vec<&BenchRecord>)> = Vec::new();
    for r in records {
        let key = (r.grid_t, r.density, r.n_goals, r.mode);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    for ((grid_t, density, n_goals, mode), rs) in groups {
        let mut times: Vec<f64> = rs.iter().map(|r| r.wall_ms).collect();
        times.sort_by(f64::total_cmp);
        let count = times.len();
        let median_ms = if count % 2 == 1 {
            times[count / 2]
        } else {
            (times[count / 2 - 1] + times[count / 2]) / 2.0
        };
        rows.push(SummaryRow {
            grid_t,
            density,
            n_goals,
            mode,
            count,
            realizable: rs.iter().filter(|r| r.realizable).count(),
            mean_ms: times.iter().sum::<f64>() / count as f64,
            median_ms,
        });
    }
    rows
}

/// A plain-text table of [`summarize`] output.
pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:>4} {:>7} {:>3} {:<20} {:>5} {:>5} {:>12} {:>12}\n",
        "t", "density", "n", "mode", "count", "real", "mean_ms", "median_ms"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>7} {:>3} {:<20} {:>5} {:>5} {:>12.3} {:>12.3}\n",
            r.grid_t, r.density, r.n_goals, r.mode, r.count, r.realizable, r.mean_ms, r.median_ms
        ));
    }
    out
}
