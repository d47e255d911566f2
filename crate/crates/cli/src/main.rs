//! `gr1synth` command-line front end.
//!
//! The first stdout line of `synth` is the verdict: `REALIZABLE`,
//! `UNREALIZABLE` or `ERROR <kind>`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | realizable, strategy passes, play or bench finished |
//! | 1 | usage, I/O or parse error |
//! | 2 | unrealizable, or the strategy fails its check |
//! | 3 | decomposition requested but a guarantee is not a single state |
//! | 4 | bench modes disagree or a bench strategy fails validation |

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use gr1synth::decomp::{Decision, DecompError};
use gr1synth::expr::parse_spec;
use gr1synth::game::{build_game, GameStructure, InputIndex, StateIndex};
use gr1synth::grid::bench::{
    format_summary, run_bench, summarize, write_csv, BenchConfig, BenchError, BenchMode,
};
use gr1synth::solver::Verdict;
use gr1synth::strategy::{
    export_strategy, import_strategy, parse_input, simulate, validate, EnvPolicy, PlayTrace,
    RandomEnv, ScriptedEnv, SimError, StrategyAutomaton, TerminalEnv, Termination,
};
use gr1synth::synth::{default_workers, synthesize, Mode};

#[derive(Parser)]
#[command(
    name = "gr1synth",
    version,
    about = "GR(1) synthesis with goal decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability and write a strategy when realizable.
    Synth(SynthArgs),
    /// Check a strategy file against a specification.
    Check { spec: PathBuf, strategy: PathBuf },
    /// Play a strategy against a random, scripted or human environment.
    #[command(visible_alias = "play")]
    Sim(SimArgs),
    /// Run gridworld benchmark sweeps.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SynthArgs {
    spec: PathBuf,
    /// auto decomposes when every guarantee holds in a single state.
    #[arg(long, default_value = "auto", value_parser = parse_mode)]
    mode: Mode,
    /// Worker threads for the decomposed subgames.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    parallel: Option<u32>,
    /// Strategy file; defaults to `<spec>.strategy.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print iteration counts and subgame times.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("env").args(["seed", "script", "interactive"])))]
struct SimArgs {
    spec: PathBuf,
    strategy: PathBuf,
    /// Uniformly random environment with this seed (the default, seed 0).
    #[arg(long)]
    seed: Option<u64>,
    /// One input per line as `name=value` pairs; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Read inputs from the terminal.
    #[arg(long)]
    interactive: bool,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Start state as `name=value` pairs; defaults to the first initial state.
    #[arg(long)]
    start: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "8")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    densities: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    goals: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    instances: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "monolithic,decomposed-serial,decomposed-parallel",
        value_parser = parse_bench_mode
    )]
    modes: Vec<BenchMode>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one CSV row per instance and mode.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Workers for the decomposed-parallel mode.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    parallel: Option<u32>,
    /// Resample until every instance is realizable.
    #[arg(long)]
    realizable_only: bool,
    /// Leave the wall-clock columns out of the CSV.
    #[arg(long)]
    no_timing: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_bench_mode(s: &str) -> Result<BenchMode, String> {
    s.parse()
}

/// A failed command: exit code, the `<kind>` of the `ERROR` line, and a
/// message for stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

fn fail(code: u8, kind: &'static str, message: impl Into<String>) -> Failure {
    Failure {
        code,
        kind,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(1, "io", format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<GameStructure, Failure> {
    let text = read(path)?;
    let spec =
        parse_spec(&text).map_err(|e| fail(1, "parse", format!("{}: {e}", path.display())))?;
    build_game(&spec).map_err(|e| fail(1, "spec", format!("{}: {e}", path.display())))
}

fn load_strategy(game: &GameStructure, path: &Path) -> Result<StrategyAutomaton, Failure> {
    let text = read(path)?;
    import_strategy(game, &text)
        .map_err(|e| fail(1, "strategy", format!("{}: {e}", path.display())))
}

fn default_out(spec: &Path) -> PathBuf {
    let mut name = spec.as_os_str().to_owned();
    name.push(".strategy.json");
    PathBuf::from(name)
}

fn synth(args: &SynthArgs) -> Outcome {
    let game = load_game(&args.spec)?;
    let workers = args
        .parallel
        .map_or_else(|| default_workers(game.sys_goals().len()), |n| n as usize);
    let res = synthesize(&game, args.mode, workers).map_err(|e| match e {
        DecompError::NotSingleton { .. } | DecompError::NoGoals => {
            fail(3, "not-singleton", e.to_string())
        }
    })?;
    match &res.verdict {
        Verdict::Realizable => println!("REALIZABLE"),
        Verdict::VacuouslyRealizable => {
            println!("REALIZABLE");
            println!("no state satisfies the initial condition");
        }
        Verdict::Unrealizable { losing } => {
            println!("UNREALIZABLE");
            for &s in losing {
                println!("losing initial state: {}", game.format_state(s));
            }
        }
    }
    if args.stats {
        println!("engine: {}", res.engine);
        println!(
            "winning states: {} of {}",
            res.winning.count(),
            game.num_states()
        );
        if let Some(z) = res.z_iterations {
            println!("outer iterations: {z}");
        }
        println!("reach iterations: {:?}", res.reach_iterations);
        for st in &res.subgames {
            println!(
                "subgame {}: {:.3} ms, {} iterations, {} winning states",
                st.index, st.millis, st.iterations, st.winning_states
            );
        }
        match &res.decision {
            Some(Decision::Blocking) => println!("decision: blocking"),
            Some(Decision::Composed) => println!("decision: composed"),
            Some(Decision::Unrealizable { failing, .. }) => {
                println!("decision: subgame {failing} not won from its start")
            }
            None => {}
        }
        println!("time: {:.3} ms", res.millis);
    }
    let Some(strategy) = &res.strategy else {
        return Ok(if res.verdict.is_realizable() { 0 } else { 2 });
    };
    if !res.verdict.is_realizable() {
        return Ok(2);
    }
    let out = args.out.clone().unwrap_or_else(|| default_out(&args.spec));
    fs::write(&out, export_strategy(&game, strategy))
        .map_err(|e| fail(1, "io", format!("{}: {e}", out.display())))?;
    println!("strategy: {}", out.display());
    Ok(0)
}

fn check(spec: &Path, strategy: &Path) -> Outcome {
    let game = load_game(spec)?;
    let strat = load_strategy(&game, strategy)?;
    let report = validate(&game, &strat, game.init());
    println!("{}", if report.passed() { "PASS" } else { "FAIL" });
    println!(
        "product: {} nodes, {} edges",
        report.product_nodes, report.product_edges
    );
    for u in &report.undefined {
        let input = game.format_values(&game.decode_input(u.input), None);
        println!(
            "undefined: memory {}, state {}, input {}{}",
            u.memory,
            game.format_state(u.state),
            input,
            if u.invalid_output.is_some() {
                " (invalid output)"
            } else {
                ""
            }
        );
    }
    if report.undefined_total > report.undefined.len() {
        println!(
            "undefined: {} more",
            report.undefined_total - report.undefined.len()
        );
    }
    if let Some(lasso) = &report.lasso {
        if let Some(goal) = report.missed_goal {
            println!("guarantee {} is never met on this cycle", goal + 1);
        }
        for n in &lasso.stem {
            println!("stem: memory {}, {}", n.memory, game.format_state(n.state));
        }
        for n in &lasso.cycle {
            println!("cycle: memory {}, {}", n.memory, game.format_state(n.state));
        }
    }
    Ok(if report.passed() { 0 } else { 2 })
}

fn parse_state(game: &GameStructure, text: &str) -> Option<StateIndex> {
    let mut vals: Vec<Option<i64>> = vec![None; game.vars().len()];
    for part in text.split([' ', ',', '\t']).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=')?;
        let idx = game.vars().iter().position(|v| v.name == name.trim())?;
        vals[idx] = Some(value.trim().parse().ok()?);
    }
    let vals: Option<Vec<i64>> = vals.into_iter().collect();
    game.encode(&vals?)
}

fn read_script(game: &GameStructure, path: &Path) -> Result<Vec<InputIndex>, Failure> {
    let text = read(path)?;
    let mut inputs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let x = parse_input(game, line).ok_or_else(|| {
            fail(
                1,
                "script",
                format!("{}:{}: not an input: `{line}`", path.display(), k + 1),
            )
        })?;
        inputs.push(x);
    }
    Ok(inputs)
}

fn print_trace(game: &GameStructure, trace: &PlayTrace) {
    let ne = game.num_env_vars();
    for k in 0..trace.steps() {
        let input = game.format_values(&game.decode_input(trace.inputs[k]), None);
        let names = &game.vars()[ne..];
        let output = match trace.outputs.get(k) {
            Some(&y) => names
                .iter()
                .zip(game.decode_output(y))
                .map(|(v, x)| format!("{}={x}", v.name))
                .collect::<Vec<_>>()
                .join(" "),
            None => "-".into(),
        };
        println!(
            "{k}: memory {} | {} | input {input} | output {output}",
            trace.memory[k],
            game.format_state(trace.states[k])
        );
    }
    if let Some(&last) = trace.states.get(trace.outputs.len()) {
        if trace.outputs.len() == trace.steps() {
            println!("{}: {}", trace.steps(), game.format_state(last));
        }
    }
    let tag = match trace.termination {
        Termination::Running => "stopped",
        Termination::EnvDeadlock => "env-deadlock",
        Termination::SysUndefined => "sys-undefined",
        Termination::StepLimit => "step-limit",
    };
    println!("end: {tag} after {} steps", trace.steps());
}

fn sim(args: &SimArgs) -> Outcome {
    let game = load_game(&args.spec)?;
    let strat = load_strategy(&game, &args.strategy)?;
    let start = match &args.start {
        Some(text) => parse_state(&game, text)
            .ok_or_else(|| fail(1, "usage", format!("not a state: `{text}`")))?,
        None => game
            .init()
            .first()
            .ok_or_else(|| fail(1, "usage", "no state satisfies the initial condition"))?,
    };
    let mut env: Box<dyn EnvPolicy> = if let Some(path) = &args.script {
        Box::new(ScriptedEnv::new(read_script(&game, path)?))
    } else if args.interactive {
        Box::new(TerminalEnv::new(io::stdin().lock(), io::stdout()))
    } else {
        Box::new(RandomEnv::new(args.seed.unwrap_or(0)))
    };
    let trace = simulate(&game, &strat, start, env.as_mut(), args.steps).map_err(|e| match e {
        SimError::BadStart(_) => fail(1, "usage", e.to_string()),
        SimError::InvalidInput { .. } => fail(1, "script", e.to_string()),
        SimError::Io(_) => fail(1, "io", e.to_string()),
    })?;
    print_trace(&game, &trace);
    Ok(if trace.termination == Termination::SysUndefined {
        2
    } else {
        0
    })
}

fn bench(args: &BenchArgs) -> Outcome {
    let max_goals = args.goals.iter().copied().max().unwrap_or(1);
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        densities: args.densities.clone(),
        goals: args.goals.clone(),
        instances: args.instances,
        modes: args.modes.clone(),
        seed: args.seed,
        workers: args
            .parallel
            .map_or_else(|| default_workers(max_goals).max(2), |n| n as usize),
        realizable_only: args.realizable_only,
    };
    let records = run_bench(&config, |r| {
        eprintln!(
            "instance {} (seed {}) t={} d={} n={} {}: {} in {:.3} ms",
            r.instance_id,
            r.seed,
            r.grid_t,
            r.density,
            r.n_goals,
            r.mode,
            if r.realizable {
                "realizable"
            } else {
                "unrealizable"
            },
            r.wall_ms
        );
    })
    .map_err(|e| match e {
        BenchError::Disagreement { .. } => fail(4, "disagreement", e.to_string()),
        BenchError::ValidationFailed { .. } => fail(4, "validation", e.to_string()),
        _ => fail(1, "usage", e.to_string()),
    })?;
    if let Some(path) = &args.csv {
        let file = fs::File::create(path)
            .map_err(|e| fail(1, "io", format!("{}: {e}", path.display())))?;
        write_csv(BufWriter::new(file), &records, !args.no_timing)
            .map_err(|e| fail(1, "io", format!("{}: {e}", path.display())))?;
    }
    print!("{}", format_summary(&summarize(&records)));
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Synth(args) => synth(args),
        Command::Check { spec, strategy } => check(spec, strategy),
        Command::Sim(args) => sim(args),
        Command::Bench(args) => bench(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("ERROR usage");
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let code = match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            println!("ERROR {}", f.kind);
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
