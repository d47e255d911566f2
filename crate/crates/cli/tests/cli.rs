//! End-to-end runs of the `gr1synth` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use gr1synth::expr::print_spec;
use gr1synth::grid::{encode_spec, generate};
use serde_json::Value;
use tempfile::TempDir;

const G1: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                  [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s\n";
const G3: &str = "[INPUT]\ne : bool\n[OUTPUT]\ns : 0..2\n[ENV_INIT]\n!e\n[SYS_INIT]\ns = 0\n\
                  [ENV_LIVENESS]\ne\n[SYS_LIVENESS]\ne & s = 1\ne & s = 2\n";

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gr1synth"))
        .args(args)
        .output()
        .unwrap();
    outcome(out)
}

fn outcome(out: Output) -> (i32, String) {
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Synthesizes `text` and returns the spec path and the strategy path.
fn synthesized(dir: &TempDir, name: &str, text: &str) -> (PathBuf, PathBuf) {
    let spec = write(dir, name, text);
    let (code, out) = run(&["synth", s(&spec)]);
    assert_eq!(code, 0, "{out}");
    let strategy = dir.path().join(format!("{name}.strategy.json"));
    assert!(strategy.exists());
    (spec, strategy)
}

fn edit_strategy(path: &Path, f: impl FnOnce(&mut Value)) {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    f(&mut v);
    fs::write(path, serde_json::to_string(&v).unwrap()).unwrap();
}

#[test]
fn synth_realizable_writes_the_default_strategy_file() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "g1.spec", G1);
    let (code, out) = run(&["synth", s(&spec), "--mode", "auto", "--stats"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("REALIZABLE"));
    assert!(out.contains("engine: decomposed"));
    assert!(dir.path().join("g1.spec.strategy.json").exists());

    let custom = dir.path().join("custom.json");
    let (code, out) = run(&[
        "synth",
        s(&spec),
        "--mode",
        "monolithic",
        "--out",
        s(&custom),
        "--stats",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("engine: monolithic"));
    assert!(out.contains("outer iterations:"));
    assert!(custom.exists());
}

#[test]
fn synth_unrealizable_names_a_losing_initial_state() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "g2.spec", &format!("{G1}[SYS_SAFETY]\n!s'\n"));
    let (code, out) = run(&["synth", s(&spec)]);
    assert_eq!(code, 2);
    assert_eq!(out.lines().next(), Some("UNREALIZABLE"));
    assert!(out.contains("losing initial state: e=0 s=0"), "{out}");
    assert!(!dir.path().join("g2.spec.strategy.json").exists());
}

#[test]
fn synth_exit_codes_for_errors() {
    let dir = TempDir::new().unwrap();
    let wide = write(&dir, "wide.spec", &G1.replace("e & s\n", "s\n"));
    let (code, out) = run(&["synth", s(&wide), "--mode", "decomposed"]);
    assert_eq!((code, out.lines().next()), (3, Some("ERROR not-singleton")));
    assert_eq!(run(&["synth", s(&wide), "--mode", "auto"]).0, 0);

    let bad = write(&dir, "bad.spec", "[INPUT]\ne : bool\n[SYS_SAFETY]\ne &\n");
    let (code, out) = run(&["synth", s(&bad)]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR parse")));

    let (code, out) = run(&["synth", s(&wide), "--mode", "sideways"]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR usage")));
    let (code, out) = run(&["synth", "/nonexistent/file.spec"]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR io")));
}

#[test]
fn check_passes_a_composed_strategy() {
    let dir = TempDir::new().unwrap();
    let (spec, strategy) = synthesized(&dir, "g3.spec", G3);
    let (code, out) = run(&["check", s(&spec), s(&strategy)]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("PASS"));
}

#[test]
fn check_reports_a_lasso_for_a_constant_strategy() {
    let dir = TempDir::new().unwrap();
    let (spec, strategy) = synthesized(&dir, "g1.spec", G1);
    edit_strategy(&strategy, |v| {
        for row in v["table"].as_array_mut().unwrap() {
            row[4]["s"] = Value::from(0);
        }
    });
    let (code, out) = run(&["check", s(&spec), s(&strategy)]);
    assert_eq!(code, 2);
    assert_eq!(out.lines().next(), Some("FAIL"));
    assert!(out.contains("guarantee 1 is never met"), "{out}");
    assert!(out.contains("cycle: memory 0, e=1 s=0"), "{out}");
}

#[test]
fn check_names_a_missing_entry() {
    let dir = TempDir::new().unwrap();
    let (spec, strategy) = synthesized(&dir, "g3.spec", G3);
    edit_strategy(&strategy, |v| {
        let init = v["initial_memory"].clone();
        let table = v["table"].as_array_mut().unwrap();
        let k = table
            .iter()
            .position(|r| r[0] == init && r[1]["e"] == 0 && r[1]["s"] == 0 && r[2]["e"] == 0)
            .unwrap();
        table.remove(k);
    });
    let (code, out) = run(&["check", s(&spec), s(&strategy)]);
    assert_eq!(code, 2);
    assert!(
        out.contains("undefined: memory 1, state e=0 s=0, input e=0"),
        "{out}"
    );

    let renamed = write(&dir, "renamed.spec", &G3.replace('e', "f"));
    let (code, out) = run(&["check", s(&renamed), s(&strategy)]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR strategy")));
}

#[test]
fn sim_random_and_deadlock() {
    let dir = TempDir::new().unwrap();
    let (spec, strategy) = synthesized(&dir, "g1.spec", G1);
    let (code, out) = run(&[
        "sim",
        s(&spec),
        s(&strategy),
        "--seed",
        "7",
        "--steps",
        "20",
    ]);
    assert_eq!(code, 0);
    assert!(out.ends_with("end: step-limit after 20 steps\n"), "{out}");
    assert_eq!(
        out,
        run(&[
            "sim",
            s(&spec),
            s(&strategy),
            "--seed",
            "7",
            "--steps",
            "20"
        ])
        .1
    );

    let text = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[SYS_INIT]\n!s\n\
                [ENV_SAFETY]\n!e\ne'\n";
    let (spec, strategy) = synthesized(&dir, "dead.spec", text);
    let (code, out) = run(&["play", s(&spec), s(&strategy), "--steps", "20"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("end: env-deadlock after 1 steps\n"), "{out}");
}

#[test]
fn sim_script_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let text = "[INPUT]\ne : bool\n[OUTPUT]\ns : bool\n[ENV_INIT]\n!e\n[ENV_SAFETY]\ne' != e\n";
    let (spec, strategy) = synthesized(&dir, "alt.spec", text);
    let script = write(&dir, "bad.txt", "e=1\ne=1\n");
    let (code, out) = run(&["sim", s(&spec), s(&strategy), "--script", s(&script)]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR script")));
    let script = write(&dir, "junk.txt", "e=1\nbanana\n");
    let (code, _) = run(&["sim", s(&spec), s(&strategy), "--script", s(&script)]);
    assert_eq!(code, 1);
}

#[test]
fn scripted_agent_on_a_four_by_four_grid() {
    let dir = TempDir::new().unwrap();
    let gs = generate(3, 4, 0.0, 1).unwrap();
    assert_eq!(gs.agent_start, (0, 0));
    let (spec, strategy) = synthesized(&dir, "grid.spec", &print_spec(&encode_spec(&gs)));
    // R, R, U from (0, 0).
    let script = write(&dir, "moves.txt", "X_r=0 X_c=1\nX_r=0 X_c=2\nX_r=1 X_c=2\n");
    let (code, out) = run(&["sim", s(&spec), s(&strategy), "--script", s(&script)]);
    assert_eq!(code, 0, "{out}");
    let inputs: Vec<&str> = out.lines().filter_map(|l| l.split(" | ").nth(2)).collect();
    assert_eq!(
        inputs,
        [
            "input X_r=0 X_c=1",
            "input X_r=0 X_c=2",
            "input X_r=1 X_c=2"
        ]
    );
    assert!(out.ends_with("end: stopped after 3 steps\n"));
}

#[test]
fn interactive_play_reads_choices() {
    let dir = TempDir::new().unwrap();
    let (spec, strategy) = synthesized(&dir, "g1.spec", G1);
    let mut child = Command::new(env!("CARGO_BIN_EXE_gr1synth"))
        .args(["play", s(&spec), s(&strategy), "--interactive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"9\ne=1\nq\n")
        .unwrap();
    let (code, out) = outcome(child.wait_with_output().unwrap());
    assert_eq!(code, 0);
    assert!(out.contains("try again"));
    assert!(out.contains("system: s="));
    assert!(out.ends_with("end: stopped after 1 steps\n"), "{out}");
}

#[test]
fn bench_writes_one_row_per_instance_and_mode() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("out.csv");
    let args = [
        "bench",
        "--sizes",
        "6,8",
        "--densities",
        "0.1",
        "--goals",
        "3",
        "--instances",
        "5",
        "--seed",
        "1",
        "--csv",
        s(&csv),
    ];
    let (code, out) = run(&args);
    assert_eq!(code, 0, "{out}");
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 31);
    assert!(text.starts_with(
        "instance_id,seed,grid_t,density,n_goals,mode,realizable,wall_ms,subgame_ms_list,z_iterations,validated"
    ));
    assert!(out.contains("decomposed-parallel"));

    let (code, out) = run(&[
        "bench",
        "--modes",
        "",
        "--csv",
        s(&dir.path().join("none.csv")),
    ]);
    assert_eq!((code, out.lines().next()), (1, Some("ERROR usage")));
    assert!(!dir.path().join("none.csv").exists());
}
