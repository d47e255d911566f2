//! Gridworld instances end to end: generation, encoding, sweeps.

use gr1synth::decomp::check_singletons;
use gr1synth::grid::bench::{run_bench, write_csv, BenchConfig, BenchMode};
use gr1synth::grid::{encode, generate};

fn config(sizes: Vec<usize>, goals: Vec<usize>, instances: usize, seed: u64) -> BenchConfig {
    BenchConfig {
        sizes,
        densities: vec![0.1],
        goals,
        instances,
        modes: BenchMode::ALL.to_vec(),
        seed,
        workers: 2,
        realizable_only: false,
    }
}

#[test]
fn small_sweep_has_a_row_per_instance_and_mode() {
    let recs = run_bench(&config(vec![6, 8], vec![3], 5, 3), |_| {}).unwrap();
    assert_eq!(recs.len(), 30);
    for chunk in recs.chunks(3) {
        assert!(chunk.iter().all(|r| r.realizable == chunk[0].realizable));
        assert!(chunk.iter().all(|r| r.validated != Some(false)));
        assert!(chunk.iter().all(|r| r.validated.is_some() == r.realizable));
    }
}

#[test]
fn sweeps_are_reproducible() {
    let cfg = config(vec![5], vec![2], 4, 99);
    let csv = |cfg: &BenchConfig| {
        let recs = run_bench(cfg, |_| {}).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs, false).unwrap();
        buf
    };
    assert_eq!(csv(&cfg), csv(&cfg));
    for seed in 0..10 {
        assert_eq!(generate(seed, 9, 0.2, 3), generate(seed, 9, 0.2, 3));
    }
}

#[test]
fn encoded_goals_are_single_states() {
    for seed in 0..5 {
        let gs = generate(seed, 6, 0.1, 3).unwrap();
        let g = encode(&gs).unwrap();
        let sm = check_singletons(&g).unwrap();
        assert_eq!(sm.goals.len(), 3);
        for (k, &(a, b)) in gs.pairs.iter().enumerate() {
            let vals = g.decode(sm.goals[k]);
            assert_eq!(vals, vec![b.0 as i64, b.1 as i64, a.0 as i64, a.1 as i64]);
        }
    }
}

#[test]
fn subgame_iterations_do_not_grow_with_the_goal_count() {
    let mut cfg = config(vec![8], vec![2, 5], 4, 5);
    cfg.modes = vec![BenchMode::DecomposedSerial];
    cfg.realizable_only = true;
    let recs = run_bench(&cfg, |_| {}).unwrap();
    let mean = |n: usize| {
        let its: Vec<usize> = recs
            .iter()
            .filter(|r| r.n_goals == n)
            .flat_map(|r| r.reach_iterations[1..].to_vec())
            .collect();
        its.iter().sum::<usize>() as f64 / its.len() as f64
    };
    let (small, large) = (mean(2), mean(5));
    assert!(large <= 1.5 * small + 1.0, "{small} vs {large}");
}
