//! End-to-end checks of the compiled binary: determinism, exit codes, and
//! the shape of the files each command leaves behind.

use std::path::Path;
use std::process::{Command, Output};

/// The binary under test, isolated from any ambient seed.
fn icinet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icinet"))
        .current_dir(dir)
        .env_remove("ICINET_SEED")
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "expected exit {code}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        stderr_of(output),
    );
}

#[test]
fn gen_network_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.json", "b.json"] {
        let run = icinet(
            dir.path(),
            &["gen-network", "--blocks", "2,3,5", "--seed", "7", "--out", out],
        );
        assert_exit(&run, 0);
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "same seed must produce byte-identical network files");
}

#[test]
fn seed_env_var_matches_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let flagged = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2,3,5", "--seed", "123", "--out", "flag.json"],
    );
    assert_exit(&flagged, 0);

    let via_env = Command::new(env!("CARGO_BIN_EXE_icinet"))
        .current_dir(dir.path())
        .env("ICINET_SEED", "123")
        .args(["gen-network", "--blocks", "2,3,5", "--out", "env.json"])
        .output()
        .unwrap();
    assert_exit(&via_env, 0);

    let flag = std::fs::read(dir.path().join("flag.json")).unwrap();
    let env = std::fs::read(dir.path().join("env.json")).unwrap();
    assert_eq!(flag, env, "ICINET_SEED must behave exactly like --seed");
}

#[test]
fn malformed_seed_env_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_icinet"))
        .current_dir(dir.path())
        .env("ICINET_SEED", "not-a-number")
        .args(["gen-network", "--blocks", "2,3,5"])
        .output()
        .unwrap();
    assert_exit(&run, 3);
    assert!(stderr_of(&run).contains("ICINET_SEED"), "{}", stderr_of(&run));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Required flag missing.
    let run = icinet(dir.path(), &["simulate", "--network", "net.json"]);
    assert_exit(&run, 2);
    // Unknown method preset (clap enumerates the valid values).
    let run = icinet(
        dir.path(),
        &[
            "reconstruct",
            "--network",
            "net.json",
            "--cascades",
            "c.json",
            "--method",
            "m6",
        ],
    );
    assert_exit(&run, 2);
    assert!(stderr_of(&run).contains("m5"), "{}", stderr_of(&run));
}

#[test]
fn impossible_simulation_reports_rejection_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    let gen = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2,3,5", "--seed", "7"],
    );
    assert_exit(&gen, 0);
    // q = 0 means no propagation, so no cascade can last 5 steps.
    let sim = icinet(
        dir.path(),
        &[
            "simulate",
            "--scenarios",
            "1",
            "--q",
            "0",
            "--min-steps",
            "5",
            "--seed",
            "7",
        ],
    );
    assert_exit(&sim, 3);
    let err = stderr_of(&sim);
    assert!(err.contains("consecutive cascades"), "{err}");
}

#[test]
fn mismatched_network_and_cascades_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    // The cascade file is tied to the network's metadata digest, so a network
    // with a different shape must be refused.
    for (blocks, out) in [("2,3,5", "a.json"), ("2,3,6", "b.json")] {
        let gen = icinet(
            dir.path(),
            &["gen-network", "--blocks", blocks, "--seed", "7", "--out", out],
        );
        assert_exit(&gen, 0);
    }
    let sim = icinet(
        dir.path(),
        &[
            "simulate", "--network", "a.json", "--scenarios", "3", "--seed", "7",
        ],
    );
    assert_exit(&sim, 0);
    // Cascades simulated on a.json cannot be reconstructed against b.json.
    let rec = icinet(
        dir.path(),
        &[
            "reconstruct",
            "--network",
            "b.json",
            "--cascades",
            "cascades.json",
            "--samples",
            "10",
            "--warmup",
            "0",
            "--seed",
            "7",
        ],
    );
    assert_exit(&rec, 3);
}

#[test]
fn pipeline_produces_the_documented_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let gen = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2x2,3,5", "--seed", "11"],
    );
    assert_exit(&gen, 0);

    let sim = icinet(
        dir.path(),
        &[
            "simulate",
            "--scenarios",
            "10",
            "--min-steps",
            "3",
            "--q",
            "0.4",
            "--seed",
            "11",
        ],
    );
    assert_exit(&sim, 0);

    let rec = icinet(
        dir.path(),
        &[
            "reconstruct",
            "--network",
            "network.json",
            "--cascades",
            "cascades.json",
            "--method",
            "m1",
            "--samples",
            "200",
            "--warmup",
            "100",
            "--heatmap",
            "--seed",
            "11",
        ],
    );
    assert_exit(&rec, 0);

    let out = dir.path().join("reconstruction");
    for name in [
        "report.json",
        "marginals.csv",
        "heatmap.csv",
        "heatmap.svg",
        "trace.csv",
        "pr_curve_feasible.csv",
        "pr_curve_all.csv",
    ] {
        assert!(out.join(name).exists(), "missing output {name}");
    }

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["method"], "m1");
    assert_eq!(report["stats"]["recorded"], 200);
    assert_eq!(report["seed_source"], "explicit");
    let f1 = report["evaluation"]["feasible_pairs"]["best_f1"]
        .as_f64()
        .expect("evaluation should be present when the network file has edges");
    assert!((0.0..=1.0).contains(&f1));

    // CSV headers are part of the contract.
    let marginals = std::fs::read_to_string(out.join("marginals.csv")).unwrap();
    assert!(marginals.starts_with("i,j,p_ij\n"));
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("sample_index,avg_degree,log_likelihood,log_prior\n"));
    assert_eq!(trace.lines().count(), 201, "header plus one row per sample");
}

#[test]
fn reconstruction_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let gen = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2,3,5", "--seed", "5"],
    );
    assert_exit(&gen, 0);
    let sim = icinet(
        dir.path(),
        &["simulate", "--scenarios", "5", "--seed", "5"],
    );
    assert_exit(&sim, 0);
    for out_dir in ["r1", "r2"] {
        let rec = icinet(
            dir.path(),
            &[
                "reconstruct",
                "--network",
                "network.json",
                "--cascades",
                "cascades.json",
                "--samples",
                "100",
                "--warmup",
                "50",
                "--seed",
                "5",
                "--out-dir",
                out_dir,
            ],
        );
        assert_exit(&rec, 0);
    }
    let m1 = std::fs::read(dir.path().join("r1/marginals.csv")).unwrap();
    let m2 = std::fs::read(dir.path().join("r2/marginals.csv")).unwrap();
    assert_eq!(m1, m2, "same seed must reproduce the same marginals");
}

#[test]
fn sweep_and_bench_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let gen = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2,3,5", "--seed", "9"],
    );
    assert_exit(&gen, 0);

    let sweep = icinet(
        dir.path(),
        &[
            "sweep-q",
            "--q-values",
            "0.3,0.6",
            "--scenarios",
            "4",
            "--samples",
            "100",
            "--warmup",
            "50",
            "--seed",
            "9",
        ],
    );
    assert_exit(&sweep, 0);
    let table = std::fs::read_to_string(dir.path().join("sweep_q.csv")).unwrap();
    assert!(table.starts_with("q,best_f1,runtime_seconds\n"));
    assert_eq!(table.lines().count(), 3, "header plus one row per q");

    let bench = icinet(
        dir.path(),
        &[
            "bench",
            "--methods",
            "m1,m2",
            "--scenario-counts",
            "3",
            "--min-steps",
            "2",
            "--samples",
            "100",
            "--warmup",
            "50",
            "--seed",
            "9",
        ],
    );
    assert_exit(&bench, 0);
    let table = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert!(table.starts_with("method,n_scenarios,repeat,runtime_seconds,best_f1\n"));
    assert_eq!(table.lines().count(), 3, "header plus one row per cell");
}

#[test]
fn bench_assertion_mode_checks_the_preset_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let gen = icinet(
        dir.path(),
        &["gen-network", "--blocks", "2,3,5", "--seed", "11"],
    );
    assert_exit(&gen, 0);

    // m3's per-proposal full-dataset likelihood dwarfs m1/m2's incremental
    // updates even on a tiny grid, so the ordering assertion holds.
    let bench = icinet(
        dir.path(),
        &[
            "bench",
            "--methods",
            "m1,m2,m3",
            "--scenario-counts",
            "4",
            "--min-steps",
            "2",
            "--samples",
            "400",
            "--warmup",
            "200",
            "--assert-ordering",
            "--seed",
            "11",
        ],
    );
    assert_exit(&bench, 0);
    let stdout = String::from_utf8_lossy(&bench.stdout);
    assert!(
        stdout.contains("m1 and m2 are the fastest presets"),
        "missing assertion verdict in: {stdout}"
    );

    // Without a slower preset there is nothing to order against.
    let degenerate = icinet(
        dir.path(),
        &[
            "bench",
            "--methods",
            "m1,m2",
            "--scenario-counts",
            "4",
            "--min-steps",
            "2",
            "--samples",
            "100",
            "--warmup",
            "50",
            "--assert-ordering",
            "--seed",
            "11",
        ],
    );
    assert_exit(&degenerate, 3);
    let stderr = String::from_utf8_lossy(&degenerate.stderr);
    assert!(
        stderr.contains("at least one preset beyond m1/m2"),
        "missing grid-shape complaint in: {stderr}"
    );
}
