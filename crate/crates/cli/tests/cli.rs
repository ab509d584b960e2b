//! End-to-end checks of the command-line surface: subcommands, file
//! formats, and exit codes (0 success/complete, 1 usage, 2 data,
//! 3 verification-incomplete).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tipcascade"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal expected")
}

fn write_file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

/// Undirected 4-cycle as a directed edge list.
const C4: &str = "0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 0\n0 3\n";

fn c4_file(dir: &TempDir) -> PathBuf {
    write_file(dir, "c4.txt", C4)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn decompose_c4_unit_threshold() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let seeds = dir.path().join("seeds.txt");
    let removal = dir.path().join("removal.txt");

    let out = run(&[
        "decompose",
        "--graph",
        p(&graph),
        "--threshold",
        "int:1",
        "--out",
        p(&seeds),
        "--removal-out",
        p(&removal),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let seed_text = fs::read_to_string(&seeds).unwrap();
    assert_eq!(seed_text.lines().count(), 1);
    let summary = stderr(&out);
    assert!(summary.contains("n=4 m=8 seed_size=1 seed_fraction=0.250000"));

    // removal file lists the other three nodes with ranks
    let removal_text = fs::read_to_string(&removal).unwrap();
    let rows: Vec<&str> = removal_text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ends_with(" 1"));

    // round-trip: the seed file verifies complete with exit 0
    let verify = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--threshold",
        "int:1",
        "--seeds",
        p(&seeds),
    ]);
    assert_eq!(code(&verify), 0, "stderr: {}", stderr(&verify));
    assert!(stdout(&verify).contains("\"complete\":true"));
}

#[test]
fn decompose_k4_with_half_fraction() {
    let dir = TempDir::new().unwrap();
    let mut edges = String::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                edges.push_str(&format!("{i} {j}\n"));
            }
        }
    }
    let graph = write_file(&dir, "k4.txt", &edges);
    let out = run(&["decompose", "--graph", p(&graph), "--threshold", "frac:1/2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 2); // seed size 2 on stdout
    assert!(stderr(&out).contains("seed_size=2"));
}

#[test]
fn decompose_preserves_original_labels() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(
        &dir,
        "labeled.txt",
        "alice bob\nbob alice\nbob carol\ncarol bob\n",
    );
    let out = run(&["decompose", "--graph", p(&graph), "--threshold", "int:1"]);
    assert_eq!(code(&out), 0);
    for token in stdout(&out).split_whitespace() {
        assert!(["alice", "bob", "carol"].contains(&token), "token {token}");
    }
}

#[test]
fn empty_graph_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "empty.txt", "");
    let out = run(&["decompose", "--graph", p(&graph), "--threshold", "int:1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn bad_threshold_syntax_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    for bad in ["int:0", "frac:2/1", "frac:abc", "nope:3"] {
        let out = run(&["decompose", "--graph", p(&graph), "--threshold", bad]);
        assert_eq!(code(&out), 1, "threshold {bad}");
    }
}

#[test]
fn unknown_subcommand_exits_one() {
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("decompose"));
}

#[test]
fn verify_incomplete_seed_exits_three() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let seeds = write_file(&dir, "seeds.txt", "");
    let out = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--threshold",
        "int:1",
        "--seeds",
        p(&seeds),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("\"complete\":false,\"activated\":0"));
}

#[test]
fn verify_complete_in_one_round_with_trace() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let seeds = write_file(&dir, "seeds.txt", "1\n3\n");
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--threshold",
        "int:2",
        "--seeds",
        p(&seeds),
        "--trace-out",
        p(&trace),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"complete\":true,\"activated\":4,\"rounds\":1"));

    let trace_text = fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = trace_text.lines().collect();
    assert_eq!(lines[0], "round,node");
    assert_eq!(lines.len(), 5); // header + 4 activations
    assert!(lines.contains(&"0,1") && lines.contains(&"0,3"));
    assert!(lines.contains(&"1,0") && lines.contains(&"1,2"));
}

#[test]
fn verify_rejects_unknown_seed_ids() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let seeds = write_file(&dir, "seeds.txt", "99\n");
    let out = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--threshold",
        "int:1",
        "--seeds",
        p(&seeds),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown node"));
}

#[test]
fn sweep_emits_22_deterministic_rows() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let args = [
        "sweep",
        "--graph",
        p(&graph),
        "--stable-output",
        "--workers",
        "1",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 23); // header + 10 integer + 12 fractional rows
    assert_eq!(
        lines[0],
        "graph_name,threshold_kind,threshold_value,seed_size,seed_fraction,reichman_bound,bound_ratio,runtime_ms"
    );
    assert!(lines[1].starts_with("c4,int,1,1,0.250000,1.333333,0.750000,"));
    assert!(lines[11].starts_with("c4,frac,0.050000,"));

    // byte-identical on repeat and across worker counts
    let again = run(&args);
    assert_eq!(stdout(&again), text);
    let parallel = run(&[
        "sweep",
        "--graph",
        p(&graph),
        "--stable-output",
        "--workers",
        "4",
    ]);
    assert_eq!(stdout(&parallel), text);
}

#[test]
fn sweep_k4_integer_two_hits_the_bound() {
    let dir = TempDir::new().unwrap();
    let mut edges = String::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                edges.push_str(&format!("{i} {j}\n"));
            }
        }
    }
    let graph = write_file(&dir, "k4.txt", &edges);
    let out = run(&[
        "sweep",
        "--graph",
        p(&graph),
        "--int",
        "2..2",
        "--frac",
        "0.5..0.5:0.5",
        "--stable-output",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let int_row: &str = text.lines().nth(1).unwrap();
    assert!(
        int_row.starts_with("k4,int,2,2,0.500000,2.000000,1.000000,"),
        "row: {int_row}"
    );
}

#[test]
fn metrics_reports_clustering_and_modularity() {
    let dir = TempDir::new().unwrap();
    // two K_5 cliques bridged by one edge
    let mut edges = String::new();
    for base in [0, 5] {
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    edges.push_str(&format!("{} {}\n", base + i, base + j));
                }
            }
        }
    }
    edges.push_str("4 5\n5 4\n");
    let graph = write_file(&dir, "bridged.txt", &edges);
    let partition = dir.path().join("partition.txt");
    let out = run(&[
        "metrics",
        "--graph",
        p(&graph),
        "--raw-ids",
        "--partition-out",
        p(&partition),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,n,m,avg_clustering,louvain_modularity");
    // 8 pure-clique nodes at 1.0, two bridge endpoints at 0.6
    assert_eq!(lines[1], "bridged,10,21,0.920000,0.452381");

    // exported partition separates the cliques
    let partition_text = fs::read_to_string(&partition).unwrap();
    let rows: Vec<&str> = partition_text.lines().collect();
    assert_eq!(rows.len(), 10);
    let community = |row: &str| row.split_whitespace().nth(1).unwrap().to_string();
    for i in 1..5 {
        assert_eq!(community(rows[i]), community(rows[0]));
        assert_eq!(community(rows[5 + i]), community(rows[5]));
    }
    assert_ne!(community(rows[0]), community(rows[5]));
}

#[test]
fn metrics_requires_symmetric_or_symmetrize() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "directed.txt", "0 1\n1 2\n2 0\n");
    let out = run(&["metrics", "--graph", p(&graph)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--symmetrize"));

    let out = run(&["metrics", "--graph", p(&graph), "--symmetrize"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bound_prints_value_and_rejects_fractions() {
    let dir = TempDir::new().unwrap();
    let graph = c4_file(&dir);
    let out = run(&["bound", "--graph", p(&graph), "--threshold", "int:1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "1.333333");

    let out = run(&["bound", "--graph", p(&graph), "--threshold", "frac:1/2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn fit_recovers_exact_plane() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("name,M,C,S\n");
    for (m, c) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0)] {
        csv.push_str(&format!("g,{m},{c},{}\n", 2.0 * m + 3.0 * c + 1.0));
    }
    let path = write_file(&dir, "rows.csv", &csv);
    let out = run(&["fit", "--csv", p(&path)]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let line = stdout(&out);
    assert!(line.contains("coef_M=2.000000"), "line: {line}");
    assert!(line.contains("coef_C=3.000000"));
    assert!(line.contains("intercept=1.000000"));
    assert!(line.contains("r_squared=1.000000"));

    // rank-deficient design: constant M column
    let mut degenerate = String::from("name,M,C,S\n");
    for i in 0..5 {
        degenerate.push_str(&format!("g,1.0,{i},{i}\n"));
    }
    let path = write_file(&dir, "degenerate.csv", &degenerate);
    let out = run(&["fit", "--csv", p(&path)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rank-deficient"));
}

#[test]
fn gen_produces_complete_graph_and_is_deterministic() {
    let out = run(&["gen", "--model", "er:5,1.0", "--header"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# n=5 m=20");
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[1], "0 1");

    let a = run(&["gen", "--model", "ba:60,2", "--rng-seed", "7"]);
    let b = run(&["gen", "--model", "ba:60,2", "--rng-seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));

    let bad = run(&["gen", "--model", "er:5,1.5"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn gen_feeds_straight_back_into_decompose() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("er.txt");
    let out = run(&[
        "gen",
        "--model",
        "er:120,0.05",
        "--rng-seed",
        "3",
        "--out",
        p(&graph),
    ]);
    assert_eq!(code(&out), 0);

    let seeds = dir.path().join("seeds.txt");
    let decompose = run(&[
        "decompose",
        "--graph",
        p(&graph),
        "--threshold",
        "frac:0.25",
        "--out",
        p(&seeds),
    ]);
    assert_eq!(code(&decompose), 0);
    let verify = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--threshold",
        "frac:0.25",
        "--seeds",
        p(&seeds),
    ]);
    assert_eq!(code(&verify), 0, "round trip must verify complete");
}
