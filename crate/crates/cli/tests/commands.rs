//! End-to-end runs of the `dbp` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn gen_gap_matches_fixture_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("gap.dbp");
    let wit = dir.path().join("gap.sol");
    let out = dbp(&["gen", "gap", "--witness", s(&wit), "--out", s(&inst)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::read(&inst).unwrap(), std::fs::read(fixture("gap.dbp")).unwrap());
    assert_eq!(std::fs::read(&wit).unwrap(), std::fs::read(fixture("gap_witness.sol")).unwrap());
    // Without --out the instance goes to stdout.
    let out = dbp(&["gen", "gap"]);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("gap.dbp")).unwrap());
}

#[test]
fn gap_witness_verifies() {
    let out = dbp(&["verify", "--in", s(&fixture("gap.dbp")), "--sol", s(&fixture("gap_witness.sol"))]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("feasible: yes") && text.contains("complete: yes") && text.contains("bins: 1"), "{text}");
}

#[test]
fn solve_gap_with_equal_side_squares() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("out.sol");
    let rep = dir.path().join("report.json");
    let out = dbp(&[
        "solve", "--in", s(&fixture("gap.dbp")), "--algo", "squares-eq", "--out", s(&sol), "--report", s(&rep),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["algorithm"], "squares-eq");
    assert!(report["bins"].as_u64().unwrap() <= 2);
    assert_eq!(report["verified"], true);
    // The oracle optimum is one bin, so two is within the factor of two.
    let opt = dbp(&["oracle", "--in", s(&fixture("gap.dbp")), "--mode", "opt"]);
    assert_eq!(code(&opt), 0);
    assert!(stdout(&opt).contains("Proven opt 1"), "{}", stdout(&opt));
    let check = dbp(&["verify", "--in", s(&fixture("gap.dbp")), "--sol", s(&sol)]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}

#[test]
fn general_accepts_short_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("short.dbp");
    let gen = dbp(&["gen", "random", "--family", "short", "--n", "20", "--T", "10", "--C", "27", "--seed", "3", "--out", s(&inst)]);
    assert_eq!(code(&gen), 0);
    for algo in ["general", "short", "auto"] {
        let out = dbp(&["solve", "--in", s(&inst), "--algo", algo]);
        assert_eq!(code(&out), 0, "{algo}: {}", stderr(&out));
        assert!(stdout(&out).starts_with("dbp-sol 1\n"));
    }
}

#[test]
fn domain_rejections_exit_two() {
    let out = dbp(&["solve", "--in", s(&fixture("gap.dbp")), "--algo", "short"]);
    assert_eq!(code(&out), 2);
    let out = dbp(&["solve", "--in", s(&fixture("two_bins.dbp")), "--algo", "squares"]);
    assert_eq!(code(&out), 2);
    for numbers in ["1,2", "1,2,3,4,5,6", "4,x,6", "0,5,10"] {
        let out = dbp(&["gen", "3part-short", "--numbers", numbers]);
        assert_eq!(code(&out), 2, "{numbers}");
        let out = dbp(&["gen", "3part-squares", "--numbers", numbers]);
        assert_eq!(code(&out), 2, "{numbers}");
    }
    let out = dbp(&["gen", "random", "--family", "short", "--n", "3", "--T", "5", "--C", "8"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_input_exits_one_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.dbp", "dbp 1\n5 5\n1 2 2\n2 two 1\n");
    let out = dbp(&["solve", "--in", s(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
    let dup = write(dir.path(), "dup.dbp", "dbp 1\n5 5\n1 2 2\n\n# x\n1 1 1\n");
    let out = dbp(&["verify", "--in", s(&dup), "--sol", s(&fixture("gap_witness.sol"))]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 6"), "{}", stderr(&out));
    let out = dbp(&["solve", "--in", s(&dir.path().join("missing.dbp"))]);
    assert_eq!(code(&out), 1);
    let out = dbp(&["solve"]);
    assert_eq!(code(&out), 1);
    let out = dbp(&["--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bad_solutions_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let gap = fixture("gap.dbp");
    let witness = std::fs::read_to_string(fixture("gap_witness.sol")).unwrap();

    let truncated: String = witness.lines().take(10).map(|l| format!("{l}\n")).collect();
    let p = write(dir.path(), "trunc.sol", &truncated);
    let out = dbp(&["verify", "--in", s(&gap), "--sol", s(&p)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("complete: no"));
    assert!(stderr(&out).contains("missing tasks 10,11,12,13,14"), "{}", stderr(&out));

    // Task 14 moved from 19 onto slot 11's neighbours, overloading slot 12.
    let shifted = witness.replace("0 14 19", "0 14 12");
    let p = write(dir.path(), "shift.sol", &shifted);
    let out = dbp(&["verify", "--in", s(&gap), "--sol", s(&p)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("feasible: no"));
    assert!(stderr(&out).contains("slot 12"), "{}", stderr(&out));

    let outside = witness.replace("0 14 19", "0 14 20");
    let p = write(dir.path(), "outside.sol", &outside);
    let out = dbp(&["verify", "--in", s(&gap), "--sol", s(&p)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("leaves the horizon"), "{}", stderr(&out));

    // Unknown task ids are a parse error of the solution file.
    let p = write(dir.path(), "foreign.sol", "dbp-sol 1\n0 99 1\n");
    let out = dbp(&["verify", "--in", s(&gap), "--sol", s(&p)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn oracle_modes_on_gap() {
    let gap = fixture("gap.dbp");
    let out = dbp(&["oracle", "--in", s(&gap), "--mode", "one-bin"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Proven feasible"), "{}", stdout(&out));
    let out = dbp(&["oracle", "--in", s(&gap), "--mode", "geometric"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Proven infeasible"), "{}", stdout(&out));
}

#[test]
fn oracle_gives_up_on_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.dbp");
    let gen = dbp(&["gen", "random", "--family", "mixed", "--n", "200", "--T", "50", "--C", "50", "--seed", "1", "--out", s(&inst)]);
    assert_eq!(code(&gen), 0);
    // The large set is refuted by area alone for a single bin.
    let tight = dir.path().join("tight.dbp");
    let gen = dbp(&["gen", "random", "--family", "short", "--n", "28", "--T", "50", "--C", "270", "--seed", "1", "--out", s(&tight)]);
    assert_eq!(code(&gen), 0);
    for (mode, file) in [("opt", &inst), ("one-bin", &tight), ("geometric", &tight)] {
        let out = dbp(&["oracle", "--in", s(file), "--mode", mode, "--max-nodes", "1000", "--timeout", "5"]);
        assert_eq!(code(&out), 4, "{mode}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("Unknown"));
    }
}

#[test]
fn random_generation_is_reproducible() {
    let args = ["gen", "random", "--family", "mixed", "--n", "30", "--T", "15", "--C", "20", "--seed", "7"];
    let a = dbp(&args);
    let b = dbp(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let mut other = args;
    other[11] = "8";
    assert_ne!(dbp(&other).stdout, a.stdout);
}

#[test]
fn three_partition_generators_write_instances() {
    let out = dbp(&["gen", "3part-short", "--numbers", "4,5,6,4,5,6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("dbp 1\n15 2\n"));
    let out = dbp(&["gen", "3part-squares", "--numbers", "4,5,6"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"), "enforcer count is always floored");
    assert_eq!(stdout(&out).lines().count(), 2 + 25);
}

#[test]
fn render_draws_one_panel_per_bin() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("gap.svg");
    let out = dbp(&["render", "--in", s(&fixture("gap.dbp")), "--sol", s(&fixture("gap_witness.sol")), "--svg", s(&svg)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="bin""#).count(), 1);
    assert!(text.contains(r#"class="capacity""#));

    let out = dbp(&["render", "--in", s(&fixture("two_bins.dbp")), "--sol", s(&fixture("two_bins.sol"))]);
    assert_eq!(code(&out), 0);
    let two = stdout(&out);
    assert_eq!(two.matches(r#"class="bin""#).count(), 2);
    let again = dbp(&["render", "--in", s(&fixture("two_bins.dbp")), "--sol", s(&fixture("two_bins.sol"))]);
    assert_eq!(again.stdout, out.stdout);

    let empty = write(dir.path(), "empty.sol", "dbp-sol 1\n");
    let out = dbp(&["render", "--in", s(&fixture("two_bins.dbp")), "--sol", s(&empty)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("<svg") && !text.contains("<rect"));
}

fn bench_rows(args: &[&str]) -> Vec<Vec<String>> {
    let out = dbp(args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["instance", "algo", "bins", "area_lb", "oracle_opt", "ratio", "wall_ms"]
    );
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn worst_ratio(rows: &[Vec<String>], algo: &str) -> f64 {
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r[1] == algo && !r[5].is_empty())
        .map(|r| r[5].parse().unwrap())
        .collect();
    assert!(!ratios.is_empty(), "no proven rows for {algo}");
    ratios.into_iter().fold(0.0, f64::max)
}

#[test]
fn bench_ratios_stay_within_guarantees() {
    let short = bench_rows(&["bench", "--seeds", "0..12", "--families", "short", "--algos", "short,general", "--n", "7", "--C", "27"]);
    assert_eq!(short.len(), 24);
    assert!(worst_ratio(&short, "short") <= 2.0);
    assert!(worst_ratio(&short, "general") <= 3.0);

    let squares = bench_rows(&["bench", "--seeds", "0..12", "--families", "squares", "--algos", "squares,general", "--n", "7"]);
    assert!(worst_ratio(&squares, "squares") <= 2.0);

    let eq = bench_rows(&["bench", "--seeds", "0..12", "--families", "squares", "--algos", "squares-eq", "--n", "7", "--T", "12", "--C", "12"]);
    assert!(worst_ratio(&eq, "squares-eq") <= 2.0);

    let mixed = bench_rows(&["bench", "--seeds", "0..12", "--families", "mixed", "--algos", "general,short", "--n", "7"]);
    assert!(worst_ratio(&mixed, "general") <= 3.0);
    // Short rejects tall tasks: those cells stay empty.
    assert!(mixed.iter().any(|r| r[1] == "short" && r[2].is_empty() && r[6].is_empty()));
}

#[test]
fn bench_is_deterministic_without_timing() {
    let args = ["bench", "--seeds", "1..=4", "--algos", "auto,general", "--omit-timing"];
    let a = dbp(&args);
    let b = dbp(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let rows = bench_rows(&args);
    assert_eq!(rows.len(), 4 * 3 * 2);
    let keys: Vec<(String, String)> = rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(rows.iter().all(|r| r[6].is_empty()));
}

#[test]
fn bench_reads_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("gap.dbp"), dir.path().join("b-gap.dbp")).unwrap();
    std::fs::copy(fixture("two_bins.dbp"), dir.path().join("a-two.dbp")).unwrap();
    write(dir.path(), "notes.txt", "ignored");
    let csv_path = dir.path().join("out.csv");
    let out = dbp(&["bench", "--dir", s(dir.path()), "--csv", s(&csv_path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let two: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&two[..2], ["a-two", "auto"]);
    assert_eq!(&two[3..5], ["2", "2"], "area bound and optimum");
    assert!(two[2].parse::<u64>().unwrap() <= 6);
    assert!(lines[2].starts_with("b-gap,auto,"), "{}", lines[2]);
    let out = dbp(&["bench"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solver_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("s.sol");
    let out = dbp(&["solve", "--in", s(&fixture("two_bins.dbp")), "--out", s(&sol)]);
    assert_eq!(code(&out), 0);
    let inst = dbp_cli::load_instance(&fixture("two_bins.dbp")).unwrap();
    let parsed = dbp_cli::load_solution(&sol, &inst).unwrap();
    assert_eq!(dbp_cli::format::write_solution(&parsed), std::fs::read_to_string(&sol).unwrap());
}
