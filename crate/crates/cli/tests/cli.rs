//! End-to-end checks of the command-line surface: output grammar, exit
//! codes, and the compile/d2c/gen pipelines.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use projmc::cnf::clause;
use projmc::dimacs;

const EXAMPLE1: &str = "\
p cnf 6 6
c p show 1 2 3 0
-2 4 -1 0
-3 -5 6 0
3 -6 -1 0
6 5 -1 3 0
3 6 -5 -1 0
1 2 0
";

const OVERLAP_CNF: &str = "\
p cnf 5 5
c p show 1 2 0
-3 1 0
2 -3 4 0
-1 -4 -5 2 0
3 2 0
-2 1 0
";

const OVERLAP_DDNNF: &str = "\
nnf 12 13 5
L 3
L 1
L -2
L 4
L -5
A 3 2 3 4
L 2
O 2 2 5 6
A 3 0 1 7
L -3
A 3 9 6 1
O 3 2 8 10
";

fn projmc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_projmc"))
}

fn write(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).expect("write fixture");
    path
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

/// The one `s ` line of a successful count run.
fn solution_line(output: &Output) -> String {
    let stdout = stdout_of(output);
    let s_lines: Vec<&str> = stdout.lines().filter(|l| l.starts_with("s ")).collect();
    assert_eq!(s_lines.len(), 1, "exactly one solution line in {stdout:?}");
    for line in stdout.lines() {
        assert!(
            line.starts_with("s ") || line.starts_with("c "),
            "unexpected output line {line:?}"
        );
    }
    s_lines[0].to_string()
}

#[test]
fn count_methods_on_paper_examples() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ex1 = write(dir.path(), "ex1.cnf", EXAMPLE1);
    let overlap = write(dir.path(), "overlap.cnf", OVERLAP_CNF);
    for method in ["oracle", "dsharp", "blocking", "enum", "d2c"] {
        let out = projmc()
            .arg("count")
            .arg(&ex1)
            .args(["--method", method])
            .output()
            .expect("count run");
        assert!(out.status.success(), "{method} failed");
        assert_eq!(solution_line(&out), "s 4", "method {method}");

        let out = projmc()
            .arg("count")
            .arg(&overlap)
            .args(["--method", method])
            .output()
            .expect("count run");
        assert_eq!(solution_line(&out), "s 2", "method {method}");
    }
}

#[test]
fn unsat_counts_zero_for_every_method() {
    let dir = tempfile::tempdir().expect("tempdir");
    let unsat = write(dir.path(), "unsat.cnf", "p cnf 2 2\n1 0\n-1 0\n");
    for method in ["oracle", "dsharp", "blocking", "enum", "d2c"] {
        let out = projmc()
            .arg("count")
            .arg(&unsat)
            .args(["--method", method])
            .output()
            .expect("count run");
        assert_eq!(solution_line(&out), "s 0", "method {method}");
    }
}

#[test]
fn proj_flag_overrides_in_file_projection() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ex1 = write(dir.path(), "ex1.cnf", EXAMPLE1);
    // Full projection turns the projected count 4 into the model count.
    let out = projmc()
        .arg("count")
        .arg(&ex1)
        .args(["--method", "oracle", "--proj", "1", "2", "3", "4", "5", "6"])
        .output()
        .expect("count run");
    let line = solution_line(&out);
    assert_ne!(line, "s 4");
    let out2 = projmc()
        .arg("count")
        .arg(&ex1)
        .args(["--method", "dsharp", "--proj", "1", "2", "3", "4", "5", "6"])
        .output()
        .expect("count run");
    assert_eq!(solution_line(&out2), line);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().expect("tempdir");
    let bad = write(dir.path(), "bad.cnf", "p cnf 6 1\n7 0\n");
    let out = projmc().arg("count").arg(&bad).output().expect("run");
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.cnf");
    let out = projmc().arg("count").arg(&missing).output().expect("run");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn time_limit_exits_3_without_solution_line() {
    let dir = tempfile::tempdir().expect("tempdir");
    let hard = dir.path().join("hard.cnf");
    let status = projmc()
        .args(["gen", "uf3sat", "--vars", "300", "--clauses", "1275"])
        .args(["--proj-count", "150", "--seed", "1", "-o"])
        .arg(&hard)
        .status()
        .expect("gen");
    assert!(status.success());
    let out = projmc()
        .arg("count")
        .arg(&hard)
        .args(["--method", "dsharp", "--time-limit", "0.05"])
        .output()
        .expect("run");
    assert_eq!(out.status.code(), Some(3));
    assert!(!stdout_of(&out).lines().any(|l| l.starts_with("s ")));
}

#[test]
fn compile_writes_single_literal_nnf() {
    let dir = tempfile::tempdir().expect("tempdir");
    let unit = write(dir.path(), "unit.cnf", "p cnf 1 1\n1 0\n");
    let out = projmc().arg("compile").arg(&unit).output().expect("compile");
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "nnf 1 0 1\nL 1\n");
}

#[test]
fn d2c_of_external_nnf_matches_expected_encoding() {
    let dir = tempfile::tempdir().expect("tempdir");
    let nnf = write(dir.path(), "example.nnf", OVERLAP_DDNNF);
    let out = projmc()
        .arg("d2c")
        .arg("--nnf-in")
        .arg(&nnf)
        .args(["--proj", "1", "2"])
        .output()
        .expect("d2c");
    assert!(out.status.success());
    let text = stdout_of(&out);

    // Introduced variables 6..9 compact to 3..6; the mapping is recorded.
    for mapping in ["c d2c-map 1 1", "c d2c-map 2 2", "c d2c-map 6 3", "c d2c-map 9 6"] {
        assert!(text.contains(mapping), "missing {mapping:?} in {text}");
    }
    let body: String = text.lines().filter(|l| !l.starts_with('c')).collect::<Vec<_>>().join("\n");
    let parsed = dimacs::parse_dimacs(&body).expect("emitted DIMACS parses");
    assert_eq!(parsed.formula().num_vars(), 6);
    // After renaming a1..a4 to 3..6: the four equivalence blocks plus the
    // root unit, minus the tautological OR side dropped at parse.
    let want = vec![
        clause(&[3, 2]),
        clause(&[3, -2]),
        clause(&[-4, 1]),
        clause(&[-4, 3]),
        clause(&[4, -1, -3]),
        clause(&[-5, 2]),
        clause(&[-5, 1]),
        clause(&[5, -2, -1]),
        clause(&[6, -4]),
        clause(&[6, -5]),
        clause(&[-6, 4, 5]),
        clause(&[6]),
    ];
    for w in &want {
        assert!(parsed.formula().clauses().contains(w), "missing clause {w}");
    }
    assert!(
        text.contains("-2 2 -3"),
        "tautological a1 definition side is emitted verbatim"
    );
}

#[test]
fn gen_is_deterministic_and_reparses() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.cnf");
    let b = dir.path().join("b.cnf");
    for target in [&a, &b] {
        let status = projmc()
            .args(["gen", "uf3sat", "--vars", "12", "--clauses", "18"])
            .args(["--proj-count", "6", "--seed", "3", "-o"])
            .arg(target)
            .status()
            .expect("gen");
        assert!(status.success());
    }
    let bytes_a = fs::read(&a).expect("read a");
    assert_eq!(bytes_a, fs::read(&b).expect("read b"));
    let text = String::from_utf8(bytes_a).expect("ascii");
    assert!(text.starts_with("c gen-spec uf3sat vars=12"));
    dimacs::parse_dimacs(&text).expect("generated instance parses");
}

#[test]
fn blocking_r_statistic_on_unconstrained_instance() {
    let dir = tempfile::tempdir().expect("tempdir");
    let free = write(
        dir.path(),
        "free.cnf",
        "p cnf 10 0\nc p show 1 2 3 4 5 6 7 8 9 10 0\n",
    );
    let out = projmc()
        .arg("count")
        .arg(&free)
        .args(["--method", "blocking"])
        .output()
        .expect("run");
    let stdout = stdout_of(&out);
    assert_eq!(solution_line(&out), "s 1024");
    assert!(stdout.contains("c stat R=10.00"), "{stdout}");
    assert!(stdout.contains("c stat cubes=1"), "{stdout}");

    let out = projmc()
        .arg("count")
        .arg(&free)
        .args(["--method", "enum"])
        .output()
        .expect("run");
    let stdout = stdout_of(&out);
    assert_eq!(solution_line(&out), "s 1024");
    assert!(stdout.contains("c stat R=0.00"), "{stdout}");
    assert!(stdout.contains("c stat cubes=1024"), "{stdout}");
}

#[test]
fn bench_flags_method_disagreements() {
    // A manifest with a healthy instance plus a parse-error instance: the
    // error is reported per row and never aborts the run.
    let dir = tempfile::tempdir().expect("tempdir");
    let good = write(dir.path(), "good.cnf", OVERLAP_CNF);
    let bad = write(dir.path(), "bad.cnf", "p cnf 1 1\n2 0\n");
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, format!("{}\n{}\n", good.display(), bad.display())).expect("manifest");
    let out = projmc()
        .arg("bench")
        .arg("--manifest")
        .arg(&manifest)
        .args(["--methods", "oracle,dsharp", "--time-limit", "10"])
        .output()
        .expect("bench");
    assert!(out.status.success());
    let stdout = stdout_of(&out);
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().filter(|r| r.ends_with(",ok")).count() == 2);
    assert!(rows.iter().filter(|r| r.ends_with(",parse-error")).count() == 2);
}
