use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tisparse_cli::report::RunReport;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tisparse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tisparse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(args: &[&str], file: &str) -> Output {
    let path = data(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    tisparse(&all)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn machine(out: &Output) -> RunReport {
    RunReport::parse_machine(&stdout(out)).expect("well-formed report")
}

#[test]
fn build_reports_dimension_and_terms() {
    let out = run_on(&["--format", "machine", "build"], "heisenberg_2x2.txt");
    assert_eq!(code(&out), 0);
    let r = machine(&out);
    assert_eq!(r.subcommand, "build");
    assert_eq!(r.get("dim"), Some("16"));
    assert_eq!(r.get("terms"), Some("12"));
    assert_eq!(r.get("exit_code"), Some("0"));
}

#[test]
fn parse_error_names_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let text = fs::read_to_string(data("heisenberg_2x2.txt")).unwrap();
    let text: String = text
        .lines()
        .map(|l| if l.starts_with("N=") { "N=101".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    fs::write(&bad, text).unwrap();
    let out = tisparse(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column 4"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = tisparse(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&tisparse(&["bogus"])), 1);
    assert_eq!(code(&tisparse(&[])), 1);
    assert_eq!(code(&run_on(&["--tolerance", "-1", "solve"], "single_edge.txt")), 1);
    assert_eq!(code(&tisparse(&["--help"])), 0);
}

#[test]
fn reduce_exit_codes() {
    assert_eq!(code(&run_on(&["reduce"], "long_coupling.txt")), 0);
    assert_eq!(code(&run_on(&["reduce"], "forced_yes.txt")), 10);
    assert_eq!(code(&run_on(&["reduce"], "forced_no.txt")), 11);
}

#[test]
fn reduce_leaves_sparse_instance_bytes_unchanged() {
    let out = run_on(&["reduce"], "sparse.txt");
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let instance = text.split("\n[certificate]").next().unwrap();
    let input = fs::read_to_string(data("sparse.txt")).unwrap();
    assert_eq!(format!("{}\n", instance.trim_end_matches('\n')), input);
}

#[test]
fn reduce_out_file_is_a_loadable_document() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("reduced.txt");
    let out = run_on(&["reduce", "-o", doc.to_str().unwrap()], "long_coupling.txt");
    assert_eq!(code(&out), 0);
    let solved = tisparse(&["--format", "machine", "solve", doc.to_str().unwrap()]);
    assert_eq!(code(&solved), 0);
    assert_eq!(machine(&solved).get("answer"), Some("yes"));
}

#[test]
fn verify_passes_on_a_long_coupling() {
    let out = run_on(&["--format", "machine", "verify"], "long_coupling.txt");
    assert_eq!(code(&out), 0);
    let r = machine(&out);
    assert_eq!(r.get("verdict"), Some("PASS"));
    assert_eq!(r.get("failed"), Some("0"));
}

#[test]
fn verify_rejects_a_corrupted_certificate() {
    let reduced = run_on(&["reduce"], "long_coupling.txt");
    assert_eq!(code(&reduced), 0);
    let doc = stdout(&reduced);
    assert!(doc.contains("epsilon=2/243\n"));
    let corrupt = doc.replacen("epsilon=2/243\n", "epsilon=1/243\n", 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupt.txt");
    fs::write(&path, corrupt).unwrap();
    let out = tisparse(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL")), "{text}");
    assert!(text.contains("verdict: FAIL"), "{text}");
}

#[test]
fn verify_accepts_a_separate_chain_file() {
    let reduced = run_on(&["reduce"], "long_coupling.txt");
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.txt");
    fs::write(&chain, stdout(&reduced)).unwrap();
    let out = run_on(&["--format", "machine", "verify", "--chain", chain.to_str().unwrap()], "long_coupling.txt");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(machine(&out).get("verdict"), Some("PASS"));
}

#[test]
fn promise_violation_is_reported() {
    let out = run_on(&["--format", "machine", "verify"], "promise_violated.txt");
    assert_eq!(code(&out), 20);
    assert_eq!(machine(&out).get("verdict"), Some("SKIP"));
    let out = run_on(&["--format", "machine", "solve"], "promise_violated.txt");
    assert_eq!(code(&out), 20);
    assert_eq!(machine(&out).get("answer"), Some("promise_violated"));
}

#[test]
fn solve_single_edge() {
    let out = run_on(&["--format", "machine", "solve"], "single_edge.txt");
    assert_eq!(code(&out), 0);
    let r = machine(&out);
    assert_eq!(r.get("answer"), Some("yes"));
}

#[test]
fn solve_methods_agree() {
    let a = machine(&run_on(&["--format", "machine", "--method", "dense", "solve"], "hubbard_2x2.txt"));
    let b = machine(&run_on(&["--format", "machine", "--method", "iterative", "solve"], "hubbard_2x2.txt"));
    assert_eq!(a.get("answer"), b.get("answer"));
}

#[test]
fn capacity_errors_exit_three() {
    let out = run_on(&["--max-dim", "8", "solve"], "heisenberg_2x2.txt");
    assert_eq!(code(&out), 3);
}

#[test]
fn stoq_passes_on_bipartite_heisenberg() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump.txt");
    let out = run_on(&["stoq", "-o", dump.to_str().unwrap()], "heisenberg_2x2.txt");
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("off-diagonal <= 0: PASS"), "{text}");
    assert!(text.contains("spectrum preserved: PASS"), "{text}");
    let dumped = fs::read_to_string(&dump).unwrap();
    assert!(dumped.starts_with("dim=16\n"));
}

#[test]
fn census_prints_table() {
    let out = tisparse(&["census", "--n-max", "6", "--enumerate"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("N\tdigits\tcount\texponent\tenumeration\n"), "{text}");
    assert!(text.contains("fitted exponent"));
    assert!(!text.contains("MISMATCH"), "{text}");
}

#[test]
fn star_cell_dump_equals_heisenberg_torus_dump() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    assert_eq!(code(&run_on(&["build", "-o", a.to_str().unwrap()], "heisenberg_torus_3.txt")), 0);
    assert_eq!(code(&run_on(&["build", "-o", b.to_str().unwrap()], "star_cell_torus_3.txt")), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn machine_reports_round_trip_byte_for_byte() {
    let cases: [(&[&str], &str); 5] = [
        (&["build"], "ising_2x2.txt"),
        (&["reduce"], "long_coupling.txt"),
        (&["solve"], "hubbard_2x2.txt"),
        (&["verify"], "sparse.txt"),
        (&["stoq"], "heisenberg_2x2.txt"),
    ];
    for (args, file) in cases {
        let mut all = vec!["--format", "machine", "--timing"];
        all.extend_from_slice(args);
        let out = run_on(&all, file);
        let text = stdout(&out);
        let report = RunReport::parse_machine(&text).unwrap();
        assert_eq!(report.to_machine(), text, "{args:?} {file}");
        assert!(report.elapsed_us.is_some());
        assert_eq!(report.get("exit_code").unwrap(), code(&out).to_string());
    }
}

#[test]
fn output_is_deterministic() {
    for (args, file) in [
        (&["--format", "machine", "solve"][..], "heisenberg_torus_3.txt"),
        (&["--method", "iterative", "solve"][..], "hubbard_2x2.txt"),
        (&["reduce"][..], "long_coupling.txt"),
        (&["verify"][..], "long_coupling.txt"),
    ] {
        let a = run_on(args, file);
        let b = run_on(args, file);
        assert_eq!(a.stdout, b.stdout, "{args:?} {file}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn input_digest_ignores_formatting() {
    let dir = tempfile::tempdir().unwrap();
    let spaced = dir.path().join("spaced.txt");
    let text = fs::read_to_string(data("single_edge.txt")).unwrap();
    fs::write(&spaced, format!("# comment\n\n{text}\n")).unwrap();
    let a = machine(&run_on(&["--format", "machine", "solve"], "single_edge.txt"));
    let b = machine(&tisparse(&["--format", "machine", "solve", spaced.to_str().unwrap()]));
    assert_eq!(a.input_digest, b.input_digest);
}
