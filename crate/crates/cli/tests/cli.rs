use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn field(&self, key: &str) -> Option<&str> {
        self.stdout
            .lines()
            .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
    }

    fn paths(&self) -> Vec<&str> {
        self.stdout.lines().filter_map(|l| l.strip_prefix("path: ")).collect()
    }
}

fn ipaths(args: &[&str], dir: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ipaths"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

const TWINS: &str = "p setcover 3 2 1\ns 1 1 2 3\ns 2 1 2 3\n";
const K4: &str = "p cubic 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";

#[test]
fn gen_ip_single_clause() {
    let dir = TempDir::new().unwrap();
    file(&dir, "a.cnf", "p cnf 1 1\n1 0\n");
    let r = ipaths(&["gen-ip", "a.cnf", "-o", "a.ip"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.field("edges"), Some("29"));
    assert_eq!(r.field("expected_edges"), Some("29"));
    assert_eq!(r.field("vertices"), r.field("expected_vertices"));
    let written = fs::read_to_string(dir.path().join("a.ip")).unwrap();
    assert!(written.starts_with("ipgraph 23 29\n"));
    assert!(written.contains("\ntarget 2^20 * 3^9 * 5^4 * 7^87\n"));
}

#[test]
fn gen_ip_tautologies_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    file(&dir, "t.cnf", "p cnf 2 1\n1 -1 2 0\n");
    let r = ipaths(&["gen-ip", "t.cnf", "-o", "t.ip"], dir.path());
    assert_eq!(r.code, 0);
    assert!(r.field("notice").unwrap().contains("trivially satisfiable"));
    assert!(!dir.path().join("t.ip").exists());

    file(&dir, "bad.cnf", "p cnf two 1\n1 0\n");
    let r = ipaths(&["gen-ip", "bad.cnf", "-o", "x"], dir.path());
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);

    file(&dir, "long.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    assert_eq!(ipaths(&["gen-ip", "long.cnf", "-o", "x"], dir.path()).code, 65);
}

#[test]
fn gen_kip_closed_forms() {
    let dir = TempDir::new().unwrap();
    file(&dir, "sc.txt", TWINS);
    let r = ipaths(&["gen-kip", "sc.txt", "--k", "3", "-o", "k3.ip"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.field("edges"), Some("21"));
    // (4!)^7
    assert_eq!(r.field("target"), Some("2^21 * 3^7"));
    let r = ipaths(&["gen-kip", "sc.txt", "--k", "4", "-o", "k4.ip"], dir.path());
    assert_eq!(r.field("edges"), Some("29"));
    assert_eq!(r.field("expected_edges"), Some("29"));

    file(&dir, "three.txt", "p setcover 3 3 1\ns 1 1 2 3\ns 2 1 2 3\ns 3 1 2 3\n");
    let r = ipaths(&["gen-kip", "three.txt", "-o", "x"], dir.path());
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("element 1"), "{}", r.stderr);
}

#[test]
fn solve_reports_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    file(&dir, "a.cnf", "p cnf 2 1\n1 -2 0\n");
    ipaths(&["gen-ip", "a.cnf", "-o", "a.ip"], dir.path());
    let yes = ipaths(&["solve", "a.ip"], dir.path());
    assert_eq!(yes.code, 0, "{}", yes.stderr);
    assert_eq!(yes.field("verdict"), Some("yes"));
    assert!(!yes.paths().is_empty());

    let unknown = ipaths(&["solve", "a.ip", "--budget-nodes", "0"], dir.path());
    assert_eq!(unknown.code, 2);
    assert_eq!(unknown.field("verdict"), Some("unknown"));

    assert_eq!(ipaths(&["solve", "a.ip", "--mode", "greedy"], dir.path()).code, 64);
    assert_eq!(ipaths(&["solve", "a.ip", "--problem", "max-ip"], dir.path()).code, 0);

    file(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    ipaths(&["gen-ip", "u.cnf", "-o", "u.ip"], dir.path());
    let no = ipaths(&["solve", "u.ip"], dir.path());
    assert_eq!(no.code, 1);
    assert_eq!(no.field("verdict"), Some("no"));
}

#[test]
fn solve_unit_weight_packing_is_a_factorial_power() {
    let dir = TempDir::new().unwrap();
    // two disjoint 3-edge chains plus a stray edge
    file(
        &dir,
        "g.ip",
        "ipgraph 9 7\ne 0 0 1 1\ne 1 1 2 1\ne 2 2 3 1\ne 3 4 5 1\ne 4 5 6 1\ne 5 6 7 1\ne 6 7 8 1\n",
    );
    let exact = ipaths(&["solve", "g.ip", "--problem", "kip", "--k", "3"], dir.path());
    assert_eq!(exact.code, 0, "{}", exact.stderr);
    assert_eq!(exact.field("optimal"), Some("true"));
    // (4!)^2
    assert_eq!(exact.field("score"), Some("2^6 * 3^2"));
    let greedy = ipaths(&["solve", "g.ip", "--k", "3", "--mode", "greedy"], dir.path());
    assert_eq!(greedy.code, 2);
    let best = ipaths(&["solve", "g.ip", "--problem", "max-ip", "--decimal-digits", "6"], dir.path());
    assert_eq!(best.code, 0);
    assert_eq!(best.paths(), vec!["3 4 5 6"]);
    // log2(5!) = 6.90689...
    assert_eq!(best.field("score_log2"), Some("6.90689"));
}

#[test]
fn solve_rejects_cycles_for_ip() {
    let dir = TempDir::new().unwrap();
    file(&dir, "c.ip", "ipgraph 2 2\ne 0 0 1 1\ne 1 1 0 1\n");
    let r = ipaths(&["solve", "c.ip"], dir.path());
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("cycle"));
    assert_eq!(ipaths(&["solve", "c.ip", "--k", "1"], dir.path()).code, 0);
}

#[test]
fn verify_examples_pass() {
    let dir = TempDir::new().unwrap();
    file(&dir, "x.cnf", "p cnf 1 1\n1 1 1 0\n");
    let r = ipaths(&["verify", "x.cnf", "--kind", "cnf"], dir.path());
    assert_eq!((r.code, r.field("result")), (0, Some("PASS")), "{}", r.stdout);
    assert_eq!(r.field("check.backward_witness"), Some("PASS"));

    file(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let r = ipaths(&["verify", "u.cnf", "--kind", "cnf"], dir.path());
    assert_eq!((r.code, r.field("solver")), (0, Some("no")), "{}", r.stdout);

    file(&dir, "k4.txt", K4);
    let r = ipaths(&["verify", "k4.txt", "--kind", "cubic", "--tau", "3"], dir.path());
    assert_eq!((r.code, r.field("result")), (0, Some("PASS")), "{}", r.stdout);
    assert_eq!(r.field("tau3.solver"), Some("yes"));

    file(&dir, "sc.txt", TWINS);
    let r = ipaths(&["verify", "sc.txt", "--kind", "setcover", "--k", "4"], dir.path());
    assert_eq!((r.code, r.field("result")), (0, Some("PASS")), "{}", r.stdout);
}

#[test]
fn verify_budget_exhaustion_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    file(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let r = ipaths(&["verify", "u.cnf", "--kind", "cnf", "--budget-nodes", "5"], dir.path());
    assert_eq!((r.code, r.field("result")), (2, Some("INCONCLUSIVE")));
}

#[test]
fn score_checks_witnesses() {
    let dir = TempDir::new().unwrap();
    file(&dir, "a.cnf", "p cnf 1 1\n1 0\n");
    ipaths(&["gen-ip", "a.cnf", "-o", "a.ip"], dir.path());
    let solved = ipaths(&["solve", "a.ip"], dir.path());
    let paths = solved.paths();
    file(&dir, "w.txt", &(paths.join("\n") + "\n"));
    let r = ipaths(&["score", "a.ip", "w.txt"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.field("comparison"), Some("equal to target"));

    file(&dir, "short.txt", &(paths[..paths.len() - 1].join("\n") + "\n"));
    let r = ipaths(&["score", "a.ip", "short.txt"], dir.path());
    assert_eq!(r.code, 1);
    assert_eq!(r.field("verdict"), Some("FAIL"));
    let last = paths.last().unwrap();
    assert_eq!(r.field("error"), Some(format!("edges not covered: {last}").as_str()));

    file(&dir, "broken.txt", "0 2\n");
    let r = ipaths(&["score", "a.ip", "broken.txt"], dir.path());
    assert_eq!(r.code, 1);
    assert!(r.field("error").unwrap().starts_with("path 0: position 1"));

    file(&dir, "sc.txt", TWINS);
    ipaths(&["gen-kip", "sc.txt", "-o", "k.ip"], dir.path());
    file(&dir, "empty.txt", "");
    let r = ipaths(&["score", "k.ip", "empty.txt"], dir.path());
    assert_eq!((r.code, r.field("score")), (1, Some("1")));
    assert_eq!(r.field("verdict"), Some("no"));
}

#[test]
fn io_failures_map_to_sysexits() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ipaths(&["solve", "nowhere.ip"], dir.path()).code, 66);
    file(&dir, "a.cnf", "p cnf 1 1\n1 0\n");
    assert_eq!(ipaths(&["gen-ip", "a.cnf", "-o", "no/such/dir/a.ip"], dir.path()).code, 73);
    assert_eq!(ipaths(&["solve"], dir.path()).code, 64);
    assert_eq!(ipaths(&["--help"], dir.path()).code, 0);
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    file(&dir, "k4.txt", K4);
    let args = ["verify", "k4.txt", "--kind", "cubic", "--deterministic"];
    let a = ipaths(&args, dir.path());
    let b = ipaths(&args, dir.path());
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("time_ms"));
}
