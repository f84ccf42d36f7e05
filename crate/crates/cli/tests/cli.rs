use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> PathBuf {
    root().join("corpus").join(name)
}

fn harrop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harrop")).args(args).env_remove("ABELLA").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_dependency_sets() {
    let o = harrop(&["analyze", path(&corpus("conservative.hh"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["S(s) = {s}", "S(r) = {r, s}", "S(p) = {p, r, s}", "S(q) = {q, p, r, s}"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn analyze_json_has_report_fields() {
    let o = harrop(&["analyze", "--json", path(&corpus("conservative.hh"))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in ["contexts", "dependencies", "verdict", "blocked_on"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
}

#[test]
fn analyze_empty_program() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.hh");
    std::fs::write(&f, "% nothing here\n").unwrap();
    let o = harrop(&["analyze", "--json", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["contexts"], serde_json::json!({}));
    assert_eq!(v["dependencies"], serde_json::json!({}));
}

#[test]
fn unknown_constant_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.hh");
    std::fs::write(&f, "type p o.\np => quux.\n").unwrap();
    let o = harrop(&["analyze", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("quux"), "{}", stderr(&o));
}

#[test]
fn solve_outcomes() {
    let o = harrop(&["solve", path(&corpus("typeof.hh")), "typeof (abs b (x\\ x)) (arr b b)", "--depth", "8"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "proved"));
    let o = harrop(&["solve", path(&corpus("typeof.hh")), "true"]);
    assert_eq!(stdout(&o).trim(), "proved");
    let o = harrop(&["solve", path(&corpus("append.hh")), "append nil nil (cons 1 nil)", "--depth", "6"]);
    assert_eq!(stdout(&o).trim(), "refuted");
}

#[test]
fn solve_prints_answers() {
    let o = harrop(&["solve", path(&corpus("append.hh")), "append (cons 1 nil) (cons 2 nil) R"]);
    assert!(stdout(&o).contains("R = cons 1 (cons 2 nil)"), "{}", stdout(&o));
}

#[test]
fn strict_unknown_exits_2() {
    let goal = "typeof (abs b (x\\ x)) (arr b b)";
    let o = harrop(&["solve", path(&corpus("typeof.hh")), goal, "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("unknown"));
    let o = harrop(&["solve", path(&corpus("typeof.hh")), goal, "--depth", "2", "--strict"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn goal_parse_error_exits_1() {
    let o = harrop(&["solve", path(&corpus("typeof.hh")), "typeof (abs"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trace_matches_golden() {
    let o = harrop(&["solve", path(&corpus("typeof.hh")), "typeof (abs b (x\\ x)) (arr b b)", "--depth", "8", "--trace"]);
    let out = stdout(&o);
    let trace = out.split_once('\n').unwrap().1;
    assert_eq!(trace, std::fs::read_to_string(corpus("golden/typeof_trace.txt")).unwrap());
}

#[test]
fn strengthen_writes_development_and_companions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("list_minus.thm");
    let o = harrop(&["strengthen", path(&corpus("list_minus.hh")), "--out", path(&out), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort();
    assert_eq!(keys, ["contexts", "dependencies", "output", "replay", "verdict"]);
    assert_eq!(v["verdict"], "validated");
    assert_eq!(v["replay"], serde_json::Value::Null);
    for (ext, golden) in [("thm", "list_minus.thm"), ("sig", "list_minus.sig"), ("mod", "list_minus.mod")] {
        let got = std::fs::read_to_string(out.with_extension(ext)).unwrap();
        assert_eq!(got, std::fs::read_to_string(corpus("golden").join(golden)).unwrap(), "{ext}");
    }
}

#[test]
fn blocked_strengthening_exits_3() {
    for f in ["harrop_direct.hh", "harrop_transitive.hh"] {
        let o = harrop(&["strengthen", path(&corpus(f))]);
        assert_eq!(o.status.code(), Some(3), "{f}");
        assert!(stderr(&o).contains("f is in S(g)"), "{}", stderr(&o));
    }
}

#[test]
fn flags_supply_the_request() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pos.hh");
    std::fs::write(&f, "type f, b, a, g o.\nf => b.\n(b => a) => g.\na.\nf.\n").unwrap();
    let o = harrop(&["strengthen", path(&f), "--context", "c", "--from", "f => b", "--goal", "g"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Theorem c_stren_g : forall L, c L -> {L, (b => f) |- g}") || stdout(&o).contains("c_stren_g"));
    let o = harrop(&["strengthen", path(&f), "--from", "f"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn directive_wins_over_flags() {
    let o = harrop(&["strengthen", path(&corpus("harrop_positive.hh")), "--from", "a", "--goal", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Theorem stren_g_from_f"));
    assert!(stderr(&o).contains("--from ignored"));
}

fn fake_abella(dir: &Path) -> PathBuf {
    let exe = dir.join("fake-abella");
    std::fs::write(&exe, "#!/bin/sh\nif grep -q BROKEN \"$1\"; then echo 'Error: Syntax error.'; exit 1; fi\necho 'Proof completed.'\n").unwrap();
    std::fs::set_permissions(&exe, std::fs::Permissions::from_mode(0o755)).unwrap();
    exe
}

#[test]
fn replay_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let exe = fake_abella(dir.path());
    let good = dir.path().join("good.thm");
    let bad = dir.path().join("bad.thm");
    std::fs::write(&good, "Theorem t : true.\nsearch.\n").unwrap();
    std::fs::write(&bad, "Theorem BROKEN\n").unwrap();

    let o = harrop(&["replay", path(&good), "--abella", path(&exe)]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "accepted"));
    let o = harrop(&["replay", path(&bad), "--abella", path(&exe)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("Error: Syntax error."));

    let o = Command::new(env!("CARGO_BIN_EXE_harrop"))
        .args(["replay", path(&good)])
        .env("ABELLA", "")
        .env("PATH", dir.path().join("nowhere"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tool-absent"));
}

#[test]
fn abella_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let exe = fake_abella(dir.path());
    let good = dir.path().join("good.thm");
    std::fs::write(&good, "Theorem t : true.\nsearch.\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_harrop"))
        .args(["replay", path(&good), "--abella", "/nonexistent/abella"])
        .env("ABELLA", &exe)
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "accepted");
}

#[test]
fn strengthen_with_replay_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let exe = fake_abella(dir.path());
    let out = dir.path().join("lm.thm");
    let o = harrop(&["strengthen", path(&corpus("list_minus.hh")), "--out", path(&out), "--replay", "--abella", path(&exe), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["replay"]["status"], "accepted");
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("Specification \"lm\"."));
}
