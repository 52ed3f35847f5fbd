use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn reeslab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reeslab")).args(args).env("REESLAB_CACHE", cache).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn ok(cache: &Path, args: &[&str]) -> Value {
    let out = reeslab(cache, args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

#[test]
fn square_of_twisted_cubic_series() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let r = ok(dir.path(), &["hs", "--power", "2", cubic.to_str().unwrap()]);
    assert_eq!(r["result"]["ideal"]["text"], "(6s^4 - 6s^5 + s^6)/((1-s)^4)");
    assert_eq!(r["result"]["ideal"]["num"], serde_json::json!([[6, 4, 0], [-6, 5, 0], [1, 6, 0]]));
    assert_eq!(r["status"], "ok");
    assert!(r["tool_version"].is_string());
    assert!(r["citations"].as_array().is_some_and(|c| !c.is_empty()));
    assert!(r["assumptions"].is_array());
}

#[test]
fn zero_ideal_series() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(dir.path(), &["hs", fixture("empty.ring").to_str().unwrap()]);
    assert_eq!(r["result"]["quotient"]["text"], "(1)/((1-s)^3)");
    assert_eq!(r["result"]["quotient"]["num"], serde_json::json!([[1, 0, 0]]));
    assert_eq!(r["result"]["ideal"]["num"], serde_json::json!([]));
}

#[test]
fn maximal_minors_gorenstein_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(dir.path(), &["gorenstein", "--family", "maxminors", "--m", "2", "--n", "3"]);
    assert_eq!(r["result"]["diagonals"], serde_json::json!([{"c": 6, "e": 1, "a_invariant": -1}]));
    // the same rule through the family line of a problem file
    let r = ok(dir.path(), &["gorenstein", fixture("twisted-cubic.ring").to_str().unwrap()]);
    assert_eq!(r["result"]["diagonals"], serde_json::json!([{"c": 6, "e": 1, "a_invariant": -1}]));
}

#[test]
fn needs_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = reeslab(dir.path(), &["gorenstein", "--family", "maxminors", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json_of(&out);
    assert_eq!(r["status"], "needs-input");
    assert_eq!(r["missing"], serde_json::json!(["n"]));

    let cubic = fixture("twisted-cubic.ring");
    let out = reeslab(dir.path(), &["diag", cubic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["missing"], serde_json::json!(["c", "e"]));

    let ci = fixture("ci.ring");
    let out = reeslab(dir.path(), &["cm-threshold", ci.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["missing"], serde_json::json!(["a2G"]));

    // needs-input reports are never cached
    assert!(std::fs::read_dir(dir.path()).map(|d| d.count() == 0).unwrap_or(true));
}

#[test]
fn equimultiple_without_a_quotient_needs_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("eq.ring");
    // (X1, X2)^2 in three variables: equimultiple of height 2
    std::fs::write(&p, "vars: X1, X2, X3\nideal: X1^2; X1*X2; X2^2\nfamily: equimultiple\n").unwrap();
    let out = reeslab(&dir.path().join("c"), &["cm-check", "--c", "4", "--e", "1", p.to_str().unwrap()]);
    // A/I is Cohen–Macaulay here, so a(A/I) is read off the series and the test runs
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["result"]["verdict"], "holds");

    std::fs::write(&p, "vars: X1, X2, X3, X4\nideal: X1*X3; X1*X4; X2*X3; X2*X4\nfamily: equimultiple\n").unwrap();
    let out = reeslab(&dir.path().join("c"), &["cm-check", "--c", "4", "--e", "1", p.to_str().unwrap()]);
    // (X1,X2)∩(X3,X4) is not Cohen–Macaulay: a(A/I) must be supplied
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json_of(&out)["missing"], serde_json::json!(["a(A/I)"]));
}

#[test]
fn parse_errors_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.ring");
    std::fs::write(&p, "field: Q\nvars: x, y\nideal: x^2; x*)y\n").unwrap();
    let out = reeslab(dir.path(), &["gb", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(out.stdout.is_empty());

    let out = reeslab(dir.path(), &["gb", dir.path().join("absent.ring").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cached_and_fresh_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let args = ["gb", cubic.to_str().unwrap(), "--verbose"];
    let first = reeslab(dir.path(), &args);
    let second = reeslab(dir.path(), &args);
    let fresh = reeslab(dir.path(), &["gb", cubic.to_str().unwrap(), "--no-cache"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache miss"));
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn corrupt_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let args = ["hp", cubic.to_str().unwrap()];
    let good = reeslab(dir.path(), &args);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, b"{\"key\": \"truncated").unwrap();
    let again = reeslab(dir.path(), &args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(good.stdout, again.stdout);
    assert!(String::from_utf8_lossy(&again.stderr).contains("corrupt cache entry"));
    let repaired: Value = serde_json::from_slice(&std::fs::read(&entry).unwrap()).unwrap();
    assert!(repaired["created"].is_u64());
}

#[test]
fn concurrent_identical_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let gg9 = fixture("gg9.ring");
    let children: Vec<_> = (0..8)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_reeslab"))
                .args(["betti", "--power", "5", gg9.to_str().unwrap()])
                .env("REESLAB_CACHE", dir.path())
                .stdout(std::process::Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    let outs: Vec<Output> = children.into_iter().map(|c| c.wait_with_output().unwrap()).collect();
    for o in &outs {
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(o.stdout, outs[0].stdout);
    }
    let files: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1, "one entry, no leftover temporaries: {files:?}");
    let entry: Value = serde_json::from_slice(&std::fs::read(&files[0]).unwrap()).unwrap();
    assert_eq!(entry["value"]["result"]["table"]["entries"], json_of(&outs[0])["result"]["table"]["entries"]);
    let cached = reeslab(dir.path(), &["betti", "--power", "5", gg9.to_str().unwrap()]);
    assert_eq!(cached.stdout, outs[0].stdout);
}

#[test]
fn gin_is_reproducible_from_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let a = ok(dir.path(), &["gin", cubic.to_str().unwrap(), "--seed", "7", "--no-cache"]);
    let b = ok(dir.path(), &["gin", cubic.to_str().unwrap(), "--seed", "7", "--no-cache"]);
    assert_eq!(a, b);
    assert_eq!(a["result"]["seed"], 7);
    assert_eq!(a["result"]["matrices_hash"].as_str().map(str::len), Some(64));
    assert_eq!(a["result"]["borel"]["is_borel"], true);
    assert_eq!(a["result"]["series_preserved"], true);
}

#[test]
fn large_integers_become_strings() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("big.ring");
    let vars: Vec<String> = (1..=30).map(|i| format!("x{i}")).collect();
    std::fs::write(&p, format!("vars: {}\nideal:\n", vars.join(", "))).unwrap();
    let r = ok(&dir.path().join("c"), &["hs", p.to_str().unwrap(), "--degree-cap", "40"]);
    let f = r["result"]["quotient_function"].as_array().unwrap();
    assert_eq!(f[1], 30);
    // C(69, 29) exceeds 2^53
    assert_eq!(f[40], "23720460024918645912");
}

#[test]
fn text_format_renders_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let out = reeslab(dir.path(), &["betti", "--power", "2", cubic.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("4:     6     6     1"), "{text}");
    let out = reeslab(dir.path(), &["reg", "--power", "2", cubic.to_str().unwrap(), "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a*(I^2) = 2, reg(I^2) = 4\nproj.dim = 2\n");
}

#[test]
fn every_command_runs_on_its_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let cases: Vec<Vec<String>> = vec![
        vec!["gb".into(), f("twisted-cubic.ring")],
        vec!["hs".into(), f("bigraded.ring")],
        vec!["hp".into(), f("twisted-cubic.ring"), "--power".into(), "3".into()],
        vec!["powers".into(), f("twisted-cubic.ring"), "--max-power".into(), "2".into()],
        vec!["fit-hp".into(), f("twisted-cubic.ring")],
        vec!["mixed-mult".into(), f("twisted-cubic.ring")],
        vec!["fit-hs".into(), f("twisted-cubic.ring")],
        vec!["betti".into(), f("twisted-cubic.ring")],
        vec!["rees".into(), f("twisted-cubic.ring")],
        vec!["diag".into(), f("twisted-cubic.ring"), "--c".into(), "5".into(), "--e".into(), "2".into()],
        vec!["gorenstein".into(), f("ci.ring")],
        vec!["cm-check".into(), f("ci.ring"), "--c".into(), "5".into(), "--e".into(), "1".into()],
        vec!["cm-threshold".into(), f("gorenstein-g.ring")],
        vec!["gin".into(), f("bigraded.ring")],
        vec!["borel".into(), f("borel.ring")],
        vec!["reg".into(), f("bigraded.ring")],
        vec!["bayer-stillman".into(), f("bigraded.ring"), "--m".into(), "1".into()],
    ];
    for case in cases {
        let args: Vec<&str> = case.iter().map(String::as_str).collect();
        let r = ok(dir.path(), &args);
        assert_eq!(r["command"], args[0]);
        assert_eq!(r["status"], "ok");
    }
}

#[test]
fn command_specific_values() {
    let dir = tempfile::tempdir().unwrap();
    let cubic = fixture("twisted-cubic.ring");
    let c = cubic.to_str().unwrap();
    let r = ok(dir.path(), &["mixed-mult", c]);
    assert_eq!(r["result"]["e_R"], serde_json::json!([0, 1, 2, 1]));
    assert_eq!(r["result"]["e_G"], serde_json::json!([2, 3, 0]));
    let r = ok(dir.path(), &["rees", c]);
    assert_eq!(r["result"]["series"]["text"], "(1 - 2s^3t + s^6t^2)/((1-s)^4*(1-s^2t)^3)");
    assert_eq!(r["result"]["good_resolution"]["good"], true);
    let r = ok(dir.path(), &["cm-threshold", c]);
    assert_eq!(r["result"]["alpha"], -4);
    let r = ok(dir.path(), &["diag", c, "--c", "5", "--e", "2", "--degree-cap", "3"]);
    assert_eq!(r["result"]["hilbert_function"][1], 18);
    let r = ok(dir.path(), &["borel", fixture("borel.ring").to_str().unwrap()]);
    assert_eq!(r["result"]["regularity"], serde_json::json!([2, 0]));
    let gg9 = fixture("gg9.ring");
    let r = ok(dir.path(), &["betti", gg9.to_str().unwrap(), "--max-power", "7"]);
    assert_eq!(r["result"]["template"]["fit"]["threshold"], 4);
    assert_eq!(r["result"]["proj_dim"]["detected_from"], 1);
}
