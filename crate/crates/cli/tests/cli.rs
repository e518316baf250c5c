use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_thetalift");

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn parse_reads_stdin_and_prints_canonical_text() {
    let (code, out, _) = run(&["parse"], Some("pair=SpO;D[4,5]x|.|^3 ;tau(l=3, m={3:1})\n"));
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    assert_eq!(first, "pair=SpO; D[4,5] x D[3,3] ; tau(l=3, m={3:1})");
    let (code, again, _) = run(&["parse", first], None);
    assert_eq!(code, 0);
    assert_eq!(again.lines().next().unwrap(), first);
}

#[test]
fn errors_exit_nonzero_with_position() {
    let (code, _, err) = run(&["parse", "pair=SpO; D[4,5 ; tau(l=3)"], None);
    assert_eq!(code, 2);
    assert!(err.contains("at 1:17"), "{err}");
    let (code, _, err) = run(&["parse", "pair=SpO; D[1/2,3/2] ; tau(l=-1)"], None);
    assert_eq!(code, 2);
    assert!(err.contains("alpha-kappa"), "{err}");
}

#[test]
fn json_output_is_versioned() {
    let (code, out, _) = run(&["--json", "parse", "pair=MpO; D[1/2,3/2] ; tau(l=0)"], None);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "thetalift/1");
    assert_eq!(v["kappa"], 2);
    let (_, out, _) = run(&["--json", "occurrence", "pair=SpO; D[4,5] x D[3,4] x D[2,3] x D[1,2] ; tau(l=3)"], None);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["conservation"]["l_down"], 11);
    assert_eq!(v["conservation"]["l_up"], -13);
}

#[test]
fn sort_and_invert() {
    let (code, out, _) = run(&["sort", "pair=SpO; D[1,1] x D[2,3] x D[1,3] ; tau(l=-1)"], None);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "pair=SpO; D[2,3] x D[1,3] x D[1,1] ; tau(l=-1)");
    let output = "pair=SpO; D[3,6] x D[4,5] x D[2,4] x |.|^3 x |.|^3 x D[1,2] x Z[3,5] x |.|^1 ; tau(l=-1)";
    let (code, out, _) = run(&["invert", output], None);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "pair=SpO; D[3,6] x D[5,5] x D[4,5] x D[3,4] x D[2,4] x D[3,3] x D[1,3] x D[1,1] ; tau(l=-1)");
}

#[test]
fn ring_expansion() {
    let (code, out, _) = run(&["ring", "mstar", "D[0,1]"], None);
    assert_eq!(code, 0);
    assert_eq!(out, "+1 1 (x) D[0,1]\n+1 D[0,1] (x) 1\n+1 |.|^1 (x) |.|^0\n");
    let (_, out, _) = run(&["ring", "Mstar", "D[0,1]"], None);
    let total: i64 = out.lines().map(|l| l[1..].split(' ').next().unwrap().parse::<i64>().unwrap()).sum();
    assert_eq!(total, 6);
}

#[test]
fn enumeration_is_byte_identical() {
    let args = ["enumerate", "--max-segments", "3", "--max-end", "3/2", "--alpha", "1/2"];
    let (c1, a, _) = run(&args, None);
    let (c2, b, _) = run(&args, None);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (code, _, err) = run(&["enumerate", "--max-segments", "9"], None);
    assert_eq!(code, 2);
    assert!(err.contains("estimate") || err.contains("too large"), "{err}");
}

#[test]
fn check_exit_code_follows_counterexamples() {
    let (code, out, _) = run(&["check", "conservation", "--max-segments", "2", "--max-end", "2"], None);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 counterexamples"));
    let (code, out, _) = run(&["check", "ring", "--max-segments", "2", "--max-end", "2"], None);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("counterexample: pair="));
    let (code, _, _) = run(&["check", "nonsense"], None);
    assert_eq!(code, 2);
}

#[test]
fn lifts_listing() {
    let (code, out, _) = run(&["lifts", "--all", "--count", "2", "pair=SpO; D[1,1] ; tau(l=1, m={1:1})"], None);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("down: nonzero exactly at levels <= ")), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("up -")).count(), 2, "{out}");
}
