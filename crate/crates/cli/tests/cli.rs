use std::path::PathBuf;
use std::process::{Command, Output};

fn qherm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qherm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn oa_build_then_full_verify() {
    let path = scratch("a0.oa");
    let p = path.to_str().unwrap();
    let o = qherm(&["oa", "build", "--q", "2", "--a", "1", "--b", "2", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "32 16 2 2 8");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("32 16 2 2 8\n# q=2 a=1 b=2 modulus=7\n"));

    let o = qherm(&["oa", "verify", p, "--mode", "full"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations=0"));
}

#[test]
fn corrupted_oa_exits_one() {
    let path = scratch("bad.oa");
    let p = path.to_str().unwrap();
    assert!(qherm(&["oa", "build", "--q", "2", "--a", "1", "--b", "2", "--out", p]).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let flipped = if lines[2].starts_with('0') { "1" } else { "0" };
    lines[2].replace_range(0..1, flipped);
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert_eq!(qherm(&["oa", "verify", p]).status.code(), Some(1));
}

#[test]
fn sampled_verify_needs_seed() {
    let path = scratch("s.oa");
    let p = path.to_str().unwrap();
    assert!(qherm(&["oa", "build", "--q", "4", "--a", "1", "--b", "4", "--out", p]).status.success());
    assert_eq!(qherm(&["oa", "verify", p, "--mode", "sampled"]).status.code(), Some(2));
    let a = qherm(&["oa", "verify", p, "--mode", "sampled", "--pairs", "50", "--seed", "3"]);
    let b = qherm(&["oa", "verify", p, "--mode", "sampled", "--pairs", "50", "--seed", "3", "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oa_export_round_trips() {
    let src = scratch("rt.oa");
    let dst = scratch("rt2.oa");
    let (s, d) = (src.to_str().unwrap(), dst.to_str().unwrap());
    assert!(qherm(&["oa", "build", "--q", "2", "--a", "3", "--b", "2", "--out", s]).status.success());
    assert!(qherm(&["oa", "export", s, "--out", d]).status.success());
    assert_eq!(std::fs::read(&src).unwrap(), std::fs::read(&dst).unwrap());
}

#[test]
fn check_qh_prints_report() {
    let o = qherm(&["variety", "check-qh", "--q", "2", "--a", "1", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "size=45 spectrum={9:40,13:45} QH=true");
}

#[test]
fn check_qh_json_mirror() {
    let o = qherm(&["--json", "variety", "check-qh", "--q", "2", "--a", "1", "--b", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 45);
    assert_eq!(v["quasi_hermitian"], true);
}

#[test]
fn variety_build_writes_point_file() {
    let o = qherm(&["variety", "build", "--q", "2", "--a", "1", "--b", "2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# PG(3,q^2) q=2 modulus=7"));
    assert_eq!(lines.count(), 45);
}

#[test]
fn census_is_key_value() {
    let o = qherm(&["variety", "census", "--q", "2", "--a", "1", "--b", "2", "--set", "bab"]);
    let text = stdout(&o);
    assert!(text.contains("p_inf.lines={1:1}"));
    assert!(text.contains("planes.ok=true"));
}

#[test]
fn linear_group_order() {
    let o = qherm(&["group", "order", "--q", "2", "--a", "1", "--b", "2"]);
    assert_eq!(stdout(&o).trim(), "64");
}

#[test]
fn semilinear_group_order_is_closure_size() {
    // σ has order 2 log2(q) on GF(q²), so the closure is twice q⁶(q-1)log2(q)
    let o = qherm(&["group", "order", "--q", "2", "--a", "1", "--b", "2", "--semilinear"]);
    assert_eq!(stdout(&o).trim(), "128");
}

#[test]
fn sharp_transitivity_q2() {
    let o = qherm(&["group", "sharp", "--q", "2", "--a", "3", "--b", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Psi_sharp=true"));
}

#[test]
fn equiv_find_emits_witness() {
    let o = qherm(&["equiv", "find", "--q", "4", "--a", "3", "--b", "4", "--a2", "1", "--b2", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("3 4 1 2 "));
    assert_eq!(text.lines().nth(1).unwrap().split_whitespace().count(), 17);
}

#[test]
fn equiv_classes() {
    let o = qherm(&["equiv", "classes", "--q", "2"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn list_field_table() {
    let o = qherm(&["--list-field", "--q", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("# GF(16) modulus=19 (t^4+t+1)"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 16);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qherm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qherm(&["variety", "check-qh", "--q", "3", "--a", "1", "--b", "2"]).status.code(), Some(2));
    // b = 1 lies in GF(q)
    assert_eq!(qherm(&["variety", "check-qh", "--q", "2", "--a", "1", "--b", "1"]).status.code(), Some(2));
    assert_eq!(qherm(&["oa", "verify", "/nonexistent/x.oa"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["equiv", "reduce", "--q", "4", "--a", "7", "--b", "9"];
    assert_eq!(qherm(&args).stdout, qherm(&args).stdout);
}
