use std::path::Path;
use std::process::{Command, Output};

use hurwitz_tr::recursion::WAmplitude;
use hurwitz_tr::{Rational, RationalFunction};

fn bin(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-tr"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("HURWITZ_TR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn w_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["--format", "json", "w", "-g", "2", "-h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let a: WAmplitude<Rational> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((a.g(), a.h(), a.curve()), (2, 1, "lambert"));
    assert_eq!(a.coeff(&[2]), Rational::new(7, 5760).unwrap());
    assert_eq!(a.coeff(&[3]), Rational::new(-1, 480).unwrap());
    assert_eq!(a.coeff(&[4]), Rational::new(1, 1152).unwrap());
    assert_eq!(serde_json::to_string_pretty(&a).unwrap().trim(), stdout(&o).trim());
}

#[test]
fn symbolic_w_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["--format", "json", "w", "--curve", "framed", "--symbolic-f", "-g", "1", "-h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let a: WAmplitude<RationalFunction> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(a.len(), 2);
    assert_eq!(a.curve(), "framed");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-cache", "--format", "csv", "hurwitz", "--table", "g<=1,|mu|<=4,l<=2"];
    let a = bin(dir.path(), &args);
    let b = bin(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("g,mu,b,value"));
    assert!(text.lines().any(|l| l == "0,2-1,3,4"), "{text}");
    assert!(text.lines().any(|l| l == "1,3,4,9"), "{text}");
}

#[test]
fn both_sources_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["--format", "json", "hurwitz", "-g", "1", "--mu", "2", "--both"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["recursion"], "1/2");
    assert_eq!(v["oracle"], "1/2");
    assert_eq!(v["match"], true);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["w", "-g", "0", "-h", "1"][..],
        &["w", "-g", "x", "-h", "1"],
        &["hurwitz", "-g", "0", "--mu", "1,0"],
        &["bracket", "-g", "1", "--indices", "1", "--kind", "triple", "--f", "0"],
        &["nonsense"],
    ] {
        let o = bin(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unstable_cases_need_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin(dir.path(), &["w", "-g", "0", "-h", "2"]).status.code(), Some(2));
    let o = bin(dir.path(), &["--format", "json", "w", "-g", "0", "-h", "2", "--unstable", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"], "x");
}

#[test]
fn cache_prewarm_list_clear() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["cache", "prewarm", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let warmed: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(warmed.contains(&"lambert_g1_h1.json".to_string()));
    for name in &warmed {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let o = bin(dir.path(), &["--format", "json", "cache", "list"]);
    let listed: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(listed.len(), warmed.len());
    let o = bin(dir.path(), &["cache", "clear"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(dir.path(), &["--format", "json", "cache", "list"]);
    let listed: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(listed.is_empty());
}

#[test]
fn reload_equals_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--format", "json", "w", "--curve", "framed", "--f", "2/3", "-g", "1", "-h", "2"];
    let first = bin(dir.path(), &args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let reload = bin(dir.path(), &args);
    let mut fresh_args = vec!["--no-cache"];
    fresh_args.extend_from_slice(&args);
    let fresh = bin(dir.path(), &fresh_args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&reload));
    assert_eq!(stdout(&first), stdout(&fresh));
}

#[test]
fn mismatched_cache_file_is_an_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin(dir.path(), &["w", "-g", "1", "-h", "1"]).status.code(), Some(0));
    std::fs::copy(dir.path().join("lambert_g1_h1.json"), dir.path().join("lambert_g1_h2.json")).unwrap();
    let o = bin(dir.path(), &["w", "-g", "1", "-h", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_and_limits_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["--no-cache", "verify", "--sweep", "g<=1,|mu|<=3,l<=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = bin(dir.path(), &["--no-cache", "limits", "--pairs", "0:3,1:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bracket_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["--format", "json", "bracket", "-g", "1", "--indices", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "1/24");
}
