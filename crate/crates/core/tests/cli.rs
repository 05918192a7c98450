use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_microspec"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(name: &str, out: &Path, extra: &[&str]) -> std::process::Output {
    bin().arg("run").arg(scenario(name)).arg("--out").arg(out).args(extra).output().unwrap()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn delta_scenario_passes_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let o = run("delta-1d.toml", &a, &["--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin()
        .env("MICROSPEC_THREADS", "1")
        .arg("run")
        .arg(scenario("delta-1d.toml"))
        .arg("--out")
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    for f in ["decay.csv", "summary.json", "wf_map.svg"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f} differs");
    }

    let s = summary(&a);
    assert_eq!(s["checks"]["conicity"]["status"], "pass");
    assert_eq!(s["pass"], true);
    for smp in s["samples"].as_array().unwrap() {
        let at_zero = smp["x"][0].as_f64().unwrap() == 0.0;
        let c = smp["classification"].as_str().unwrap();
        assert_eq!(c == "Singular", at_zero, "{smp}");
    }

    let csv = std::fs::read_to_string(a.join("decay.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "estimator,x,xi,family,lambda,magnitude,error");
    assert!(csv.lines().count() > 1);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run("planted-cone.toml", &tmp.path().join("p"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(summary(&tmp.path().join("p"))["checks"]["cone"]["status"], "fail");

    let o = run("missing-ladder.toml", &tmp.path().join("m"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'ladder'"));

    let o = run("delta-1d.toml", &tmp.path().join("x"), &["--override", "ladder.ratio=2.0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run("delta-1d.toml", &tmp.path().join("y"), &["--override", "bogus.key=1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bin().arg("run").arg(tmp.path().join("nope.toml")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_and_overrides_reach_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["--override", "estimators=[\"scaling\"]", "--override", "checks.numerics=false", "--override", "lattice.per_axis=3"];
    assert_eq!(run("delta-1d.toml", &a, &[&args[..], &["--seed", "1"]].concat()).status.code(), Some(0));
    assert_eq!(run("delta-1d.toml", &b, &[&args[..], &["--seed", "2"]].concat()).status.code(), Some(0));
    let (sa, sb) = (summary(&a), summary(&b));
    assert_ne!(sa["config_digest"], sb["config_digest"]);
    assert_eq!(sa["samples"].as_array().unwrap().len(), 3 * 2);
    // the seeded family changes magnitudes but not verdicts
    let verdicts = |s: &serde_json::Value| s["samples"].as_array().unwrap().iter().map(|v| v["classification"].clone()).collect::<Vec<_>>();
    assert_eq!(verdicts(&sa), verdicts(&sb));
}

/// Singular cells of the map sit at the normal direction of the line.
#[test]
fn line_delta_map_shows_the_normal() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l");
    let o = run("line-delta-2d.toml", &out, &["--override", "estimators=[\"classical\"]", "--override", "lattice.per_axis=3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let svg = std::fs::read_to_string(out.join("wf_map.svg")).unwrap();
    let singular: Vec<&str> = svg.lines().filter(|l| l.contains("Singular")).collect();
    assert!(!singular.is_empty());
    for l in &singular {
        assert!(l.contains("#c0392b"));
        assert!(l.contains("x=0e0;") && (l.contains("xi=1e0;0e0") || l.contains("xi=-1e0;0e0")), "{l}");
    }
}

#[test]
fn catalog_listing_and_self_test() {
    let o = bin().arg("list-catalog").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for key in ["delta@X", "pv@X", "bv:-i0@X", "line-delta", "kernel:KEY", "kernel2d:ibv"] {
        assert!(text.contains(key), "{key}");
    }
    let o = bin().arg("self-test").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).matches("PASS").count(), 3);
}
