use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const GAIN: &str = r#"
[geometry]
M = 1

[fading]
kappa_g = 0
kappa_h = [0]

[run]
id = "g"
mode = "gain"
architectures = ["conventional", "nondiag"]
trials = 200
seed = 3
sweep = "N"
grid = [4, 16]
"#;

fn risnd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risnd"))
        .args(args)
        .env_remove("RIS_ND_SEED")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    fs::write(&p, text).unwrap();
    p
}

fn simulate(cfg: &Path, out: &Path, extra: &[&str], seed_env: Option<&str>) -> (Output, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_risnd"));
    cmd.arg("simulate")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .args(extra)
        .env_remove("RIS_ND_SEED");
    if let Some(s) = seed_env {
        cmd.env("RIS_ND_SEED", s);
    }
    let o = cmd.output().unwrap();
    let csv = fs::read_to_string(out.join("g/results.csv")).unwrap_or_default();
    (o, csv)
}

#[test]
fn missing_config_exits_with_config_error() {
    let o = risnd(&["simulate", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config not found"), "{}", stderr(&o));
}

#[test]
fn same_seed_gives_identical_csv() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), GAIN);
    let (o1, a) = simulate(&cfg, &t.path().join("a"), &["--seed", "42"], None);
    let (o2, b) = simulate(&cfg, &t.path().join("b"), &["--seed", "42"], None);
    assert!(o1.status.success() && o2.status.success(), "{}", stderr(&o1));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(a.lines().skip(1).all(|l| l.ends_with(",42")));
}

#[test]
fn seed_precedence_flag_then_env_then_config() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), GAIN);
    let (_, from_cfg) = simulate(&cfg, &t.path().join("c"), &[], None);
    let (_, from_env) = simulate(&cfg, &t.path().join("e"), &[], Some("9"));
    let (_, from_flag) = simulate(&cfg, &t.path().join("f"), &["--seed", "5"], Some("9"));
    assert!(from_cfg.lines().skip(1).all(|l| l.ends_with(",3")));
    assert!(from_env.lines().skip(1).all(|l| l.ends_with(",9")));
    assert!(from_flag.lines().skip(1).all(|l| l.ends_with(",5")));
    let (o, _) = simulate(&cfg, &t.path().join("x"), &[], Some("nine"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn manifest_echoes_resolved_config() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), GAIN);
    let (o, _) = simulate(&cfg, t.path(), &["--trials", "30"], None);
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(t.path().join("g/manifest.json")).unwrap()).unwrap();
    let s = &m["scenarios"][0];
    assert_eq!(s["seed"], 3);
    assert_eq!(s["trials"], 30);
    assert!(s["angles"]["psi_d"].is_number());
    assert!(m["wall_time_s"].is_number());
    assert_eq!(m["rows"], 4);
}

#[test]
fn bad_key_is_named_with_line() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &GAIN.replace("M = 1", "M = 1\nspacing = 2"));
    let (o, _) = simulate(&cfg, t.path(), &[], None);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("spacing") && e.contains("line"), "{e}");
}

#[test]
fn theory_gain_curves() {
    let o = risnd(&["theory", "--expr", "gain", "--N", "1..64", "--kappa", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let nondiag = text.lines().filter(|l| l.contains(",theory:nondiag,gain,")).count();
    assert_eq!(nondiag, 64);
    assert!(text
        .lines()
        .all(|l| !l.contains(",theory:") || l.ends_with(",0.0,0,0,1")));
}

#[test]
fn theory_complexity_table() {
    let o = risnd(&["theory", "--expr", "complexity", "--N", "16", "--G", "4"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains(",theory:nondiag,control_load,32.0,"));
    assert!(text.contains(",theory:fully,control_load,136.0,"));
    assert!(text.contains(",theory:group(4),impedances,40.0,"));
}

#[test]
fn theory_rejects_bad_input() {
    let o = risnd(&["theory", "--expr", "gain", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kappa"));
    assert_eq!(risnd(&["theory", "--expr", "sinr"]).status.code(), Some(2));
    assert_eq!(risnd(&["theory", "--expr", "ber", "--N", "4,8"]).status.code(), Some(2));
    assert_eq!(
        risnd(&["theory", "--expr", "outage", "--kappa", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn figure_preset_writes_csv() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().to_str().unwrap();
    let o = risnd(&["figure", "5", "--trials", "50", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(t.path().join("fig5/results.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.starts_with("fig5,5,N,")));
    assert!(csv.contains(",group(4),gain,"));
    assert_eq!(risnd(&["figure", "11", "--out", out]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = risnd(&["selftest"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(!String::from_utf8(o.stdout).unwrap().contains("FAIL"));
}
