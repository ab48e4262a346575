use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpp")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fpp-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn presets_validate() {
    for p in ["simple-A", "simple-B", "full-A"] {
        let o = fpp(&["validate-params", "--preset", p]);
        assert_eq!(code(&o), 0, "{p}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn bad_parameter_file_is_a_config_error() {
    let d = scratch("badcfg");
    let f = d.join("bad.cfg");
    std::fs::write(&f, "model = full\ntheta = 1.5\n").unwrap();
    let o = fpp(&["validate-params", "--file", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    std::fs::write(&f, "model = full\nnot a line\n").unwrap();
    assert_eq!(code(&fpp(&["sample-env", "--params", f.to_str().unwrap(), "--window", "10"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&fpp(&["sample-env", "--no-such-flag"])), 2);
    assert_eq!(code(&fpp(&["geodesic", "--to", "3;4"])), 2);
    assert_eq!(code(&fpp(&["--preset", "nope", "sample-env"])), 2);
    assert_eq!(code(&fpp(&["--help"])), 0);
}

#[test]
fn model_mismatch_and_budget_refusal_exit_2() {
    let o = fpp(&["sample-env", "--model", "simple", "--preset", "full-A", "--window", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--model"));
    let o = fpp(&["sample-env", "--window", "100000", "--budget", "1000000"]);
    assert_eq!(code(&o), 2);
    let o = fpp(&["events", "--preset", "simple-B", "-k", "20"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn geodesic_outside_window_is_a_config_error() {
    assert_eq!(code(&fpp(&["geodesic", "--window", "10", "--cutoff", "6", "--to", "50,0"])), 2);
}

#[test]
fn validated_sample_passes_and_writes_reports() {
    let d = scratch("sample");
    let o = fpp(&["sample-env", "--window", "32", "--cutoff", "7", "--validate", "--paths", "300", "--seed", "4", "--out", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&read(&d, "validation.json")).unwrap();
    assert_eq!(v["meta"]["command"], "sample-env");
    assert_eq!(v["meta"]["seed"], 4);
    assert_eq!(v["data"]["checks"].as_array().unwrap().len(), 8);
    assert!(stdout(&o).contains("wrote "));
}

#[test]
fn artifacts_carry_metadata() {
    let d = scratch("meta");
    let o = fpp(&["tree", "--window", "12", "--cutoff", "6", "--seed", "9", "--out", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().path()).find(|p| p.extension().is_some_and(|x| x == "csv")).unwrap();
    let first = std::fs::read_to_string(&csv).unwrap().lines().next().unwrap().to_string();
    assert!(first.starts_with("# fpp ") && first.contains("command=tree") && first.contains("seed=9"), "{first}");
    let side: serde_json::Value = serde_json::from_str(&read(&d, "distances.meta.json")).unwrap();
    assert_eq!(side["command"], "tree");
    assert_eq!(std::fs::metadata(d.join("distances.bin")).unwrap().len() % 8, 0);

    let o = fpp(&["render", "--window", "8", "--cutoff", "6", "--format", "svg"]);
    assert!(stdout(&o).starts_with("<!-- fpp "));
}

#[test]
fn config_hash_tracks_the_configuration() {
    let header = |args: &[&str]| {
        let o = fpp(args);
        stdout(&o).lines().next().unwrap_or_default().to_string()
    };
    let a = header(&["tree", "--window", "8", "--cutoff", "6", "--format", "csv"]);
    let b = header(&["tree", "--window", "8", "--cutoff", "6", "--format", "csv", "--seed", "2"]);
    let c = header(&["tree", "--window", "9", "--cutoff", "6", "--format", "csv"]);
    let hash = |s: &str| s.split_whitespace().find(|w| w.starts_with("config=")).unwrap().to_string();
    assert_eq!(hash(&a), hash(&b));
    assert_ne!(hash(&a), hash(&c));
    assert_ne!(a, b);
}

#[test]
fn reruns_are_identical() {
    let args = ["geodesic", "--window", "20", "--cutoff", "6", "--to", "15,-9", "--seed", "3"];
    let (d1, d2) = (scratch("rerun1"), scratch("rerun2"));
    for d in [&d1, &d2] {
        let mut a: Vec<&str> = args.to_vec();
        a.extend(["--out", d.to_str().unwrap()]);
        assert_eq!(code(&fpp(&a)), 0);
    }
    let names: Vec<String> = std::fs::read_dir(&d1).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.len() >= 3);
    for n in names {
        assert_eq!(std::fs::read(d1.join(&n)).unwrap(), std::fs::read(d2.join(&n)).unwrap(), "{n}");
    }
}

#[test]
fn lp_verify_reports_matches() {
    let o = fpp(&["lp-verify", "--trials", "300", "--max-demand", "6"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("300/300 exact matches"), "{}", stdout(&o));
}
