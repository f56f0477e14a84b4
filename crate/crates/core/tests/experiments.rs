use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relaxlab::experiments::{compare, RunConfig, RunError};
use relaxlab::Error;
use serde_json::{json, Value};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn config_path(name: &str) -> PathBuf {
    manifest().join("configs").join(format!("{name}.json"))
}

fn config_value(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(config_path(name)).unwrap()).unwrap()
}

fn relaxlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaxlab"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(manifest().join("schema/run_config.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn malformed() -> Vec<(&'static str, Value)> {
    let base = config_value("constant_box");
    let edit = |f: &dyn Fn(&mut Value)| {
        let mut v = base.clone();
        f(&mut v);
        v
    };
    vec![
        ("unknown top-level key", edit(&|v| v["tolerance"] = json!(1e-3))),
        ("unknown nested key", edit(&|v| v["diagnostics"]["rho_maxx"] = json!(0.5))),
        ("unknown potential", edit(&|v| v["potential"] = json!({ "name": "mexican_hat" }))),
        ("missing schedule", edit(&|v| drop(v.as_object_mut().unwrap().remove("schedule")))),
        ("non-numeric spacing", edit(&|v| v["domain"]["h"] = json!("fine"))),
        ("unknown solver method", edit(&|v| v["solver"] = json!({ "method": "newton" }))),
    ]
}

#[test]
fn shipped_configs_satisfy_the_schema_and_the_loader() {
    let s = schema();
    for name in ["hedgehog_b3", "constant_box", "ldg_b3"] {
        let v = config_value(name);
        assert!(s.is_valid(&v), "{name}: {:?}", s.iter_errors(&v).map(|e| e.to_string()).collect::<Vec<_>>());
        let cfg = RunConfig::load(&config_path(name)).unwrap();
        // every default the loader fills in is itself schema-valid
        let full = serde_json::to_value(&cfg).unwrap();
        assert!(s.is_valid(&full), "{name} round trip");
        assert_eq!(RunConfig::from_json(&full.to_string()).unwrap(), cfg);
    }
}

#[test]
fn schema_and_loader_reject_the_same_malformed_configs() {
    let s = schema();
    for (what, v) in malformed() {
        assert!(!s.is_valid(&v), "schema accepted {what}");
        let err = RunConfig::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{what}: {err}");
    }
}

#[test]
fn semantic_errors_are_schema_errors() {
    let mut v = config_value("constant_box");
    v["schedule"]["eps"] = json!([0.1, 0.2]);
    assert!(matches!(RunConfig::from_json(&v.to_string()), Err(Error::Config(_))));
    let mut v = config_value("constant_box");
    v["diagnostics"]["centers"] = json!([[0.0, 0.0]]);
    assert!(matches!(RunConfig::from_json(&v.to_string()), Err(Error::Config(_))));
}

#[test]
fn exit_codes_by_phase() {
    let e = || Error::InvalidParameter("x".into());
    assert_eq!(RunError::Schema(e()).exit_code(), 2);
    assert_eq!(RunError::Solver(e()).exit_code(), 3);
    assert_eq!(RunError::Diagnostics(e()).exit_code(), 4);
}

#[test]
fn malformed_configs_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (what, v)) in malformed().into_iter().enumerate() {
        let path = write(dir.path(), &format!("bad_{i}.json"), &v);
        let out = relaxlab(&["run", path.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{what}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = relaxlab(&["run", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // a well-formed file with a vacuum-violating boundary value
    let mut v = config_value("constant_box");
    v["boundary"]["value"] = json!([0.0, 0.0, 2.0]);
    let path = write(dir.path(), "off_manifold.json", &v);
    let out = relaxlab(&["run", path.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_bit_identical_and_compare_clean() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = config_value("constant_box");
    v["diagnostics"]["refinement"] = json!("off");
    let cfg = write(dir.path(), "c.json", &v);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = relaxlab(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let stdout = String::from_utf8_lossy(&o.stdout);
        assert_eq!(stdout.lines().filter(|l| l.contains(" PASS ") || l.contains(" FAIL ")).count(), 11);
    }
    let csv = |d: &Path| files(d).into_iter().filter(|(n, _)| n.ends_with(".csv")).collect::<Vec<_>>();
    assert!(csv(&a).len() >= 8);
    assert_eq!(csv(&a), csv(&b));

    assert!(compare(&a.join("summary.json"), &b.join("summary.json")).unwrap().is_empty());
    let o = relaxlab(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "no differences");

    let o = relaxlab(&["plot", a.to_str().unwrap()]);
    assert!(o.status.success());
    let first = files(&a.join("plots"));
    assert!(first.iter().any(|(n, _)| n == "uniform_convergence.svg"));
    assert!(first.iter().any(|(n, _)| n == "phi_stage_0.dat"));
    assert!(relaxlab(&["plot", a.to_str().unwrap()]).status.success());
    assert_eq!(files(&a.join("plots")), first);
}

#[test]
fn compare_reports_differences_and_missing_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let a = json!({ "name": "x", "h": 0.1, "stages": [{ "eps": 0.4, "energy": 1.0 }], "timing": { "total_seconds": 3.0 } });
    let b = json!({ "name": "x", "h": 0.1, "stages": [{ "eps": 0.4, "energy": 1.5 }], "timing": { "total_seconds": 9.0 } });
    std::fs::create_dir_all(dir.path().join("a")).unwrap();
    std::fs::create_dir_all(dir.path().join("b")).unwrap();
    let pa = write(&dir.path().join("a"), "summary.json", &a);
    let pb = write(&dir.path().join("b"), "summary.json", &b);
    let rows = compare(&pa, &pb).unwrap();
    assert_eq!(rows.len(), 1, "{rows:?}");
    assert!(rows[0].key.contains("energy"));
    let o = relaxlab(&["compare", dir.path().join("a").to_str().unwrap(), dir.path().join("nowhere").to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn plot_skips_empty_profiles() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("phi_profiles.csv"), "eps,center_id,rho,phi,psi\n").unwrap();
    std::fs::write(dir.path().join("convergence.csv"), "eps,sup_dist\n0.4,0.3\n0.2,0.1\n").unwrap();
    let o = relaxlab(&["plot", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let names: Vec<String> = files(&dir.path().join("plots")).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, vec!["sup_dist_vs_eps.dat", "sup_dist_vs_eps.svg"]);
}
