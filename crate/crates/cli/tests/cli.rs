use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_vilenkin");

fn demo(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/demos").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn construct(spec: &Path, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["construct", "--spec", spec.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn dirichlet_at_scale_is_two_valued() {
    let out = run(&["kernels", "--depth", "4", "--kind", "dirichlet", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("cell_index,re,im\n"));
    let values: Vec<(f64, f64)> = rows(&text).iter().map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap())).collect();
    assert_eq!(values.len(), 16);
    assert_eq!(values.iter().filter(|v| **v == (4.0, 0.0)).count(), 4);
    assert!(values.iter().all(|v| *v == (4.0, 0.0) || *v == (0.0, 0.0)));
}

#[test]
fn fejer_at_one_is_constant() {
    let out = run(&["kernels", "--period", "2,3", "--depth", "3", "--kind", "fejer", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(rows(&text).len(), 12);
    assert!(rows(&text).iter().all(|r| r[1] == "1" && r[2] == "0"));
}

#[test]
fn kernel_guards_exit_2() {
    assert_eq!(code(&run(&["kernels", "--depth", "3", "--kind", "dirichlet", "--n", "1000001"])), 2);
    assert_eq!(code(&run(&["kernels", "--depth", "17", "--kind", "fejer", "--n", "3"])), 2);
    assert_eq!(code(&run(&["kernels", "--depth", "3", "--kind", "fejer", "--n", "-1"])), 2);
    assert_eq!(code(&run(&["kernels", "--period", "1", "--depth", "3", "--kind", "fejer", "--n", "1"])), 2);
}

fn write_samples(dir: &Path, values: &[f64]) -> PathBuf {
    let path = dir.join("samples.csv");
    let mut text = String::from("cell_index,re,im\n");
    for (t, v) in values.iter().enumerate() {
        text.push_str(&format!("{t},{v},0\n"));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn transform_of_constant_is_delta() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_samples(dir.path(), &[2.5; 12]);
    let out = run(&["transform", "--period", "2,3", "--input", input.to_str().unwrap(), "--roundtrip"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,re,im\n"));
    for (k, r) in rows(&text).iter().enumerate() {
        let re: f64 = r[1].parse().unwrap();
        let im: f64 = r[2].parse().unwrap();
        let want = if k == 0 { 2.5 } else { 0.0 };
        assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
    }
    let err = String::from_utf8(out.stderr).unwrap();
    let value: f64 = err.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value < 1e-9);
}

#[test]
fn transform_rejects_bad_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_samples(dir.path(), &[1.0; 10]);
    assert_eq!(code(&run(&["transform", "--period", "2,3", "--input", input.to_str().unwrap()])), 2);
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "cell_index,re,im\n0,x,0\n").unwrap();
    assert_eq!(code(&run(&["transform", "--input", bad.to_str().unwrap()])), 2);
}

#[test]
fn construct_demo_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = construct(&demo("walsh_single"), dir.path(), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let rows = rows(&report);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert!(r[9].parse::<f64>().unwrap() > 0.5);
    }
    let plan: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("plan.json")).unwrap()).unwrap();
    assert_eq!(plan["betas"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("spectrum.json").exists());
}

#[test]
fn construct_is_byte_stable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        assert_eq!(code(&construct(&demo("mixed_23"), dir.path(), &[])), 0);
    }
    for name in ["plan.json", "spectrum.json", "report.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn spec_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    fs::write(&zero, r#"{"radix":{"prefix":[],"period":[2]},"points":[[]],"stages":0,"p":2.0}"#).unwrap();
    assert_eq!(code(&construct(&zero, dir.path(), &[])), 2);
    let extra = dir.path().join("extra.json");
    fs::write(&extra, r#"{"radix":{"prefix":[],"period":[2]},"points":[[]],"stages":1,"p":2.0,"x":1}"#).unwrap();
    assert_eq!(code(&construct(&extra, dir.path(), &[])), 2);
    assert_eq!(code(&construct(&dir.path().join("missing.json"), dir.path(), &[])), 2);
}

#[test]
fn verify_only_accepts_intact_and_rejects_tampered_plan() {
    let dir = tempfile::tempdir().unwrap();
    let spec = demo("walsh_two_point");
    assert_eq!(code(&construct(&spec, dir.path(), &[])), 0);
    assert_eq!(code(&construct(&spec, dir.path(), &["--verify-only"])), 0);

    let path = dir.path().join("plan.json");
    let mut plan: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let beta = plan["betas"][2].as_u64().unwrap() - 1;
    plan["betas"][2] = beta.into();
    plan["beta_scales"][2] = (1u64 << beta).to_string().into();
    fs::write(&path, serde_json::to_string_pretty(&plan).unwrap()).unwrap();
    let out = construct(&spec, dir.path(), &["--verify-only"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stderr).unwrap().contains("stage"));
}

#[test]
fn trace_rows_match_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = demo("mixed_23");
    assert_eq!(code(&construct(&spec, dir.path(), &[])), 0);
    let out = run(&["trace", "--spec", spec.to_str().unwrap(), "--point", "1,2,0,2,0"]);
    assert_eq!(code(&out), 0);
    let trace = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(trace.len(), 4);
    let report = rows(&fs::read_to_string(dir.path().join("report.csv")).unwrap());
    let ours: Vec<&Vec<String>> = report.iter().filter(|r| r[1] == "1").collect();
    for (pair, rep) in trace.chunks(2).zip(ours) {
        assert_eq!((pair[0][1].as_str(), pair[1][1].as_str()), (rep[2].as_str(), rep[3].as_str()));
        let at = |r: &Vec<String>| (r[2].parse::<f64>().unwrap(), r[3].parse::<f64>().unwrap());
        let ((a, b), (c, d)) = (at(&pair[0]), at(&pair[1]));
        let diff = ((c - a).powi(2) + (d - b).powi(2)).sqrt();
        let eps: f64 = pair[0][5].parse().unwrap();
        assert!(diff >= 1.0 - eps - 1e-12);
        assert!((diff - rep[9].parse::<f64>().unwrap()).abs() < 1e-12);
    }
}

#[test]
fn trace_rejects_foreign_point() {
    let spec = demo("walsh_single");
    assert_eq!(code(&run(&["trace", "--spec", spec.to_str().unwrap(), "--point", "1"])), 2);
    assert_eq!(code(&run(&["trace", "--spec", spec.to_str().unwrap(), "--point", "3"])), 2);
}
