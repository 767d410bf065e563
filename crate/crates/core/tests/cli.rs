use std::path::Path;
use std::process::{Command, Output};

use gucnet::data::{gen_gaussian_mixture, load_gfv1, save_gfv1, stratified_split, DatasetBundle, MixtureParams};
use serde_json::Value;

fn gucnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gucnet")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#""epochs": 3, "hidden": [24, 16], "latent_dim": 14, "seed": 5"#;
const SMALL_X: &str = r#"{"synthetic": {"classes": 4, "dim": 6, "per_class": 25, "sigma": 0.6, "seed": 1}}"#;

#[test]
fn gen_data_writes_the_benchmark_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.gfv1");
    let o = gucnet(&[
        "gen-data", "--kind", "cluttered", "--classes", "7", "--dim", "64", "--per-class", "400", "--sigma", "0.9",
        "--seed", "1", "-o", path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "N=2800 D=64 C=7");
    let bytes = std::fs::read(&out).unwrap();
    assert_eq!(&bytes[0..4], b"GFV1");
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    assert_eq!((word(0), word(1), word(2)), (2800, 64, 7));
}

#[test]
fn zero_sigma_is_perfectly_separable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("y.gfv1");
    let o = gucnet(&["gen-data", "--kind", "separable", "--sigma", "0", "--per-class", "20", "-o", path_str(&out)]);
    assert!(o.status.success());
    let y = load_gfv1(&out).unwrap();
    assert_eq!(y.num_classes(), 10);
    assert_eq!(y.nearest_mean_accuracy(), 1.0);
}

#[test]
fn missing_output_flag_is_a_usage_error() {
    let o = gucnet(&["gen-data", "--classes", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--output"));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let o = gucnet(&["gen-data", "-o", "/nonexistent-dir/x.gfv1", "--per-class", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_then_eval_reproduces_test_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "proto.json",
        &format!(r#"{{"mode": "prototype", {SMALL}, "data": {SMALL_X}, "guide": {{"prototypes": "h_max"}}, "output_dir": "run"}}"#),
    );
    let o = gucnet(&["train", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("run");
    let report: Value = serde_json::from_slice(&std::fs::read(run.join("report.json")).unwrap()).unwrap();
    let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report, printed);
    let acc = report["test_accuracy"].as_f64().unwrap();

    let lines: Vec<Value> = std::fs::read_to_string(run.join("metrics.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    for (i, l) in lines.iter().enumerate() {
        let keys: Vec<&str> = l.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 6);
        assert_eq!(l["epoch"].as_u64(), Some(i as u64 + 1));
        assert!(l["ce_loss"].is_f64() && l["ml_loss"].is_f64());
        assert!(l["train_acc"].is_f64() && l["test_acc"].is_f64());
        assert!(l["wall_ms"].is_u64());
    }
    assert_eq!(lines[2]["test_acc"].as_f64(), Some(acc));

    let x = gen_gaussian_mixture(&MixtureParams { classes: 4, dim: 6, per_class: 25, radius: 1.0, sigma: 0.6, seed: 1 }).unwrap();
    let split = stratified_split(&x, 0.7, 5).unwrap();
    let (f, l) = x.select(&split.test);
    let test_file = dir.path().join("test.gfv1");
    save_gfv1(&DatasetBundle::new(f, l, 4, "test").unwrap(), &test_file).unwrap();
    let o = gucnet(&["eval", path_str(&run.join("checkpoint.gucw")), path_str(&test_file)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let eval: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(eval["accuracy"].as_f64(), Some(acc));
    assert_eq!(eval, report["report"]);
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.json", &format!(r#"{{"mode": "baseline", {SMALL}, "data": {SMALL_X}}}"#));
    for out in ["a", "b"] {
        let o = gucnet(&["train", &cfg, "-o", path_str(&dir.path().join(out))]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["metrics.jsonl", "checkpoint.gucw", "report.json"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn config_errors_exit_two_with_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = write_config(
        dir.path(),
        "alpha.json",
        &format!(r#"{{"mode": "prototype", "alpha": 1.5, "data": {SMALL_X}, "guide": {{"prototypes": "h_max"}}, "output_dir": "o"}}"#),
    );
    let o = gucnet(&["train", &alpha]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must be < 1.0"));

    let unknown = write_config(dir.path(), "unknown.json", &format!(r#"{{"mode": "baseline", "epoch": 3, "data": {SMALL_X}}}"#));
    let o = gucnet(&["train", &unknown, "-o", "unused"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field"));

    let missing = write_config(dir.path(), "missing.json", r#"{"mode": "baseline", "data": {"gfv1": {"path": "absent.gfv1"}}}"#);
    let o = gucnet(&["train", &missing, "-o", path_str(&dir.path().join("m"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.gfv1"));
}

#[test]
fn truncated_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.json", &format!(r#"{{"mode": "baseline", {SMALL}, "data": {SMALL_X}, "output_dir": "r"}}"#));
    assert!(gucnet(&["train", &cfg]).status.success());
    let ckpt = dir.path().join("r/checkpoint.gucw");
    let bytes = std::fs::read(&ckpt).unwrap();
    let cut = dir.path().join("cut.gucw");
    std::fs::write(&cut, &bytes[..bytes.len() / 2]).unwrap();
    let data = dir.path().join("x.gfv1");
    assert!(gucnet(&["gen-data", "--classes", "4", "--dim", "6", "--per-class", "5", "-o", path_str(&data)]).status.success());
    let o = gucnet(&["eval", path_str(&cut), path_str(&data)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checkpoint"));

    let wrong_dim = dir.path().join("w.gfv1");
    assert!(gucnet(&["gen-data", "--classes", "4", "--dim", "7", "--per-class", "5", "-o", path_str(&wrong_dim)]).status.success());
    assert_eq!(gucnet(&["eval", path_str(&ckpt), path_str(&wrong_dim)]).status.code(), Some(1));
}

#[test]
fn texture_checkpoint_evaluates_without_guide() {
    let dir = tempfile::tempdir().unwrap();
    let guide = dir.path().join("guide.gfv1");
    assert!(gucnet(&["gen-data", "--kind", "separable", "--classes", "4", "--dim", "5", "--per-class", "20", "-o", path_str(&guide)])
        .status
        .success());
    let cfg = write_config(
        dir.path(),
        "t.json",
        &format!(
            r#"{{"mode": "texture", {SMALL}, "data": {SMALL_X},
                "guide": {{"texture": {{"data": {{"gfv1": {{"path": "guide.gfv1"}}}}, "binning": {{"shuffled": {{"seed": 3}}}}}}}},
                "output_dir": "t"}}"#
        ),
    );
    let o = gucnet(&["train", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::remove_file(&guide).unwrap();
    let data = dir.path().join("x.gfv1");
    assert!(gucnet(&["gen-data", "--classes", "4", "--dim", "6", "--per-class", "10", "--seed", "9", "-o", path_str(&data)]).status.success());
    let o = gucnet(&["eval", path_str(&dir.path().join("t/checkpoint.gucw")), path_str(&data)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let eval: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(eval["num_test"].as_u64(), Some(40));
}

#[test]
fn ablate_checks_study_against_mode() {
    let dir = tempfile::tempdir().unwrap();
    let tex = write_config(
        dir.path(),
        "t.json",
        &format!(r#"{{"mode": "texture", {SMALL}, "data": {SMALL_X}, "guide": {{"texture": {{"data": {SMALL_X}}}}}}}"#),
    );
    let o = gucnet(&["ablate", &tex, "--study", "hamming"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prototype"));
    assert_eq!(gucnet(&["ablate", &tex, "--study", "sideways"]).status.code(), Some(2));
}

#[test]
fn binning_ablation_records_permutations() {
    let dir = tempfile::tempdir().unwrap();
    let guide = SMALL_X.replace("0.6", "0.05").replace("\"seed\": 1", "\"seed\": 2");
    let tex = write_config(
        dir.path(),
        "t.json",
        &format!(r#"{{"mode": "texture", "epochs": 1, "hidden": [8], "latent_dim": 6, "data": {SMALL_X}, "guide": {{"texture": {{"data": {guide}}}}}}}"#),
    );
    let out = dir.path().join("abl");
    let o = gucnet(&["ablate", &tex, "--study", "binning", "--shuffle-seeds", "1,2", "--jobs", "2", "-o", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let conds = report["conditions"].as_array().unwrap();
    assert_eq!(conds.len(), 3);
    for c in conds {
        assert_eq!(c["permutation"].as_array().unwrap().len(), 4);
        assert!(c["report"]["accuracy"].is_f64());
    }
    let saved: Value = serde_json::from_slice(&std::fs::read(out.join("ablation.json")).unwrap()).unwrap();
    assert_eq!(saved, report);
}
