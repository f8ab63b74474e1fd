use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spikecs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spikecs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, name: &str, seed: u64) -> PathBuf {
    let path = dir.join(name);
    let o = spikecs(&[
        "gen",
        "--n",
        "256",
        "--amplitude",
        "300",
        "--seed",
        &seed.to_string(),
        "--out",
        p(&path),
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn gen_writes_one_line_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "s.csv", 7);
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 256);
    assert!(text.lines().all(|l| l.parse::<f64>().is_ok()));
}

#[test]
fn gen_defaults_to_256_samples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.f64");
    assert!(spikecs(&["gen", "--out", p(&path), "--format", "f64le"])
        .status
        .success());
    assert_eq!(std::fs::metadata(path).unwrap().len(), 256 * 8);
}

#[test]
fn gen_too_short_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = spikecs(&["gen", "--n", "3", "--out", p(&dir.path().join("s.csv"))]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("template"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn gen_unwritable_path_fails() {
    let o = spikecs(&["gen", "--out", "/nonexistent-dir/s.csv"]);
    assert!(!o.status.success());
}

#[test]
fn unknown_flag_rejected() {
    assert!(!spikecs(&["gen", "--bogus", "1"]).status.success());
}

#[test]
fn reconstruct_reports_cr_half() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "s.csv", 1);
    let record = dir.path().join("run.jsonl");
    let o = spikecs(&[
        "reconstruct",
        "--in",
        p(&input),
        "--basis",
        "dct",
        "--solver",
        "bsbl_bo",
        "--m",
        "128",
        "--report",
        p(&record),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["cr"], 0.5);
    assert!(report["snr_db"].as_f64().unwrap() > 0.0);
    assert!(report["psnr_db"].as_f64().unwrap() > report["snr_db"].as_f64().unwrap());
    assert!(record.exists() && record.with_extension("csv").exists());
}

#[test]
fn reconstruct_bogus_basis_lists_all_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "s.csv", 1);
    let o = spikecs(&["reconstruct", "--in", p(&input), "--basis", "bogus"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    for name in [
        "identity",
        "dct",
        "fft_real",
        "dpss",
        "gabor",
        "noiselet_real",
        "rst",
        "wavelet_db20",
    ] {
        assert!(err.contains(name), "{name} missing from: {err}");
    }
}

#[test]
fn reconstruct_bogus_solver_lists_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "s.csv", 1);
    let o = spikecs(&["reconstruct", "--in", p(&input), "--solver", "cvx"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bp_admm") && stderr(&o).contains("bsbl_bo"));
}

#[test]
fn reconstruct_more_measurements_than_samples_fails() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "s.csv", 1);
    let o = spikecs(&["reconstruct", "--in", p(&input), "--m", "300"]);
    assert!(!o.status.success());
    assert!(stdout(&o).is_empty());
}

#[test]
fn reconstruct_missing_input_fails() {
    let o = spikecs(&["reconstruct", "--in", "/nonexistent/s.csv"]);
    assert!(!o.status.success());
}

const SMALL_DICT_COMPARE: &str = r#"
experiment = "dict_compare"
m_values = [128]
bases = ["dct", "fft_real", "gabor", "dpss", "noiselet_real", "rst", "wavelet_db20"]
solvers = ["bsbl_bo"]
trials = 2
seed = 5

[bsbl]
max_iter = 50
"#;

#[test]
fn bench_cardinality_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("dict.toml");
    std::fs::write(&config, SMALL_DICT_COMPARE).unwrap();
    let mut runs = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let o = spikecs(&["bench", "--config", p(&config), "--out-dir", p(&out_dir)]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("Basis"));
        let text = std::fs::read_to_string(out_dir.join("records.jsonl")).unwrap();
        assert_eq!(text.lines().count(), 7 * 2);
        assert!(out_dir.join("records.csv").exists());
        let stripped: Vec<serde_json::Value> = text
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["runtime_s"] = serde_json::Value::Null;
                v
            })
            .collect();
        runs.push(stripped);
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn bench_malformed_config_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(
        &config,
        "experiment = \"dict_compare\"\nm_values = [128]\nbases = [\"bogus\"]\nsolvers = [\"bsbl_bo\"]\n",
    )
    .unwrap();
    let o = spikecs(&["bench", "--config", p(&config), "--out-dir", p(dir.path())]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn bench_template_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = spikecs(&["bench", "--template", "cr_sweep"]);
    assert!(o.status.success());
    let path = dir.path().join("cr.toml");
    std::fs::write(&path, stdout(&o)).unwrap();
    let cfg = spikecs::bench::ExperimentConfig::from_path(&path).unwrap();
    assert_eq!(cfg.m_values, vec![64, 96, 128, 160, 192]);
}

#[test]
fn table_reference_rows() {
    let o = spikecs(&["table", "--reference"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(spikecs::bench::normalize_whitespace).collect();
    assert!(lines[0].starts_with("Basis PSNR(dB) SNR(dB) CR Time (s)"));
    assert!(lines.iter().any(|l| l.starts_with("Fourier 30.1583 13.9176 0.5 0.182")));
    assert_eq!(lines.len(), 8);
}

#[test]
fn table_from_records_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ref.jsonl");
    std::fs::write(&path, spikecs::bench::REFERENCE_TABLE_JSONL).unwrap();
    let o = spikecs(&["table", "--records", p(&path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Noiselet"));
}

#[test]
fn table_requires_a_source() {
    assert!(!spikecs(&["table"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert!(!spikecs(&["table", "--records", p(&empty)]).status.success());
}
