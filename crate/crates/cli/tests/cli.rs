use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zeno(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno"))
        .args(args)
        .env("ZENO_RUNS_DIR", root)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn figure_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../figures/error_decay.toml")
}

fn only_dir(p: &Path) -> PathBuf {
    let mut entries: Vec<_> = std::fs::read_dir(p).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1, "{entries:?}");
    entries.pop().unwrap()
}

const MINIMAL: &str = r#"
name = "single"
total_time = 1.0
n_grid = [1]

[channel]
channel = "depolarizing"
p = 0.5

[generator]
generator = "oscillator"

[truncation]
dim = 3

[initial_state]
kind = "fock"
n = 0
"#;

#[test]
fn figure_run_writes_csv_with_unit_slope() {
    let root = tempfile::tempdir().unwrap();
    let o = zeno(root.path(), &["run", figure_config().to_str().unwrap()]);
    assert!(o.status.success(), "{}", text(&o));
    let slope: f64 = text(&o)
        .split("fitted slope ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .expect("slope printed");
    assert!((slope + 1.0).abs() <= 0.2, "{slope}");
    let run = only_dir(&root.path().join("error_decay"));
    let csv = std::fs::read_to_string(run.join("results.csv")).unwrap();
    assert!(csv.starts_with("n,error\n"));
    assert_eq!(csv.lines().count(), 9);
    assert!(run.join("manifest.json").exists() && run.join("report.json").exists());
}

#[test]
fn repeated_runs_give_identical_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = figure_config();
    for root in [a.path(), b.path()] {
        assert!(zeno(root, &["run", cfg.to_str().unwrap()]).status.success());
    }
    let read = |r: &Path| std::fs::read(only_dir(&r.join("error_decay")).join("results.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn single_sample_has_no_fit() {
    let root = tempfile::tempdir().unwrap();
    let cfg = root.path().join("single.toml");
    std::fs::write(&cfg, MINIMAL).unwrap();
    let o = zeno(root.path(), &["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("no fit"));
    let csv = std::fs::read_to_string(only_dir(&root.path().join("single")).join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn invalid_sigma_exits_one() {
    let root = tempfile::tempdir().unwrap();
    let cfg = root.path().join("bad.toml");
    let bad = MINIMAL.replace("p = 0.5\n", "p = 0.5\n\n[channel.sigma]\nkind = \"diagonal\"\nweights = [0.5, 0.6]\n");
    std::fs::write(&cfg, bad).unwrap();
    let o = zeno(root.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
    assert!(text(&o).contains("trace"));
}

#[test]
fn unknown_channel_lists_catalog() {
    let root = tempfile::tempdir().unwrap();
    let cfg = root.path().join("bad.toml");
    std::fs::write(&cfg, MINIMAL.replace("\"depolarizing\"", "\"teleporter\"")).unwrap();
    let o = zeno(root.path(), &["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("attenuator"));
}

#[test]
fn classify_writes_document() {
    let root = tempfile::tempdir().unwrap();
    let o = zeno(root.path(), &["classify", "depolarizing:p=0.5,dim=3"]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("admissible: true"));
    let doc = only_dir(&root.path().join("classify"));
    let json = std::fs::read_to_string(doc).unwrap();
    assert!(json.contains("\"admissible\": true"));
}

#[test]
fn channels_lists_catalog() {
    let root = tempfile::tempdir().unwrap();
    let o = zeno(root.path(), &["channels"]);
    assert!(o.status.success());
    for name in ["depolarizing", "attenuator", "volterra", "qou", "jaynes_cummings"] {
        assert!(text(&o).contains(name), "{name}");
    }
}

#[test]
fn suite_dim_override_skips() {
    let root = tempfile::tempdir().unwrap();
    let o = zeno(root.path(), &["suite", "--dim-override", "6", "--only", "1,8"]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("SKIP") && text(&o).contains("PASS"));
}

#[test]
fn suite_failure_exits_two_and_names_criterion() {
    let root = tempfile::tempdir().unwrap();
    let o = zeno(root.path(), &["suite", "--only", "11"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("failed criteria: 11"));
}
