use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crocco-prandtl"))
}

fn catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A copy of the catalog with its own suite.cfg.
fn suite_with(suite_cfg: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for e in fs::read_dir(catalog()).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    fs::write(dir.path().join("suite.cfg"), suite_cfg).unwrap();
    dir
}

fn write_cfg(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn version_prints_crate_version() {
    let o = bin().arg("version").output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), format!("crocco-prandtl {}", env!("CARGO_PKG_VERSION")));
}

#[test]
fn catalog_validates() {
    for e in fs::read_dir(catalog()).unwrap() {
        let p = e.unwrap().path();
        if p.file_name().unwrap() == "suite.cfg" {
            continue;
        }
        let o = bin().args(["validate", "--config"]).arg(&p).output().unwrap();
        assert!(o.status.success(), "{}: {}", p.display(), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "scenario = exact_profile\nNy = 2\n",
        "scenario = exact_profile\ncolour = red\n",
        "Nx = 32\n",
        "scenario = exact_profile\nT = 1\n",
    ] {
        let p = write_cfg(dir.path(), text);
        let o = bin().args(["validate", "--config"]).arg(&p).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
    let p = write_cfg(dir.path(), "scenario = exact_profile\ncolour = red\n");
    let o = bin().args(["validate", "--config"]).arg(&p).output().unwrap();
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}

#[test]
fn run_needs_an_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_cfg(dir.path(), "scenario = kolmogorov_checks\n");
    let o = bin().args(["run", "--config"]).arg(&p).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_writes_headed_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = bin()
        .args(["run", "--config"])
        .arg(catalog().join("kolmogorov_checks.cfg"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.txt", "report.csv"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        assert!(text.starts_with("# crocco-prandtl "), "{f}");
    }
    assert!(!out.join("FAILED").exists());
}

#[test]
fn small_exact_profile_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let p = write_cfg(
        dir.path(),
        &format!("scenario = exact_profile\nNx = 16\nNy = 16\nNt = 16\noutput = {}\n", out.display()),
    );
    let o = bin().args(["run", "--config"]).arg(&p).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("comparison_constant"));
    assert!(out.join("fields.csv").exists());
}

#[test]
fn acceptance_subset_passes() {
    let suite = suite_with("criteria = 7, 8\n");
    let out = suite.path().join("result");
    let o = bin().args(["acceptance", "--suite"]).arg(suite.path()).arg("--out").arg(&out).output().unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = fs::read_to_string(out.join("acceptance.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert!(rows[0].starts_with("# crocco-prandtl "));
    assert_eq!(rows[1], "criterion,verdict,value,tolerance");
    assert!(rows[2].starts_with("7,pass,"));
    assert!(rows[3].starts_with("8,pass,"));
    assert_eq!(rows.len(), 4);
}

#[test]
fn broken_tolerance_fails_alone() {
    let suite = suite_with("criteria = 7, 8\ntolerance.8 = 0\n");
    let o = bin().args(["acceptance", "--suite"]).arg(suite.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("\n7,pass,"), "{text}");
    assert!(text.contains("\n8,fail,"), "{text}");
}

#[test]
fn acceptance_csv_is_reproducible() {
    let suite = suite_with("criteria = 7, 8, 12\n");
    let run = || {
        let o = bin().args(["acceptance", "--suite"]).arg(suite.path()).output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn incomplete_suite_is_a_config_error() {
    let suite = suite_with("");
    fs::remove_file(suite.path().join("oscillation_lab.cfg")).unwrap();
    let o = bin().args(["acceptance", "--suite"]).arg(suite.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
