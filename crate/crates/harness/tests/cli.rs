use std::process::Command;

fn swaylab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swaylab"))
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        "scenarios = [\"monrp-50-4-5-0-090\"]\noptimizers = [\"sway2\", \"spea2\"]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = swaylab()
        .args([
            "run",
            config.to_str().unwrap(),
            "--repeats",
            "2",
            "--budget",
            "200",
            "--seed",
            "9",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["records.csv", "timings.csv", "report.md", "ranks.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let first = std::fs::read_to_string(out.join("report.md")).unwrap();
    let rendered = swaylab().arg("report").arg(&out).output().unwrap();
    assert!(rendered.status.success());
    assert_eq!(String::from_utf8(rendered.stdout).unwrap(), first);
    assert_eq!(
        std::fs::read_to_string(out.join("report.md")).unwrap(),
        first
    );
}

#[test]
fn json_configs_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    let out = dir.path().join("out");
    let body = format!(
        r#"{{"scenarios": ["xomo-ground"], "optimizers": ["sway2"], "repeats": 1, "out": {:?}}}"#,
        out.to_str().unwrap()
    );
    std::fs::write(&config, body).unwrap();
    assert!(swaylab()
        .arg("run")
        .arg(&config)
        .status()
        .unwrap()
        .success());
    assert!(out.join("records.csv").exists());
}

#[test]
fn config_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(
        &config,
        "scenarios = [\"nope\"]\noptimizers = [\"sway2\"]\n",
    )
    .unwrap();
    let out = swaylab().arg("run").arg(&config).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));

    assert!(!swaylab()
        .args(["run", "/definitely/missing.toml"])
        .status()
        .unwrap()
        .success());
    assert!(!swaylab().args(["dim", "nope"]).status().unwrap().success());
    assert!(!swaylab()
        .arg("report")
        .arg(dir.path())
        .status()
        .unwrap()
        .success());
}

#[test]
fn dim_reports_intrinsic_below_actual() {
    let out = swaylab()
        .args(["dim", "xomo-osp", "--samples", "300"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("xomo-osp: intrinsic"), "{text}");
}
