use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-weyl"))
}

const CONFIG: &str = r#"
# small well
potential_expr = "1 - x^2"
domain.x_min = -2.5
domain.x_max = 2.5
domain.boundary = "dirichlet"
kappa = 0.5
h_values = [0.2, 0.14, 0.1, 0.07]
psi1.center = 0.0
psi1.width = 0.5
psi2.center = 0.0
psi2.width = 0.5
"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn run_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CONFIG);
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&out)
        .args(["--workers", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = out.join("sweep.csv");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 5);
    assert!(out.join("report.json").exists());

    let fit = bin()
        .args(["fit", "--csv"])
        .arg(&csv)
        .args(["--column", "I_exact"])
        .output()
        .unwrap();
    assert!(fit.status.success());
    let v: serde_json::Value = serde_json::from_slice(&fit.stdout).unwrap();
    assert!(v["slope"].as_f64().unwrap() < -1.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", &CONFIG.replace("kappa = 0.5", "kappa = 1.5"));
    assert_eq!(
        bin().args(["run", "--config"]).arg(&bad).status().unwrap().code(),
        Some(2)
    );
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        bin()
            .args(["check-conditions", "--config"])
            .arg(&missing)
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
    let parse = write(dir.path(), "p.toml", &CONFIG.replace("1 - x^2", "1 - x^"));
    let out = bin().args(["run", "--config"]).arg(&parse).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset"));

    // a two-point CSV cannot be fitted
    let csv = write(dir.path(), "s.csv", "h,abs_err\n0.1,1.0\n0.05,0.5\n");
    assert_eq!(bin().args(["fit", "--csv"]).arg(&csv).status().unwrap().code(), Some(3));
}

#[test]
fn check_conditions_and_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CONFIG);
    let out = bin()
        .args(["check-conditions", "--config"])
        .arg(&cfg)
        .args(["--epsilon", "0.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["epsilon_used"], 0.5);
    assert_eq!(v["cond_2_30"]["holds"], false);

    let out = bin().arg("catalog").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["const", "well", "quartic", "gaussian", "double_well"] {
        assert!(text.contains(name));
    }
}
