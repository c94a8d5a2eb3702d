use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_vanhove"));
    c.env_remove("VANHOVE_DIM_CAP");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vanhove-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out.join("out")).output().unwrap()
}

fn no_outputs(out: &Path) -> bool {
    !out.join("out").exists()
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = scratch("malformed");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "seed = 1\n[ir_table]\nexponents = \"one\"\n").unwrap();
    let o = run(&["ir-table", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(no_outputs(&dir));

    std::fs::write(&cfg, "seed = 1\nunknown_key = 3\n").unwrap();
    let o = run(&["ir-table", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(no_outputs(&dir));
}

#[test]
fn randomized_experiment_requires_seed() {
    let dir = scratch("seedless");
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "[selection]\nlattice_draws = 1\n").unwrap();
    let o = run(&["selection", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
    assert!(no_outputs(&dir));
    // Deterministic experiments run without one.
    std::fs::write(&cfg, "[cutoff_sweep]\nsteps = 4\ntolerance = 1.0\nlimit_tolerance = 1.0\n").unwrap();
    let o = run(&["cutoff-sweep", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn mismatched_experiment_key_is_rejected() {
    let dir = scratch("mismatch");
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "experiment = \"kms\"\nseed = 1\n").unwrap();
    let o = run(&["ir-table", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(no_outputs(&dir));
}

#[test]
fn list_shows_every_experiment() {
    let o = bin().arg("list").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["verify-bounded", "relations", "kms", "cluster", "ir-table", "cutoff-sweep", "selection"] {
        assert!(text.lines().any(|l| l == name), "missing {name}");
        assert!(text.contains(&format!("experiment = \"{name}\"")), "missing default config of {name}");
    }
}

#[test]
fn ir_table_writes_csv_and_json() {
    let dir = scratch("ir-table");
    let o = run(&["ir-table"], &dir);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("out/ir-table.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("experiment_id,input_descriptor,analytic_value,oracle_value,residual,tolerance,pass")
    );
    let table: Vec<&str> = csv.lines().filter(|l| l.starts_with("ir-table.definition-faithful,")).collect();
    assert_eq!(table.len(), 10);
    let rejected: Vec<&str> = table.iter().copied().filter(|l| l.contains(",rejected,")).collect();
    assert_eq!(rejected.len(), 3, "{rejected:?}");
    assert!(rejected.iter().all(|l| l.contains("f(0)=1")));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("out/ir-table.json")).unwrap()).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
}

#[test]
fn seed_fixes_the_output() {
    let dir = scratch("seed");
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "[selection]\ncontinuum_draws = 3\nlattice_draws = 3\n").unwrap();
    let mut tables = Vec::new();
    for (seed, sub) in [("7", "a"), ("7", "b"), ("8", "c")] {
        let out = dir.join(sub);
        let o = bin()
            .args(["selection", "--config", cfg.to_str().unwrap(), "--seed", seed, "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        tables.push(std::fs::read(out.join("selection.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
    assert_ne!(tables[0], tables[2]);
}

#[test]
fn failing_rows_exit_1_and_still_report() {
    let dir = scratch("fail");
    let o = run(&["cluster", "--tolerance", "1e-12"], &dir);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.join("out/cluster.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("cluster.decay,") && l.ends_with(",false")));
}

#[test]
fn dimension_cap_exits_4() {
    let dir = scratch("cap");
    let o = bin().env("VANHOVE_DIM_CAP", "16").arg("verify-bounded").arg("--out").arg(dir.join("out")).output().unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(no_outputs(&dir));
}

#[test]
fn quadrature_failure_exits_3() {
    let dir = scratch("quadrature");
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "[quadrature]\nnodes = 2\nabs_tol = 1e-300\nrel_tol = 1e-300\n").unwrap();
    let o = run(&["cutoff-sweep", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(no_outputs(&dir));
}
