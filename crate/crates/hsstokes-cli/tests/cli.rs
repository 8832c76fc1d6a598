use std::path::Path;

use hsstokes_cli::{run, RunConfig};

const SMALL: &str = r#"
[grid]
half_period = 8.0
modes = 64
y_max = 8.0
normal_nodes = 48

[sizes]
l1_t_min = 0.001
l1_t_end = 1.0
l1_per_decade = 4
"#;

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    std::fs::write(&path, SMALL).unwrap();
    path.to_str().unwrap().to_owned()
}

fn invoke(cfg: &str, out: &Path, rest: &[&str]) -> i32 {
    let mut args = vec!["hsstokes", "--config", cfg, "--out", out.to_str().unwrap()];
    args.extend_from_slice(rest);
    run(args)
}

#[test]
fn zero_data_solves_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = tmp.path().join("zero");
    assert_eq!(invoke(&cfg, &out, &["solve-resolvent", "--lambda", "2,1", "--recipe", "zero"]), 0);
    for name in ["rho.json", "u.json", "residuals.json", "norms.csv", "config.toml"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
}

#[test]
fn gaussian_solve_meets_residual_budget() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("default.toml");
    std::fs::write(&cfg, "").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = tmp.path().join("gauss");
    assert_eq!(invoke(cfg, &out, &["solve-resolvent", "--lambda", "-1.5,6"]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("residuals.json")).unwrap()).unwrap();
    assert!(v["eq1"].as_f64().unwrap() < 1e-8);
    assert!(v["eq2"].as_f64().unwrap() < 1e-6);
    assert!(v["boundary"].as_f64().unwrap() < 1e-8);
}

#[test]
fn exit_codes_follow_error_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = tmp.path().join("codes");
    assert_eq!(invoke(&cfg, &out, &["solve-resolvent", "--lambda", "0.1,0"]), 3);
    assert_eq!(invoke(&cfg, &out, &["solve-resolvent", "--lambda", "-50,0.1"]), 3);
    assert_eq!(invoke(&cfg, &out, &["solve-resolvent", "--lambda", "nonsense"]), 2);
    assert_eq!(invoke(&cfg, &out, &["evolve", "--times", "0.1,0.1"]), 2);
    assert_eq!(invoke(&cfg, &out, &["evolve", "--times", "0.2,0.1"]), 2);
    assert_eq!(invoke(&cfg, &out, &["evolve", "--times=-1"]), 2);
    assert_eq!(invoke(&cfg, &out, &["verify", "--suite", "nothing"]), 2);
    assert_eq!(invoke(&cfg, &out, &["no-such-command"]), 2);
    let missing = tmp.path().join("absent.toml");
    assert_eq!(invoke(missing.to_str().unwrap(), &out, &["sweep"]), 4);
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "sigma = 0.9\n").unwrap();
    assert_eq!(invoke(bad.to_str().unwrap(), &out, &["sweep"]), 2);
}

#[test]
fn short_evolution_stays_close_to_initial_state() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = tmp.path().join("evolve");
    assert_eq!(invoke(&cfg, &out, &["evolve", "--times", "0.001,0.5"]), 0);
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][2] < 0.05, "relative change at t = 1e-3 is {}", rows[0][2]);
    assert!(rows[1][1] < rows[0][1]);
    for name in ["state_000_rho.json", "state_001_u.json", "l1_integrand.csv", "l1_summary.json"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
}

#[test]
fn echoed_config_reloads_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = tmp.path().join("echo");
    assert_eq!(invoke(&cfg, &out, &["besov-norm", "--recipe", "zero"]), 0);
    let echoed = RunConfig::load(&out.join("config.toml")).unwrap();
    let direct = RunConfig::parse(SMALL).unwrap();
    assert_eq!(echoed.grid, direct.grid);
    assert_eq!(echoed.sizes, direct.sizes);
    assert!(echoed.sector.nu0.is_some());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("besov_norm.json")).unwrap()).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);
}
