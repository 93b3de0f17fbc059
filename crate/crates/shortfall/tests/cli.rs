//! End-to-end checks of the command-line interface: exit codes, config
//! handling, and byte-level reproducibility.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shortfall"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shortfall-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON line")
}

#[test]
fn solve_gen_expectile_matches_conditional_mean() {
    let out = bin()
        .args([
            "solve", "--model", "gpd", "--gamma", "0.3333333333333333", "--theta", "1",
            "--risk", "gen-expectile", "--p", "0.95", "--q", "0.95", "--tau", "0.5",
        ])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    let x = v["x_tau"].as_f64().unwrap();
    let expected = 1.5 * 20f64.powf(1.0 / 3.0) - 1.0;
    assert!((x - expected).abs() < 1e-4, "x_tau = {x}");
    assert!(v["residual"].as_f64().unwrap().abs() <= 1e-9);
}

#[test]
fn solve_pareto_expectile_mean() {
    let out = bin()
        .args([
            "solve", "--model", "pareto", "--gamma", "0.5", "--risk", "expectile", "--tau", "0.5",
        ])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!((v["x_tau"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn missing_required_flag_exits_2_naming_it() {
    // --tau is a hard clap requirement.
    let out = bin()
        .args(["solve", "--model", "pareto", "--gamma", "0.5", "--risk", "expectile"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--tau"));

    // --gamma is validated after config merging; the message names it too.
    let out = bin()
        .args(["solve", "--model", "pareto", "--risk", "expectile", "--tau", "0.9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--gamma"));
}

#[test]
fn burr_negative_rho_parses_with_space_syntax() {
    let out = bin()
        .args([
            "solve", "--model", "burr", "--gamma", "0.3", "--rho", "-1.5",
            "--risk", "gen-expectile", "--p", "0.95", "--q", "0.95", "--tau", "0.5",
        ])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!(v["x_tau"].as_f64().unwrap() > 0.0);
}

#[test]
fn domain_error_exits_2() {
    // Inadmissible spec: Lp power 3 with gamma = 0.9 diverges.
    let out = bin()
        .args([
            "solve", "--model", "pareto", "--gamma", "0.9", "--risk", "lp-quantile",
            "--power", "3", "--tau", "0.9",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_inline_override() {
    let dir = tmpdir("override");
    let cfg = dir.join("spec.toml");
    fs::write(
        &cfg,
        r#"
[model]
name = "gpd"
gamma = 0.2
theta = 1.0

[risk]
kind = "gen-expectile"
p = 0.95
q = 0.95
"#,
    )
    .unwrap();

    let from_file = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .args(["--tau", "0.5"])
        .output()
        .unwrap();
    let base = stdout_json(&from_file)["x_tau"].as_f64().unwrap();

    // Inline --gamma overrides the file value; result must differ.
    let overridden = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .args(["--gamma", "0.3333333333333333", "--tau", "0.5"])
        .output()
        .unwrap();
    let changed = stdout_json(&overridden)["x_tau"].as_f64().unwrap();
    let expected = 1.5 * 20f64.powf(1.0 / 3.0) - 1.0;
    assert!((changed - expected).abs() < 1e-4);
    assert!((base - changed).abs() > 0.1);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tmpdir("badkey");
    let cfg = dir.join("spec.toml");
    fs::write(
        &cfg,
        r#"
[model]
name = "gpd"
gamma = 0.2
theta = 1.0
spread = 2.0

[risk]
kind = "expectile"
"#,
    )
    .unwrap();
    let out = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .args(["--tau", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spread"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn estimate_pipeline_round_trip() {
    use shortfall::distortion::Distortion;
    use shortfall::estimation::{shortfall_estimate, SortedSample};
    use shortfall::model::HeavyTailModel;

    let dir = tmpdir("estimate");
    let data_path = dir.join("data.csv");
    let model = HeavyTailModel::pareto(0.25).unwrap();
    let sample = model.sample(1000, 4242);
    let mut text = String::from("x\n");
    for v in &sample {
        text.push_str(&format!("{v}\n"));
    }
    fs::write(&data_path, text).unwrap();

    let out = bin()
        .args(["estimate", "--k", "100", "--tau", "0.999", "--alpha", "1", "--h1", "identity"])
        .arg(&data_path)
        .output()
        .unwrap();
    let v = stdout_json(&out);

    let sorted = SortedSample::from_unsorted(sample).unwrap();
    let expected = shortfall_estimate(&sorted, 100, 0.999, 1.0, &Distortion::Identity).unwrap();
    assert!((v["gamma_hat"].as_f64().unwrap() - expected.gamma_hat).abs() < 1e-12);
    assert!(
        (v["x_hat"].as_f64().unwrap() - expected.x_hat.unwrap()).abs()
            < 1e-9 * expected.x_hat.unwrap()
    );
    assert_eq!(v["admissible"].as_bool(), Some(true));
    assert_eq!(v["n"].as_u64(), Some(1000));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn estimate_rejects_non_numeric_rows() {
    let dir = tmpdir("baddata");
    let data_path = dir.join("data.csv");
    fs::write(&data_path, "1.0\n2.0\nnot-a-number\n").unwrap();
    let out = bin()
        .args(["estimate", "--k", "1", "--tau", "0.9", "--alpha", "1"])
        .arg(&data_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn expand_table_and_simulate_are_reproducible() {
    let dir = tmpdir("repro");
    let cfg = dir.join("exp.toml");
    fs::write(
        &cfg,
        r#"
[model]
name = "gpd"
gamma = 0.3333333333333333
theta = 1.0

[risk]
kind = "gen-expectile"
p = 0.95
q = 0.95

[experiment]
kind = "expansion-compare"
tau = [0.99, 0.999]
"#,
    )
    .unwrap();

    let run = || bin().arg("simulate").arg(&cfg).output().unwrap();
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("tau,x_exact,x_first,x_second,relerr_first,relerr_second\n"));
    assert_eq!(text.lines().count(), 3);

    // The expand subcommand on the same model/risk reproduces the table rows.
    let expand = bin()
        .args([
            "expand", "--model", "gpd", "--gamma", "0.3333333333333333", "--theta", "1",
            "--risk", "gen-expectile", "--p", "0.95", "--q", "0.95",
        ])
        .output()
        .unwrap();
    assert!(expand.status.success());
    let table = String::from_utf8(expand.stdout).unwrap();
    assert_eq!(table.lines().count(), 41); // header + default 40-point grid
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_flag_overrides_experiment_seed() {
    let dir = tmpdir("seed");
    let cfg = dir.join("sweep.toml");
    fs::write(
        &cfg,
        r#"
[model]
name = "pareto"
gamma = 0.2

[risk]
kind = "gen-expectile"
p = 0.95
q = 0.95

[experiment]
kind = "mse-sweep"
n = 150
replications = 25
master_seed = 1
k_lo = 5
k_hi = 60
k_step = 5
"#,
    )
    .unwrap();
    let run = |extra: &[&str]| {
        let out = bin().args(extra).arg("simulate").arg(&cfg).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let default_seed = run(&[]);
    let overridden = run(&["--seed", "99"]);
    let overridden_again = run(&["--seed", "99"]);
    assert_ne!(default_seed, overridden);
    assert_eq!(overridden, overridden_again);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tmpdir("outflag");
    let path = dir.join("report.json");
    let out = bin()
        .args([
            "--out",
            path.to_str().unwrap(),
            "solve",
            "--model",
            "pareto",
            "--gamma",
            "0.5",
            "--risk",
            "expectile",
            "--tau",
            "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["x_tau"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    fs::remove_dir_all(&dir).ok();
}
