//! End-to-end tests of the command-line interface: exit codes, the CSV
//! contract, determinism, and checkpoint/resume.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normflow"))
        .args(args)
        .output()
        .expect("failed to launch normflow binary")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// A small interval run that finishes in a fraction of a second.
fn quick_flow_config(dir: &Path, extra: &str) -> String {
    write_config(
        dir,
        "flow.cfg",
        &format!(
            "domain.kind = interval\n\
             domain.a = 0\n\
             domain.b = 1\n\
             domain.n = 64\n\
             params.sigma = 1\n\
             params.omega = 1\n\
             scheme.kind = projected\n\
             scheme.dt = 1e-3\n\
             scheme.t_end = 0.1\n\
             scheme.tol_conv = 0\n\
             initial.profile = sine\n\
             {extra}"
        ),
    )
}

#[test]
fn csv_header_is_exact_and_run_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let cfg = quick_flow_config(dir.path(), &format!("output.csv = {}\n", csv.display()));

    let out = run(&["flow", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,mass,grad_sq,lp_norm,mu,F,dudt_l2,residual"));
    // dt = 1e-3 over [0, 0.1] with every step recorded: 101 data rows.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);
    for row in &rows {
        assert_eq!(row.split(',').count(), 8);
        for v in row.split(',') {
            assert!(v.parse::<f64>().unwrap().is_finite());
        }
    }
}

#[test]
fn identical_config_and_seed_give_identical_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let cfg_a = quick_flow_config(dir.path(), &format!("output.csv = {}\nseed = 7\n", a.display()));
    let out = run(&["flow", "--config", &cfg_a]);
    assert_eq!(out.status.code(), Some(0));

    let body_b = fs::read_to_string(&cfg_a)
        .unwrap()
        .replace(&format!("{}", a.display()), &format!("{}", b.display()));
    let cfg_b = write_config(dir.path(), "flow_b.cfg", &body_b);
    let out = run(&["flow", "--config", &cfg_b, "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "CSV output is not deterministic");
}

#[test]
fn resume_continues_to_the_same_final_row() {
    let dir = tempfile::tempdir().unwrap();
    let full_csv = dir.path().join("full.csv");
    let part_csv = dir.path().join("part.csv");
    let tail_csv = dir.path().join("tail.csv");
    let ckpt = dir.path().join("state.ckpt.json");

    let full = quick_flow_config(dir.path(), &format!("output.csv = {}\n", full_csv.display()));
    let out = run(&["flow", "--config", &full]);
    assert_eq!(out.status.code(), Some(0));

    // First half, saving a checkpoint at t = 0.05.
    let half = write_config(
        dir.path(),
        "half.cfg",
        &fs::read_to_string(&full)
            .unwrap()
            .replace("scheme.t_end = 0.1", "scheme.t_end = 0.05")
            .replace(
                &format!("output.csv = {}", full_csv.display()),
                &format!("output.csv = {}\noutput.checkpoint = {}", part_csv.display(), ckpt.display()),
            ),
    );
    let out = run(&["flow", "--config", &half]);
    assert_eq!(out.status.code(), Some(0));
    assert!(ckpt.exists());

    // Resume to the original absolute end time.
    let rest = write_config(
        dir.path(),
        "rest.cfg",
        &fs::read_to_string(&half)
            .unwrap()
            .replace("scheme.t_end = 0.05", "scheme.t_end = 0.1")
            .replace(&format!("{}", part_csv.display()), &format!("{}", tail_csv.display())),
    );
    let out = run(&["resume", "--config", &rest]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let last = |p: &Path| fs::read_to_string(p).unwrap().lines().last().unwrap().to_string();
    assert_eq!(last(&full_csv), last(&tail_csv), "resumed run diverged from the straight run");

    // Resuming again past the end has nothing left to do.
    let out = run(&["resume", "--config", &rest]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rival_blowup_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rival.cfg",
        "domain.kind = interval\n\
         domain.a = 0\n\
         domain.b = 1\n\
         domain.n = 128\n\
         params.sigma = 2\n\
         params.omega = 0\n\
         params.beta = 1\n\
         flow.law = rival\n\
         scheme.dt = 1e-5\n\
         scheme.t_end = 1\n\
         scheme.tol_conv = 0\n\
         scheme.record_every = 100\n\
         initial.profile = sine\n\
         initial.amplitude = 10\n",
    );
    let out = run(&["flow", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("blow_up"));
}

#[test]
fn bad_configs_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let unknown_key = quick_flow_config(dir.path(), "mystery.key = 1\n");
    let out = run(&["flow", "--config", &unknown_key]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mystery.key"));

    let out = run(&["flow", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let bad_law = quick_flow_config(dir.path(), "flow.law = quantum\n");
    let out = run(&["flow", "--config", &bad_law]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ground_state_subcommand_writes_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let cfg = write_config(
        dir.path(),
        "gs.cfg",
        &format!(
            "domain.kind = radial_ball\n\
             domain.radius = 10\n\
             domain.dim = 3\n\
             domain.n = 2048\n\
             params.sigma = 1\n\
             params.omega = 1\n\
             scheme.t_end = 1\n\
             initial.profile = gaussian\n\
             initial.target_mass = 1\n\
             output.state = {}\n",
            state.display()
        ),
    );
    let out = run(&["ground-state", "--config", &cfg, "--method", "shoot"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&state).unwrap()).unwrap();
    assert_eq!(parsed["omega"], 1.0);
    assert_eq!(parsed["values"].as_array().unwrap().len(), 2048);
    assert!(parsed["residual_l2"].as_f64().unwrap() < 1e-3);
}

#[test]
fn verify_fast_suite_passes() {
    let out = run(&["verify", "--suite", "fast", "--seed", "0"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "stdout: {stdout}");
    assert_eq!(stdout.matches("[PASS]").count(), 10, "stdout: {stdout}");
}
