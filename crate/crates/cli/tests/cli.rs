// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kitten_cli::config::{RunConfig, TimeSpec};
use kitten_cli::error::Origin;
use proptest::prelude::*;
use tempfile::TempDir;

// a coarse grid keeps the phase-space subcommands quick
const SMALL_GRID: &str = "grid_points=41";

fn kitten(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kitten"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn kitten")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn show_config_round_trips_through_a_file() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["show-config", "--set", "time=0:5000:25", "--set", "alpha_im=-0.25", "--set", "n_max=70"]);
    assert_eq!(code(&o), 0);
    let first = String::from_utf8(o.stdout).unwrap();
    fs::write(tmp.path().join("run.cfg"), &first).unwrap();
    let again = kitten(tmp.path(), &["show-config", "--config", "run.cfg"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), first);
}

#[test]
fn exit_statuses() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.cfg"), "delta=0.15\n# λ enters squared\nlambda=-0.05\n").unwrap();
    let o = kitten(tmp.path(), &["validate", "--config", "bad.cfg"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(code(&kitten(tmp.path(), &["moments", "--set", "colour=blue"])), 3);
    assert_eq!(code(&kitten(tmp.path(), &["moments", "--config", "missing.cfg"])), 1);

    fs::write(tmp.path().join("blocker"), "").unwrap();
    assert_eq!(code(&kitten(tmp.path(), &["moments", "--out", "blocker/sub"])), 1);
}

#[test]
fn under_truncation_fails_validation() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["validate", "--set", "n_max=8"]);
    assert_eq!(code(&o), 2);
    let out = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(out.lines().any(|l| l.starts_with("check truncation FAIL")), "{out}");
}

#[test]
fn validate_default_state() {
    let tmp = TempDir::new().unwrap();
    // interference fringes at 2205 need the full default grid
    let o = kitten(tmp.path(), &["validate"]);
    let out = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.lines().count() >= 10 && out.lines().all(|l| l.contains(" PASS: ")), "{out}");
}

#[test]
fn linear_husimi_needs_bias() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["grid", "--kind", "husimi-linear", "--set", "epsilon=0", "--set", SMALL_GRID]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("domain"));
}

#[test]
fn evolve_rows_and_entropy() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["evolve", "--set", "time=0:5000:25", "--set", "grid_points=21", "--out", "o"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(tmp.path().join("o/evolve.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 201);
    assert!(rows[200].starts_with("5.0000000000000000e3,"));

    // 2205 is not on the 25-step lattice and the dip is narrower than one step
    let o = kitten(tmp.path(), &["evolve", "--set", "time=2205", "--set", "grid_points=21", "--out", "one"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(tmp.path().join("one/evolve.csv")).unwrap();
    let s: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((s - 0.0118).abs() < 1e-3, "S(2205) = {s}");

    let o = kitten(tmp.path(), &["evolve", "--set", "time=10:0:1", "--out", "e"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(tmp.path().join("e/evolve.csv")).unwrap(), "omega_t,S,S_Q,delta_W,purity\n");
}

#[test]
fn output_is_independent_of_thread_count() {
    let tmp = TempDir::new().unwrap();
    let args = ["--set", "time=0,2205,3371", "--set", "grid_points=61", "--set", "reference_time=0"];
    for (threads, dir) in [("1", "a"), ("4", "b")] {
        for cmd in ["evolve", "moments"] {
            let mut all = vec![cmd, "--threads", threads, "--out", dir];
            all.extend(args);
            assert_eq!(code(&kitten(tmp.path(), &all)), 0);
        }
        let o = kitten(tmp.path(), &["grid", "--kind", "wigner", "--threads", threads, "--out", dir, "--set", "grid_points=61"]);
        assert_eq!(code(&o), 0);
    }
    for f in ["evolve.csv", "moments.csv", "wigner_t2205.dat", "wigner_t2205.txt"] {
        let a = fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = fs::read(tmp.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs between thread counts");
    }
}

#[test]
fn grid_sidecars() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["grid", "--kind", "wigner", "--set", "time=0", "--set", "c_im=0", "--set", "grid_points=121"]);
    assert_eq!(code(&o), 0);
    let side = fs::read_to_string(tmp.path().join("wigner_t0.txt")).unwrap();
    assert!((report_value(&side, "integral") - 1.0).abs() < 1e-3);
    assert!(report_value(&side, "negativity") < 1e-3);
    let dump = fs::read_to_string(tmp.path().join("wigner_t0.dat")).unwrap();
    assert!(dump.starts_with("# ") && dump.lines().count() == 122);

    let o = kitten(tmp.path(), &["grid", "--kind", "angular", "--set", "time=3371"]);
    assert_eq!(code(&o), 0);
    let side = fs::read_to_string(tmp.path().join("angular_t3371.txt")).unwrap();
    assert_eq!(report_value(&side, "peaks"), 4.0);
}

#[test]
fn reconstruct_single_component() {
    let tmp = TempDir::new().unwrap();
    // without coupling the reference radius |α₊| equals |α|, so the t = 0 state is in the family
    let o = kitten(tmp.path(), &["reconstruct", "--p", "1", "--set", "time=0", "--set", "c_im=0", "--set", "lambda=0"]);
    assert_eq!(code(&o), 0);
    let r = fs::read_to_string(tmp.path().join("reconstruct_p1_t0.txt")).unwrap();
    assert!(report_value(&r, "d_hs") < 1e-3, "{r}");
}

#[test]
fn reconstruct_and_rescore() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&kitten(tmp.path(), &["reconstruct", "--p", "2", "--out", "fit"])), 0);
    let r = fs::read_to_string(tmp.path().join("fit/reconstruct_p2_t2205.txt")).unwrap();
    let d = report_value(&r, "d_hs");
    assert!(d <= 0.0652, "{r}");
    assert!((report_value(&r, "ratio") - 0.0649).abs() < 0.005);
    assert!(r.contains("converged=true"));

    // a report is also a valid ensemble file
    let o = kitten(tmp.path(), &["reconstruct", "--ensemble", "fit/reconstruct_p2_t2205.txt", "--out", "again"]);
    assert_eq!(code(&o), 0);
    let again = fs::read_to_string(tmp.path().join("again/reconstruct_p2_t2205.txt")).unwrap();
    assert!((report_value(&again, "d_hs") - d).abs() < 1e-12);
}

#[test]
fn fixed_thermal_mixture() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("mix.txt"),
        "count=4\ntheta_tilde_deg=135.22\nnbar=0\ng_0=1.04081\ng_1=1.01542\ng_2=1.0404\ng_3=1.015\n",
    )
    .unwrap();
    let o = kitten(tmp.path(), &["thermal-compare", "--ensemble", "mix.txt", "--set", "time=3371"]);
    assert_eq!(code(&o), 0);
    let r = fs::read_to_string(tmp.path().join("thermal_c4_t3371.txt")).unwrap();
    assert!((report_value(&r, "kl") - 0.0266).abs() < 0.005, "{r}");
    assert!((report_value(&r, "d_hs") - 0.518).abs() < 0.02);
}

#[test]
fn exhausted_budget_is_not_success() {
    let tmp = TempDir::new().unwrap();
    let o = kitten(tmp.path(), &["reconstruct", "--p", "2", "--set", "max_evaluations=20"]);
    assert_eq!(code(&o), 4);
    let r = fs::read_to_string(tmp.path().join("reconstruct_p2_t2205.txt")).unwrap();
    assert!(r.contains("converged=false"));
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1.0..1.0f64, Just(0.0), Just(1e-300)]
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(
        delta in 0.0..2.0f64,
        eps in finite(),
        lambda in 0.0..0.5f64,
        are in finite(),
        aim in finite(),
        theta in finite(),
        n in prop::option::of(1usize..300),
        half in prop::option::of(0.1..50.0f64),
        pts in (1usize..200).prop_map(|k| 2 * k + 1),
        times in prop_oneof![
            prop::collection::vec(finite(), 0..5).prop_map(TimeSpec::List),
            (finite(), finite(), 0.001..100.0f64).prop_map(|(a, b, s)| TimeSpec::Range(a, b, s)),
        ],
        threads in 0usize..16,
    ) {
        let mut cfg = RunConfig::default();
        let o = Origin::Override(1);
        for (k, v) in [
            ("delta", delta.to_string()),
            ("epsilon", eps.to_string()),
            ("lambda", lambda.to_string()),
            ("alpha_re", are.to_string()),
            ("alpha_im", aim.to_string()),
            ("vartheta_deg", theta.to_string()),
            ("n_max", n.map_or("auto".into(), |n| n.to_string())),
            ("grid_half_extent", half.map_or("auto".into(), |h| h.to_string())),
            ("grid_points", pts.to_string()),
            ("threads", threads.to_string()),
        ] {
            cfg.set(k, &v, o.clone()).unwrap();
        }
        cfg.time = times;
        let text = cfg.serialize();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.serialize(), text);
    }
}
