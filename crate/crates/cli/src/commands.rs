// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use kitten_core::density::{exact_evolve_oracle, hs_distance, oscillator_dm, qubit_dm, von_neumann_entropy};
use kitten_core::fit::*;
use kitten_core::model::cd_coefficients;
use kitten_core::moments::covariance_summary;
use kitten_core::phase_space::*;
use kitten_core::reference::KittenGeometry;
use kitten_core::specfun::charlier_defect;
use kitten_core::{LinearApproxParams64, PhaseGrid64};

use crate::config::RunConfig;
use crate::ensemble;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GridKind {
    Wigner,
    Husimi,
    HusimiLinear,
    Angular,
    AngularHusimi,
}

impl GridKind {
    fn stem(self) -> &'static str {
        match self {
            GridKind::Wigner => "wigner",
            GridKind::Husimi => "husimi",
            GridKind::HusimiLinear => "husimi_linear",
            GridKind::Angular => "angular",
            GridKind::AngularHusimi => "angular_husimi",
        }
    }
}

const PEAK_PROMINENCE: f64 = 0.05;
const ORACLE_TIME: f64 = 50.0;
const ORACLE_MAX_DHS: f64 = 0.05;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    Ok(cfg.out.clone())
}

fn budget(cfg: &RunConfig) -> Budget {
    Budget { max_evaluations: cfg.max_evaluations, restarts: cfg.restarts }
}

/// ωt, S, S_Q, δ_W, Tr ρ² per time, plus d_HS to `reference_time` when set.
pub fn evolve(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = out_dir(cfg)?;
    let mode = cfg.mode()?;
    let grid = cfg.grid()?;
    let reference = cfg.reference_time.map(|t| oscillator_dm(&mode, t)).transpose()?;
    let mut csv = String::from("omega_t,S,S_Q,delta_W,purity");
    if reference.is_some() {
        csv.push_str(",d_HS");
    }
    csv.push('\n');
    for t in cfg.time.times() {
        let rho = oscillator_dm(&mode, t)?;
        let s = von_neumann_entropy(&rho)?;
        let sq = wehrl_entropy(&husimi(&mode, t, &grid)?);
        let neg = negativity(&wigner(&mode, t, &grid)?);
        let _ = write!(csv, "{},{},{},{},{}", num(t), num(s), num(sq), num(neg), num(rho.purity()));
        if let Some(r) = &reference {
            let _ = write!(csv, ",{}", num(hs_distance(&rho, r)?));
        }
        csv.push('\n');
    }
    let path = dir.join("evolve.csv");
    write_file(&path, &csv)?;
    Ok(vec![path])
}

fn dump_profile(profile: &[f64]) -> String {
    let n = profile.len();
    let mut s = format!("# samples {n}\n");
    for (k, v) in profile.iter().enumerate() {
        let th = k as f64 * std::f64::consts::TAU / n as f64;
        let _ = writeln!(s, "{} {}", num(th), num(*v));
    }
    s
}

fn dump_grid(g: &PhaseGrid64) -> String {
    let mut buf = Vec::new();
    g.write_dump(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii dump")
}

fn profile_sidecar(profile: &[f64]) -> String {
    let peaks = count_peaks(profile, PEAK_PROMINENCE);
    let n = profile.len() as f64;
    let mut s = format!("integral={}\npeaks={}\n", num(periodic_integral(profile)), peaks.len());
    for (k, i) in peaks.iter().enumerate() {
        let _ = writeln!(s, "peak_{k}_deg={}", num(*i as f64 * 360.0 / n));
    }
    s
}

/// One dump plus a sidecar of scalar functionals per time.
pub fn grid(cfg: &RunConfig, kind: GridKind) -> Result<Vec<PathBuf>, CliError> {
    let dir = out_dir(cfg)?;
    let mode = cfg.mode()?;
    let lin = match kind {
        GridKind::HusimiLinear => Some(LinearApproxParams64::new(&mode)?),
        _ => None,
    };
    let mut written = Vec::new();
    for t in cfg.time.times() {
        let (dump, side) = match kind {
            GridKind::Wigner => {
                let w = wigner(&mode, t, &cfg.grid()?)?;
                let side = format!(
                    "integral={}\nnegativity={}\nmin={}\nmax={}\n",
                    num(w.integral()),
                    num(negativity(&w)),
                    num(w.min_value()),
                    num(w.max_value())
                );
                (dump_grid(&w), side)
            }
            GridKind::Husimi => {
                let q = husimi(&mode, t, &cfg.grid()?)?;
                (dump_grid(&q), format!("integral={}\nwehrl={}\n", num(q.integral()), num(wehrl_entropy(&q))))
            }
            GridKind::HusimiLinear => {
                let g = cfg.grid()?;
                let ql = husimi_linear(&mode, lin.as_ref().expect("built above"), t, &g)?;
                let q = husimi(&mode, t, &g)?;
                let side = format!("integral={}\ndeviation={}\n", num(ql.integral()), num(q_deviation(&q, &ql)?));
                (dump_grid(&ql), side)
            }
            GridKind::Angular => {
                let p = angular_distribution(&mode, t, cfg.angular_samples, mode.n_max + 40)?;
                (dump_profile(&p), profile_sidecar(&p))
            }
            GridKind::AngularHusimi => {
                let p = angular_husimi(&mode, t, cfg.angular_samples)?;
                (dump_profile(&p), profile_sidecar(&p))
            }
        };
        let stem = format!("{}_t{t}", kind.stem());
        let (a, b) = (dir.join(format!("{stem}.dat")), dir.join(format!("{stem}.txt")));
        write_file(&a, &dump)?;
        write_file(&b, &side)?;
        written.extend([a, b]);
    }
    Ok(written)
}

pub fn moments(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = out_dir(cfg)?;
    let mode = cfg.mode()?;
    let mut csv = String::from("omega_t,mean_q,mean_p,sigma11,sigma12,sigma22,v_min,phi_min_deg\n");
    for t in cfg.time.times() {
        let s = covariance_summary(&mode, t);
        let phi = s.phi_min.map_or_else(String::new, |p| num(p.to_degrees()));
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{phi}",
            num(t),
            num(s.mean_q),
            num(s.mean_p),
            num(s.sigma11),
            num(s.sigma12),
            num(s.sigma22),
            num(s.v_min)
        );
    }
    let path = dir.join("moments.csv");
    write_file(&path, &csv)?;
    Ok(vec![path])
}

/// Fits a p-kitten per time, or scores the ensemble in `fixed` when given.
pub fn reconstruct(cfg: &RunConfig, p: usize, fixed: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let dir = out_dir(cfg)?;
    let mode = cfg.mode()?;
    let geo = KittenGeometry::from_state(&mode.params, &mode.init);
    let given = fixed.map(|path| ensemble::read_kitten(path, &geo)).transpose()?;
    let mut written = Vec::new();
    let mut stalled = None;
    for t in cfg.time.times() {
        let rho = oscillator_dm(&mode, t)?;
        let report = match &given {
            Some(ens) => ensemble_report(&rho, ens, kitten_objective(&rho, ens)?),
            None => {
                let fit = reconstruct_pure_neighborhood(&rho, p, &geo, budget(cfg))?;
                let r = reconstruction_report(&rho, &fit);
                if !fit.converged {
                    stalled.get_or_insert_with(|| dir.join(format!("reconstruct_p{p}_t{t}.txt")));
                }
                r
            }
        };
        let p_used = given.as_ref().map_or(p, |e| e.p);
        let path = dir.join(format!("reconstruct_p{p_used}_t{t}.txt"));
        write_file(&path, report.as_str())?;
        written.push(path);
    }
    match stalled {
        Some(path) => Err(CliError::NotConverged(path)),
        None => Ok(written),
    }
}

pub fn thermal_compare(cfg: &RunConfig, count: usize, fixed: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let dir = out_dir(cfg)?;
    let mode = cfg.mode()?;
    let grid = cfg.grid()?;
    let geo = KittenGeometry::from_state(&mode.params, &mode.init);
    let given = fixed.map(|path| ensemble::read_mixture(path, &geo)).transpose()?;
    let mut written = Vec::new();
    let mut stalled = None;
    for t in cfg.time.times() {
        let target = ThermalTarget::from_mode(&mode, t, &grid)?;
        let (report, n) = match &given {
            Some(mix) => (mixture_report(&target, mix, &compare_mixture(&target, mix)?), mix.count()),
            None => {
                let fit = fit_thermal_mixture(&target, count, &geo, budget(cfg))?;
                if !fit.fit.converged {
                    stalled.get_or_insert_with(|| dir.join(format!("thermal_c{count}_t{t}.txt")));
                }
                (thermal_report(&target, &fit), count)
            }
        };
        let path = dir.join(format!("thermal_c{n}_t{t}.txt"));
        write_file(&path, report.as_str())?;
        written.push(path);
    }
    match stalled {
        Some(path) => Err(CliError::NotConverged(path)),
        None => Ok(written),
    }
}

struct Check {
    name: &'static str,
    outcome: Result<(bool, String), String>,
}

fn below(value: f64, limit: f64) -> (bool, String) {
    (value < limit, format!("{value:.3e} (limit {limit:e})"))
}

fn run_check(name: &'static str, f: impl FnOnce() -> kitten_core::Result<(bool, String)>) -> Check {
    Check { name, outcome: f().map_err(|e| e.to_string()) }
}

/// Identity suite on the configured state at its first time.
pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let t = cfg.time.times().first().copied().unwrap_or(0.0);
    let mut checks = Vec::new();
    let mode = cfg.mode();
    checks.push(Check {
        name: "truncation",
        outcome: match &mode {
            Ok(m) => Ok((true, format!("N = {}, tail {:.3e}", m.n_max, m.tail))),
            Err(e) => Ok((false, e.to_string())),
        },
    });
    if let Ok(mode) = &mode {
        let grid = cfg.grid()?;
        let rho = oscillator_dm(mode, t);
        let w = wigner(mode, t, &grid);
        let q = husimi(mode, t, &grid);
        checks.push(run_check("trace", || Ok(below((rho.clone()?.trace() - 1.0).abs(), 1e-10))));
        checks.push(run_check("entropy", || {
            let so = von_neumann_entropy(&rho.clone()?)?;
            let sq = von_neumann_entropy(&qubit_dm(mode, t))?;
            Ok(below((so - sq).abs(), 1e-6))
        }));
        checks.push(run_check("wigner-norm", || Ok(below((w.clone()?.integral() - 1.0).abs(), 1e-3))));
        checks.push(run_check("husimi-norm", || Ok(below((q.clone()?.integral() - 1.0).abs(), 1e-3))));
        checks.push(run_check("convolution", || {
            let (w, q) = (w.clone()?, q.clone()?);
            let conv = gaussian_convolve(&w, 0.5)?;
            let d = q.values.iter().zip(&conv.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(below(d, 1e-3))
        }));
        checks.push(run_check("angular-norm", || {
            let p = angular_distribution(mode, t, cfg.angular_samples, mode.n_max + 40)?;
            Ok(below((periodic_integral(&p) - 1.0).abs(), 1e-6))
        }));
        checks.push(run_check("cd-unitarity", || {
            let want = 1.0 + mode.init.c.norm_sqr();
            let mut worst = 0.0f64;
            for n in 0..mode.n_max {
                let (c, d) = cd_coefficients(mode, n, t, mode.init.c)?;
                worst = worst.max((c.norm_sqr() + d.norm_sqr() - want).abs());
            }
            Ok(below(worst, 1e-12))
        }));
        checks.push(run_check("charlier", || Ok(below(charlier_defect(20, 0.04), 1e-10))));
        checks.push(run_check("hs-paths", || {
            let rho0 = oscillator_dm(mode, 0.0)?;
            let fock = hs_distance(&rho.clone()?, &rho0)?;
            let grid_path = hs_distance_wigner(&w.clone()?, &wigner(mode, 0.0, &grid)?)?;
            Ok(below((fock - grid_path).abs(), 1e-2))
        }));
        checks.push(run_check("exact-oracle", || {
            let (exact, _) = exact_evolve_oracle(&mode.params, &mode.init, ORACLE_TIME, mode.n_max)?;
            Ok(below(hs_distance(&exact, &oscillator_dm(mode, ORACLE_TIME)?)?, ORACLE_MAX_DHS))
        }));
    }
    let mut failed = 0;
    for c in &checks {
        let (ok, detail) = match &c.outcome {
            Ok((ok, d)) => (*ok, d.clone()),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!("check {} {}: {detail}", c.name, if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
