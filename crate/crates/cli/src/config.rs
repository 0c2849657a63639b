// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key=value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; missing
//! keys take the defaults of [`RunConfig::default`]. Serialization writes every
//! key in a fixed order so that parse → serialize is a fixed point.

use std::fmt::Write as _;
use std::path::PathBuf;

use kitten_core::grid::PhaseGrid;
use kitten_core::{InitialState64, ModeData64, PhaseGrid64, SystemParams64};
use num_complex::Complex;

use crate::error::{CliError, Origin};

#[derive(Debug, Clone, PartialEq)]
pub enum TimeSpec {
    List(Vec<f64>),
    /// start, stop (inclusive), step
    Range(f64, f64, f64),
}

impl TimeSpec {
    pub fn times(&self) -> Vec<f64> {
        match self {
            TimeSpec::List(v) => v.clone(),
            TimeSpec::Range(start, stop, step) => {
                if stop < start {
                    return Vec::new();
                }
                // a little slack so 0:5000:25 includes 5000
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|k| start + k as f64 * step).collect()
            }
        }
    }

    fn parse(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range must be start:stop:step, got {s:?}"));
            }
            let v = parts.iter().map(|p| parse_f64(p)).collect::<Result<Vec<_>, _>>()?;
            if !(v[2] > 0.0) {
                return Err(format!("range step must be positive, got {}", v[2]));
            }
            return Ok(TimeSpec::Range(v[0], v[1], v[2]));
        }
        if s.trim().is_empty() {
            return Ok(TimeSpec::List(Vec::new()));
        }
        Ok(TimeSpec::List(s.split(',').map(parse_f64).collect::<Result<_, _>>()?))
    }

    fn render(&self) -> String {
        match self {
            TimeSpec::List(v) => v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","),
            TimeSpec::Range(a, b, s) => format!("{a}:{b}:{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub delta: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub lambda: f64,
    pub alpha: Complex<f64>,
    pub r: f64,
    pub vartheta_deg: f64,
    pub c: Complex<f64>,
    pub n_max: Option<usize>,
    pub grid_half_extent: Option<f64>,
    pub grid_points: usize,
    pub time: TimeSpec,
    pub reference_time: Option<f64>,
    pub angular_samples: usize,
    pub max_evaluations: usize,
    pub restarts: usize,
    pub threads: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            delta: 0.15,
            epsilon: 0.0,
            omega: 1.0,
            lambda: 0.05,
            alpha: Complex::new(3.0, 0.0),
            r: 0.7,
            vartheta_deg: 0.0,
            c: Complex::new(0.0, 1.0),
            n_max: None,
            grid_half_extent: None,
            grid_points: 301,
            time: TimeSpec::List(vec![2205.0]),
            reference_time: None,
            angular_samples: 3600,
            max_evaluations: 4000,
            restarts: 12,
            threads: 0,
            out: PathBuf::from("."),
        }
    }
}

const KEYS: [&str; 20] = [
    "delta",
    "epsilon",
    "omega",
    "lambda",
    "alpha_re",
    "alpha_im",
    "r",
    "vartheta_deg",
    "c_re",
    "c_im",
    "n_max",
    "grid_half_extent",
    "grid_points",
    "time",
    "reference_time",
    "angular_samples",
    "max_evaluations",
    "restarts",
    "threads",
    "out",
];

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {:?}", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("not finite: {v}"));
    }
    Ok(v)
}

fn nonneg(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v < 0.0 {
        return Err(format!("must be nonnegative, got {v}"));
    }
    Ok(v)
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if !(v > 0.0) {
        return Err(format!("must be positive, got {v}"));
    }
    Ok(v)
}

fn count(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("not a nonnegative integer: {:?}", s.trim()))
}

fn auto<V>(s: &str, f: impl Fn(&str) -> Result<V, String>) -> Result<Option<V>, String> {
    if s.trim() == "auto" {
        Ok(None)
    } else {
        f(s).map(Some)
    }
}

fn auto_str<V: ToString>(v: &Option<V>) -> String {
    v.as_ref().map_or_else(|| "auto".to_string(), V::to_string)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = Origin::Line(k + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::parse(origin.clone(), format!("expected key=value, got {line:?}")))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::parse(origin, format!("duplicate key {key}")));
            }
            cfg.set(key, value.trim(), origin)?;
            if let Some(k) = KEYS.iter().find(|k| **k == key) {
                seen.push(k);
            }
        }
        Ok(cfg)
    }

    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), CliError> {
        let fail = |msg: String| CliError::parse(origin.clone(), format!("{key}: {msg}"));
        let res: Result<(), String> = (|| {
            match key {
                "delta" => self.delta = nonneg(value)?,
                "epsilon" => self.epsilon = parse_f64(value)?,
                "omega" => self.omega = positive(value)?,
                // λ only enters through λ² in the displacement, so a sign would be silently lost
                "lambda" => self.lambda = nonneg(value)?,
                "alpha_re" => self.alpha.re = parse_f64(value)?,
                "alpha_im" => self.alpha.im = parse_f64(value)?,
                "r" => self.r = nonneg(value)?,
                "vartheta_deg" => self.vartheta_deg = parse_f64(value)?,
                "c_re" => self.c.re = parse_f64(value)?,
                "c_im" => self.c.im = parse_f64(value)?,
                "n_max" => {
                    self.n_max = auto(value, count)?;
                    if self.n_max == Some(0) {
                        return Err("must be positive".into());
                    }
                }
                "grid_half_extent" => self.grid_half_extent = auto(value, positive)?,
                "grid_points" => {
                    let n = count(value)?;
                    if n < 3 || n % 2 == 0 {
                        return Err(format!("must be odd and at least 3, got {n}"));
                    }
                    self.grid_points = n;
                }
                "time" => self.time = TimeSpec::parse(value)?,
                "reference_time" => {
                    self.reference_time = if value == "none" { None } else { Some(parse_f64(value)?) }
                }
                "angular_samples" => {
                    self.angular_samples = count(value)?;
                    if self.angular_samples < 3 {
                        return Err("need at least 3 samples".into());
                    }
                }
                "max_evaluations" => self.max_evaluations = count(value)?,
                "restarts" => self.restarts = count(value)?.max(1),
                "threads" => self.threads = count(value)?,
                "out" => self.out = PathBuf::from(value),
                _ => return Err("unknown key".into()),
            }
            Ok(())
        })();
        res.map_err(fail)
    }

    /// Canonical form: every key, fixed order, shortest round-trip numbers.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        put("delta", self.delta.to_string());
        put("epsilon", self.epsilon.to_string());
        put("omega", self.omega.to_string());
        put("lambda", self.lambda.to_string());
        put("alpha_re", self.alpha.re.to_string());
        put("alpha_im", self.alpha.im.to_string());
        put("r", self.r.to_string());
        put("vartheta_deg", self.vartheta_deg.to_string());
        put("c_re", self.c.re.to_string());
        put("c_im", self.c.im.to_string());
        put("n_max", auto_str(&self.n_max));
        put("grid_half_extent", auto_str(&self.grid_half_extent));
        put("grid_points", self.grid_points.to_string());
        put("time", self.time.render());
        put("reference_time", self.reference_time.map_or_else(|| "none".into(), |t| t.to_string()));
        put("angular_samples", self.angular_samples.to_string());
        put("max_evaluations", self.max_evaluations.to_string());
        put("restarts", self.restarts.to_string());
        put("threads", self.threads.to_string());
        put("out", self.out.display().to_string());
        s
    }

    pub fn system(&self) -> SystemParams64 {
        SystemParams64::new(self.delta, self.epsilon, self.omega, self.lambda).expect("validated on parse")
    }

    pub fn initial_state(&self) -> InitialState64 {
        InitialState64::new(self.alpha, self.r, self.vartheta_deg.to_radians(), self.c).expect("validated on parse")
    }

    pub fn mode(&self) -> kitten_core::Result<ModeData64> {
        match self.n_max {
            Some(n) => ModeData64::with_n_max(self.system(), self.initial_state(), n),
            None => ModeData64::new(self.system(), self.initial_state()),
        }
    }

    pub fn grid(&self) -> kitten_core::Result<PhaseGrid64> {
        let def = PhaseGrid::default_for(&self.system(), &self.initial_state());
        PhaseGrid64::new(def.center, self.grid_half_extent.unwrap_or(def.half_extent), self.grid_points)
    }
}
