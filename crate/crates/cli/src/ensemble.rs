// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble description files: the `key=value` layout of the reports, angles
//! in degrees and phases of f_k in units of π. Keys the reader does not need
//! are skipped, so a report can be fed back in as an ensemble.

use std::collections::HashMap;
use std::path::Path;

use kitten_core::reference::KittenGeometry;
use kitten_core::{KittenEnsemble64, ThermalKittenMixture64};
use num_complex::Complex;

use crate::error::{CliError, Origin};

struct Fields<'a> {
    path: &'a Path,
    map: HashMap<String, (usize, String)>,
}

impl<'a> Fields<'a> {
    fn read(path: &'a Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut map = HashMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::parse(Origin::File(path.into(), k + 1), format!("expected key=value, got {line:?}"))
            })?;
            if map.insert(key.trim().to_string(), (k + 1, value.trim().to_string())).is_some() {
                return Err(CliError::parse(Origin::File(path.into(), k + 1), format!("duplicate key {}", key.trim())));
            }
        }
        Ok(Self { path, map })
    }

    fn missing(&self, key: &str) -> CliError {
        CliError::parse(Origin::Whole(self.path.into()), format!("missing key {key}"))
    }

    fn num(&self, key: &str) -> Result<f64, CliError> {
        let (line, v) = self.map.get(key).ok_or_else(|| self.missing(key))?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::parse(Origin::File(self.path.into(), *line), format!("{key}: not a number: {v:?}")))
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.map.contains_key(key) {
            self.num(key)
        } else {
            Ok(default)
        }
    }

    fn int(&self, key: &str) -> Result<usize, CliError> {
        let (line, v) = self.map.get(key).ok_or_else(|| self.missing(key))?;
        v.parse()
            .map_err(|_| CliError::parse(Origin::File(self.path.into(), *line), format!("{key}: not an integer: {v:?}")))
    }

    fn weights(&self, n: usize) -> Result<Vec<f64>, CliError> {
        (0..n).map(|k| self.num(&format!("g_{k}"))).collect()
    }
}

pub fn read_kitten(path: &Path, geo: &KittenGeometry<f64>) -> Result<KittenEnsemble64, CliError> {
    let f = Fields::read(path)?;
    let p = f.int("p")?;
    let coeffs = (0..p)
        .map(|k| {
            let m = f.num(&format!("f_{k}_mod"))?;
            let arg = f.num(&format!("f_{k}_arg_pi"))?;
            Ok(Complex::from_polar(m, arg * std::f64::consts::PI))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let ens = KittenEnsemble64::new(
        coeffs,
        f.weights(p)?,
        f.num("tau")?,
        f.num("theta_tilde_deg")?.to_radians(),
        geo.base_alpha,
        geo.base_xi,
    )?;
    Ok(ens)
}

pub fn read_mixture(path: &Path, geo: &KittenGeometry<f64>) -> Result<ThermalKittenMixture64, CliError> {
    let f = Fields::read(path)?;
    let count = f.int("count")?;
    Ok(ThermalKittenMixture64::new(
        f.weights(count)?,
        f.num("theta_tilde_deg")?.to_radians(),
        f.num_or("nbar", 0.0)?,
        geo.base_alpha,
        geo.base_xi,
    )?)
}
