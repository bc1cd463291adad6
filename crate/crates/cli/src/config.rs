//! Flat `key = value` configuration with dotted section names:
//!
//! ```text
//! # comments and blank lines are ignored
//! potential.kind = monomial
//! potential.beta = 4
//! solver.tolerance = 1e-8
//! experiment.k_list = 10, 20, 40
//! ```
//!
//! Unknown or repeated keys are rejected so that typos cannot silently fall
//! back to defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;

use concmeas::eigensolver::GridConfig;
use concmeas::potential::{PerturbationSpec, PotentialSpec};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "potential.kind",
    "potential.beta",
    "potential.alpha",
    "potential.gamma",
    "potential.xi0",
    "perturbation.kind",
    "perturbation.radius",
    "perturbation.height",
    "perturbation.gamma",
    "perturbation.bound",
    "solver.points",
    "solver.tolerance",
    "solver.xmax_margin",
    "solver.decay_phase",
    "solver.resolution",
    "solver.min_points",
    "solver.max_points",
    "experiment.command",
    "experiment.k_list",
    "experiment.n_list",
    "experiment.alpha_list",
    "experiment.epsilon_list",
    "experiment.beta_override",
    "experiment.zeta_cutoff",
    "experiment.output_dir",
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub solver: GridConfig,
    pub experiment: Experiment,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Experiment {
    pub command: Option<String>,
    pub k_list: Option<Vec<usize>>,
    pub n_list: Option<Vec<usize>>,
    pub alpha_list: Option<Vec<f64>>,
    pub epsilon_list: Option<Vec<f64>>,
    pub beta_override: Option<f64>,
    pub zeta_cutoff: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!("line {}", lineno + 1), "expected `key = value`")
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::config(key, "unknown key"));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::config(key, "given more than once"));
        }
    }
    Ok(map)
}

fn num(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    map.get(key)
        .map(|v| match v.as_str() {
            "inf" | "infinity" => Ok(f64::INFINITY),
            s => s
                .parse::<f64>()
                .map_err(|_| CliError::config(key, format!("`{s}` is not a number"))),
        })
        .transpose()
}

fn int(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>, CliError> {
    map.get(key)
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| CliError::config(key, format!("`{v}` is not a nonnegative integer")))
        })
        .transpose()
}

fn required(map: &BTreeMap<String, String>, key: &str) -> Result<f64, CliError> {
    num(map, key)?.ok_or_else(|| CliError::config(key, "required for this kind"))
}

/// `1, 2, 3`, optionally bracketed, or an inclusive range `a..b`.
fn int_list(map: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<usize>>, CliError> {
    let Some(raw) = map.get(key) else {
        return Ok(None);
    };
    let body = raw.trim().trim_start_matches('[').trim_end_matches(']');
    let bad = |s: &str| CliError::config(key, format!("`{s}` is not a nonnegative integer"));
    let list: Vec<usize> = if let Some((a, b)) = body.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad(a))?;
        let b: usize = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad(b))?;
        (a..=b).collect()
    } else {
        body.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad(s)))
            .collect::<Result<_, _>>()?
    };
    if list.is_empty() || list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config(
            key,
            "must be a nonempty, strictly increasing list",
        ));
    }
    Ok(Some(list))
}

fn num_list(map: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<f64>>, CliError> {
    let Some(raw) = map.get(key) else {
        return Ok(None);
    };
    let body = raw.trim().trim_start_matches('[').trim_end_matches(']');
    let list: Vec<f64> = body
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::config(key, format!("`{}` is not a number", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(CliError::config(key, "must not be empty"));
    }
    Ok(Some(list))
}

fn potential(map: &BTreeMap<String, String>) -> Result<PotentialSpec, CliError> {
    let kind = map
        .get("potential.kind")
        .map(String::as_str)
        .unwrap_or("harmonic");
    let mut spec = match kind {
        "harmonic" => PotentialSpec::harmonic(),
        "monomial" => PotentialSpec::monomial(required(map, "potential.beta")?)?,
        "monomial_log" => PotentialSpec::monomial_log(required(map, "potential.alpha")?)?,
        "exponential" => PotentialSpec::exponential(required(map, "potential.gamma")?)?,
        other => {
            return Err(CliError::config(
                "potential.kind",
                format!("`{other}`; expected harmonic, monomial, monomial_log or exponential"),
            ))
        }
    };
    if let Some(xi0) = num(map, "potential.xi0")? {
        spec = spec.with_xi0(xi0)?;
    }
    let w = match map
        .get("perturbation.kind")
        .map(String::as_str)
        .unwrap_or("zero")
    {
        "zero" => PerturbationSpec::zero(),
        "indicator" => PerturbationSpec::indicator(
            required(map, "perturbation.radius")?,
            required(map, "perturbation.height")?,
        )?,
        "bump" => PerturbationSpec::bump(
            required(map, "perturbation.radius")?,
            required(map, "perturbation.height")?,
        )?,
        "power" => PerturbationSpec::power(
            required(map, "perturbation.gamma")?,
            required(map, "perturbation.bound")?,
        )?,
        other => {
            return Err(CliError::config(
                "perturbation.kind",
                format!("`{other}`; expected zero, indicator, bump or power"),
            ))
        }
    };
    Ok(spec.with_perturbation(w))
}

fn solver(map: &BTreeMap<String, String>) -> Result<GridConfig, CliError> {
    let mut g = GridConfig {
        points: int(map, "solver.points")?,
        ..GridConfig::default()
    };
    let positive = |key: &str, v: Option<f64>, into: &mut f64| -> Result<(), CliError> {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::config(
                    key.to_string(),
                    "must be positive and finite",
                ));
            }
            *into = v;
        }
        Ok(())
    };
    positive(
        "solver.tolerance",
        num(map, "solver.tolerance")?,
        &mut g.tolerance,
    )?;
    positive(
        "solver.xmax_margin",
        num(map, "solver.xmax_margin")?,
        &mut g.xmax_margin,
    )?;
    positive(
        "solver.decay_phase",
        num(map, "solver.decay_phase")?,
        &mut g.decay_phase,
    )?;
    positive(
        "solver.resolution",
        num(map, "solver.resolution")?,
        &mut g.resolution,
    )?;
    if let Some(n) = int(map, "solver.min_points")? {
        g.min_points = n;
    }
    if let Some(n) = int(map, "solver.max_points")? {
        g.max_points = n;
    }
    if g.min_points > g.max_points {
        return Err(CliError::config(
            "solver.min_points",
            "exceeds solver.max_points",
        ));
    }
    Ok(g)
}

fn experiment(map: &BTreeMap<String, String>) -> Result<Experiment, CliError> {
    let epsilon_list = num_list(map, "experiment.epsilon_list")?;
    if let Some(eps) = &epsilon_list {
        if eps.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(CliError::config(
                "experiment.epsilon_list",
                "entries must lie in (0, 1]",
            ));
        }
    }
    let alpha_list = num_list(map, "experiment.alpha_list")?;
    if let Some(alphas) = &alpha_list {
        if alphas.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(CliError::config(
                "experiment.alpha_list",
                "entries must be positive and finite",
            ));
        }
    }
    let beta_override = num(map, "experiment.beta_override")?;
    if beta_override.is_some_and(|b| !(b > 0.0)) {
        return Err(CliError::config(
            "experiment.beta_override",
            "must be positive (inf allowed)",
        ));
    }
    let zeta_cutoff = num(map, "experiment.zeta_cutoff")?;
    if zeta_cutoff.is_some_and(|z| !(z > 0.0 && z.is_finite())) {
        return Err(CliError::config(
            "experiment.zeta_cutoff",
            "must be positive and finite",
        ));
    }
    Ok(Experiment {
        command: map.get("experiment.command").cloned(),
        k_list: int_list(map, "experiment.k_list")?,
        n_list: int_list(map, "experiment.n_list")?,
        alpha_list,
        epsilon_list,
        beta_override,
        zeta_cutoff,
        output_dir: map.get("experiment.output_dir").map(PathBuf::from),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let map = parse_pairs(text)?;
        Ok(Self {
            potential: potential(&map)?,
            solver: solver(&map)?,
            experiment: experiment(&map)?,
        })
    }
}
