use std::path::Path;

use serde::Serialize;

use concmeas::eigensolver::{count_zeros, solve_eigenpairs, Eigenpair, Parity};
use concmeas::measures::{
    covering_grid, default_out_grid, rescaled_measure, weak_convergence_report,
    zero_distribution_limit, LimitDensity,
};
use concmeas::orthopoly::{arcsine_convergence_report, build_recurrence, cross_alpha_spread};
use concmeas::potential::infer_beta;
use concmeas::report::{default_panel, ConvergenceReport};
use concmeas::turning::turning_point;
use concmeas::wkb::{remainder_constant, PhaseContext};
use concmeas::Error;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{write_csv, write_json, Cell};

/// Rows kept per `psi_<k>.csv` on each side of the origin.
const PSI_ROWS_PER_SIDE: usize = 2000;

fn k_list(cfg: &RunConfig, default: &[usize]) -> Vec<usize> {
    cfg.experiment
        .k_list
        .clone()
        .unwrap_or_else(|| default.to_vec())
}

fn eigenpairs(cfg: &RunConfig, ks: &[usize]) -> Result<Vec<Eigenpair>, CliError> {
    let k_max = *ks.last().expect("k lists are nonempty");
    Ok(solve_eigenpairs(&cfg.potential, k_max, &cfg.solver)?)
}

fn beta(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.experiment.beta_override {
        Some(b) => Ok(b),
        None => Ok(infer_beta(&cfg.potential)?),
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

pub fn solve(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let ks = k_list(cfg, &[0, 1, 2, 3, 4, 5]);
    let pairs = eigenpairs(cfg, &ks)?;
    write_csv(
        &out.join("eigenvalues.csv"),
        &["k", "lambda", "parity"],
        ks.iter().map(|&k| {
            vec![
                Cell::Int(k),
                Cell::Num(pairs[k].lambda_k),
                Cell::Text(parity_name(pairs[k].parity)),
            ]
        }),
    )?;
    for &k in &ks {
        let p = &pairs[k];
        // grid samples at a fixed stride, mirrored by parity
        let stride = (p.psi.len() - 1).div_ceil(PSI_ROWS_PER_SIDE).max(1);
        let half: Vec<usize> = (0..p.psi.len()).step_by(stride).collect();
        let sign = if p.parity == Parity::Odd { -1.0 } else { 1.0 };
        let left = half
            .iter()
            .rev()
            .filter(|&&i| i > 0)
            .map(|&i| (-(i as f64) * p.h, sign * p.psi[i]));
        let right = half.iter().map(|&i| (i as f64 * p.h, p.psi[i]));
        write_csv(
            &out.join(format!("psi_{k}.csv")),
            &["x", "psi"],
            left.chain(right)
                .map(|(x, y)| vec![Cell::Num(x), Cell::Num(y)]),
        )?;
    }
    Ok(())
}

pub fn measure(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let ks = k_list(cfg, &[10, 20, 40]);
    let pairs = eigenpairs(cfg, &ks)?;
    let limit = LimitDensity::new(beta(cfg)?)?;
    let grid = default_out_grid();
    let mut densities = Vec::with_capacity(ks.len());
    for &k in &ks {
        let p = &pairs[k];
        // x_λ of V alone, even with a perturbation present
        let xl = turning_point(&cfg.potential, p.lambda_k)?;
        let d = match rescaled_measure(p, xl, &grid) {
            // low states spill out of [−1.5, 1.5]
            Err(Error::MassDeficit { .. }) => {
                rescaled_measure(p, xl, &covering_grid(p, xl, 2 * grid.len() + 1))?
            }
            other => other?,
        };
        write_csv(
            &out.join(format!("density_k{k}.csv")),
            &["x", "density"],
            d.grid
                .iter()
                .zip(&d.values)
                .map(|(&x, &v)| vec![Cell::Num(x), Cell::Num(v)]),
        )?;
        densities.push(d);
    }
    write_csv(
        &out.join("limit_density.csv"),
        &["x", "density"],
        grid.iter()
            .map(|&x| vec![Cell::Num(x), Cell::Num(limit.density(x))]),
    )?;
    let report = weak_convergence_report(
        "schrodinger",
        &cfg.potential.name(),
        &ks,
        &densities,
        &limit,
        &default_panel(),
    )?;
    write_json(&out.join("convergence.json"), &report)?;
    Ok(())
}

pub fn zeros(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let ks = k_list(cfg, &[50]);
    if ks[0] == 0 {
        return Err(CliError::config(
            "experiment.k_list",
            "zero counting needs k ≥ 1",
        ));
    }
    let eps = cfg
        .experiment
        .epsilon_list
        .clone()
        .unwrap_or_else(|| vec![0.25, 0.5, 1.0]);
    let pairs = eigenpairs(cfg, &ks)?;
    let beta = beta(cfg)?;
    let mut rows = Vec::new();
    for &k in &ks {
        let p = &pairs[k];
        let xl = turning_point(&cfg.potential, p.lambda_k)?;
        for &e in &eps {
            let n = count_zeros(p, e, xl)?;
            rows.push(vec![
                Cell::Int(k),
                Cell::Num(e),
                Cell::Num(n as f64 / k as f64),
                Cell::Num(zero_distribution_limit(beta, e)?),
            ]);
        }
    }
    write_csv(
        &out.join("zeros.csv"),
        &["k", "epsilon", "ratio", "limit"],
        rows,
    )?;
    Ok(())
}

#[derive(Serialize)]
struct AsymptoticsEntry {
    k: usize,
    lambda: f64,
    x_lambda: f64,
    j_k: f64,
    j_w: f64,
    j_w_admissible: bool,
    kappa_lambda: f64,
    /// `None` when `J_K + J_W ≥ 1`, outside the asymptotic regime.
    c_lambda: Option<f64>,
    sup_residual: f64,
}

#[derive(Serialize)]
struct AsymptoticsReport {
    potential: String,
    zeta_cutoff: f64,
    entries: Vec<AsymptoticsEntry>,
}

pub fn asymptotics(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let ks = k_list(cfg, &[10, 20, 40]);
    let pairs = eigenpairs(cfg, &ks)?;
    let zeta_cutoff = cfg.experiment.zeta_cutoff.unwrap_or(15.0);
    let mut entries = Vec::with_capacity(ks.len());
    for &k in &ks {
        let p = &pairs[k];
        let ctx = PhaseContext::new(&cfg.potential, p.lambda_k)?;
        let j_k = ctx.jk_integral()?;
        let jw = ctx.jw_integral()?;
        let c_lambda = match remainder_constant(jw.value, j_k) {
            Ok(c) => Some(c),
            Err(Error::AsymptoticRegime { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let sup = ctx.remainder_sup(&p.grid(), &p.psi, zeta_cutoff)?;
        entries.push(AsymptoticsEntry {
            k,
            lambda: p.lambda_k,
            x_lambda: ctx.turning.x_lambda,
            j_k,
            j_w: jw.value,
            j_w_admissible: jw.admissible,
            kappa_lambda: ctx.turning.kappa_lambda,
            c_lambda,
            sup_residual: sup.sup,
        });
    }
    let report = AsymptoticsReport {
        potential: cfg.potential.name(),
        zeta_cutoff,
        entries,
    };
    write_json(&out.join("asymptotics.json"), &report)?;
    Ok(())
}

#[derive(Serialize)]
struct Spread {
    f_name: String,
    /// One entry per degree in `n_list`.
    spread: Vec<f64>,
}

#[derive(Serialize)]
struct Drift {
    alpha: f64,
    drift: f64,
}

#[derive(Serialize)]
struct FreudReport {
    alpha_list: Vec<f64>,
    n_list: Vec<usize>,
    orthonormality: Vec<Drift>,
    cross_alpha_spread: Vec<Spread>,
    rows: ConvergenceReport,
}

pub fn orthopoly(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let alphas = cfg
        .experiment
        .alpha_list
        .clone()
        .unwrap_or_else(|| vec![1.0, 2.0, 4.0]);
    let ns = cfg
        .experiment
        .n_list
        .clone()
        .unwrap_or_else(|| vec![10, 20, 40]);
    let n_max = *ns.last().expect("n lists are nonempty");
    let panel = default_panel();
    let report = arcsine_convergence_report(&alphas, &ns, &panel)?;
    let orthonormality = alphas
        .iter()
        .map(|&alpha| {
            Ok(Drift {
                alpha,
                drift: build_recurrence(alpha, n_max)?.drift,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let spreads = panel
        .iter()
        .map(|tf| Spread {
            f_name: tf.name.to_string(),
            spread: (0..ns.len())
                .map(|i| cross_alpha_spread(&report, tf.name, i))
                .collect(),
        })
        .collect();
    let freud = FreudReport {
        alpha_list: alphas,
        n_list: ns,
        orthonormality,
        cross_alpha_spread: spreads,
        rows: report,
    };
    write_json(&out.join("freud.json"), &freud)?;
    Ok(())
}
