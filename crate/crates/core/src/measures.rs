//! Rescaled eigenfunction measures `dμ_k = x_λ ψ_k(x_λ x)² dx` and their
//! weak limit `μ*`, whose density on `[−1, 1]` is proportional to
//! `(1 − |x|^β)^{−1/2}` (uniform when `β = ∞`).

use std::f64::consts::PI;

use crate::eigensolver::Eigenpair;
use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quad::{self, Tolerance};
use crate::report::{ConvergenceReport, ConvergenceRow, TestFunction, Trend};
use crate::special::gamma;

const LIMIT_TOL: Tolerance = Tolerance::new(1e-13, 1e-12);

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("β = {beta} must be positive")))
    }
}

/// `Ω′_β = ∫_{−1}^1 (1 − |t|^β)^{−1/2} dt = 2√π Γ(1+1/β)/Γ(1/2+1/β)`.
pub fn omega_const(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta.is_infinite() {
        return Ok(2.0);
    }
    let r = 1.0 / beta;
    Ok(2.0 * PI.sqrt() * gamma(1.0 + r) / gamma(0.5 + r))
}

/// `1 − (1 − τ²)^β` without cancellation for small `τ`.
fn one_minus_power(tau: f64, beta: f64) -> f64 {
    -(beta * (-tau * tau).ln_1p()).exp_m1()
}

/// `Ω′_β` by quadrature, through `t = 1 − τ²` at the singular endpoint.
pub fn omega_quadrature(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta.is_infinite() {
        return Ok(2.0);
    }
    let half = quad::adaptive(
        |tau| 2.0 * tau / one_minus_power(tau, beta).sqrt(),
        0.0,
        1.0,
        LIMIT_TOL,
    )?;
    Ok(2.0 * half)
}

/// The limit measure `μ*` for a given `β ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDensity {
    pub beta: f64,
    /// `1/Ω′_β = Γ(1/2+1/β)/(2√π Γ(1+1/β))`.
    pub normalization: f64,
}

impl LimitDensity {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta,
            normalization: 1.0 / omega_const(beta)?,
        })
    }

    /// Pointwise density; diverges at `±1` for finite `β`, zero outside.
    pub fn density(&self, x: f64) -> f64 {
        let t = x.abs();
        if t > 1.0 {
            return 0.0;
        }
        if self.beta.is_infinite() {
            return self.normalization;
        }
        self.normalization / (1.0 - t.powf(self.beta)).sqrt()
    }

    /// `∫ f dμ*`, with `x = ±(1 − τ²)` removing the edge singularities.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let n = self.normalization;
        if self.beta.is_infinite() {
            return Ok(n * quad::adaptive_piecewise(&f, &[-1.0, 0.0, 1.0], LIMIT_TOL)?);
        }
        let beta = self.beta;
        let g = |tau: f64| {
            let x = 1.0 - tau * tau;
            2.0 * tau * (f(x) + f(-x)) / one_minus_power(tau, beta).sqrt()
        };
        Ok(n * quad::adaptive(g, 0.0, 1.0, LIMIT_TOL)?)
    }
}

/// `μ*` density at `x`.
pub fn limit_density(beta: f64, x: f64) -> Result<f64> {
    Ok(LimitDensity::new(beta)?.density(x))
}

/// `lim N_k(εx_λ)/k = Γ(3/2+1/β)/(√π Γ(1+1/β)) ∫_{−ε}^{ε} (1 − |x|^β)^{1/2} dx`.
pub fn zero_distribution_limit(beta: f64, epsilon: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} must lie in (0, 1]")));
    }
    if beta.is_infinite() {
        return Ok(epsilon);
    }
    let r = 1.0 / beta;
    let c = gamma(1.5 + r) / (PI.sqrt() * gamma(1.0 + r));
    let half = quad::adaptive(
        |x: f64| (1.0 - x.powf(beta)).max(0.0).sqrt(),
        0.0,
        epsilon,
        LIMIT_TOL,
    )?;
    Ok(2.0 * c * half)
}

/// A nonnegative density sampled on an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOnGrid {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub mass: f64,
}

impl DensityOnGrid {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Self {
        let mut d = Self {
            grid,
            values,
            mass: 0.0,
        };
        d.mass = d.integrate(|_| 1.0);
        d
    }

    /// `∫ f·density` by the trapezoid rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (f(x[0]) * v[0] + f(x[1]) * v[1]))
            .sum()
    }

    /// Mass carried by `|x| > r`.
    pub fn mass_outside(&self, r: f64) -> f64 {
        self.integrate(|x| if x.abs() > r { 1.0 } else { 0.0 })
    }
}

/// Uniform grid of `points` nodes on `[−half_width, half_width]`.
pub fn uniform_grid(half_width: f64, points: usize) -> Vec<f64> {
    // mirrored exactly, so even densities sample to palindromes
    let m = (points - 1) as f64;
    (0..points)
        .map(|i| half_width * (2.0 * i as f64 - m) / m)
        .collect()
}

/// The default output grid: 4096 nodes on `[−1.5, 1.5]`.
pub fn default_out_grid() -> Vec<f64> {
    uniform_grid(1.5, 4096)
}

/// A grid reaching the end of the eigenfunction's computational domain.
/// Low states spread far beyond `[−1.5, 1.5]` after rescaling (the ground
/// state of `x²` keeps 3% of its mass outside), so they need this one.
pub fn covering_grid(pair: &Eigenpair, x_lambda: f64, points: usize) -> Vec<f64> {
    uniform_grid((pair.x_max / x_lambda).max(1.5), points)
}

const MASS_TOL: f64 = 1e-4;

/// `φ_k(x) = x_λ ψ_k(x_λ x)²` on `out_grid`, resampling `ψ_k²` with a
/// monotone cubic so the density stays nonnegative. `x_λ` is the turning
/// point of `V` alone, even when a perturbation is present.
pub fn rescaled_measure(
    pair: &Eigenpair,
    x_lambda: f64,
    out_grid: &[f64],
) -> Result<DensityOnGrid> {
    let sq: Vec<f64> = pair.psi.iter().map(|p| p * p).collect();
    let interp = Pchip::new(pair.grid(), sq);
    let values = out_grid
        .iter()
        .map(|&x| {
            let s = (x * x_lambda).abs();
            if s >= pair.x_max {
                0.0
            } else {
                x_lambda * interp.eval(s)
            }
        })
        .collect();
    let d = DensityOnGrid::new(out_grid.to_vec(), values);
    if (d.mass - 1.0).abs() > MASS_TOL {
        return Err(Error::MassDeficit { mass: d.mass });
    }
    Ok(d)
}

/// Errors `|∫f dμ_k − ∫f dμ*|` for every test function along the `k` list.
pub fn weak_convergence_report(
    family: &str,
    potential: &str,
    k_list: &[usize],
    densities: &[DensityOnGrid],
    limit: &LimitDensity,
    panel: &[TestFunction],
) -> Result<ConvergenceReport> {
    assert_eq!(k_list.len(), densities.len(), "one density per k");
    let mut rows = Vec::with_capacity(panel.len());
    for tf in panel {
        let target = limit.integrate(tf.f)?;
        let errors: Vec<f64> = densities
            .iter()
            .map(|d| (d.integrate(tf.f) - target).abs())
            .collect();
        rows.push(ConvergenceRow {
            family: family.to_string(),
            potential: potential.to_string(),
            beta: limit.beta,
            k_list: k_list.to_vec(),
            f_name: tf.name.to_string(),
            trend: Trend::of(&errors),
            errors,
        });
    }
    Ok(ConvergenceReport { rows })
}
