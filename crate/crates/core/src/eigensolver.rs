//! Eigenpairs of `−y″ + (V + W) y = λ y` on the line, computed on the half
//! line `[0, x_max]` one parity class at a time: even states carry a
//! Neumann condition at the origin, odd states a Dirichlet one.
//!
//! The operator is discretized by second-order central differences into a
//! symmetric tridiagonal matrix. Eigenvalues come from Sturm-count
//! bisection, so none can be missed or duplicated; three step sizes
//! `2h, h, h/2` give two Richardson extrapolants whose gap certifies the
//! result. Eigenvectors are taken from the finest grid by inverse iteration.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{infer_beta, PotentialSpec};
use crate::quad::GaussLegendre;
use crate::special::gamma;
use crate::turning;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Cells of the middle grid; chosen adaptively when `None`.
    pub points: Option<usize>,
    /// `x_max` satisfies `V(x_max) ≥ xmax_margin·λ_{k_max}`.
    pub xmax_margin: f64,
    /// Required relative gap between the two Richardson extrapolants.
    pub tolerance: f64,
    /// `x_max` also satisfies `∫_{x_λ}^{x_max} √(V−λ) ≥ decay_phase`.
    pub decay_phase: f64,
    /// Target for `h·√(λ_{k_max} − V(0))` on the middle grid.
    pub resolution: f64,
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: None,
            xmax_margin: 4.0,
            tolerance: 1e-8,
            decay_phase: 30.0,
            resolution: 0.01,
            min_points: 4_000,
            max_points: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k % 2 == 0 {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub k: usize,
    /// Richardson-extrapolated eigenvalue.
    pub lambda_k: f64,
    /// Eigenvalue of the finest discrete operator (the one `psi` belongs to).
    pub lambda_grid: f64,
    /// Relative gap between the `(2h, h)` and `(h, h/2)` extrapolants.
    pub richardson_gap: f64,
    pub parity: Parity,
    /// Step of the grid `x_i = i·h`, `i = 0..psi.len()`.
    pub h: f64,
    pub x_max: f64,
    /// Samples on the half line, normalized in `L²(ℝ)`; `psi.last()` is the
    /// Dirichlet value `0` at `x_max`.
    pub psi: Vec<f64>,
}

impl Eigenpair {
    pub fn grid(&self) -> Vec<f64> {
        (0..self.psi.len()).map(|i| i as f64 * self.h).collect()
    }

    /// `‖ψ‖²` on the line by the trapezoid rule on the half grid.
    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self.psi.iter().map(|p| p * p).sum();
        2.0 * self.h * (s - 0.5 * self.psi[0] * self.psi[0])
    }

    /// `⟨ψ_j, ψ_k⟩` on the line; pairs must share a grid.
    pub fn inner(&self, other: &Eigenpair) -> f64 {
        if self.parity != other.parity {
            return 0.0;
        }
        assert_eq!(
            self.psi.len(),
            other.psi.len(),
            "eigenpairs live on different grids"
        );
        let s: f64 = self.psi.iter().zip(&other.psi).map(|(a, b)| a * b).sum();
        2.0 * self.h * (s - 0.5 * self.psi[0] * other.psi[0])
    }

    /// `ψ(x)` on the line by parity and linear interpolation.
    pub fn value_at(&self, x: f64) -> f64 {
        let t = x.abs() / self.h;
        let i = t.floor() as usize;
        if i + 1 >= self.psi.len() {
            return 0.0;
        }
        let f = t - i as f64;
        let y = (1.0 - f) * self.psi[i] + f * self.psi[i + 1];
        if x < 0.0 && self.parity == Parity::Odd {
            -y
        } else {
            y
        }
    }
}

/// `d_i` (diagonal) and `e_i` (sub-diagonal) of a symmetric tridiagonal.
#[derive(Debug, Clone)]
struct Tridiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `mu` (Sturm sequence of `LDLᵀ`).
    fn count_below(&self, mu: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - mu;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.d.len() {
            let denom = if q == 0.0 {
                f64::EPSILON * self.e[i - 1].abs().max(f64::MIN_POSITIVE)
            } else {
                q
            };
            q = self.d[i] - mu - self.e[i - 1] * self.e[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `j`-th eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, j: usize, mut lo: f64, mut hi: f64) -> f64 {
        assert!(
            j < self.d.len(),
            "eigenvalue index {j} beyond dimension {}",
            self.d.len()
        );
        while self.count_below(hi) <= j {
            hi = hi + (hi - lo).max(1.0);
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
                return mid;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Solves `(T − mu) x = b` by Gaussian elimination with partial
    /// pivoting; fill-in lands on a second super-diagonal.
    fn solve_shifted(&self, mu: f64, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut d: Vec<f64> = self.d.iter().map(|v| v - mu).collect();
        let mut du = self.e.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut x = b.to_vec();
        let tiny = f64::EPSILON * self.d.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for i in 0..n - 1 {
            let dl = self.e[i];
            if d[i].abs() >= dl.abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl / d[i];
                d[i + 1] -= fact * du[i];
                x[i + 1] -= fact * x[i];
            } else {
                // swap rows i and i+1
                let fact = d[i] / dl;
                d[i] = dl;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                x.swap(i, i + 1);
                x[i + 1] -= fact * x[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        x
    }

    fn eigenvector(&self, mu: f64) -> Vec<f64> {
        let n = self.d.len();
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_749_895).sin())
            .collect();
        for _ in 0..3 {
            x = self.solve_shifted(mu, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// Diagonal potential values on `x_i = i·h`, `W` averaged over each cell.
fn potential_samples(spec: &PotentialSpec, n: usize, h: f64) -> Vec<f64> {
    let rule = GaussLegendre::new(4);
    (0..n)
        .map(|i| {
            let x = i as f64 * h;
            let mut q = spec.v(x);
            if spec.perturbation.is_some() {
                // W is even, so the cell at the origin folds onto [0, h/2]
                let (a, b) = if i == 0 {
                    (0.0, 0.5 * h)
                } else {
                    (x - 0.5 * h, x + 0.5 * h)
                };
                q += rule.integrate(|s| spec.w(s), a, b) / (b - a);
            }
            q
        })
        .collect()
}

/// The discrete half-line operator with `n` cells on `[0, x_max]`.
fn half_line_operator(q: &[f64], h: f64, parity: Parity) -> Tridiagonal {
    let n = q.len(); // nodes 0..n-1, node n is the Dirichlet end
    let ih2 = 1.0 / (h * h);
    match parity {
        Parity::Even => {
            // ghost node ψ(−h) = ψ(h), symmetrized by scaling node 0 by 1/√2
            let d: Vec<f64> = q.iter().map(|v| 2.0 * ih2 + v).collect();
            let mut e = vec![-ih2; n - 1];
            e[0] = -std::f64::consts::SQRT_2 * ih2;
            Tridiagonal { d, e }
        }
        Parity::Odd => {
            let d: Vec<f64> = q[1..].iter().map(|v| 2.0 * ih2 + v).collect();
            let e = vec![-ih2; d.len() - 1];
            Tridiagonal { d, e }
        }
    }
}

/// The semiclassical estimate `∫₀^{x_λ} √(λ−V) = (k + ½)π/2`, solved for λ.
pub fn bohr_sommerfeld(spec: &PotentialSpec, k: usize) -> Result<f64> {
    let target = (k as f64 + 0.5) * PI / 2.0;
    let action = |lambda: f64| -> Result<f64> {
        let xl = turning::turning_point(spec, lambda)?;
        turning::phase_magnitude(spec, lambda, xl, 0.0)
    };
    let v0 = spec.v(0.0);
    let mut lo = v0;
    let mut hi = v0 + 1.0;
    while action(hi)? < target {
        lo = hi;
        hi = v0 + 2.0 * (hi - v0);
        if !hi.is_finite() {
            return Err(Error::Solver(
                "action never reaches the quantization target".into(),
            ));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if action(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `x` with `V(x) ≥ margin·λ` and `∫_{x_λ}^x √(V−λ) ≥ decay`.
fn domain_end(spec: &PotentialSpec, lambda: f64, margin: f64, decay: f64) -> Result<f64> {
    let xl = turning::turning_point(spec, lambda)?;
    let mut step = 0.05 * xl.max(spec.xi0);
    let mut x = xl;
    let mut phase = 0.0;
    let mut steps = 0;
    while spec.v(x) < margin * lambda || phase < decay {
        let next = x + step;
        phase += turning::phase_between(spec, lambda, x, next)?;
        x = next;
        steps += 1;
        if steps > 10_000 || !x.is_finite() {
            return Err(Error::Solver(
                "x_max search failed: V bounded on the search range".into(),
            ));
        }
        if steps % 20 == 0 {
            step *= 2.0;
        }
    }
    Ok(x)
}

struct ClassSolve {
    lambdas: Vec<[f64; 3]>,
    vectors: Vec<Vec<f64>>,
}

/// Eigenvalues `0..count` of one parity class on the three grids, plus
/// eigenvectors on the finest.
fn solve_class(
    spec: &PotentialSpec,
    parity: Parity,
    count: usize,
    cells: usize,
    x_max: f64,
    upper: f64,
) -> ClassSolve {
    let mut lambdas = vec![[0.0; 3]; count];
    let mut vectors = Vec::with_capacity(count);
    for (g, &n) in [cells / 2, cells, 2 * cells].iter().enumerate() {
        let h = x_max / n as f64;
        let q = potential_samples(spec, n, h);
        let lower = q.iter().copied().fold(f64::INFINITY, f64::min);
        let t = half_line_operator(&q, h, parity);
        let mut lo = lower;
        for j in 0..count {
            let lam = t.eigenvalue(j, lo, upper.max(lo + 1.0));
            lambdas[j][g] = lam;
            lo = lam;
            if g == 2 {
                vectors.push(t.eigenvector(lam));
            }
        }
    }
    ClassSolve { lambdas, vectors }
}

/// Eigenpairs `0..=k_max`.
pub fn solve_eigenpairs(
    spec: &PotentialSpec,
    k_max: usize,
    config: &GridConfig,
) -> Result<Vec<Eigenpair>> {
    let mut estimate = 1.25 * bohr_sommerfeld(spec, k_max)? + 1.0;
    let mut cells = config.points;
    for _attempt in 0..6 {
        let x_max = domain_end(spec, estimate, config.xmax_margin, config.decay_phase)?;
        let span = (estimate - spec.v(0.0)).max(1.0).sqrt();
        let mut n = cells.unwrap_or_else(|| (x_max * span / config.resolution).ceil() as usize);
        n = n.clamp(config.min_points, config.max_points);
        n += n % 2;
        // the coarsest grid must still resolve every requested oscillation
        if n / 2 < 8 * (k_max + 1) {
            return Err(Error::Resolution(format!(
                "{n} cells cannot resolve eigenfunction {k_max}"
            )));
        }
        let even_count = k_max / 2 + 1;
        let odd_count = k_max.div_ceil(2);
        let upper = 2.0 * estimate;
        let even = solve_class(spec, Parity::Even, even_count, n, x_max, upper);
        let odd = solve_class(spec, Parity::Odd, odd_count, n, x_max, upper);

        let mut pairs = Vec::with_capacity(k_max + 1);
        let mut worst_gap = 0.0_f64;
        for k in 0..=k_max {
            let (class, j) = if k % 2 == 0 {
                (&even, k / 2)
            } else {
                (&odd, k / 2)
            };
            let [l2h, lh, lh2] = class.lambdas[j];
            let fine = (4.0 * lh2 - lh) / 3.0;
            let coarse = (4.0 * lh - l2h) / 3.0;
            let gap = (fine - coarse).abs() / fine.abs().max(1.0);
            worst_gap = worst_gap.max(gap);
            let parity = Parity::of(k);
            let h = x_max / (2 * n) as f64;
            let psi = assemble_psi(&class.vectors[j], parity, h);
            pairs.push(Eigenpair {
                k,
                lambda_k: fine,
                lambda_grid: lh2,
                richardson_gap: gap,
                parity,
                h,
                x_max,
                psi,
            });
        }
        for w in pairs.windows(2) {
            if !(w[0].lambda_k < w[1].lambda_k) {
                return Err(Error::Solver(format!(
                    "non-alternating parity: λ_{} = {} ≥ λ_{} = {}",
                    w[0].k, w[0].lambda_k, w[1].k, w[1].lambda_k
                )));
            }
        }
        let top = pairs[k_max].lambda_k;
        if top > estimate {
            estimate = 1.5 * top;
            continue;
        }
        if worst_gap > config.tolerance && n < config.max_points {
            cells = Some((2 * n).min(config.max_points));
            continue;
        }
        if worst_gap > 1e-6 {
            return Err(Error::Solver(format!(
                "Richardson gap {worst_gap:.2e} at the finest admissible grid"
            )));
        }
        return Ok(pairs);
    }
    Err(Error::Solver("grid adaptation did not settle".into()))
}

/// Undoes the symmetrizing scale at the origin, appends the Dirichlet end,
/// normalizes on the line and fixes the sign on the decaying tail.
fn assemble_psi(vector: &[f64], parity: Parity, h: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(vector.len() + 2);
    match parity {
        Parity::Even => {
            psi.push(std::f64::consts::SQRT_2 * vector[0]);
            psi.extend_from_slice(&vector[1..]);
        }
        Parity::Odd => {
            psi.push(0.0);
            psi.extend_from_slice(vector);
        }
    }
    psi.push(0.0);
    let s: f64 = psi.iter().map(|p| p * p).sum::<f64>() - 0.5 * psi[0] * psi[0];
    let scale = 1.0 / (2.0 * h * s).sqrt();
    let peak = psi.iter().fold(0.0_f64, |m, p| m.max(p.abs()));
    let tail = psi
        .iter()
        .rev()
        .find(|p| p.abs() > 1e-6 * peak)
        .copied()
        .unwrap_or(1.0);
    let scale = scale.copysign(tail);
    psi.iter_mut().for_each(|p| *p *= scale);
    psi
}

/// `N_k(εx_λ)`: zeros of `ψ_k` in `[−εx_λ, εx_λ]`, counted as sign changes
/// between grid samples; samples below `10·ε_mach·‖ψ‖_∞` are skipped so that
/// grazing noise cannot fake a zero.
pub fn count_zeros(pair: &Eigenpair, epsilon: f64, x_lambda: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} must lie in (0, 1]")));
    }
    let limit = epsilon * x_lambda;
    let peak = pair.psi.iter().fold(0.0_f64, |m, p| m.max(p.abs()));
    let floor = 10.0 * f64::EPSILON * peak;
    let mut last_sign = 0.0;
    let mut changes = Vec::new();
    for (i, &p) in pair.psi.iter().enumerate().skip(1) {
        if i as f64 * pair.h > limit {
            break;
        }
        if p.abs() <= floor {
            continue;
        }
        let s = p.signum();
        if last_sign != 0.0 && s != last_sign {
            changes.push(i);
        }
        last_sign = s;
    }
    // fewer than three samples per half oscillation cannot resolve zeros
    if changes.windows(2).any(|w| w[1] - w[0] < 3) {
        return Err(Error::Resolution(
            "zeros closer than three grid cells".into(),
        ));
    }
    let odd = usize::from(pair.parity == Parity::Odd);
    Ok(2 * changes.len() + odd)
}

/// `|√π Γ(1+1/β)/Γ(3/2+1/β)·x_λ √λ_k / (πk) − 1|` for each pair; `NaN` at
/// `k = 0`, where the right side vanishes.
pub fn eigenvalue_asymptotics_residual(
    spec: &PotentialSpec,
    pairs: &[Eigenpair],
) -> Result<Vec<f64>> {
    let beta = infer_beta(spec)?;
    if beta.is_infinite() {
        return Err(Error::Unsupported(
            "eigenvalue asymptotics need a finite β".into(),
        ));
    }
    let c = PI.sqrt() * gamma(1.0 + 1.0 / beta) / gamma(1.5 + 1.0 / beta);
    pairs
        .iter()
        .map(|p| {
            if p.k == 0 {
                return Ok(f64::NAN);
            }
            let xl = turning::turning_point(spec, p.lambda_k)?;
            Ok((c * xl * p.lambda_k.sqrt() / (PI * p.k as f64) - 1.0).abs())
        })
        .collect()
}

/// `‖(−D² + Q − λ)ψ‖/λ` in the discrete norm of the pair's own grid.
pub fn discrete_residual(spec: &PotentialSpec, pair: &Eigenpair) -> f64 {
    let n = pair.psi.len() - 1;
    let q = potential_samples(spec, n, pair.h);
    let ih2 = 1.0 / (pair.h * pair.h);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let left = if i == 0 {
            match pair.parity {
                Parity::Even => pair.psi[1],
                Parity::Odd => -pair.psi[1],
            }
        } else {
            pair.psi[i - 1]
        };
        let r = (2.0 * pair.psi[i] - left - pair.psi[i + 1]) * ih2
            + (q[i] - pair.lambda_grid) * pair.psi[i];
        num += r * r;
        den += pair.psi[i] * pair.psi[i];
    }
    (num / den).sqrt() / pair.lambda_grid.abs()
}
