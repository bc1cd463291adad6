//! Orthonormal polynomials for the Freud weights `w_α(x) = exp(−κ_α|x|^α)`.
//!
//! With `κ_α = Γ(α/2)Γ(1/2)/Γ((α+1)/2)` the rescaled densities
//! `n^{1/α} p_n(n^{1/α}x)² w_α(n^{1/α}x)` converge weakly to the arcsine law
//! for every `α`, in contrast to Schrödinger eigenfunctions whose limit
//! depends on the growth of the potential.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measures::LimitDensity;
use crate::quad::{self, GaussLegendre, Tolerance};
use crate::report::{ConvergenceReport, ConvergenceRow, TestFunction, Trend};
use crate::special::{gamma, ln_gamma};

/// Largest degree handled in double precision.
pub const N_MAX_LIMIT: usize = 60;
/// Gram-matrix tolerance for `⟨p_n, p_m⟩ = δ_{nm}`.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;

// where the weight drops below 1e-30
const WEIGHT_CUTOFF: f64 = 69.077_552_789_821_37;

pub fn kappa_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((ln_gamma(alpha / 2.0) + 0.5 * PI.ln() - ln_gamma((alpha + 1.0) / 2.0)).exp())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "α = {alpha} must be positive and finite"
        )))
    }
}

/// A half-line quadrature rule; integrals over ℝ of even functions are
/// twice the sum.
#[derive(Debug, Clone)]
struct HalfRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HalfRule {
    fn new(order: usize, length: f64, panels: usize) -> Self {
        let (nodes, weights) = GaussLegendre::new(order).composite_nodes(0.0, length, panels);
        Self { nodes, weights }
    }
}

/// The orthonormal three-term recurrence
/// `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n−1}` for `w_α`.
#[derive(Debug, Clone)]
pub struct FreudSystem {
    pub alpha: f64,
    pub kappa_alpha: f64,
    /// `a[n]` for `1 ≤ n ≤ n_max`; `a[0] = 0`.
    pub a: Vec<f64>,
    /// Identically zero: the weight is even.
    pub b: Vec<f64>,
    pub n_max: usize,
    /// `∫ w_α`, so `p_0 = μ₀^{−1/2}`.
    pub mu0: f64,
    /// The inner product is truncated to `[−length, length]`.
    pub length: f64,
    /// `max |⟨p_n, p_m⟩ − δ_{nm}|` measured on an independent finer rule.
    pub drift: f64,
    check: HalfRule,
}

impl FreudSystem {
    pub fn weight(&self, x: f64) -> f64 {
        (-self.kappa_alpha * x.abs().powf(self.alpha)).exp()
    }

    /// `p_0(x)√w(x), …, p_n(x)√w(x)` at a single point.
    fn scaled_values(&self, n: usize, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.weight(x).sqrt() / self.mu0.sqrt());
        if n >= 1 {
            out.push(x * out[0] / self.a[1]);
        }
        for k in 1..n {
            let next = (x * out[k] - self.a[k] * out[k - 1]) / self.a[k + 1];
            out.push(next);
        }
        out
    }

    /// `ln|p_n(x)|` by the recurrence with running rescaling, so it
    /// neither overflows nor underflows far out in the tail.
    fn ln_abs_p(&self, n: usize, x: f64) -> f64 {
        let mut log_scale = -0.5 * self.mu0.ln();
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..n {
            let next = (x * cur - self.a[k] * prev) / self.a[k + 1];
            prev = cur;
            cur = next;
            let m = cur.abs().max(prev.abs());
            if m > 1e100 || (m < 1e-100 && m > 0.0) {
                log_scale += m.ln();
                prev /= m;
                cur /= m;
            }
        }
        cur.abs().ln() + log_scale
    }

    /// `n^{1/α} p_n(n^{1/α}x)² w_α(n^{1/α}x)`. Exactly even in `x`; far
    /// out the weight wins and the value underflows to zero.
    pub fn rescaled_density(&self, n: usize, x: f64) -> f64 {
        assert!(n <= self.n_max, "degree {n} beyond n_max = {}", self.n_max);
        let s = scale(n, self.alpha);
        let y = s * x.abs();
        let ln_w = -self.kappa_alpha * y.powf(self.alpha);
        s * (2.0 * self.ln_abs_p(n, y) + ln_w).exp()
    }

    /// `∫ f dν_n` for the rescaled measure `ν_n`, using the verification
    /// rule in the unscaled variable.
    pub fn integrate(&self, n: usize, f: impl Fn(f64) -> f64) -> f64 {
        assert!(n <= self.n_max, "degree {n} beyond n_max = {}", self.n_max);
        let s = scale(n, self.alpha);
        self.check
            .nodes
            .iter()
            .zip(&self.check.weights)
            .map(|(&y, &c)| {
                let q = self.scaled_values(n, y)[n];
                c * q * q * (f(y / s) + f(-y / s))
            })
            .sum()
    }

    /// Mean of the rescaled density over `[x − width/2, x + width/2]`;
    /// the limit is weak, so pointwise comparisons need this smoothing.
    pub fn window_average(&self, n: usize, x: f64, width: f64) -> f64 {
        let panels = 16;
        quad::gl20().composite(
            |t| self.rescaled_density(n, t),
            x - width / 2.0,
            x + width / 2.0,
            panels,
        ) / width
    }

    /// `max n^{1/α}p_n²w_α·√|1 − x²|` over a uniform grid on `[−1.5, 1.5]`.
    pub fn weighted_sup(&self, n: usize, points: usize) -> f64 {
        (0..points)
            .map(|i| -1.5 + 3.0 * i as f64 / (points - 1) as f64)
            .map(|x| self.rescaled_density(n, x) * (1.0 - x * x).abs().sqrt())
            .fold(0.0, f64::max)
    }
}

fn scale(n: usize, alpha: f64) -> f64 {
    (n.max(1) as f64).powf(1.0 / alpha)
}

/// Discretized Stieltjes procedure.
///
/// The inner product is a composite Gauss–Legendre rule on
/// `[−L, L]` with `L = max(2 n_max^{1/α}, w_α^{−1}(10⁻³⁰))`: the scaled
/// polynomials live on `|x| ≲ n^{1/α}` and decay exponentially past it.
/// Orthonormality is then re-measured on a finer, independent rule.
pub fn build_recurrence(alpha: f64, n_max: usize) -> Result<FreudSystem> {
    let kappa = kappa_alpha(alpha)?;
    if n_max > N_MAX_LIMIT {
        return Err(Error::Domain(format!(
            "n_max = {n_max} exceeds {N_MAX_LIMIT}"
        )));
    }
    let length = (2.0 * scale(n_max, alpha)).max((WEIGHT_CUTOFF / kappa).powf(1.0 / alpha));
    let build = HalfRule::new(20, length, 100);
    let check = HalfRule::new(31, length, 150);

    // q holds p_n(x_i)·√(w_i c_i); every q_n has definite parity, so the
    // full-line inner product of two of them is twice the half-line sum
    let sqrt_w: Vec<f64> = build
        .nodes
        .iter()
        .zip(&build.weights)
        .map(|(&x, &c)| (2.0 * c * (-kappa * x.powf(alpha)).exp()).sqrt())
        .collect();
    let mu0: f64 = sqrt_w.iter().map(|s| s * s).sum();
    let mut a = vec![0.0; n_max + 1];
    let mut prev = vec![0.0; sqrt_w.len()];
    let mut cur: Vec<f64> = sqrt_w.iter().map(|s| s / mu0.sqrt()).collect();
    for n in 0..n_max {
        let mut r: Vec<f64> = build
            .nodes
            .iter()
            .zip(cur.iter().zip(&prev))
            .map(|(&x, (&c, &p))| x * c - a[n] * p)
            .collect();
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Precision {
                n: n + 1,
                drift: f64::NAN,
            });
        }
        a[n + 1] = norm;
        r.iter_mut().for_each(|v| *v /= norm);
        prev = std::mem::replace(&mut cur, r);
    }

    let mut sys = FreudSystem {
        alpha,
        kappa_alpha: kappa,
        a,
        b: vec![0.0; n_max + 1],
        n_max,
        mu0,
        length,
        drift: 0.0,
        check,
    };
    verify_orthonormality(&mut sys)?;
    Ok(sys)
}

fn verify_orthonormality(sys: &mut FreudSystem) -> Result<()> {
    let n_max = sys.n_max;
    let mut gram = vec![vec![0.0; n_max + 1]; n_max + 1];
    for (&y, &c) in sys.check.nodes.iter().zip(&sys.check.weights) {
        let q = sys.scaled_values(n_max, y);
        for n in 0..=n_max {
            // odd n + m vanish by parity
            for m in (n % 2..=n).step_by(2) {
                gram[n][m] += 2.0 * c * q[n] * q[m];
            }
        }
    }
    let mut drift = 0.0_f64;
    for (n, row) in gram.iter().enumerate() {
        let row_drift = row[..=n]
            .iter()
            .enumerate()
            .map(|(m, g)| (g - if m == n { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        if !(row_drift <= ORTHONORMALITY_TOL) {
            return Err(Error::Precision {
                n,
                drift: row_drift,
            });
        }
        drift = drift.max(row_drift);
    }
    sys.drift = drift;
    Ok(())
}

/// Errors of the rescaled polynomial measures against the arcsine law,
/// one row per `(α, f)`.
pub fn arcsine_convergence_report(
    alphas: &[f64],
    n_list: &[usize],
    panel: &[TestFunction],
) -> Result<ConvergenceReport> {
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let arcsine = LimitDensity::new(2.0)?;
    let targets: Vec<f64> = panel
        .iter()
        .map(|tf| arcsine.integrate(tf.f))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &alpha in alphas {
        let sys = build_recurrence(alpha, n_max)?;
        for (tf, target) in panel.iter().zip(&targets) {
            let errors: Vec<f64> = n_list
                .iter()
                .map(|&n| (sys.integrate(n, tf.f) - target).abs())
                .collect();
            rows.push(ConvergenceRow {
                family: "freud".into(),
                potential: format!("freud(alpha={alpha})"),
                beta: 2.0,
                k_list: n_list.to_vec(),
                f_name: tf.name.to_string(),
                trend: Trend::of(&errors),
                errors,
            });
        }
    }
    Ok(ConvergenceReport { rows })
}

/// `max − min` of the errors for `f_name` at position `i` of the degree
/// list, across all `α` in the report.
pub fn cross_alpha_spread(report: &ConvergenceReport, f_name: &str, i: usize) -> f64 {
    let errs: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| r.f_name == f_name)
        .map(|r| r.errors[i])
        .collect();
    let max = errs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = errs.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// `ψ_α(x) = (α/π) x^{α−1} ∫_1^{1/x} u^{α−1}(u² − 1)^{−1/2} du` on `(0, 1)`,
/// integrated in `u = cosh τ` so the endpoint singularity disappears.
pub fn phase_function_psi(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("x = {x} must lie in (0, 1)")));
    }
    let upper = (1.0 / x).acosh();
    if upper == 0.0 {
        return Ok(0.0);
    }
    let integral = quad::adaptive(
        |t: f64| t.cosh().powf(alpha - 1.0),
        0.0,
        upper,
        Tolerance::new(1e-14, 1e-12),
    )?;
    Ok(alpha / PI * x.powf(alpha - 1.0) * integral)
}

/// `∫ w_α = 2Γ(1 + 1/α) κ_α^{−1/α}`.
pub fn weight_mass(alpha: f64) -> Result<f64> {
    let kappa = kappa_alpha(alpha)?;
    Ok(2.0 * gamma(1.0 + 1.0 / alpha) * kappa.powf(-1.0 / alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::default_panel;

    #[test]
    fn kappa_values() {
        assert!((kappa_alpha(2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((kappa_alpha(1.0).unwrap() - PI).abs() < 1e-13);
        assert!((kappa_alpha(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!(kappa_alpha(0.0).is_err());
    }

    #[test]
    fn hermite_recurrence() {
        // weight e^{−2x²}: a_n = √n / 2
        let sys = build_recurrence(2.0, 40).unwrap();
        for n in 1..=40 {
            assert!(
                (sys.a[n] - (n as f64).sqrt() / 2.0).abs() < 1e-10,
                "a_{n} = {}",
                sys.a[n]
            );
        }
        assert!(sys.b.iter().all(|&b| b == 0.0));
        assert!((sys.mu0 - weight_mass(2.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn orthonormal_for_several_alphas() {
        for alpha in [1.0, 4.0] {
            let sys = build_recurrence(alpha, 40).unwrap();
            assert!(
                sys.drift <= ORTHONORMALITY_TOL,
                "α = {alpha}: {}",
                sys.drift
            );
        }
        assert!(matches!(build_recurrence(2.0, 61), Err(Error::Domain(_))));
    }

    #[test]
    fn freud_growth() {
        // a_n ~ n^{1/α}/2 with this κ_α; log-log slope over the upper half
        for alpha in [1.0, 2.0, 4.0] {
            let sys = build_recurrence(alpha, 60).unwrap();
            let slope = (sys.a[60] / sys.a[30]).ln() / 2.0_f64.ln();
            assert!(
                (slope * alpha - 1.0).abs() < 0.15,
                "α = {alpha}: slope {slope}"
            );
        }
    }

    #[test]
    fn rescaled_density_properties() {
        let sys = build_recurrence(2.0, 40).unwrap();
        let mass = sys.integrate(20, |_| 1.0);
        assert!((mass - 1.0).abs() < 1e-6, "{mass}");
        for x in [0.1, 0.37, 0.9, 1.3, 4.0] {
            assert_eq!(sys.rescaled_density(33, x), sys.rescaled_density(33, -x));
        }
        assert_eq!(sys.rescaled_density(40, 50.0), 0.0);
        // Hermite-function quadrature: 0.2555862; the 0.05 window spans only
        // ~1.3 local periods of p_40², a wider one recovers the arcsine value
        let avg = sys.window_average(40, 0.0, 0.05);
        assert!((avg - 0.255_586_218_314_324).abs() < 1e-9, "{avg}");
        let wide = sys.window_average(40, 0.0, 0.2);
        assert!((wide - 1.0 / PI).abs() < 0.02, "{wide}");
        // the sup bound does not grow along degree doubling
        let (s20, s40) = (sys.weighted_sup(20, 3001), sys.weighted_sup(40, 3001));
        assert!(s40 < 1.5 * s20, "{s20} {s40}");
    }

    #[test]
    fn windowed_density_approaches_arcsine() {
        let sys = build_recurrence(4.0, 40).unwrap();
        for x in [0.0_f64, 0.3, 0.6] {
            let target = 1.0 / (PI * (1.0 - x * x).sqrt());
            let e10 = (sys.window_average(10, x, 0.05) - target).abs();
            let e40 = (sys.window_average(40, x, 0.05) - target).abs();
            assert!(e40 < e10 + 1e-3, "x = {x}: {e10} → {e40}");
        }
    }

    #[test]
    fn psi_closed_forms() {
        for x in [0.1_f64, 0.5, 0.9] {
            let exact = 2.0 / PI * (1.0 - x * x).sqrt();
            assert!((phase_function_psi(2.0, x).unwrap() - exact).abs() < 1e-10);
        }
        let v = phase_function_psi(1.0, 0.5).unwrap();
        assert!((v - 2.0_f64.acosh() / PI).abs() < 1e-10);
        assert_eq!(phase_function_psi(3.0, 1.0).unwrap(), 0.0);
        assert!(phase_function_psi(3.0, 1.0 - 1e-12).unwrap() < 1e-5);
    }

    #[test]
    fn alpha_independence() {
        let report =
            arcsine_convergence_report(&[1.0, 2.0, 4.0], &[20, 40], &default_panel()).unwrap();
        assert!(report
            .rows
            .iter()
            .filter(|r| r.f_name == "one")
            .all(|r| r.errors.iter().all(|e| *e < 1e-6)));
        for r in report.rows.iter().filter(|r| r.f_name == "x^2") {
            assert!(r.errors[1] < 0.03, "{}: {:?}", r.potential, r.errors);
        }
        assert!(cross_alpha_spread(&report, "cos(pi x)", 1) < 0.03);
    }
}
