//! The potential model `Q = V + W`: an even single-well `V` with its first
//! three derivatives, an optional even perturbation `W`, and checks of the
//! structural growth conditions the asymptotic theory relies on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// A real function of one variable, shareable across threads.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied `V` and derivatives, evaluated for `x > 0` only; the even
/// extension to `x < 0` is applied by [`PotentialSpec`].
#[derive(Clone)]
pub struct CustomPotential {
    pub v: Evaluator,
    pub dv: Evaluator,
    pub d2v: Evaluator,
    pub d3v: Evaluator,
    /// Whether `V` is increasing on all of `(0, ∞)`, not just past `ξ₀`.
    pub monotone_from_origin: bool,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("monotone_from_origin", &self.monotone_from_origin)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum PotentialKind {
    /// `|x|^β`
    Monomial {
        beta: f64,
    },
    /// `|x|^α log(1 + x²)`
    MonomialLog {
        alpha: f64,
    },
    /// `exp(|x|^γ)`
    Exponential {
        gamma: f64,
    },
    /// `x²`
    Harmonic,
    Custom(CustomPotential),
}

impl PotentialKind {
    pub fn name(&self) -> String {
        match self {
            Self::Monomial { beta } => format!("monomial(beta={beta})"),
            Self::MonomialLog { alpha } => format!("monomial_log(alpha={alpha})"),
            Self::Exponential { gamma } => format!("exponential(gamma={gamma})"),
            Self::Harmonic => "harmonic".to_string(),
            Self::Custom(_) => "custom".to_string(),
        }
    }
}

/// How the perturbation is controlled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationClass {
    Zero,
    /// Supported in `[−support_radius, support_radius]` with `‖W‖₁ ≤ l1_bound`.
    CompactL1 {
        support_radius: f64,
        l1_bound: f64,
    },
    /// `|W(x)| ≤ bound·|x|^γ`.
    PolyBounded {
        gamma: f64,
        bound: f64,
    },
}

#[derive(Clone)]
pub struct PerturbationSpec {
    pub evaluator: Evaluator,
    pub class: PerturbationClass,
}

impl fmt::Debug for PerturbationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbationSpec")
            .field("class", &self.class)
            .finish_non_exhaustive()
    }
}

impl PerturbationSpec {
    pub fn zero() -> Self {
        Self {
            evaluator: Arc::new(|_| 0.0),
            class: PerturbationClass::Zero,
        }
    }

    /// `height·𝟙_{[−r, r]}`.
    pub fn indicator(radius: f64, height: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(
                "perturbation.support_radius",
                "must be positive and finite",
            ));
        }
        Ok(Self {
            evaluator: Arc::new(move |x: f64| if x.abs() <= radius { height } else { 0.0 }),
            class: PerturbationClass::CompactL1 {
                support_radius: radius,
                l1_bound: 2.0 * radius * height.abs(),
            },
        })
    }

    /// `height·exp(1 − 1/(1 − (x/r)²))` on `(−r, r)`: smooth, peak `height`.
    /// Unlike the indicator it leaves the eigensolver's `h²` error
    /// expansion intact, so Richardson extrapolation still applies.
    pub fn bump(radius: f64, height: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(
                "perturbation.support_radius",
                "must be positive and finite",
            ));
        }
        Ok(Self {
            evaluator: Arc::new(move |x: f64| {
                let s = x / radius;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    height * (1.0 - 1.0 / (1.0 - s * s)).exp()
                }
            }),
            class: PerturbationClass::CompactL1 {
                support_radius: radius,
                l1_bound: 2.0 * radius * height.abs(),
            },
        })
    }

    /// `bound·|x|^γ`.
    pub fn power(gamma: f64, bound: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= -1.0 {
            return Err(invalid(
                "perturbation.gamma",
                "must be finite and > −1 (local integrability)",
            ));
        }
        Ok(Self {
            evaluator: Arc::new(move |x: f64| bound * x.abs().powf(gamma)),
            class: PerturbationClass::PolyBounded { gamma, bound },
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn is_zero(&self) -> bool {
        self.class == PerturbationClass::Zero
    }
}

/// `c·x^e`, taken as zero whenever `c` is (so `0·∞` never appears at `x = 0`).
fn power_term(c: f64, x: f64, e: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.powf(e)
    }
}

fn invalid(field: &'static str, reason: &str) -> Error {
    Error::InvalidSpec {
        field,
        reason: reason.to_string(),
    }
}

/// The pair `(V, W)` together with the regularity threshold `ξ₀` and the
/// growth exponent `ν` in `V′ ≈ V·x^ν`.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub xi0: f64,
    pub nu: f64,
    pub perturbation: Option<PerturbationSpec>,
}

impl PotentialSpec {
    pub fn harmonic() -> Self {
        Self {
            kind: PotentialKind::Harmonic,
            xi0: 1.0,
            nu: -1.0,
            perturbation: None,
        }
    }

    pub fn monomial(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("potential.beta", "must be positive and finite"));
        }
        Ok(Self {
            kind: PotentialKind::Monomial { beta },
            xi0: 1.0,
            nu: -1.0,
            perturbation: None,
        })
    }

    pub fn monomial_log(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("potential.alpha", "must be positive and finite"));
        }
        Ok(Self {
            kind: PotentialKind::MonomialLog { alpha },
            xi0: 1.0,
            nu: -1.0,
            perturbation: None,
        })
    }

    pub fn exponential(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("potential.gamma", "must be positive and finite"));
        }
        Ok(Self {
            kind: PotentialKind::Exponential { gamma },
            xi0: 1.0,
            nu: gamma - 1.0,
            perturbation: None,
        })
    }

    /// A user-declared potential. The structural assumptions are not
    /// inferred; run [`check_assumptions`] to verify them.
    pub fn custom(potential: CustomPotential, xi0: f64, nu: f64) -> Result<Self> {
        if !(xi0 > 0.0 && xi0.is_finite()) {
            return Err(invalid("potential.xi0", "must be positive and finite"));
        }
        if !(nu >= -1.0 && nu.is_finite()) {
            return Err(invalid("potential.nu", "must be finite and ≥ −1"));
        }
        Ok(Self {
            kind: PotentialKind::Custom(potential),
            xi0,
            nu,
            perturbation: None,
        })
    }

    pub fn with_perturbation(mut self, w: PerturbationSpec) -> Self {
        self.perturbation = if w.is_zero() { None } else { Some(w) };
        self
    }

    pub fn with_xi0(mut self, xi0: f64) -> Result<Self> {
        if !(xi0 > 0.0 && xi0.is_finite()) {
            return Err(invalid("potential.xi0", "must be positive and finite"));
        }
        self.xi0 = xi0;
        Ok(self)
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    /// `V(x)`.
    pub fn v(&self, x: f64) -> f64 {
        self.derivatives(x)[0]
    }

    /// `V′(x)`.
    pub fn dv(&self, x: f64) -> f64 {
        self.derivatives(x)[1]
    }

    /// `V″(x)`.
    pub fn d2v(&self, x: f64) -> f64 {
        self.derivatives(x)[2]
    }

    /// `V‴(x)`.
    pub fn d3v(&self, x: f64) -> f64 {
        self.derivatives(x)[3]
    }

    /// `W(x)`, zero when no perturbation is attached.
    pub fn w(&self, x: f64) -> f64 {
        self.perturbation.as_ref().map_or(0.0, |p| p.eval(x))
    }

    /// `[V, V′, V″, V‴]` at `x`, using evenness: odd derivatives flip sign.
    pub fn derivatives(&self, x: f64) -> [f64; 4] {
        let t = x.abs();
        let mut d = self.derivatives_positive(t);
        if x < 0.0 {
            d[1] = -d[1];
            d[3] = -d[3];
        }
        d
    }

    fn derivatives_positive(&self, x: f64) -> [f64; 4] {
        match &self.kind {
            PotentialKind::Harmonic => [x * x, 2.0 * x, 2.0, 0.0],
            PotentialKind::Monomial { beta } => {
                let b = *beta;
                [
                    x.powf(b),
                    power_term(b, x, b - 1.0),
                    power_term(b * (b - 1.0), x, b - 2.0),
                    power_term(b * (b - 1.0) * (b - 2.0), x, b - 3.0),
                ]
            }
            PotentialKind::MonomialLog { alpha } => {
                let a = *alpha;
                if x == 0.0 {
                    return [0.0, 0.0, f64::NAN, f64::NAN];
                }
                let x2 = x * x;
                let q = 1.0 + x2;
                let l = x2.ln_1p();
                let l1 = 2.0 * x / q;
                let l2 = 2.0 * (1.0 - x2) / (q * q);
                let l3 = 4.0 * x * (x2 - 3.0) / (q * q * q);
                let p = x.powf(a);
                let p1 = a * p / x;
                let p2 = a * (a - 1.0) * p / x2;
                let p3 = a * (a - 1.0) * (a - 2.0) * p / (x2 * x);
                [
                    p * l,
                    p1 * l + p * l1,
                    p2 * l + 2.0 * p1 * l1 + p * l2,
                    p3 * l + 3.0 * p2 * l1 + 3.0 * p1 * l2 + p * l3,
                ]
            }
            PotentialKind::Exponential { gamma } => {
                let g = *gamma;
                let v = x.powf(g).exp();
                // derivatives of the exponent s = x^γ
                let s1 = power_term(g, x, g - 1.0);
                let s2 = power_term(g * (g - 1.0), x, g - 2.0);
                let s3 = power_term(g * (g - 1.0) * (g - 2.0), x, g - 3.0);
                [
                    v,
                    v * s1,
                    v * (s2 + s1 * s1),
                    v * (s3 + 3.0 * s1 * s2 + s1 * s1 * s1),
                ]
            }
            PotentialKind::Custom(c) => [(c.v)(x), (c.dv)(x), (c.d2v)(x), (c.d3v)(x)],
        }
    }

    /// True when `V` is known to increase on the whole positive axis, so
    /// that turning points below `V(ξ₀)` are still unique.
    pub fn monotone_from_origin(&self) -> bool {
        match &self.kind {
            PotentialKind::Custom(c) => c.monotone_from_origin,
            _ => true,
        }
    }

    /// The exact regular-variation exponent for analytic kinds.
    fn analytic_beta(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Harmonic => Some(2.0),
            PotentialKind::Monomial { beta } => Some(beta),
            PotentialKind::MonomialLog { alpha } => Some(alpha),
            PotentialKind::Exponential { .. } => Some(f64::INFINITY),
            PotentialKind::Custom(_) => None,
        }
    }
}

/// `V(x)`, with failures of a custom evaluator reported as errors.
pub fn eval_v(spec: &PotentialSpec, x: f64) -> Result<f64> {
    let v = spec.v(x);
    if v.is_nan() {
        return Err(Error::Evaluation { x });
    }
    Ok(v)
}

/// `V(x·t)/V(t)` for every `t` in the grid.
pub fn regular_variation_estimate(
    spec: &PotentialSpec,
    x: f64,
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} must lie in (0, 1)")));
    }
    t_grid
        .iter()
        .map(|&t| {
            let vt = eval_v(spec, t)?;
            if vt == 0.0 || !vt.is_finite() {
                return Err(Error::Evaluation { x: t });
            }
            Ok(eval_v(spec, x * t)? / vt)
        })
        .collect()
}

const REGRESSION_T: [f64; 4] = [1e3, 1e4, 1e5, 1e6];
const REGRESSION_RESIDUAL: f64 = 1e-3;

/// The exponent `β` with `V(xt)/V(t) → |x|^β`; `∞` when `ν > −1`.
///
/// Analytic kinds return their exact exponent. Custom potentials with
/// `ν = −1` are fitted by least squares of `log(V(xt)/V(t))` against
/// `log x` over `x ∈ {0.1, …, 0.9}` and `t ∈ {10³, …, 10⁶}`.
pub fn infer_beta(spec: &PotentialSpec) -> Result<f64> {
    if let Some(beta) = spec.analytic_beta() {
        return Ok(beta);
    }
    if spec.nu > -1.0 {
        return Ok(f64::INFINITY);
    }
    regress_beta(spec).map(|(beta, _)| beta)
}

/// The regression behind [`infer_beta`], exposed with its residual.
pub fn regress_beta(spec: &PotentialSpec) -> Result<(f64, f64)> {
    let xs: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut samples = Vec::new();
    for &x in &xs {
        for r in regular_variation_estimate(spec, x, &REGRESSION_T)? {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::NotRegularlyVarying {
                    residual: f64::INFINITY,
                });
            }
            samples.push((x.ln(), r.ln()));
        }
    }
    // fit through the origin: log ratio = β·log x
    let num: f64 = samples.iter().map(|(lx, lr)| lx * lr).sum();
    let den: f64 = samples.iter().map(|(lx, _)| lx * lx).sum();
    let beta = num / den;
    let residual = samples
        .iter()
        .map(|(lx, lr)| (lr - beta * lx).abs())
        .fold(0.0, f64::max);
    if residual > REGRESSION_RESIDUAL || beta <= 0.0 {
        return Err(Error::NotRegularlyVarying { residual });
    }
    Ok((beta, residual))
}

/// A tail integral `∫_{ξ₀}^X` continued until doubling `X` stops moving it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub value: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// `min V′/(V x^ν)` over the samples.
    pub growth_ratio_min: f64,
    pub growth_ratio_max: f64,
    /// `max |V″|/(V′ x^ν)` over the samples.
    pub second_derivative_ratio: f64,
    /// `max |V‴|/(V′ x^{2ν})` over the samples.
    pub third_derivative_ratio: f64,
    /// `∫ V′²/V^{5/2}`.
    pub tail_first: TailCheck,
    /// `∫ |V″|/V^{3/2}`.
    pub tail_second: TailCheck,
    /// Bracket of `log V / log x` (`ν = −1`) or `log V / x^{ν+1}` (`ν > −1`).
    pub envelope: (f64, f64),
    pub failures: Vec<String>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const TAIL_REL_TOL: f64 = 1e-8;

/// Sample-based verification of the single-well growth conditions.
/// Never fails: every violated condition is named in `failures`.
pub fn check_assumptions(spec: &PotentialSpec, sample_budget: usize) -> AssumptionReport {
    let n = sample_budget.max(100);
    let xi0 = spec.xi0;
    let nu = spec.nu;
    let mut failures = Vec::new();

    // geometric samples from ξ₀ up to where V approaches overflow
    let mut x_hi = xi0 * 1e6;
    while x_hi > xi0 * 1.01 && !(spec.v(x_hi) < 1e200 && spec.dv(x_hi).abs() < 1e200) {
        x_hi = xi0 + 0.5 * (x_hi - xi0);
    }
    let ratio = (x_hi / xi0).powf(1.0 / (n - 1) as f64);
    let xs: Vec<f64> = (0..n).map(|i| xi0 * ratio.powi(i as i32)).collect();

    let mut gmin = f64::INFINITY;
    let mut gmax = 0.0_f64;
    let mut r2 = 0.0_f64;
    let mut r3 = 0.0_f64;
    let mut env = (f64::INFINITY, 0.0_f64);
    let mut positive = true;
    let mut even = true;
    let mut monotone = true;
    let mut prev = f64::NEG_INFINITY;
    for &x in &xs {
        let [v, d1, d2, d3] = spec.derivatives(x);
        if !(v > 0.0 && d1 > 0.0) {
            positive = false;
        }
        if v != spec.v(-x) {
            even = false;
        }
        if v < prev {
            monotone = false;
        }
        prev = v;
        let g = d1 / (v * x.powf(nu));
        gmin = gmin.min(g);
        gmax = gmax.max(g);
        r2 = r2.max(d2.abs() / (d1 * x.powf(nu)));
        r3 = r3.max(d3.abs() / (d1 * x.powf(2.0 * nu)));
        if x >= 4.0 * xi0 && v > 1.0 {
            let e = if nu == -1.0 {
                v.ln() / x.ln()
            } else {
                v.ln() / x.powf(nu + 1.0)
            };
            env = (env.0.min(e), env.1.max(e));
        }
    }
    if !positive {
        failures.push("positivity: V > 0 and V′ > 0 past ξ₀".to_string());
    }
    if !even {
        failures.push("evenness: V(x) = V(−x)".to_string());
    }
    if !monotone {
        failures.push("monotonicity past ξ₀".to_string());
    }
    if !(gmin > 0.0 && gmax.is_finite()) {
        failures.push("growth: V′ ≈ V·x^ν".to_string());
    }
    if !(r2.is_finite() && r3.is_finite()) {
        failures.push("derivative bounds: |V″| ≲ V′x^ν, |V‴| ≲ V′x^{2ν}".to_string());
    }
    if !(env.0 > 0.0 && env.1.is_finite()) {
        failures.push("growth envelope of log V".to_string());
    }

    let finite_or_zero = |y: f64| if y.is_finite() { y } else { 0.0 };
    let tail = |f: &dyn Fn(f64) -> f64| match quad::cauchy_tail(f, xi0, xi0, TAIL_REL_TOL, 80) {
        Ok(value) => TailCheck {
            value,
            converged: true,
        },
        Err(Error::Quadrature { partial }) => TailCheck {
            value: partial,
            converged: false,
        },
        Err(_) => TailCheck {
            value: f64::NAN,
            converged: false,
        },
    };
    let tail_first = tail(&|x: f64| {
        let [v, d1, _, _] = spec.derivatives(x);
        finite_or_zero(d1 * d1 / v.powf(2.5))
    });
    let tail_second = tail(&|x: f64| {
        let [v, _, d2, _] = spec.derivatives(x);
        finite_or_zero(d2.abs() / v.powf(1.5))
    });
    if !tail_first.converged {
        failures.push("tail integral of V′²/V^{5/2}".to_string());
    }
    if !tail_second.converged {
        failures.push("tail integral of |V″|/V^{3/2}".to_string());
    }

    AssumptionReport {
        growth_ratio_min: gmin,
        growth_ratio_max: gmax,
        second_derivative_ratio: r2,
        third_derivative_ratio: r3,
        tail_first,
        tail_second,
        envelope: env,
        failures,
    }
}

/// Whether the perturbation class is covered by the known sufficient
/// conditions for `J_W(λ) → 0`.
pub fn perturbation_admissible(spec: &PotentialSpec) -> bool {
    let Some(w) = &spec.perturbation else {
        return true;
    };
    match w.class {
        PerturbationClass::Zero | PerturbationClass::CompactL1 { .. } => true,
        PerturbationClass::PolyBounded { gamma, .. } => match infer_beta(spec) {
            Ok(beta) => beta > 2.0 * gamma + 2.0,
            Err(_) => false,
        },
    }
}

/// Breakpoints and weight needed to integrate against `w₁(s)^{−2}`.
pub trait TurningWeight {
    /// `w₁(s)`.
    fn w1(&self, s: f64) -> f64;
    /// `(x_λ − δ, x_λ + δ₁)`, the interval where `w₁` is constant.
    fn transition_zone(&self) -> (f64, f64);
    /// A length scale for the forbidden-side integration.
    fn length_scale(&self) -> f64;
}

/// `J_W(λ) = ∫₀^∞ W(s)/w₁(s)² ds`, with `admissible` false when the
/// perturbation class violates the sufficient decay condition. In that
/// case the integral over the forbidden side need not converge, and it is
/// truncated at `2·x_λ` so that a finite diagnostic value is still returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityJw {
    pub value: f64,
    pub admissible: bool,
}

pub fn admissibility_jw(
    spec: &PotentialSpec,
    weight: &impl TurningWeight,
) -> Result<AdmissibilityJw> {
    let admissible = perturbation_admissible(spec);
    let Some(w) = &spec.perturbation else {
        return Ok(AdmissibilityJw {
            value: 0.0,
            admissible,
        });
    };
    let (lo, hi) = weight.transition_zone();
    let f = |s: f64| {
        let w1 = weight.w1(s);
        w.eval(s) / (w1 * w1)
    };
    let tol = Tolerance::new(1e-13, 1e-10);
    let mut breaks = vec![0.0, lo, hi];
    if let PerturbationClass::CompactL1 { support_radius, .. } = w.class {
        breaks.push(support_radius);
        breaks.sort_by(f64::total_cmp);
        breaks.retain(|&b| b <= support_radius);
        let value = quad::adaptive_piecewise(f, &breaks, tol)?;
        return Ok(AdmissibilityJw { value, admissible });
    }
    let near = quad::adaptive_piecewise(f, &breaks, tol)?;
    let far = if admissible {
        quad::semi_infinite(f, hi, weight.length_scale(), tol)?
    } else {
        let x_lambda = 0.5 * (lo + hi);
        quad::adaptive(f, hi, (2.0 * x_lambda).max(hi), tol)?
    };
    Ok(AdmissibilityJw {
        value: near + far,
        admissible,
    })
}
