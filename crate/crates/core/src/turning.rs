//! Turning-point geometry at energy `λ`: the turning point `x_λ`, the slope
//! `a_λ = V′(x_λ)`, the transition widths `δ`, `δ₁` on which the phase has
//! unit size, and the tail integral `κ_λ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::quad::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningData {
    pub lambda: f64,
    pub x_lambda: f64,
    pub a_lambda: f64,
    pub delta: f64,
    pub delta1: f64,
    pub kappa_lambda: f64,
}

impl TurningData {
    pub fn compute(spec: &PotentialSpec, lambda: f64) -> Result<Self> {
        let x_lambda = turning_point(spec, lambda)?;
        let a_lambda = spec.dv(x_lambda);
        let (delta, delta1) = transition_widths(spec, lambda, x_lambda, |x| {
            phase_magnitude(spec, lambda, x_lambda, x)
        })?;
        let kappa_lambda = kappa(spec, lambda)?;
        Ok(Self {
            lambda,
            x_lambda,
            a_lambda,
            delta,
            delta1,
            kappa_lambda,
        })
    }
}

const TURNING_REL_TOL: f64 = 1e-12;

/// The positive root of `V(x) = λ`.
///
/// Past `ξ₀` the potential is increasing, so bisection on a bracket grown
/// geometrically from `ξ₀` is always safe. Energies below `V(ξ₀)` are
/// accepted only when `V` is known to increase from the origin.
pub fn turning_point(spec: &PotentialSpec, lambda: f64) -> Result<f64> {
    let xi0 = spec.xi0;
    let (mut lo, mut hi) = if lambda > spec.v(xi0) {
        let mut hi = 2.0 * xi0;
        let mut lo = xi0;
        let mut grown = 0;
        while spec.v(hi) < lambda {
            lo = hi;
            hi *= 2.0;
            grown += 1;
            if grown > 1100 || !hi.is_finite() {
                return Err(Error::Geometry(format!("V stays below λ = {lambda}")));
            }
        }
        (lo, hi)
    } else if spec.monotone_from_origin() && lambda > spec.v(0.0) {
        (0.0, xi0)
    } else {
        return Err(Error::EnergyBelowWell { lambda });
    };
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if spec.v(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // one Newton step from the bracket midpoint, kept only if it helps
    let mid = 0.5 * (lo + hi);
    let newton = mid - (spec.v(mid) - lambda) / spec.dv(mid);
    let best = [lo, hi, mid, newton]
        .into_iter()
        .filter(|x| x.is_finite() && *x > 0.0)
        .min_by(|a, b| {
            (spec.v(*a) - lambda)
                .abs()
                .total_cmp(&(spec.v(*b) - lambda).abs())
        })
        .unwrap_or(mid);
    if (spec.v(best) - lambda).abs() > TURNING_REL_TOL * lambda.abs().max(f64::MIN_POSITIVE) {
        // flat spots of a custom V can defeat the relative tolerance
        let res = (spec.v(best) - lambda).abs() / lambda;
        if res > 1e-10 {
            return Err(Error::Geometry(format!("turning point residual {res:.2e}")));
        }
    }
    Ok(best)
}

const PHASE_TOL: Tolerance = Tolerance::new(1e-12, 1e-13);

/// `|ζ(x)|`: `∫_x^{x_λ} √(λ−V)` for `x < x_λ` and `∫_{x_λ}^x √(V−λ)` beyond,
/// with the square-root endpoint singularity removed by `s = x_λ ∓ τ²`.
pub fn phase_magnitude(spec: &PotentialSpec, lambda: f64, x_lambda: f64, x: f64) -> Result<f64> {
    if x == x_lambda {
        return Ok(0.0);
    }
    let span = (x - x_lambda).abs().sqrt();
    if x < x_lambda {
        quad::adaptive(
            |tau| 2.0 * tau * (lambda - spec.v(x_lambda - tau * tau)).max(0.0).sqrt(),
            0.0,
            span,
            PHASE_TOL,
        )
    } else {
        quad::adaptive(
            |tau| 2.0 * tau * (spec.v(x_lambda + tau * tau) - lambda).max(0.0).sqrt(),
            0.0,
            span,
            PHASE_TOL,
        )
    }
}

/// `∫_a^b √|λ − V|` for a pair of points on the same side of `x_λ`,
/// neither of them at `x_λ`; smooth integrand, no substitution needed.
pub(crate) fn phase_between(spec: &PotentialSpec, lambda: f64, a: f64, b: f64) -> Result<f64> {
    quad::adaptive(|s| (lambda - spec.v(s)).abs().sqrt(), a, b, PHASE_TOL)
}

const WIDTH_TOL: f64 = 1e-10;

/// Safeguarded Newton for an increasing `f` with `f(lo) < 0 < f(hi)`.
fn increasing_root(
    f: impl Fn(f64) -> Result<f64>,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
) -> Result<f64> {
    let mut x = guess.clamp(lo, hi);
    for _ in 0..200 {
        let fx = f(x)?;
        if fx.abs() <= WIDTH_TOL {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let step = x - fx / d;
        x = if d > 0.0 && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
    }
    Err(Error::Geometry(
        "transition width root-finding stalled".to_string(),
    ))
}

/// `δ` and `δ₁` with `ζ(x_λ − δ) = 1` and `|ζ(x_λ + δ₁)| = 1`.
pub fn transition_widths(
    spec: &PotentialSpec,
    lambda: f64,
    x_lambda: f64,
    zeta: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    if zeta(0.0)? < 1.0 {
        return Err(Error::Geometry(format!(
            "ζ(0) < 1 at λ = {lambda}: the oscillatory region is shorter than one phase unit"
        )));
    }
    let a = spec.dv(x_lambda);
    let linear = (1.5 / a.sqrt()).powf(2.0 / 3.0);
    let delta = increasing_root(
        |d| Ok(zeta(x_lambda - d)? - 1.0),
        |d| (lambda - spec.v(x_lambda - d)).max(0.0).sqrt(),
        0.0,
        x_lambda,
        linear.min(0.5 * x_lambda),
    )?;
    let mut hi = linear;
    let mut grown = 0;
    while zeta(x_lambda + hi)? < 1.0 {
        hi *= 2.0;
        grown += 1;
        if grown > 200 {
            return Err(Error::Geometry("δ₁ not bracketed".to_string()));
        }
    }
    let delta1 = increasing_root(
        |d| Ok(zeta(x_lambda + d)? - 1.0),
        |d| (spec.v(x_lambda + d) - lambda).max(0.0).sqrt(),
        0.0,
        hi,
        linear.min(hi),
    )?;
    Ok((delta, delta1))
}

const KAPPA_REL_TOL: f64 = 1e-8;

/// `κ_λ = ∫_{x_λ}^∞ (|V″|/V^{3/2} + V′²/V^{5/2})`.
pub fn kappa(spec: &PotentialSpec, lambda: f64) -> Result<f64> {
    let x_lambda = turning_point(spec, lambda)?;
    let f = |t: f64| {
        let [v, d1, d2, _] = spec.derivatives(t);
        let y = d2.abs() / v.powf(1.5) + d1 * d1 / v.powf(2.5);
        if y.is_finite() {
            y
        } else {
            0.0
        }
    };
    quad::cauchy_tail(f, x_lambda, x_lambda, KAPPA_REL_TOL, 200)
}

/// The smallest energy on a doubling sequence from `2·V(ξ₀)` at which
/// `κ_λ < threshold`; asymptotic statements are asserted only above it.
pub fn lambda_min_asymptotic(spec: &PotentialSpec, threshold: f64) -> Result<f64> {
    let mut lambda = 2.0 * spec.v(spec.xi0).max(1.0);
    for _ in 0..80 {
        if kappa(spec, lambda)? < threshold {
            return Ok(lambda);
        }
        lambda *= 2.0;
    }
    Err(Error::Geometry(format!("κ_λ stays above {threshold}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;

    #[test]
    fn turning_points_of_analytic_kinds() {
        assert!((turning_point(&PotentialSpec::harmonic(), 9.0).unwrap() - 3.0).abs() < 1e-14);
        let quartic = PotentialSpec::monomial(4.0).unwrap();
        assert!((turning_point(&quartic, 16.0).unwrap() - 2.0).abs() < 1e-14);
        let ex = PotentialSpec::exponential(1.0).unwrap();
        let e2 = 2.0_f64.exp();
        assert!((turning_point(&ex, e2).unwrap() - 2.0).abs() < 1e-14);
        // below V(ξ₀) but above V(0): still unique for monotone kinds
        assert!((turning_point(&PotentialSpec::harmonic(), 0.25).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            turning_point(&ex, 0.5),
            Err(Error::EnergyBelowWell { .. })
        ));
    }

    #[test]
    fn residual_meets_tolerance() {
        let spec = PotentialSpec::monomial_log(2.5).unwrap();
        for lambda in [3.0, 70.0, 1e5] {
            let x = turning_point(&spec, lambda).unwrap();
            assert!((spec.v(x) - lambda).abs() / lambda <= 1e-12);
        }
    }

    #[test]
    fn phase_closed_forms() {
        let h = PotentialSpec::harmonic();
        let z = phase_magnitude(&h, 1.0, 1.0, 0.0).unwrap();
        assert!((z - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let lin = PotentialSpec::monomial(1.0).unwrap();
        let z = phase_magnitude(&lin, 1.0, 1.0, 2.0).unwrap();
        assert!((z - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(phase_magnitude(&lin, 1.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_widths() {
        let t = TurningData::compute(&PotentialSpec::harmonic(), 100.0).unwrap();
        // independent check: ∫_{10−δ}^{10} √(100 − s²) ds = 1 via the antiderivative
        let g = |x: f64| 0.5 * (x * (100.0 - x * x).sqrt() + 100.0 * (x / 10.0).asin());
        assert!((g(10.0) - g(10.0 - t.delta) - 1.0).abs() < 1e-9);
        let linear = (3.0 / (2.0 * 20.0_f64.sqrt())).powf(2.0 / 3.0);
        assert!(
            (t.delta / linear - 1.0).abs() < 0.05,
            "{} vs {linear}",
            t.delta
        );
        for lambda in [100.0, 400.0, 1600.0, 6400.0] {
            let t = TurningData::compute(&PotentialSpec::harmonic(), lambda).unwrap();
            let s = t.delta * t.a_lambda.powf(1.0 / 3.0);
            assert!((0.5..=2.0).contains(&s), "{s}");
        }
    }

    #[test]
    fn linear_widths_are_symmetric() {
        let t = TurningData::compute(&PotentialSpec::monomial(1.0).unwrap(), 100.0).unwrap();
        let exact = 1.5_f64.powf(2.0 / 3.0);
        assert!((t.delta - exact).abs() < 1e-9 && (t.delta1 - exact).abs() < 1e-9);
    }

    #[test]
    fn width_ratio_shrinks_for_exponential() {
        let spec = PotentialSpec::exponential(1.0).unwrap();
        let mut prev = f64::INFINITY;
        for lambda in [50.0, 100.0, 200.0, 400.0, 800.0] {
            let t = TurningData::compute(&spec, lambda).unwrap();
            let r = (t.delta + t.delta1) * t.x_lambda.powf(spec.nu);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn geometry_error_for_tiny_energy() {
        // ζ(0) = π/4 < 1 for the harmonic oscillator at λ = 1
        assert!(matches!(
            TurningData::compute(&PotentialSpec::harmonic(), 1.0),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn kappa_closed_forms() {
        let h = PotentialSpec::harmonic();
        assert!((kappa(&h, 100.0).unwrap() - 0.03).abs() < 1e-9);
        let ratio = kappa(&h, 400.0).unwrap() / kappa(&h, 100.0).unwrap();
        assert!((ratio - 0.25).abs() < 1e-7);
        let lin = PotentialSpec::monomial(1.0).unwrap();
        assert!((kappa(&lin, 100.0).unwrap() - 2.0 / 3.0 * 1e-3).abs() < 1e-11);
        let ex = PotentialSpec::exponential(1.0).unwrap();
        // V″/V^{3/2} + V′²/V^{5/2} = 2e^{−t/2}, so κ = 4/√λ
        assert!((kappa(&ex, 100.0).unwrap() - 0.4).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_threshold() {
        // κ = 3/λ < 0.1 first on the doubling sequence 2, 4, …, 32
        assert_eq!(
            lambda_min_asymptotic(&PotentialSpec::harmonic(), 0.1).unwrap(),
            32.0
        );
    }
}
