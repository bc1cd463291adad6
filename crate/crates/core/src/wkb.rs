//! Liouville–Green machinery around a simple turning point.
//!
//! With the phase `ζ(x) = ∫_x^{x_λ} √(λ−V)` (real for `x < x_λ`, and
//! `i∫_{x_λ}^x √(V−λ)` beyond) and amplitude `b = (ζ/ζ′)^{1/2}`, the model
//! solutions
//!
//! ```text
//! u = (π/√3)|b| (J_{1/3}(ζ) + J_{−1/3}(ζ)),   v = −|b| J_{1/3}(ζ)        x < x_λ
//! u = b K_{1/3}(|ζ|),                         v = b I_{1/3}(|ζ|)         x > x_λ
//! ```
//!
//! solve `−f″ + (V − λ) f = K f` exactly, with Wronskian `u v′ − v u′ = 1`.
//! Both are the same functions as the Langer forms `π√2 φ Ai(−z)` and
//! `φ (Bi(−z) − √3 Ai(−z))/√2` with `z = (3ζ/2)^{2/3}`; that form is used
//! on a tiny window around `x_λ`, where `b` is a removable `0/0`.
//!
//! On the forbidden side `u` decays like `e^{−|ζ|}` and `v` grows like
//! `e^{|ζ|}`, so both are carried as a mantissa and the common log scale
//! `|ζ|`; products such as the Green kernel are assembled in log space.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, TurningWeight};
use crate::quad::{self, Tolerance};
use crate::special::{airy, bessel_ik_scaled, bessel_j_third};
use crate::turning::{self, TurningData};

const SQRT3: f64 = 1.732_050_807_568_877_2;
/// Beyond this log scale `u` underflows to zero and `v` overflows.
const LOG_SCALE_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Oscillatory,
    Forbidden,
}

/// `|ζ(x)|` and the side of the turning point `x` lies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub magnitude: f64,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSolutionSample {
    pub x: f64,
    /// `u(x)`, flushed to zero when the log scale exceeds 700.
    pub u: f64,
    /// `v(x)`, `+∞` when `v_overflow` is set.
    pub v: f64,
    pub w1: f64,
    /// `w₂(x)`; may be `+∞`, use `log_w2` for arithmetic.
    pub w2: f64,
    pub log_w2: f64,
    /// `u = u_mantissa·e^{−log_scale}`, `v = v_mantissa·e^{log_scale}`.
    pub u_mantissa: f64,
    pub v_mantissa: f64,
    pub log_scale: f64,
    pub v_overflow: bool,
}

/// Everything that depends on the energy `λ` only.
#[derive(Debug, Clone)]
pub struct PhaseContext<'a> {
    pub spec: &'a PotentialSpec,
    pub lambda: f64,
    pub turning: TurningData,
    c2: f64,
    c3: f64,
    k_left: f64,
    k_right: f64,
}

impl<'a> PhaseContext<'a> {
    pub fn new(spec: &'a PotentialSpec, lambda: f64) -> Result<Self> {
        Self::with_turning(spec, TurningData::compute(spec, lambda)?)
    }

    pub fn with_turning(spec: &'a PotentialSpec, turning: TurningData) -> Result<Self> {
        let [_, _, d2, d3] = spec.derivatives(turning.x_lambda);
        let mut ctx = Self {
            spec,
            lambda: turning.lambda,
            turning,
            c2: 0.5 * d2,
            c3: d3 / 6.0,
            k_left: 0.0,
            k_right: 0.0,
        };
        let off = ctx.k_window();
        ctx.k_left = ctx.raw_k(turning.x_lambda - off)?;
        ctx.k_right = ctx.raw_k(turning.x_lambda + off)?;
        Ok(ctx)
    }

    fn series_window(&self) -> f64 {
        self.turning.delta / 100.0
    }

    fn k_window(&self) -> f64 {
        self.turning.delta / 10.0
    }

    /// `|ζ(x)|` by quadrature, `x ≥ 0`.
    pub fn zeta(&self, x: f64) -> Result<Phase> {
        let xl = self.turning.x_lambda;
        let magnitude = turning::phase_magnitude(self.spec, self.lambda, xl, x)?;
        let side = if x <= xl {
            Side::Oscillatory
        } else {
            Side::Forbidden
        };
        Ok(Phase { magnitude, side })
    }

    /// `|ζ|` at every point of an increasing grid, accumulated outward from
    /// the turning point one cell at a time.
    pub fn zeta_on_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let xl = self.turning.x_lambda;
        let split = xs.partition_point(|&x| x <= xl);
        let mut out = vec![0.0; xs.len()];
        if split > 0 {
            let mut acc = turning::phase_magnitude(self.spec, self.lambda, xl, xs[split - 1])?;
            out[split - 1] = acc;
            for i in (0..split - 1).rev() {
                acc += turning::phase_between(self.spec, self.lambda, xs[i], xs[i + 1])?;
                out[i] = acc;
            }
        }
        if split < xs.len() {
            let mut acc = turning::phase_magnitude(self.spec, self.lambda, xl, xs[split])?;
            out[split] = acc;
            for i in split + 1..xs.len() {
                acc += turning::phase_between(self.spec, self.lambda, xs[i - 1], xs[i])?;
                out[i] = acc;
            }
        }
        Ok(out)
    }

    /// `w₁(x)`; needs `V` only.
    pub fn w1(&self, x: f64) -> f64 {
        let t = &self.turning;
        if x >= t.x_lambda - t.delta && x <= t.x_lambda + t.delta1 {
            t.a_lambda.powf(1.0 / 6.0)
        } else {
            (self.lambda - self.spec.v(x)).abs().powf(0.25)
        }
    }

    /// `log w₂(x)` given `|ζ(x)|`.
    pub fn log_w2(&self, x: f64, zeta: f64) -> f64 {
        if x > self.turning.x_lambda + self.turning.delta1 {
            zeta
        } else {
            0.0
        }
    }

    pub fn model_solutions(&self, x: f64) -> Result<ModelSolutionSample> {
        let phase = self.zeta(x)?;
        Ok(self.model_solutions_with_phase(x, phase.magnitude))
    }

    /// As [`model_solutions`](Self::model_solutions) with `|ζ(x)|` supplied
    /// by the caller (e.g. from [`zeta_on_grid`](Self::zeta_on_grid)).
    pub fn model_solutions_with_phase(&self, x: f64, zeta: f64) -> ModelSolutionSample {
        let xl = self.turning.x_lambda;
        let (u_m, v_m, ls) = if (x - xl).abs() < self.series_window() {
            let (u, v) = self.turning_point_series(xl - x);
            (u, v, 0.0)
        } else if x < xl {
            let b = (zeta / (self.lambda - self.spec.v(x)).sqrt()).sqrt();
            let (jp, jm) = bessel_j_third(zeta);
            (PI / SQRT3 * b * (jp + jm), -b * jp, 0.0)
        } else {
            let b = (zeta / (self.spec.v(x) - self.lambda).sqrt()).sqrt();
            let ik = bessel_ik_scaled(1.0 / 3.0, zeta);
            (b * ik.k, b * ik.i, zeta)
        };
        let overflow = ls > LOG_SCALE_LIMIT;
        let (u, v) = if overflow {
            (0.0, f64::INFINITY)
        } else {
            (u_m * (-ls).exp(), v_m * ls.exp())
        };
        let log_w2 = self.log_w2(x, zeta);
        ModelSolutionSample {
            x,
            u,
            v,
            w1: self.w1(x),
            w2: log_w2.exp(),
            log_w2,
            u_mantissa: u_m,
            v_mantissa: v_m,
            log_scale: ls,
            v_overflow: overflow,
        }
    }

    /// Langer form with `z` and `φ = (z/(λ−V))^{1/4}` expanded in `t = x_λ − x`.
    fn turning_point_series(&self, t: f64) -> (f64, f64) {
        let a = self.turning.a_lambda;
        let (c2, c3) = (self.c2, self.c3);
        let a13 = a.cbrt();
        let a23 = a13 * a13;
        let z = a13 * t - c2 / (5.0 * a23) * t * t
            + (c3 / (7.0 * a23) - 8.0 * c2 * c2 / (175.0 * a23 * a)) * t * t * t;
        let phi =
            (1.0 + c2 / (5.0 * a) * t + (9.0 * c2 * c2 - 15.0 * a * c3) / (70.0 * a * a) * t * t)
                / a.powf(1.0 / 6.0);
        let ab = airy(-z);
        (
            PI * SQRT_2 * phi * ab.ai,
            phi * (ab.bi - SQRT3 * ab.ai) / SQRT_2,
        )
    }

    fn raw_k(&self, x: f64) -> Result<f64> {
        let zeta = self.zeta(x)?.magnitude;
        Ok(self.k_with_phase(x, zeta))
    }

    fn k_with_phase(&self, x: f64, zeta: f64) -> f64 {
        error_potential_from_phase(self.spec, self.lambda, self.turning.x_lambda, x, zeta)
    }

    /// The error potential `K` with `−u″ + (V−λ)u = K u`. Inside
    /// `|x − x_λ| < δ/10`, where the closed form cancels catastrophically,
    /// `K` is interpolated linearly between the window edges.
    pub fn error_potential_k(&self, x: f64) -> Result<f64> {
        let xl = self.turning.x_lambda;
        let off = self.k_window();
        if (x - xl).abs() < off {
            let s = (x - (xl - off)) / (2.0 * off);
            return Ok(self.k_left + s * (self.k_right - self.k_left));
        }
        self.raw_k(x)
    }

    /// `|b(x)|` on the oscillatory side.
    pub fn amplitude(&self, x: f64) -> Result<f64> {
        let zeta = self.zeta(x)?.magnitude;
        Ok((zeta / (self.lambda - self.spec.v(x)).abs().sqrt()).sqrt())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let t = &self.turning;
        let xl = t.x_lambda;
        let half = 0.5 * xl.powf(-self.spec.nu);
        let mut b = vec![
            0.0,
            self.spec.xi0,
            xl - half,
            xl - t.delta,
            xl - self.k_window(),
            xl - self.series_window(),
            xl + self.series_window(),
            xl + self.k_window(),
            xl + t.delta1,
            xl + half,
        ];
        b.retain(|&p| p >= 0.0);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `J_K(λ) = ∫₀^∞ |K(s)|/w₁(s)² ds`, split at the turning-zone
    /// boundaries; the forbidden tail is mapped onto a finite interval.
    pub fn jk_integral(&self) -> Result<f64> {
        let f = |s: f64| {
            let w = self.w1(s);
            match self.error_potential_k(s) {
                Ok(k) => k.abs() / (w * w),
                Err(_) => f64::NAN,
            }
        };
        let tol = Tolerance::new(1e-12, 1e-8);
        let breaks = self.breakpoints();
        let near = quad::adaptive_piecewise(f, &breaks, tol)?;
        let last = *breaks.last().expect("breakpoints are nonempty");
        let far = quad::semi_infinite(f, last, self.turning.x_lambda, tol)?;
        Ok(near + far)
    }

    /// `J_W(λ)` for the perturbation attached to the spec.
    pub fn jw_integral(&self) -> Result<crate::potential::AdmissibilityJw> {
        crate::potential::admissibility_jw(self.spec, self)
    }

    /// Point past `x_λ` where `|ζ|` first exceeds `target`.
    fn forbidden_extent(&self, target: f64) -> Result<f64> {
        let xl = self.turning.x_lambda;
        let mut step = self.turning.delta1.max(1e-3 * xl);
        let mut x = xl + step;
        let mut zeta = self.zeta(x)?.magnitude;
        while zeta < target {
            let next = x + step;
            zeta += turning::phase_between(self.spec, self.lambda, x, next)?;
            x = next;
            step *= 1.5;
            if !x.is_finite() {
                return Err(Error::Geometry(
                    "forbidden region never reaches the target phase".into(),
                ));
            }
        }
        Ok(x)
    }

    /// `∫₀^∞ u²` against its leading term `π∫₀^{x_λ}(λ−V)^{−1/2}`.
    pub fn u_norm_integral(&self) -> Result<UNorm> {
        let u2 = |x: f64| match self.model_solutions(x) {
            Ok(s) => s.u * s.u,
            Err(_) => f64::NAN,
        };
        let tol = Tolerance::new(1e-14, 1e-10);
        let mut breaks = self.breakpoints();
        let end = self.forbidden_extent(40.0)?;
        breaks.retain(|&b| b < end);
        breaks.push(end);
        let norm_sq = quad::adaptive_piecewise(u2, &breaks, tol)?;
        let xl = self.turning.x_lambda;
        let leading = PI
            * quad::adaptive(
                |tau| 2.0 * tau / (self.lambda - self.spec.v(xl - tau * tau)).sqrt(),
                0.0,
                xl.sqrt(),
                Tolerance::new(1e-13, 1e-12),
            )?;
        Ok(UNorm {
            norm_sq,
            leading,
            relative_correction: norm_sq / leading - 1.0,
        })
    }

    /// `G(x, s) = u(x)v(s) − v(x)u(s)`; may be `±∞` deep in the forbidden
    /// region, where [`green_kernel_scaled`](Self::green_kernel_scaled) is
    /// the usable quantity.
    pub fn green_kernel(&self, x: f64, s: f64) -> Result<f64> {
        let (a, b) = (self.model_solutions(x)?, self.model_solutions(s)?);
        let t1 = a.u_mantissa * b.v_mantissa * (b.log_scale - a.log_scale).exp();
        let t2 = a.v_mantissa * b.u_mantissa * (a.log_scale - b.log_scale).exp();
        Ok(t1 - t2)
    }

    /// `G(x, s)·w₁(x)w₂(x)·w₁(s)/w₂(s)`, assembled in log space.
    pub fn green_kernel_scaled(&self, x: f64, s: f64) -> Result<f64> {
        let (a, b) = (self.model_solutions(x)?, self.model_solutions(s)?);
        let shift = a.log_w2 - b.log_w2;
        let t1 = a.u_mantissa * b.v_mantissa * (b.log_scale - a.log_scale + shift).exp();
        let t2 = a.v_mantissa * b.u_mantissa * (a.log_scale - b.log_scale + shift).exp();
        Ok((t1 - t2) * a.w1 * b.w1)
    }

    pub fn asymptotic_envelope(&self, jw: f64, jk: f64) -> Result<AsymptoticEnvelope<'_, 'a>> {
        Ok(AsymptoticEnvelope {
            ctx: self,
            c: remainder_constant(jw, jk)?,
        })
    }

    /// Compares a normalized eigenfunction sampled on `xs` with `u`:
    /// `ψ` is scaled by its projection onto `u` (standing in for `‖y‖`),
    /// and `sup |ψ‖y‖ − u|·w₁w₂` is taken over points with `|ζ| ≤
    /// zeta_cutoff` on the forbidden side. Close to a truncated domain's far
    /// end the discrete eigenvector feels its artificial boundary, so the
    /// cutoff should stay well inside it.
    pub fn remainder_sup(&self, xs: &[f64], psi: &[f64], zeta_cutoff: f64) -> Result<RemainderSup> {
        let zetas = self.zeta_on_grid(xs)?;
        let xl = self.turning.x_lambda;
        let mut kept = Vec::new();
        for ((&x, &p), &z) in xs.iter().zip(psi).zip(&zetas) {
            if x > xl && z > zeta_cutoff {
                break;
            }
            kept.push((self.model_solutions_with_phase(x, z), p));
        }
        let num: f64 = kept.iter().map(|(s, p)| s.u * p).sum();
        let den: f64 = kept.iter().map(|(_, p)| p * p).sum();
        let scale = num / den;
        let sup = kept
            .iter()
            .map(|(s, p)| (scale * p - s.u).abs() * s.w1 * s.log_w2.exp())
            .fold(0.0, f64::max);
        Ok(RemainderSup {
            scale,
            sup,
            points: kept.len(),
        })
    }
}

impl TurningWeight for PhaseContext<'_> {
    fn w1(&self, s: f64) -> f64 {
        PhaseContext::w1(self, s)
    }

    fn transition_zone(&self) -> (f64, f64) {
        (
            self.turning.x_lambda - self.turning.delta,
            self.turning.x_lambda + self.turning.delta1,
        )
    }

    fn length_scale(&self) -> f64 {
        self.turning.x_lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UNorm {
    pub norm_sq: f64,
    pub leading: f64,
    pub relative_correction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderSup {
    pub scale: f64,
    pub sup: f64,
    pub points: usize,
}

/// `K = ¼[(5/9)(λ−V)/ζ² − V″/(λ−V) − (5/4)V′²/(λ−V)²]` with `ζ² = −|ζ|²`
/// past the turning point, so that `K` is real on both sides.
pub fn error_potential_from_phase(
    spec: &PotentialSpec,
    lambda: f64,
    x_lambda: f64,
    x: f64,
    zeta: f64,
) -> f64 {
    let [v, d1, d2, _] = spec.derivatives(x);
    let d = lambda - v;
    let z2 = if x < x_lambda {
        zeta * zeta
    } else {
        -zeta * zeta
    };
    0.25 * (5.0 / 9.0 * d / z2 - d2 / d - 1.25 * d1 * d1 / (d * d))
}

/// `C(λ) = (J_K + J_W)/(1 − J_K − J_W)`.
pub fn remainder_constant(jw: f64, jk: f64) -> Result<f64> {
    let sum = jw.abs() + jk;
    if sum >= 1.0 {
        return Err(Error::AsymptoticRegime { sum });
    }
    Ok(sum / (1.0 - sum))
}

/// `x ↦ C(λ)/(w₁(x)w₂(x))`, the bound on `|y − u|`.
#[derive(Debug, Clone)]
pub struct AsymptoticEnvelope<'c, 'a> {
    ctx: &'c PhaseContext<'a>,
    pub c: f64,
}

impl AsymptoticEnvelope<'_, '_> {
    pub fn at(&self, x: f64) -> Result<f64> {
        if self.c == 0.0 {
            return Ok(0.0);
        }
        let zeta = self.ctx.zeta(x)?.magnitude;
        Ok(self.c / self.ctx.w1(x) * (-self.ctx.log_w2(x, zeta)).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;

    // fourth-order central differences with step 10⁻⁵·x_λ
    fn wronskian(ctx: &PhaseContext, x: f64) -> f64 {
        let h = 1e-5 * ctx.turning.x_lambda;
        let s = |k: f64| ctx.model_solutions(x + k * h).unwrap();
        let (p1, m1, p2, m2) = (s(1.0), s(-1.0), s(2.0), s(-2.0));
        let d = |f: fn(&ModelSolutionSample) -> f64| {
            (8.0 * (f(&p1) - f(&m1)) - (f(&p2) - f(&m2))) / (12.0 * h)
        };
        let c = s(0.0);
        c.u * d(|m| m.v) - c.v * d(|m| m.u)
    }

    #[test]
    fn phase_values() {
        let h = PotentialSpec::harmonic();
        let ctx = PhaseContext::new(&h, 100.0).unwrap();
        let z = ctx.zeta(0.0).unwrap();
        assert_eq!(z.side, Side::Oscillatory);
        assert!((z.magnitude - 25.0 * PI).abs() < 1e-9);
        assert_eq!(ctx.zeta(10.0).unwrap().magnitude, 0.0);
        let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.05).collect();
        let g = ctx.zeta_on_grid(&grid).unwrap();
        for (&x, &zg) in grid.iter().zip(&g).step_by(37) {
            assert!((zg - ctx.zeta(x).unwrap().magnitude).abs() < 1e-9);
        }
    }

    #[test]
    fn wronskian_is_one() {
        for spec in [
            PotentialSpec::harmonic(),
            PotentialSpec::monomial(1.0).unwrap(),
            PotentialSpec::monomial(4.0).unwrap(),
            PotentialSpec::exponential(1.0).unwrap(),
        ] {
            let ctx = PhaseContext::new(&spec, 200.0).unwrap();
            let xl = ctx.turning.x_lambda;
            for x in [0.5 * xl, 0.9 * xl, xl + 0.5 * ctx.turning.delta1] {
                let w = wronskian(&ctx, x);
                assert!((w - 1.0).abs() < 1e-6, "{}: W({x}) = {w}", spec.name());
            }
        }
    }

    #[test]
    fn series_matches_bessel_form_at_window_edge() {
        let spec = PotentialSpec::monomial(4.0).unwrap();
        let ctx = PhaseContext::new(&spec, 300.0).unwrap();
        let xl = ctx.turning.x_lambda;
        let w = ctx.series_window();
        for t in [-1.5 * w, 1.5 * w, 3.0 * w] {
            let bessel = ctx.model_solutions(xl - t).unwrap();
            let (u, v) = ctx.turning_point_series(t);
            let scale = bessel.log_scale.exp();
            assert!(
                (bessel.u - u).abs() < 1e-9 * u.abs(),
                "{t}: {} vs {u}",
                bessel.u
            );
            assert!((bessel.v - v).abs() < 1e-8 * v.abs().max(bessel.u.abs()) * scale);
        }
        // |u(x_λ)| ≈ a_λ^{−1/6}
        let at = ctx.model_solutions(xl).unwrap();
        let r = at.u * ctx.turning.a_lambda.powf(1.0 / 6.0);
        assert!((0.5..2.0).contains(&r), "{r}");
    }

    #[test]
    fn k_vanishes_for_linear_potential() {
        let lin = PotentialSpec::monomial(1.0).unwrap();
        // λ = 1, x = 0.5: ζ = (2/3)(1/2)^{3/2}, and the two surviving terms cancel
        let zeta = 2.0 / 3.0 * 0.5_f64.powf(1.5);
        assert!(error_potential_from_phase(&lin, 1.0, 1.0, 0.5, zeta).abs() < 1e-14);
        let ctx = PhaseContext::new(&lin, 10.0).unwrap();
        for x in [0.5 * ctx.turning.x_lambda, 1.5 * ctx.turning.x_lambda] {
            assert!(ctx.error_potential_k(x).unwrap().abs() < 1e-10);
        }
        let ctx = PhaseContext::new(&lin, 50.0).unwrap();
        assert!(ctx.jk_integral().unwrap() < 1e-8);
    }

    #[test]
    fn k_closed_form_matches_amplitude_curvature() {
        // K = −(|b|″/|b| + (λ−V)/(9ζ²)) on the oscillatory side
        let h = PotentialSpec::harmonic();
        let ctx = PhaseContext::new(&h, 100.0).unwrap();
        let x = 5.0;
        let step = 1e-3;
        let b = |x: f64| ctx.amplitude(x).unwrap();
        let bpp = (b(x + step) - 2.0 * b(x) + b(x - step)) / (step * step);
        let z = ctx.zeta(x).unwrap().magnitude;
        let fd = -(bpp / b(x) + (100.0 - x * x) / (9.0 * z * z));
        let k = ctx.error_potential_k(x).unwrap();
        assert!((fd - k).abs() < 1e-4 * k.abs(), "{fd} vs {k}");
        assert!(k.abs() < 1e-2);
    }

    #[test]
    fn jk_decreases_for_harmonic() {
        let h = PotentialSpec::harmonic();
        let mut prev = f64::INFINITY;
        for lambda in [100.0, 400.0, 1600.0] {
            let jk = PhaseContext::new(&h, lambda)
                .unwrap()
                .jk_integral()
                .unwrap();
            assert!(jk < prev, "{lambda}: {jk}");
            prev = jk;
        }
    }

    #[test]
    fn harmonic_u_norm() {
        let h = PotentialSpec::harmonic();
        let n = PhaseContext::new(&h, 400.0)
            .unwrap()
            .u_norm_integral()
            .unwrap();
        assert!((n.leading - PI * PI / 2.0).abs() < 1e-9);
        assert!(n.relative_correction.abs() < 0.05, "{n:?}");
    }

    #[test]
    fn green_kernel_properties() {
        let spec = PotentialSpec::monomial(4.0).unwrap();
        let ctx = PhaseContext::new(&spec, 200.0).unwrap();
        let xl = ctx.turning.x_lambda;
        assert_eq!(ctx.green_kernel(0.3 * xl, 0.3 * xl).unwrap(), 0.0);
        let x = 0.6 * xl;
        let h = 1e-5 * xl;
        let d =
            (ctx.green_kernel(x, x + h).unwrap() - ctx.green_kernel(x, x - h).unwrap()) / (2.0 * h);
        assert!((d - 1.0).abs() < 1e-6, "{d}");
        // deep in the forbidden region only the scaled kernel stays finite
        let far = xl * 3.0;
        assert!(ctx.green_kernel_scaled(0.5 * xl, far).unwrap().is_finite());
    }

    #[test]
    fn envelope_constant() {
        assert_eq!(remainder_constant(0.0, 0.1).unwrap(), 0.1 / 0.9);
        assert!(matches!(
            remainder_constant(0.6, 0.5),
            Err(Error::AsymptoticRegime { .. })
        ));
        let h = PotentialSpec::harmonic();
        let ctx = PhaseContext::new(&h, 100.0).unwrap();
        let env = ctx.asymptotic_envelope(0.0, 0.0).unwrap();
        assert_eq!(env.at(3.0).unwrap(), 0.0);
    }
}
