//! Gauss–Legendre quadrature: fixed rules, composite panels with doubling,
//! globally adaptive bisection, and helpers for semi-infinite ranges.
//!
//! Square-root endpoint singularities are expected to be removed by the
//! caller (substitution `s = c ∓ τ²`), after which every integrand handled
//! here is smooth or at worst has integrable kinks at panel boundaries.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Absolute/relative accuracy request; the looser of the two wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn accepts(&self, err: f64, value: f64) -> bool {
        err <= self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-10)
    }
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n`, seeded with the
    /// Tricomi approximation of the roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Equal-width composite rule with `panels` panels.
    pub fn composite<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, panels: usize) -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|j| {
                let lo = a + width * j as f64;
                self.integrate(&f, lo, lo + width)
            })
            .sum()
    }

    /// Maps the rule onto `[a, b]` split into `panels` equal panels.
    pub fn composite_nodes(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let width = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * self.len());
        let mut ws = Vec::with_capacity(panels * self.len());
        for j in 0..panels {
            let lo = a + width * j as f64;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(lo + 0.5 * width * (x + 1.0));
                ws.push(0.5 * width * w);
            }
        }
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Shared 20-point rule used for panel doubling.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Shared 15-point rule used by the adaptive integrator.
pub fn gl15() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(15))
}

/// Composite 20-point rule with the panel count doubled until two
/// successive estimates agree.
pub fn panel_doubling<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_panels: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let rule = gl20();
    let mut panels = 1;
    let mut prev = rule.composite(&f, a, b, panels);
    while panels < max_panels {
        panels *= 2;
        let next = rule.composite(&f, a, b, panels);
        if tol.accepts((next - prev).abs(), next) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature { partial: prev })
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

const MAX_SEGMENTS: usize = 20_000;

fn make_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Segment {
    let rule = gl15();
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    Segment {
        a,
        b,
        left,
        right,
        err: (whole - left - right).abs(),
    }
}

/// Globally adaptive bisection: the segment with the largest error
/// estimate (coarse rule vs. its two halves) is split until the summed
/// estimate meets `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gl15().integrate(&f, a, b);
    let mut heap = BinaryHeap::new();
    let first = make_segment(&f, a, b, whole);
    let mut total = first.left + first.right;
    let mut err = first.err;
    heap.push(first);
    while !tol.accepts(err, total) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature { partial: total });
        }
        let seg = heap.pop().expect("heap holds at least one segment");
        let m = 0.5 * (seg.a + seg.b);
        if !(m > seg.a && m < seg.b) {
            // segment below floating-point resolution
            return Err(Error::Quadrature { partial: total });
        }
        let l = make_segment(&f, seg.a, m, seg.left);
        let r = make_segment(&f, m, seg.b, seg.right);
        total += l.left + l.right + r.left + r.right - seg.left - seg.right;
        err += l.err + r.err - seg.err;
        heap.push(l);
        heap.push(r);
        if !total.is_finite() {
            return Err(Error::Quadrature { partial: total });
        }
    }
    // recompute the sum to shed accumulated rounding in the running total
    Ok(heap.iter().map(|s| s.left + s.right).sum())
}

/// Adaptive integration over consecutive breakpoints.
pub fn adaptive_piecewise<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: Tolerance) -> Result<f64> {
    let mut sum = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            sum += adaptive(&f, w[0], w[1], tol)?;
        }
    }
    Ok(sum)
}

/// `∫_a^∞ f` through the map `s = a + L t/(1 − t)`, `t ∈ [0, 1)`.
/// Non-finite integrand samples (overflowed tails) count as zero.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, tol: Tolerance) -> Result<f64> {
    let g = |t: f64| {
        let one_minus = 1.0 - t;
        let s = a + scale * t / one_minus;
        if !s.is_finite() {
            return 0.0;
        }
        let v = f(s) * scale / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive(g, 0.0, 1.0, tol)
}

/// Tail integral `∫_a^X f` with `X = a + span·2^j` doubled until the
/// relative Cauchy increment drops below `rel_tol`.
pub fn cauchy_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    span: f64,
    rel_tol: f64,
    max_doublings: usize,
) -> Result<f64> {
    let piece = Tolerance::new(1e-300, rel_tol * 1e-3);
    let mut lo = a;
    let mut hi = a + span;
    let mut total = adaptive(&f, lo, hi, piece)?;
    for _ in 0..max_doublings {
        lo = hi;
        hi = a + 2.0 * (hi - a);
        let inc = adaptive(&f, lo, hi, Tolerance::new(1e-300, rel_tol * 1e-3))?;
        total += inc;
        if inc.abs() <= rel_tol * total.abs() || inc == 0.0 {
            return Ok(total);
        }
    }
    Err(Error::Quadrature { partial: total })
}
