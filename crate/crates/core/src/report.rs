//! Convergence reports shared by the eigenfunction and orthogonal-polynomial
//! harnesses.

use serde::{Serialize, Serializer};

/// Errors below this are indistinguishable from quadrature noise when
/// judging whether a sequence decreases.
pub const TREND_NOISE_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    #[serde(rename = "decreasing-or-flat")]
    DecreasingOrFlat,
    #[serde(rename = "not-decreasing")]
    NotDecreasing,
}

impl Trend {
    /// Nonincreasing up to [`TREND_NOISE_FLOOR`].
    pub fn of(errors: &[f64]) -> Self {
        if errors.windows(2).all(|w| w[1] <= w[0] + TREND_NOISE_FLOOR) {
            Self::DecreasingOrFlat
        } else {
            Self::NotDecreasing
        }
    }
}

/// `β` as a JSON number, or the string `"inf"`.
fn serialize_beta<S: Serializer>(beta: &f64, s: S) -> Result<S::Ok, S::Error> {
    if beta.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*beta)
    }
}

/// Errors `|∫f dμ_k − ∫f dμ*|` of one test function along a `k` sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub family: String,
    pub potential: String,
    #[serde(serialize_with = "serialize_beta")]
    pub beta: f64,
    pub k_list: Vec<usize>,
    pub f_name: String,
    pub errors: Vec<f64>,
    pub trend: Trend,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn row(&self, f_name: &str) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.f_name == f_name)
    }

    /// Largest error over all rows at position `i` of the `k` list.
    pub fn max_error_at(&self, i: usize) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.errors.get(i))
            .fold(0.0, |m, e| m.max(*e))
    }

    pub fn all_decreasing(&self) -> bool {
        self.rows.iter().all(|r| r.trend == Trend::DecreasingOrFlat)
    }
}

/// A bounded continuous test function with a stable name.
#[derive(Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

fn bump(x: f64) -> f64 {
    // smooth, supported in (0.2, 0.8)
    let s = (x - 0.5) / 0.3;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// `{1, x², cos πx, |x|, bump on (0.2, 0.8)}`.
pub fn default_panel() -> Vec<TestFunction> {
    vec![
        TestFunction {
            name: "one",
            f: |_| 1.0,
        },
        TestFunction {
            name: "x^2",
            f: |x| x * x,
        },
        TestFunction {
            name: "cos(pi x)",
            f: |x| (std::f64::consts::PI * x).cos(),
        },
        TestFunction {
            name: "|x|",
            f: f64::abs,
        },
        TestFunction {
            name: "bump(0.2,0.8)",
            f: bump,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_respects_noise_floor() {
        assert_eq!(
            Trend::of(&[0.1, 0.05, 0.05000001, 0.01]),
            Trend::DecreasingOrFlat
        );
        assert_eq!(Trend::of(&[1e-6, 5e-6, 2e-6]), Trend::DecreasingOrFlat);
        assert_eq!(Trend::of(&[0.01, 0.02]), Trend::NotDecreasing);
    }

    #[test]
    fn json_shape() {
        let report = ConvergenceReport {
            rows: vec![ConvergenceRow {
                family: "schrodinger".into(),
                potential: "exponential(gamma=1)".into(),
                beta: f64::INFINITY,
                k_list: vec![10, 20],
                f_name: "one".into(),
                errors: vec![1e-6, 2e-7],
                trend: Trend::DecreasingOrFlat,
            }],
        };
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.starts_with("[{"));
        assert!(json.contains(r#""beta":"inf""#));
        assert!(json.contains(r#""trend":"decreasing-or-flat""#));
    }
}
