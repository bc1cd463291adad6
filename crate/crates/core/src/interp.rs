//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).
//! Nonnegative data stay nonnegative, which matters when resampling `ψ²`.

#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    /// `x` must be strictly increasing with at least two points.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert!(
            x.len() >= 2 && x.len() == y.len(),
            "pchip needs matching data of length ≥ 2"
        );
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = end_slope(
            h[0],
            h.get(1).copied().unwrap_or(h[0]),
            delta[0],
            delta.get(1).copied().unwrap_or(delta[0]),
        );
        d[n - 1] = end_slope(
            h[n - 2],
            if n > 2 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n > 2 { delta[n - 3] } else { delta[n - 2] },
        );
        Self { x, y, d }
    }

    /// Evaluates the interpolant; outside the data range the end values
    /// are held constant.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&xi| xi <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h * h10 * self.d[i] + h01 * self.y[i + 1] + h * h11 * self.d[i + 1]
    }
}

// three-point one-sided slope, clipped to preserve shape
fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d * del0 <= 0.0 {
        0.0
    } else if del0 * del1 <= 0.0 && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}
