//! Not-a-knot cubic spline interpolation.
//!
//! The interpolant is C² and reproduces any cubic exactly, so tabulated data
//! drawn from a polynomial of degree ≤ 3 comes back without interpolation
//! error.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    curvature: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline. Needs at least four strictly increasing knots.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.len() < 4 {
            return Err(Error::Invalid(
                "spline needs at least 4 samples".to_string(),
            ));
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite sample".to_string()));
        }
        if let Some(w) = knots.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Invalid(format!(
                "samples must be strictly increasing in u ({} then {})",
                w[0], w[1]
            )));
        }
        let curvature = not_a_knot_curvature(&knots, &values);
        Ok(Self {
            knots,
            values,
            curvature,
        })
    }

    pub fn lo(&self) -> f64 {
        self.knots[0]
    }

    pub fn hi(&self) -> f64 {
        *self.knots.last().expect("non-empty")
    }

    /// Evaluates the spline. Outside the knot range the end pieces are
    /// extended.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len() - 1;
        let i = match self.knots.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(n - 1),
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
    }
}

fn not_a_knot_curvature(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len() - 1;
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

    // Unknowns M_1..M_{n-1}; M_0 and M_n are eliminated with the
    // not-a-knot conditions (third derivative continuous at x_1 and x_{n-1}).
    let m = n - 1;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for row in 0..m {
        let i = row + 1;
        sub[row] = h[i - 1];
        diag[row] = 2.0 * (h[i - 1] + h[i]);
        sup[row] = h[i];
        rhs[row] = 6.0 * (slope[i] - slope[i - 1]);
    }
    // M_0 = M_1 - h0/h1 (M_2 - M_1)
    let r0 = h[0] / h[1];
    diag[0] += sub[0] * (1.0 + r0);
    sup[0] -= sub[0] * r0;
    // M_n = M_{n-1} + h_{n-1}/h_{n-2} (M_{n-1} - M_{n-2})
    let rn = h[n - 1] / h[n - 2];
    diag[m - 1] += sup[m - 1] * (1.0 + rn);
    sub[m - 1] -= sup[m - 1] * rn;

    // Four or more knots leave at least two unknowns.
    let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);

    let mut out = Vec::with_capacity(n + 1);
    out.push(inner[0] - r0 * (inner[1] - inner[0]));
    out.extend_from_slice(&inner);
    out.push(inner[m - 1] + rn * (inner[m - 1] - inner[m - 2]));
    out
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
