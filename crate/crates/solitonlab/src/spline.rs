//! Not-a-knot cubic splines on nonuniform grids.
//!
//! Radial derivatives of gridded quantities are taken by spline
//! differentiation rather than finite differences: the integration grid is
//! strongly nonuniform and divided differences would amplify noise.

use crate::error::{Error, Result};

/// Cubic spline interpolant with value, first and second derivative queries.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives ("moments") at the nodes.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Fit a not-a-knot cubic spline through `(x, y)`; `x` strictly increasing.
    pub fn fit(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::invalid("spline", "x and y length mismatch"));
        }
        if n < 4 {
            return Err(Error::invalid("spline", format!("need >= 4 nodes, got {n}")));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("spline", "x not strictly increasing"));
            }
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let interior = n - 2;

        // Tridiagonal system for m[1..n-1]; the not-a-knot conditions
        //   (m1-m0)/h0 = (m2-m1)/h1  and the mirrored one at the right end
        // are eliminated into the first and last interior rows.
        let mut diag = vec![0.0; interior];
        let mut lower = vec![0.0; interior];
        let mut upper = vec![0.0; interior];
        let mut rhs = vec![0.0; interior];

        for i in 1..=interior {
            let d = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
            rhs[i - 1] = d;
            lower[i - 1] = h[i - 1] / 6.0;
            diag[i - 1] = (h[i - 1] + h[i]) / 3.0;
            upper[i - 1] = h[i] / 6.0;
        }

        // m0 = (1+r)m1 - r m2 with r = h0/h1.
        let r0 = h[0] / h[1];
        diag[0] += lower[0] * (1.0 + r0);
        upper[0] -= lower[0] * r0;
        lower[0] = 0.0;

        // m_{n-1} = (1+r)m_{n-2} - r m_{n-3} with r = h_{n-2}/h_{n-3}.
        let rn = h[n - 2] / h[n - 3];
        let last = interior - 1;
        diag[last] += upper[last] * (1.0 + rn);
        lower[last] -= upper[last] * rn;
        upper[last] = 0.0;

        // Thomas algorithm.
        let mut c = vec![0.0; interior];
        let mut dsol = vec![0.0; interior];
        c[0] = upper[0] / diag[0];
        dsol[0] = rhs[0] / diag[0];
        for i in 1..interior {
            let w = diag[i] - lower[i] * c[i - 1];
            c[i] = upper[i] / w;
            dsol[i] = (rhs[i] - lower[i] * dsol[i - 1]) / w;
        }
        let mut m = vec![0.0; n];
        m[interior] = dsol[interior - 1];
        for i in (0..interior - 1).rev() {
            m[i + 1] = dsol[i] - c[i] * m[i + 2];
        }
        m[0] = (1.0 + r0) * m[1] - r0 * m[2];
        m[n - 1] = (1.0 + rn) * m[n - 2] - rn * m[n - 3];

        Ok(CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    fn segment(&self, xv: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&xv).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    pub fn value(&self, xv: f64) -> f64 {
        let i = self.segment(xv);
        let h = self.x[i + 1] - self.x[i];
        let a = self.x[i + 1] - xv;
        let b = xv - self.x[i];
        self.m[i] * a * a * a / (6.0 * h)
            + self.m[i + 1] * b * b * b / (6.0 * h)
            + (self.y[i] / h - self.m[i] * h / 6.0) * a
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }

    pub fn derivative(&self, xv: f64) -> f64 {
        let i = self.segment(xv);
        let h = self.x[i + 1] - self.x[i];
        let a = self.x[i + 1] - xv;
        let b = xv - self.x[i];
        -self.m[i] * a * a / (2.0 * h)
            + self.m[i + 1] * b * b / (2.0 * h)
            + (self.y[i + 1] - self.y[i]) / h
            - (self.m[i + 1] - self.m[i]) * h / 6.0
    }

    pub fn second_derivative(&self, xv: f64) -> f64 {
        let i = self.segment(xv);
        let h = self.x[i + 1] - self.x[i];
        (self.m[i] * (self.x[i + 1] - xv) + self.m[i + 1] * (xv - self.x[i])) / h
    }

    /// First derivative sampled at every fit node.
    pub fn derivative_at_nodes(&self) -> Vec<f64> {
        self.x.iter().map(|&xv| self.derivative(xv)).collect()
    }

    /// Second derivative sampled at every fit node.
    pub fn second_derivative_at_nodes(&self) -> Vec<f64> {
        self.x.iter().map(|&xv| self.second_derivative(xv)).collect()
    }
}
