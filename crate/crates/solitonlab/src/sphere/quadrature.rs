//! Quadrature on the unit round sphere.
//!
//! The built-in rule is a Gauss–Legendre x trapezoid product grid: exact for
//! every spherical polynomial up to the requested degree. External rules can
//! be loaded from a plain-text `x y z w` file.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub degree: usize,
}

impl SphereQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate a function sampled at the quadrature nodes.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        assert_eq!(samples.len(), self.len());
        self.weights
            .iter()
            .zip(samples)
            .map(|(&w, &f)| w * f)
            .sum()
    }

    /// Parse a plain-text rule: one `x y z w` line per node ('#' comments).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|tok| tok.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| {
                    Error::MalformedQuadrature(format!("line {}: bad float", lineno + 1))
                })?;
            if vals.len() != 4 {
                return Err(Error::MalformedQuadrature(format!(
                    "line {}: expected `x y z w`, got {} fields",
                    lineno + 1,
                    vals.len()
                )));
            }
            let r2 = vals[0] * vals[0] + vals[1] * vals[1] + vals[2] * vals[2];
            if (r2 - 1.0).abs() > 1e-10 {
                return Err(Error::MalformedQuadrature(format!(
                    "line {}: node off the unit sphere (|x|^2 = {r2})",
                    lineno + 1
                )));
            }
            nodes.push([vals[0], vals[1], vals[2]]);
            weights.push(vals[3]);
        }
        if nodes.is_empty() {
            return Err(Error::MalformedQuadrature("no nodes".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 4.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::MalformedQuadrature(format!(
                "weights sum to {total}, expected 4*pi"
            )));
        }
        Ok(SphereQuadrature {
            nodes,
            weights,
            degree: 0, // unknown for external rules; validated by the caller
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            out.push_str(&format!(
                "{:.16e} {:.16e} {:.16e} {:.16e}\n",
                node[0], node[1], node[2], w
            ));
        }
        out
    }
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Product rule exact for spherical polynomials of the given degree.
pub fn product_rule(degree: usize) -> SphereQuadrature {
    let n_theta = degree / 2 + 1; // Gauss-Legendre exact to 2n-1 >= degree
    let n_phi = degree + 1; // trapezoid exact for harmonics e^{im phi}, |m| <= degree
    let (ct, wt) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;

    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (i, &c) in ct.iter().enumerate() {
        let st = (1.0 - c * c).sqrt();
        for j in 0..n_phi {
            let phi = dphi * j as f64;
            nodes.push([st * phi.cos(), st * phi.sin(), c]);
            weights.push(wt[i] * dphi);
        }
    }
    SphereQuadrature {
        nodes,
        weights,
        degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// Exact sphere average of x^a y^b z^c (zero unless all even).
    fn monomial_integral(a: u32, b: u32, c: u32) -> f64 {
        if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
            return 0.0;
        }
        fn double_fact(n: i64) -> f64 {
            if n <= 0 {
                1.0
            } else {
                n as f64 * double_fact(n - 2)
            }
        }
        4.0 * PI * double_fact(a as i64 - 1) * double_fact(b as i64 - 1)
            * double_fact(c as i64 - 1)
            / double_fact((a + b + c) as i64 + 1)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // x^14 on [-1,1]: 2/15, exactly integrable at n=8.
        let got: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert_abs_diff_eq!(got, 2.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn product_rule_exact_on_monomials() {
        let degree = 28; // 2*12 + 4
        let quad = product_rule(degree);
        for (a, b, c) in [(0, 0, 0), (2, 0, 0), (0, 4, 2), (6, 2, 4), (10, 8, 10), (28, 0, 0)] {
            let samples: Vec<f64> = quad
                .nodes
                .iter()
                .map(|n| n[0].powi(a as i32) * n[1].powi(b as i32) * n[2].powi(c as i32))
                .collect();
            let got = quad.integrate(&samples);
            assert_abs_diff_eq!(got, monomial_integral(a, b, c), epsilon = 1e-12);
        }
    }

    #[test]
    fn text_round_trip() {
        let quad = product_rule(6);
        let text = quad.to_text();
        let back = SphereQuadrature::from_text(&text).unwrap();
        assert_eq!(back.len(), quad.len());
        let total: f64 = back.weights.iter().sum();
        assert_abs_diff_eq!(total, 4.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn loader_rejects_bad_input() {
        assert!(SphereQuadrature::from_text("1 0 0\n").is_err());
        assert!(SphereQuadrature::from_text("2 0 0 1.0\n").is_err());
        assert!(SphereQuadrature::from_text("").is_err());
        // Wrong total weight.
        assert!(SphereQuadrature::from_text("1 0 0 1.0\n0 1 0 1.0\n").is_err());
    }
}
