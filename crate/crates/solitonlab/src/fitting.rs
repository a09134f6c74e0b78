//! Log-log least-squares fits for asymptotic decay rates.

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of samples a rate fit must be given.
pub const MIN_RATE_SAMPLES: usize = 20;

/// Result of fitting `|q(r)| ~ constant * r^exponent` by least squares on
/// `(log r, log |q|)`.
///
/// A quantity that vanishes identically on the window is reported with
/// `exponent = -inf` (decays faster than any power); this happens for the
/// roundness integrals, which are exactly zero under rotational symmetry.
/// JSON has no `-inf` literal, so the sentinel serializes as `null` with the
/// `identically_zero` flag set.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub exponent: f64,
    pub constant: f64,
    pub rms_residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub identically_zero: bool,
}

impl RateFit {
    pub fn is_identically_zero(&self) -> bool {
        self.identically_zero
    }
}

/// Fit a power law through strictly positive abscissae `r` and values `q`.
///
/// Samples with `q == 0` are dropped (log-undefined); if *all* samples vanish
/// the zero sentinel is returned.
pub fn fit_power_law(r: &[f64], q: &[f64]) -> Result<RateFit> {
    if r.len() != q.len() {
        return Err(Error::invalid("rate_fit", "r and q length mismatch"));
    }
    if r.len() < MIN_RATE_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_RATE_SAMPLES,
            got: r.len(),
        });
    }
    let window = (
        r.iter().cloned().fold(f64::INFINITY, f64::min),
        r.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );

    let pts: Vec<(f64, f64)> = r
        .iter()
        .zip(q)
        .filter(|(_, &qv)| qv != 0.0)
        .map(|(&rv, &qv)| (rv.ln(), qv.abs().ln()))
        .collect();

    if pts.is_empty() {
        return Ok(RateFit {
            exponent: f64::NEG_INFINITY,
            constant: 0.0,
            rms_residual: 0.0,
            window,
            samples: r.len(),
            identically_zero: true,
        });
    }
    if pts.len() < MIN_RATE_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_RATE_SAMPLES,
            got: pts.len(),
        });
    }

    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy * sxx - sx * sxy) / det;

    let rms = (pts
        .iter()
        .map(|&(x, y)| {
            let res = y - (slope * x + intercept);
            res * res
        })
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(RateFit {
        exponent: slope,
        constant: intercept.exp(),
        rms_residual: rms,
        window,
        samples: pts.len(),
        identically_zero: false,
    })
}

/// `count` log-uniform samples spanning `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn recovers_exact_power_law() {
        let r = log_spaced(1e2, 1e4, 40);
        let q: Vec<f64> = r.iter().map(|&rv| 3.7 * rv.powf(-1.25)).collect();
        let fit = fit_power_law(&r, &q).unwrap();
        assert_abs_diff_eq!(fit.exponent, -1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.constant, 3.7, epsilon = 1e-10);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn zero_quantity_reports_sentinel() {
        let r = log_spaced(1e2, 1e4, 25);
        let q = vec![0.0; 25];
        let fit = fit_power_law(&r, &q).unwrap();
        assert!(fit.is_identically_zero());
        assert_eq!(fit.constant, 0.0);
    }

    #[test]
    fn too_few_samples_rejected() {
        let r = log_spaced(1.0, 10.0, 5);
        let q = vec![1.0; 5];
        assert!(matches!(
            fit_power_law(&r, &q),
            Err(Error::TooFewSamples { .. })
        ));
    }

    proptest! {
        #[test]
        fn fit_inverts_synthesis(exp in -3.0f64..0.0, c in 0.1f64..10.0) {
            let r = log_spaced(50.0, 5e3, 30);
            let q: Vec<f64> = r.iter().map(|&rv| c * rv.powf(exp)).collect();
            let fit = fit_power_law(&r, &q).unwrap();
            prop_assert!((fit.exponent - exp).abs() < 1e-9);
            prop_assert!((fit.constant - c).abs() / c < 1e-7);
        }
    }
}
