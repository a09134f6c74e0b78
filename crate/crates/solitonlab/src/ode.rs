//! Embedded Dormand–Prince 5(4) integrator with error-per-unit-step control.
//!
//! The acceptance test for step size is `err <= tol * h / span`, so the sum of
//! local errors over the whole integration is bounded by `tol` and the
//! user-facing tolerance is a genuine global accuracy parameter. Conserved
//! quantities are *not* projected; their drift stays a meaningful a-posteriori
//! error monitor.

use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const FACTOR_MIN: f64 = 0.2;
const FACTOR_MAX: f64 = 5.0;

// Dormand-Prince 5(4) tableau (FSAL).
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// b - b*: weights of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `y' = rhs(s, y)` from `s0` to `s_end`.
///
/// * `tolerance` — global (per-unit-step accumulated) error target.
/// * `step_cap`  — upper bound on the step size as a function of `s`; used to
///   keep the output grid dense enough for downstream spline differentiation.
/// * `guard`     — validity check run on every accepted state (e.g. positivity).
/// * `on_accept` — sink for accepted nodes; called with `(s0, y0)` first.
pub fn integrate_adaptive<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    s0: f64,
    s_end: f64,
    y0: [f64; N],
    tolerance: f64,
    step_cap: impl Fn(f64) -> f64,
    guard: impl Fn(f64, &[f64; N]) -> Result<()>,
    mut on_accept: impl FnMut(f64, &[f64; N]),
) -> Result<()> {
    if !(s_end > s0) {
        return Err(Error::invalid("s_end", "integration span must be positive"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance", "must be positive"));
    }
    let span = s_end - s0;

    let mut s = s0;
    let mut y = y0;
    guard(s, &y)?;
    on_accept(s, &y);

    let mut k = [[0.0; N]; 7];
    k[0] = rhs(s, &y);
    let mut h = (step_cap(s).min(span * 1e-6)).max(span * 1e-12);

    while s < s_end {
        h = h.min(s_end - s).min(step_cap(s));
        if h < 1e-13 * s.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { s, h });
        }

        // Stages 1..6 (stage 0 is FSAL from the previous step).
        for stage in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage] = rhs(s + C[stage] * h, &ys);
        }

        // 5th-order solution is the stage-6 state (b-row equals A[6]).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                for i in 0..N {
                    y_new[i] += h * a * kj[i];
                }
            }
        }

        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let scale = 1.0 + y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();
        // Error-per-unit-step target, with a small absolute floor: near a
        // removable singularity the estimate can be dominated by round-off
        // noise that scales like h, and a pure per-unit-step test would
        // reject forever while shrinking h.
        let target = (tolerance * h / span).max(1e-3 * tolerance);
        let ratio = err / target;

        if ratio <= 1.0 {
            s += h;
            y = y_new;
            guard(s, &y)?;
            on_accept(s, &y);
            k[0] = k[6]; // FSAL
        }

        let factor = if ratio > 0.0 {
            (SAFETY * ratio.powf(-0.25)).clamp(FACTOR_MIN, FACTOR_MAX)
        } else {
            FACTOR_MAX
        };
        h *= factor;
    }
    Ok(())
}
