//! Construction of the rotationally symmetric steady soliton profile.
//!
//! The metric ansatz `g = ds^2 + phi(s)^2 g_{S^2}` together with `Ric = D^2 f`
//! reduces to the second-order system in [`crate::warped::soliton_rhs`], with
//! the conserved first integral `R + f'^2` normalized to 1 (so `R(0) = 1`,
//! `f(0) = 1`). The tip `s = 0` is a removable singularity of the reduced
//! system; integration is launched from a power series at a small `s_start`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::integrate_adaptive;
use crate::warped::{scalar_on_shell, soliton_rhs};

/// Default arc-length at which integration takes over from the tip series.
pub const DEFAULT_S_START: f64 = 1e-2;
/// Innermost grid node kept from the series segment. Below this, the
/// cancellation in `1 - phi'^2` costs more than the node is worth.
pub const TIP_GRID_MIN: f64 = 1e-3;
/// Grid-density cap `h <= GRID_CAP_SCALE * max(1, s)^{5/4}`, sized so that
/// spline second derivatives on the stored grid are accurate to ~1e-7 in the
/// identity window; independent of the ODE tolerance by design.
pub const GRID_CAP_SCALE: f64 = 3e-4;

/// Power series of the profile at the tip:
/// `phi(s) = s + a3 s^3 + a5 s^5 + ...`, `f(s) = f0 + b2 s^2 + b4 s^4 + ...`.
///
/// Smoothness at the tip forces phi odd and f even; the two reduced equations
/// determine the coefficients recursively once the scale is fixed by
/// `R(0) = 1` (equivalently `a3 = -1/36`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TipExpansion {
    /// Truncation order: residuals of both reduced equations vanish below it.
    pub order: usize,
    /// Coefficients of the odd powers `s^1, s^3, s^5, ...`.
    pub phi_coeffs: Vec<f64>,
    /// Coefficients of the even powers `s^0, s^2, s^4, ...`.
    pub f_coeffs: Vec<f64>,
    /// Value of the potential at the tip (normalization `inf f = 1`).
    pub f0: f64,
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_deriv(a: &[f64]) -> Vec<f64> {
    if a.len() <= 1 {
        return vec![0.0];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn poly_eval(a: &[f64], s: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

/// Residual polynomials of the two reduced equations:
/// `A = phi phi'' + phi'^2 + phi phi' f' - 1` and `B = phi f'' + 2 phi''`.
fn residual_polys(phi: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let phi_p = poly_deriv(phi);
    let phi_pp = poly_deriv(&phi_p);
    let f_p = poly_deriv(f);
    let f_pp = poly_deriv(&f_p);

    let mut a = poly_mul(phi, &phi_pp);
    let pp2 = poly_mul(&phi_p, &phi_p);
    let advect = poly_mul(&poly_mul(phi, &phi_p), &f_p);
    let maxlen = a.len().max(pp2.len()).max(advect.len()).max(1);
    a.resize(maxlen, 0.0);
    for (k, &c) in pp2.iter().enumerate() {
        a[k] += c;
    }
    for (k, &c) in advect.iter().enumerate() {
        a[k] += c;
    }
    a[0] -= 1.0;

    let mut b = poly_mul(phi, &f_pp);
    let blen = b.len().max(phi_pp.len() + 1);
    b.resize(blen, 0.0);
    for (k, &c) in phi_pp.iter().enumerate() {
        b[k] += 2.0 * c;
    }
    (a, b)
}

/// Compute the tip expansion to the requested truncation order (>= 3).
///
/// The pair `(a_{2k+1}, b_{2k})` is determined by the vanishing of the
/// order-`2k` coefficient of `A` and order-`2k-1` coefficient of `B`; the
/// `k = 1` system is rank-deficient (the residual scaling freedom) and is
/// closed by the normalization `R(0) = 1`.
pub fn tip_series(order: usize) -> Result<TipExpansion> {
    if order < 3 {
        return Err(Error::invalid("order", format!("must be >= 3, got {order}")));
    }
    let pairs = order / 2;
    let top = 2 * pairs + 1;

    let mut phi = vec![0.0; top + 1];
    let mut f = vec![0.0; top];
    phi[1] = 1.0;
    f[0] = 1.0;
    // R(0) = -36 a3 = 1 and the order-s^2 match b2 = -6 a3.
    phi[3] = -1.0 / 36.0;
    f[2] = 1.0 / 6.0;

    for k in 2..=pairs {
        let (ra, rb) = residual_polys(&phi, &f);
        let la = ra.get(2 * k).copied().unwrap_or(0.0);
        let lb = rb.get(2 * k - 1).copied().unwrap_or(0.0);
        let kk = k as f64;
        // Linear coefficients of the unknowns in the two residual rows.
        let alpha = (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        let beta = 2.0 * kk;
        let gamma = 2.0 * (2.0 * kk + 1.0) * (2.0 * kk);
        let delta = 2.0 * kk * (2.0 * kk - 1.0);
        let det = alpha * delta - beta * gamma;
        let a_new = (-la * delta + lb * beta) / det;
        let b_new = (-alpha * lb + gamma * la) / det;
        phi[2 * k + 1] = a_new;
        f[2 * k] = b_new;
    }

    // Every determined residual coefficient must now vanish.
    let (ra, rb) = residual_polys(&phi, &f);
    for (p, &c) in ra.iter().enumerate().take(2 * pairs + 1) {
        if c.abs() > 1e-12 {
            return Err(Error::invalid(
                "order",
                format!("series recursion failed: A[{p}] = {c:.3e}"),
            ));
        }
    }
    for (p, &c) in rb.iter().enumerate().take(2 * pairs) {
        if c.abs() > 1e-12 {
            return Err(Error::invalid(
                "order",
                format!("series recursion failed: B[{p}] = {c:.3e}"),
            ));
        }
    }

    Ok(TipExpansion {
        order,
        phi_coeffs: (0..=pairs).map(|k| phi[2 * k + 1]).collect(),
        f_coeffs: (0..=pairs).map(|k| f[2 * k]).collect(),
        f0: 1.0,
    })
}

impl TipExpansion {
    fn phi_dense(&self) -> Vec<f64> {
        let mut p = vec![0.0; 2 * self.phi_coeffs.len()];
        for (k, &c) in self.phi_coeffs.iter().enumerate() {
            p[2 * k + 1] = c;
        }
        p
    }

    fn f_dense(&self) -> Vec<f64> {
        let mut p = vec![0.0; 2 * self.f_coeffs.len() - 1];
        for (k, &c) in self.f_coeffs.iter().enumerate() {
            p[2 * k] = c;
        }
        p
    }

    pub fn phi_at(&self, s: f64) -> f64 {
        poly_eval(&self.phi_dense(), s)
    }

    pub fn phi_prime_at(&self, s: f64) -> f64 {
        poly_eval(&poly_deriv(&self.phi_dense()), s)
    }

    pub fn f_at(&self, s: f64) -> f64 {
        poly_eval(&self.f_dense(), s)
    }

    pub fn f_prime_at(&self, s: f64) -> f64 {
        poly_eval(&poly_deriv(&self.f_dense()), s)
    }

    /// `1 - phi'(s)^2` evaluated without the catastrophic cancellation of
    /// forming `phi'` first; used by near-tip curvature checks.
    pub fn one_minus_phi_prime_sq(&self, s: f64) -> f64 {
        // phi' - 1 from the tail of the derivative series (constant term 1
        // dropped), so the result keeps full relative precision at small s.
        let mut tail = poly_deriv(&self.phi_dense());
        tail[0] = 0.0;
        let dev = poly_eval(&tail, s);
        -dev * (dev + 2.0)
    }

    /// Absolute residuals of the two reduced equations at `s` (truncation tail).
    pub fn residuals_at(&self, s: f64) -> (f64, f64) {
        let (ra, rb) = residual_polys(&self.phi_dense(), &self.f_dense());
        (poly_eval(&ra, s).abs(), poly_eval(&rb, s).abs())
    }
}

/// Radial grid of the constructed soliton.
///
/// Immutable once built; all downstream consumers take `&SolitonProfile` and
/// may share it freely across threads.
#[derive(Debug, Clone)]
pub struct SolitonProfile {
    pub s_grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_prime: Vec<f64>,
    pub f: Vec<f64>,
    pub f_prime: Vec<f64>,
    pub integrator_tolerance: f64,
    /// Tip series used to launch the integration (absent for imported
    /// profiles without metadata).
    pub tip: Option<TipExpansion>,
    pub s_start: f64,
}

/// Interpolated state at a potential level set `{f = r}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelSlice {
    pub s: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub f: f64,
    pub f_prime: f64,
}

/// Integrate the reduced system from series data at `s_start` out to `s_max`.
///
/// The grid stores every accepted step plus a series-evaluated segment on
/// `[TIP_GRID_MIN, s_start)`; the step cap keeps it dense enough that spline
/// interpolation error stays below the identity-check budget.
pub fn integrate_profile(
    expansion: &TipExpansion,
    s_start: f64,
    s_max: f64,
    tolerance: f64,
) -> Result<SolitonProfile> {
    if !(s_start > 0.0) || !(s_max > s_start) {
        return Err(Error::invalid(
            "s_start",
            format!("need 0 < s_start < s_max, got {s_start} and {s_max}"),
        ));
    }
    if !(tolerance > 0.0) || tolerance >= 1e-2 {
        return Err(Error::invalid("tolerance", "must lie in (0, 1e-2)"));
    }
    let (res_a, res_b) = expansion.residuals_at(s_start);
    let res = res_a.max(res_b);
    if res > tolerance {
        return Err(Error::SeriesNotConverged {
            s: s_start,
            residual: res,
            tolerance,
        });
    }

    let mut s_grid = Vec::new();
    let mut phi = Vec::new();
    let mut phi_p = Vec::new();
    let mut f = Vec::new();
    let mut f_p = Vec::new();

    // Series segment, log-spaced. Near the tip, spline second derivatives of
    // curvature data amplify the `1 - phi'^2` round-off like 1/h^2, so the
    // segment is kept sparse; identity windows start well outside it anyway.
    let tip_nodes = 24usize;
    if s_start > TIP_GRID_MIN {
        let ratio = (s_start / TIP_GRID_MIN).ln();
        for k in 0..tip_nodes {
            let s = TIP_GRID_MIN * (ratio * k as f64 / tip_nodes as f64).exp();
            s_grid.push(s);
            phi.push(expansion.phi_at(s));
            phi_p.push(expansion.phi_prime_at(s));
            f.push(expansion.f_at(s));
            f_p.push(expansion.f_prime_at(s));
        }
    }

    let y0 = [
        expansion.phi_at(s_start),
        expansion.phi_prime_at(s_start),
        expansion.f_at(s_start),
        expansion.f_prime_at(s_start),
    ];

    integrate_adaptive(
        |_s, y: &[f64; 4]| {
            let (phi_pp, f_pp) = soliton_rhs(y[0], y[1], y[3]);
            [y[1], phi_pp, y[3], f_pp]
        },
        s_start,
        s_max,
        y0,
        tolerance,
        |s| GRID_CAP_SCALE * s.max(1.0).powf(1.25),
        |s, y| {
            if y[0] <= 0.0 {
                Err(Error::NonPositiveWarp { s })
            } else {
                Ok(())
            }
        },
        |s, y| {
            s_grid.push(s);
            phi.push(y[0]);
            phi_p.push(y[1]);
            f.push(y[2]);
            f_p.push(y[3]);
        },
    )?;

    let profile = SolitonProfile {
        s_grid,
        phi,
        phi_prime: phi_p,
        f,
        f_prime: f_p,
        integrator_tolerance: tolerance,
        tip: Some(expansion.clone()),
        s_start,
    };
    profile.validate()?;
    Ok(profile)
}

impl SolitonProfile {
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    /// Basic structural checks: monotone grid, positive warp, increasing f.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n < 8 {
            return Err(Error::MalformedProfile(format!("only {n} nodes")));
        }
        for field in [&self.phi, &self.phi_prime, &self.f, &self.f_prime] {
            if field.len() != n {
                return Err(Error::MalformedProfile("column length mismatch".into()));
            }
        }
        for i in 1..n {
            if !(self.s_grid[i] > self.s_grid[i - 1]) {
                return Err(Error::MalformedProfile(format!(
                    "s grid not increasing at index {i}"
                )));
            }
            if !(self.f[i] > self.f[i - 1]) {
                return Err(Error::MalformedProfile(format!(
                    "f not strictly increasing at index {i}"
                )));
            }
        }
        if self.phi.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::MalformedProfile("phi not positive".into()));
        }
        Ok(())
    }

    /// Scalar curvature on the grid (second derivatives eliminated through
    /// the reduction).
    pub fn scalar_curvature(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| scalar_on_shell(self.phi[i], self.phi_prime[i], self.f_prime[i]))
            .collect()
    }

    /// Max over the grid of `|R + f'^2 - 1|`: the a-posteriori conservation
    /// monitor of the integrator.
    pub fn first_integral_drift(&self) -> f64 {
        let r = self.scalar_curvature();
        (0..self.len())
            .map(|i| (r[i] + self.f_prime[i] * self.f_prime[i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn f_range(&self) -> (f64, f64) {
        let lo = self.tip.as_ref().map_or(self.f[0], |t| t.f0);
        (lo, *self.f.last().unwrap())
    }

    /// Branch-free monotone inverse of `f`: the grid bracket is refined with
    /// a cubic Hermite model of `f` (slopes are stored, no global spline).
    pub fn level_set_lookup(&self, r: f64) -> Result<LevelSlice> {
        let (lo, hi) = self.f_range();
        if !(r >= lo && r <= hi) {
            return Err(Error::LevelOutOfRange { r, lo, hi });
        }

        // Below the stored grid: invert the tip series.
        if r < self.f[0] {
            let tip = self.tip.as_ref().ok_or(Error::LevelOutOfRange {
                r,
                lo: self.f[0],
                hi,
            })?;
            let mut s = ((r - tip.f0).max(0.0) / tip.f_coeffs[1]).sqrt();
            for _ in 0..60 {
                let fv = tip.f_at(s) - r;
                let fp = tip.f_prime_at(s);
                if fp <= 0.0 {
                    break;
                }
                let step = fv / fp;
                s -= step;
                if step.abs() <= 1e-15 * s.abs().max(1e-30) {
                    break;
                }
            }
            let s = s.max(0.0);
            return Ok(LevelSlice {
                s,
                phi: tip.phi_at(s),
                phi_prime: tip.phi_prime_at(s),
                f: tip.f_at(s),
                f_prime: tip.f_prime_at(s),
            });
        }

        let idx = match self
            .f
            .binary_search_by(|v| v.partial_cmp(&r).unwrap())
        {
            Ok(i) => {
                let i = i.min(self.len() - 1);
                return Ok(LevelSlice {
                    s: self.s_grid[i],
                    phi: self.phi[i],
                    phi_prime: self.phi_prime[i],
                    f: self.f[i],
                    f_prime: self.f_prime[i],
                });
            }
            Err(i) => i.clamp(1, self.len() - 1) - 1,
        };

        let s = self.invert_on_segment(idx, r);
        Ok(self.hermite_slice(idx, s))
    }

    fn invert_on_segment(&self, i: usize, r: f64) -> f64 {
        let (s0, s1) = (self.s_grid[i], self.s_grid[i + 1]);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        let mut s = s0 + (s1 - s0) * (r - f0) / (f1 - f0);
        for _ in 0..40 {
            let (fv, fp) = self.hermite_f(i, s);
            let step = (fv - r) / fp;
            s = (s - step).clamp(s0, s1);
            if step.abs() <= 1e-15 * s.abs().max(1e-30) {
                break;
            }
        }
        s
    }

    /// Cubic Hermite value and slope of `f` on segment `i`.
    fn hermite_f(&self, i: usize, s: f64) -> (f64, f64) {
        hermite(
            self.s_grid[i],
            self.s_grid[i + 1],
            self.f[i],
            self.f[i + 1],
            self.f_prime[i],
            self.f_prime[i + 1],
            s,
        )
    }

    fn hermite_slice(&self, i: usize, s: f64) -> LevelSlice {
        let (fv, fp) = self.hermite_f(i, s);
        // phi interpolated with its stored slope phi'; phi' interpolated with
        // the on-shell phi'' as slope data.
        let (pp0, _) = soliton_rhs(self.phi[i], self.phi_prime[i], self.f_prime[i]);
        let (pp1, _) = soliton_rhs(self.phi[i + 1], self.phi_prime[i + 1], self.f_prime[i + 1]);
        let (phi_v, _) = hermite(
            self.s_grid[i],
            self.s_grid[i + 1],
            self.phi[i],
            self.phi[i + 1],
            self.phi_prime[i],
            self.phi_prime[i + 1],
            s,
        );
        let (phip_v, _) = hermite(
            self.s_grid[i],
            self.s_grid[i + 1],
            self.phi_prime[i],
            self.phi_prime[i + 1],
            pp0,
            pp1,
            s,
        );
        LevelSlice {
            s,
            phi: phi_v,
            phi_prime: phip_v,
            f: fv,
            f_prime: fp,
        }
    }

    /// Serialize as CSV with the fixed header, full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 110 + 40);
        out.push_str("s,phi,phi_prime,f,f_prime\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.s_grid[i], self.phi[i], self.phi_prime[i], self.f[i], self.f_prime[i]
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str, meta: Option<&ProfileMetadata>) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedProfile("empty file".into()))?;
        if header.trim() != "s,phi,phi_prime,f,f_prime" {
            return Err(Error::MalformedProfile(format!(
                "unexpected header `{header}`"
            )));
        }
        let mut cols: [Vec<f64>; 5] = Default::default();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::MalformedProfile(format!(
                    "line {}: expected 5 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            for (c, field) in fields.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::MalformedProfile(format!("line {}: bad float `{field}`", lineno + 2))
                })?;
                cols[c].push(v);
            }
        }
        let [s_grid, phi, phi_prime, f, f_prime] = cols;
        let tip = meta.and_then(|m| tip_series(m.series_order).ok());
        let profile = SolitonProfile {
            s_grid,
            phi,
            phi_prime,
            f,
            f_prime,
            integrator_tolerance: meta.map_or(1e-10, |m| m.tolerance),
            tip,
            s_start: meta.map_or(DEFAULT_S_START, |m| m.s_start),
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let meta = ProfileMetadata::read_sidecar(path).ok();
        Self::from_csv_str(&text, meta.as_ref())
    }

    pub fn metadata(&self) -> ProfileMetadata {
        ProfileMetadata {
            tolerance: self.integrator_tolerance,
            s_start: self.s_start,
            series_order: self.tip.as_ref().map_or(0, |t| t.order),
            s_max: *self.s_grid.last().unwrap(),
            nodes: self.len(),
            f_max: *self.f.last().unwrap(),
            first_integral_drift: self.first_integral_drift(),
        }
    }
}

/// Cubic Hermite interpolation of `(value, slope)` on `[x0, x1]`.
fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let v = y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + h * d0 * (t3 - 2.0 * t2 + t)
        + h * d1 * (t3 - t2);
    let dv = (y0 * (6.0 * t2 - 6.0 * t) + y1 * (6.0 * t - 6.0 * t2)) / h
        + d0 * (3.0 * t2 - 4.0 * t + 1.0)
        + d1 * (3.0 * t2 - 2.0 * t);
    (v, dv)
}

/// Sidecar metadata stored with every exported profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileMetadata {
    pub tolerance: f64,
    pub s_start: f64,
    pub series_order: usize,
    pub s_max: f64,
    pub nodes: usize,
    pub f_max: f64,
    pub first_integral_drift: f64,
}

impl ProfileMetadata {
    pub fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
        let mut os = csv_path.as_os_str().to_os_string();
        os.push(".meta.json");
        os.into()
    }

    pub fn write_sidecar(&self, csv_path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(Self::sidecar_path(csv_path), text)?;
        Ok(())
    }

    pub fn read_sidecar(csv_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(Self::sidecar_path(csv_path))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lowest_coefficients_match_the_normalization() {
        let exp = tip_series(3).unwrap();
        assert_abs_diff_eq!(exp.phi_coeffs[0], 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(exp.phi_coeffs[1], -1.0 / 36.0, epsilon = 1e-16);
        assert_abs_diff_eq!(exp.f_coeffs[0], 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(exp.f_coeffs[1], 1.0 / 6.0, epsilon = 1e-16);
        assert_eq!(exp.f0, 1.0);
    }

    #[test]
    fn scalar_curvature_and_gradient_at_tip() {
        let exp = tip_series(9).unwrap();
        // R(0) = 1 and f'(0) = 0 by construction; evaluate the series limit.
        let s = 1e-5;
        let one_minus = exp.one_minus_phi_prime_sq(s);
        let phi = exp.phi_at(s);
        // sec_rad -> -6 a3 = 1/6, sec_sph -> 1/6, R -> 1.
        let sec_sph = one_minus / (phi * phi);
        assert_abs_diff_eq!(sec_sph, 1.0 / 6.0, epsilon = 1e-11);
        assert_abs_diff_eq!(exp.f_prime_at(0.0), 0.0, epsilon = 0.0);
        let r0 = 6.0 * sec_sph; // equal sectional curvatures at the tip
        assert_abs_diff_eq!(r0, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn higher_coefficients_frozen_values() {
        // Derived by the order-4/5 residual match; cross-checked by the tip
        // limit R''(0) = -2/9 of the scalar evolution identity.
        let exp = tip_series(5).unwrap();
        assert_abs_diff_eq!(exp.phi_coeffs[2], 29.0 / 21600.0, epsilon = 1e-16);
        assert_abs_diff_eq!(exp.f_coeffs[2], -1.0 / 270.0, epsilon = 1e-16);
        let r2 = 30.0 * exp.phi_coeffs[1].powi(2) - 100.0 * exp.phi_coeffs[2];
        assert_abs_diff_eq!(2.0 * r2, -2.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn residual_order_scales_with_truncation() {
        for order in [3usize, 5, 7] {
            let exp = tip_series(order).unwrap();
            let (ra1, rb1) = exp.residuals_at(2e-2);
            let (ra2, rb2) = exp.residuals_at(1e-2);
            // First surviving residual power is > order: halving s must
            // shrink the tail by at least ~2^order (up to the f64 floor).
            let shrink = 2.0f64.powi(order as i32);
            if ra1 > 1e-13 {
                assert!(ra2 <= ra1 / shrink * 4.0, "A residual order too low at {order}");
            }
            if rb1 > 1e-13 {
                assert!(rb2 <= rb1 / shrink * 4.0, "B residual order too low at {order}");
            }
            // Truncation tail bound at the launch point.
            let bound = 10.0 * 2e-2f64.powi(order as i32 + 1);
            assert!(ra1 <= bound.max(1e-13), "A launch residual {ra1:.3e}");
            assert!(rb1 <= bound.max(1e-13), "B launch residual {rb1:.3e}");
        }
    }

    fn small_profile() -> SolitonProfile {
        let exp = tip_series(9).unwrap();
        integrate_profile(&exp, DEFAULT_S_START, 50.0, 1e-9).unwrap()
    }

    #[test]
    fn first_integral_within_ten_tolerances() {
        let p = small_profile();
        assert!(p.first_integral_drift() <= 10.0 * p.integrator_tolerance);
    }

    #[test]
    fn warp_over_s_tends_to_one_at_tip() {
        let p = small_profile();
        assert_abs_diff_eq!(p.phi[0] / p.s_grid[0], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn f_is_strictly_increasing_with_positive_slope() {
        let p = small_profile();
        assert!(p.f_prime.iter().all(|&v| v >= 0.0));
        assert!(p.f.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn level_lookup_endpoints_and_monotonicity() {
        let p = small_profile();
        let tip = p.level_set_lookup(1.0).unwrap();
        assert_abs_diff_eq!(tip.s, 0.0, epsilon = 1e-12);
        let (_, f_hi) = p.f_range();
        let end = p.level_set_lookup(f_hi).unwrap();
        assert_abs_diff_eq!(end.s, *p.s_grid.last().unwrap(), epsilon = 1e-12);

        let mut last_s = -1.0;
        for r in [1.0, 1.5, 2.0, 5.0, 10.0, 20.0, 40.0] {
            let slice = p.level_set_lookup(r).unwrap();
            assert!((slice.f - r).abs() <= 1e-9 * r, "inverse accuracy at r={r}");
            assert!(slice.s > last_s, "monotonicity violated at r={r}");
            last_s = slice.s;
        }
    }

    #[test]
    fn lookup_rejects_out_of_range() {
        let p = small_profile();
        assert!(matches!(
            p.level_set_lookup(0.5),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            p.level_set_lookup(1e9),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let p = small_profile();
        let meta = p.metadata();
        let text = p.to_csv();
        let q = SolitonProfile::from_csv_str(&text, Some(&meta)).unwrap();
        assert_eq!(p.len(), q.len());
        for i in (0..p.len()).step_by(97) {
            assert_eq!(p.s_grid[i], q.s_grid[i]);
            assert_eq!(p.phi[i], q.phi[i]);
            assert_eq!(p.f_prime[i], q.f_prime[i]);
        }
    }

    #[test]
    fn rejects_bad_preconditions() {
        let exp = tip_series(5).unwrap();
        assert!(integrate_profile(&exp, 0.0, 10.0, 1e-9).is_err());
        assert!(integrate_profile(&exp, 1.0, 0.5, 1e-9).is_err());
        // Series launched far outside its radius of accuracy.
        assert!(matches!(
            integrate_profile(&exp, 3.0, 10.0, 1e-12),
            Err(Error::SeriesNotConverged { .. })
        ));
    }
}
