//! Finite-difference validation of the covariant derivatives of the sphere
//! bases.
//!
//! The Galerkin assembly trusts closed-form covariant derivatives of the
//! one-form and tensor basis fields. Here each formula is checked against a
//! geodesic-transport derivative: walk a great circle through the point,
//! parallel-transport the test vectors (a rotation in the plane of the
//! circle), and differencing the pairing. The two computations share nothing
//! but the basis field values themselves.

use solitonlab::sphere::{HarmonicBasis, OneFormMode, PointEval, TensorMode};

const H: f64 = 1e-4;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Point on the great circle through `n` in direction `xhat`.
fn geodesic(n: [f64; 3], xhat: [f64; 3], t: f64) -> [f64; 3] {
    let (c, s) = (t.cos(), t.sin());
    [
        c * n[0] + s * xhat[0],
        c * n[1] + s * xhat[1],
        c * n[2] + s * xhat[2],
    ]
}

/// Parallel transport of `v` from `n` along the circle to parameter `t`
/// (rotation in the (n, xhat)-plane; the orthogonal complement is fixed).
fn transport(n: [f64; 3], xhat: [f64; 3], v: [f64; 3], t: f64) -> [f64; 3] {
    let (c, s) = (t.cos(), t.sin());
    let vn = dot(v, n);
    let vx = dot(v, xhat);
    let mut out = v;
    for i in 0..3 {
        out[i] += (c - 1.0) * (vn * n[i] + vx * xhat[i]) + s * (vn * xhat[i] - vx * n[i]);
    }
    out
}

struct Scene {
    n: [f64; 3],
    xhat: [f64; 3],
    v: [f64; 3],
    w: [f64; 3],
}

fn scenes() -> Vec<Scene> {
    // A few generic points with tangent directions/test vectors.
    let raw = [
        ([0.6, -0.48, 0.64], [1.0, 0.3, -0.2], [0.2, 1.0, 0.4]),
        ([0.0, 0.8, -0.6], [-0.5, 0.6, 0.8], [1.0, -0.1, 0.0]),
        ([-0.577, 0.577, 0.577], [0.9, 0.1, 0.5], [0.0, 1.0, -1.0]),
    ];
    raw.iter()
        .map(|&(n, d1, d2)| {
            let n = normalize(n);
            let proj = |d: [f64; 3]| {
                let dn = dot(d, n);
                normalize([d[0] - dn * n[0], d[1] - dn * n[1], d[2] - dn * n[2]])
            };
            let xhat = proj(d1);
            let mut w = proj(d2);
            // Keep w independent of xhat.
            if dot(w, xhat).abs() > 0.95 {
                w = normalize([
                    xhat[1] * n[2] - xhat[2] * n[1],
                    xhat[2] * n[0] - xhat[0] * n[2],
                    xhat[0] * n[1] - xhat[1] * n[0],
                ]);
            }
            Scene { n, xhat, v: xhat, w }
        })
        .collect()
}

#[test]
fn one_form_covariant_derivatives_match_transport() {
    let l_max = 10;
    let basis = HarmonicBasis::new(l_max).unwrap();
    let modes: Vec<OneFormMode> = basis
        .one_form_modes()
        .into_iter()
        .filter(|m| matches!((m.l, m.m), (1, 0) | (2, -1) | (5, 3) | (10, -7)))
        .collect();
    for scene in scenes() {
        let pe = PointEval::new(l_max, scene.n);
        for &mode in &modes {
            let d = pe.one_form_derivative(mode);
            for &test_vec in &[scene.v, scene.w] {
                let analytic: f64 = (0..3)
                    .map(|a| scene.xhat[a] * dot(d[a], test_vec))
                    .sum();
                let pair = |t: f64| {
                    let x = geodesic(scene.n, scene.xhat, t);
                    let vt = transport(scene.n, scene.xhat, test_vec, t);
                    let sigma = PointEval::new(l_max, x).one_form_value(mode);
                    dot(sigma, vt)
                };
                let fd = (pair(H) - pair(-H)) / (2.0 * H);
                let scale = 1.0 + analytic.abs();
                assert!(
                    (analytic - fd).abs() < 5e-6 * scale,
                    "{mode:?}: analytic {analytic:.8e} vs transport {fd:.8e}"
                );
            }
        }
    }
}

#[test]
fn tensor_covariant_derivatives_match_transport() {
    let l_max = 9;
    let basis = HarmonicBasis::new(l_max).unwrap();
    let modes: Vec<TensorMode> = basis
        .tensor_modes()
        .into_iter()
        .filter(|m| matches!((m.l, m.m), (0, 0) | (1, 1) | (2, 0) | (3, -2) | (6, 4) | (9, -8)))
        .collect();
    for scene in scenes() {
        let pe = PointEval::new(l_max, scene.n);
        for &mode in &modes {
            let d = pe.tensor_derivative(mode);
            let analytic: f64 = (0..3)
                .map(|a| {
                    scene.xhat[a]
                        * (0..3)
                            .map(|b| {
                                (0..3)
                                    .map(|c| d[a][b][c] * scene.v[b] * scene.w[c])
                                    .sum::<f64>()
                            })
                            .sum::<f64>()
                })
                .sum();
            let pair = |t: f64| {
                let x = geodesic(scene.n, scene.xhat, t);
                let vt = transport(scene.n, scene.xhat, scene.v, t);
                let wt = transport(scene.n, scene.xhat, scene.w, t);
                let chi = PointEval::new(l_max, x).tensor_value(mode);
                (0..3)
                    .map(|b| (0..3).map(|c| chi[b][c] * vt[b] * wt[c]).sum::<f64>())
                    .sum::<f64>()
            };
            let fd = (pair(H) - pair(-H)) / (2.0 * H);
            let scale = 1.0 + analytic.abs();
            assert!(
                (analytic - fd).abs() < 5e-6 * scale,
                "{mode:?}: analytic {analytic:.8e} vs transport {fd:.8e}"
            );
        }
    }
}
