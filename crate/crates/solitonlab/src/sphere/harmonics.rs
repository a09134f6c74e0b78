//! Real spherical harmonics through regular solid harmonics.
//!
//! Each `Y_{l,m}` is evaluated as the restriction of a homogeneous harmonic
//! polynomial, via the numerically stable solid-harmonic recurrences
//!
//! ```text
//! R_0^0 = 1,  R_m^m = (x+iy)/(2m) R_{m-1}^{m-1},  R_{m+1}^m = z R_m^m,
//! R_l^m = ((2l-1) z R_{l-1}^m - r^2 R_{l-2}^m) / ((l+m)(l-m)),
//! ```
//!
//! whose Cartesian derivatives are exact index shifts:
//! `dz R_l^m = R_{l-1}^m`, `(dx + i dy) R_l^m = -R_{l-1}^{m+1}`,
//! `(dx - i dy) R_l^m = R_{l-1}^{m-1}`. Ambient gradients, Hessians and
//! third derivatives therefore come out to round-off accuracy, which is what
//! the tensor bases on the sphere are built from.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Offset/coefficient form of a constant-coefficient derivative operator in
/// the shift algebra: `D R_l^m = sum_k c_k R_{l-n}^{m+k}`.
type ShiftPoly = Vec<(i32, Complex64)>;

fn dir_poly(dir: usize) -> ShiftPoly {
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    match dir {
        0 => vec![(-1, half), (1, -half)],
        1 => vec![(-1, ihalf), (1, ihalf)],
        2 => vec![(0, Complex64::new(1.0, 0.0))],
        _ => unreachable!(),
    }
}

fn compose(dirs: &[usize]) -> ShiftPoly {
    let mut acc: ShiftPoly = vec![(0, Complex64::new(1.0, 0.0))];
    for &d in dirs {
        let p = dir_poly(d);
        let mut next: Vec<(i32, Complex64)> = Vec::new();
        for &(ka, ca) in &acc {
            for &(kb, cb) in &p {
                let k = ka + kb;
                match next.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, c)) => *c += ca * cb,
                    None => next.push((k, ca * cb)),
                }
            }
        }
        acc = next;
    }
    acc
}

struct DerivTables {
    first: Vec<ShiftPoly>,           // [d]
    second: Vec<Vec<ShiftPoly>>,     // [d1][d2]
    third: Vec<Vec<Vec<ShiftPoly>>>, // [d1][d2][d3]
}

fn deriv_tables() -> &'static DerivTables {
    static TABLES: OnceLock<DerivTables> = OnceLock::new();
    TABLES.get_or_init(|| DerivTables {
        first: (0..3).map(|a| compose(&[a])).collect(),
        second: (0..3)
            .map(|a| (0..3).map(|b| compose(&[a, b])).collect())
            .collect(),
        third: (0..3)
            .map(|a| {
                (0..3)
                    .map(|b| (0..3).map(|c| compose(&[a, b, c])).collect())
                    .collect()
            })
            .collect(),
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Orthonormalization scale: `Y = scale * Re/Im R_l^{|m|}` on the unit sphere.
fn scale(l: usize, m_abs: usize) -> f64 {
    let base = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m_abs) * factorial(l + m_abs))
        .sqrt();
    if m_abs > 0 {
        base * std::f64::consts::SQRT_2
    } else {
        base
    }
}

/// Solid-harmonic table at one point, for all `l <= l_max`, `0 <= m <= l`.
pub struct HarmonicTable {
    l_max: usize,
    tab: Vec<Complex64>,
}

fn idx(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

impl HarmonicTable {
    pub fn new(l_max: usize, x: [f64; 3]) -> Self {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let xy = Complex64::new(x[0], x[1]);
        let z = x[2];
        let mut tab = vec![Complex64::new(0.0, 0.0); idx(l_max, l_max) + 1];
        tab[0] = Complex64::new(1.0, 0.0);
        for m in 1..=l_max {
            tab[idx(m, m)] = tab[idx(m - 1, m - 1)] * xy / (2.0 * m as f64);
        }
        for m in 0..l_max {
            tab[idx(m + 1, m)] = tab[idx(m, m)] * z;
        }
        for m in 0..=l_max {
            for l in (m + 2)..=l_max {
                let a = (2 * l - 1) as f64;
                let d = ((l + m) * (l - m)) as f64;
                tab[idx(l, m)] =
                    (tab[idx(l - 1, m)] * (a * z) - tab[idx(l - 2, m)] * r2) / d;
            }
        }
        HarmonicTable { l_max, tab }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Complex solid harmonic with out-of-range indices mapped to zero and
    /// `R_l^{-m} = (-1)^m conj(R_l^m)`.
    fn cplx(&self, l: i64, m: i64) -> Complex64 {
        if l < 0 || m.abs() > l || l as usize > self.l_max {
            return Complex64::new(0.0, 0.0);
        }
        let v = self.tab[idx(l as usize, m.unsigned_abs() as usize)];
        if m >= 0 {
            v
        } else if m % 2 == 0 {
            v.conj()
        } else {
            -v.conj()
        }
    }

    /// Real part for cos-type (m >= 0), imaginary part for sin-type (m < 0).
    fn realize(&self, m: i64, v: Complex64) -> f64 {
        if m >= 0 {
            v.re
        } else {
            v.im
        }
    }

    fn apply(&self, l: usize, m: i64, poly: &ShiftPoly, order: i64) -> f64 {
        let mu = m.abs();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, c) in poly {
            acc += c * self.cplx(l as i64 - order, mu + k as i64);
        }
        self.realize(m, acc) * scale(l, mu as usize)
    }

    /// Value of the real harmonic `Y_{l,m}` (solid extension), `|m| <= l`.
    pub fn value(&self, l: usize, m: i64) -> f64 {
        self.realize(m, self.cplx(l as i64, m.abs())) * scale(l, m.unsigned_abs() as usize)
    }

    /// Ambient gradient of the solid extension.
    pub fn gradient(&self, l: usize, m: i64) -> [f64; 3] {
        let t = deriv_tables();
        [
            self.apply(l, m, &t.first[0], 1),
            self.apply(l, m, &t.first[1], 1),
            self.apply(l, m, &t.first[2], 1),
        ]
    }

    /// Ambient Hessian of the solid extension.
    pub fn hessian(&self, l: usize, m: i64) -> [[f64; 3]; 3] {
        let t = deriv_tables();
        let mut h = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                let v = self.apply(l, m, &t.second[a][b], 2);
                h[a][b] = v;
                h[b][a] = v;
            }
        }
        h
    }

    /// Ambient third-derivative tensor of the solid extension.
    pub fn third(&self, l: usize, m: i64) -> [[[f64; 3]; 3]; 3] {
        let t = deriv_tables();
        let mut out = [[[0.0; 3]; 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                for c in b..3 {
                    let v = self.apply(l, m, &t.third[a][b][c], 3);
                    // fully symmetric
                    out[a][b][c] = v;
                    out[a][c][b] = v;
                    out[b][a][c] = v;
                    out[b][c][a] = v;
                    out[c][a][b] = v;
                    out[c][b][a] = v;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample_points() -> Vec<[f64; 3]> {
        vec![
            [0.6, -0.48, 0.64],
            [0.0, 0.8, -0.6],
            [1.0 / 3.0f64.sqrt(), 1.0 / 3.0f64.sqrt(), 1.0 / 3.0f64.sqrt()],
        ]
    }

    #[test]
    fn low_degree_closed_forms() {
        for p in sample_points() {
            let t = HarmonicTable::new(4, p);
            let c0 = (1.0 / (4.0 * PI)).sqrt();
            let c1 = (3.0 / (4.0 * PI)).sqrt();
            assert_abs_diff_eq!(t.value(0, 0), c0, epsilon = 1e-14);
            assert_abs_diff_eq!(t.value(1, -1), c1 * p[1], epsilon = 1e-14);
            assert_abs_diff_eq!(t.value(1, 0), c1 * p[2], epsilon = 1e-14);
            assert_abs_diff_eq!(t.value(1, 1), c1 * p[0], epsilon = 1e-14);
            // Y_{2,0} = sqrt(5/4pi) (3z^2 - 1)/2 on the unit sphere.
            let c20 = (5.0 / (4.0 * PI)).sqrt();
            assert_abs_diff_eq!(
                t.value(2, 0),
                c20 * 0.5 * (3.0 * p[2] * p[2] - 1.0),
                epsilon = 1e-14
            );
            // Y_{2,2} = sqrt(15/16pi) (x^2 - y^2).
            let c22 = (15.0 / (16.0 * PI)).sqrt();
            assert_abs_diff_eq!(
                t.value(2, 2),
                c22 * (p[0] * p[0] - p[1] * p[1]),
                epsilon = 1e-14
            );
            // Y_{2,-2} = sqrt(15/4pi) x y.
            let c2m2 = (15.0 / (4.0 * PI)).sqrt();
            assert_abs_diff_eq!(t.value(2, -2), c2m2 * p[0] * p[1], epsilon = 1e-14);
        }
    }

    #[test]
    fn derivatives_match_ambient_finite_differences() {
        let h = 1e-5;
        let p = [0.6, -0.48, 0.64];
        for (l, m) in [(1, 0), (2, 1), (3, -2), (5, 4), (8, -7), (12, 0), (12, 11)] {
            let tc = HarmonicTable::new(12, p);
            let grad = tc.gradient(l, m);
            let hess = tc.hessian(l, m);
            let third = tc.third(l, m);
            for a in 0..3 {
                let mut pp = p;
                let mut pm = p;
                pp[a] += h;
                pm[a] -= h;
                let tp = HarmonicTable::new(12, pp);
                let tm = HarmonicTable::new(12, pm);
                let fd = (tp.value(l, m) - tm.value(l, m)) / (2.0 * h);
                assert_abs_diff_eq!(grad[a], fd, epsilon = 2e-8);
                for b in 0..3 {
                    let fd2 = (tp.gradient(l, m)[b] - tm.gradient(l, m)[b]) / (2.0 * h);
                    assert_abs_diff_eq!(hess[a][b], fd2, epsilon = 2e-7);
                    for c in 0..3 {
                        let fd3 =
                            (tp.hessian(l, m)[b][c] - tm.hessian(l, m)[b][c]) / (2.0 * h);
                        assert_abs_diff_eq!(third[a][b][c], fd3, epsilon = 2e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn solid_harmonics_are_harmonic() {
        for p in sample_points() {
            let t = HarmonicTable::new(10, p);
            for l in 0..=10usize {
                for m in -(l as i64)..=(l as i64) {
                    let h = t.hessian(l, m);
                    let lap = h[0][0] + h[1][1] + h[2][2];
                    assert!(lap.abs() < 1e-10 * scale(l, m.unsigned_abs() as usize).max(1.0));
                }
            }
        }
    }

    #[test]
    fn surface_laplacian_eigenvalue() {
        // For the degree-l solid extension, tr(P Hess P) = -l(l-1) Y on the
        // sphere, which encodes Lap_S Y = -l(l+1) Y.
        for p in sample_points() {
            let t = HarmonicTable::new(8, p);
            for (l, m) in [(2usize, 1i64), (5, -3), (8, 8)] {
                let h = t.hessian(l, m);
                let y = t.value(l, m);
                let mut tr_php = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        let pa = f64::from(a == b) - p[a] * p[b];
                        tr_php += pa * h[a][b];
                    }
                }
                let lf = l as f64;
                assert_abs_diff_eq!(tr_php, -lf * (lf - 1.0) * y, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn euler_homogeneity() {
        // <x, grad R> = l R for homogeneous solid harmonics.
        let p = [0.6, -0.48, 0.64];
        let t = HarmonicTable::new(9, p);
        for (l, m) in [(3usize, 2i64), (7, -5), (9, 0)] {
            let g = t.gradient(l, m);
            let dot = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
            assert_abs_diff_eq!(dot, l as f64 * t.value(l, m), epsilon = 1e-10);
        }
    }
}
