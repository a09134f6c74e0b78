//! Band-limited bases for functions, one-forms and symmetric 2-tensors.
//!
//! Everything is represented ambiently: a tangent field is an R^3-valued
//! function orthogonal to the position normal, a tangential 2-tensor a 3x3
//! symmetric matrix annihilated by the normal on both slots. Covariant
//! derivatives are tangential projections of ambient derivatives (Gauss
//! formula), which reduces every basis evaluation to polynomial data from
//! [`super::harmonics::HarmonicTable`]: no coordinate frames, no pole issues.
//!
//! One-form families: gradients `E = P grad Y` and rotated gradients
//! `C = n x grad Y` (`l >= 1`). Trace-free tensor families: the trace-free
//! covariant Hessian (even type) and the symmetrized derivative of the curl
//! field (odd type), both `l >= 2`; pure-trace tensors are `Y g`.

use crate::error::{Error, Result};
use crate::sphere::harmonics::HarmonicTable;
use crate::sphere::quadrature::{product_rule, SphereQuadrature};

/// Extra quadrature exactness beyond `2 l_max`: products of tensor-basis
/// covariant derivatives reach polynomial degree `2 l_max + 8`.
pub const QUADRATURE_DEGREE_MARGIN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScalarMode {
    pub l: usize,
    pub m: i64,
}

impl ScalarMode {
    /// Eigenvalue of the (positive) scalar Laplacian.
    pub fn eigenvalue(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneFormFamily {
    /// Exact family `dY` (gradient type).
    Grad,
    /// Coexact family `n x grad Y` (curl type).
    Curl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneFormMode {
    pub family: OneFormFamily,
    pub l: usize,
    pub m: i64,
}

impl OneFormMode {
    /// Eigenvalue of the positive rough Laplacian on one-forms: l(l+1) - 1.
    pub fn rough_eigenvalue(&self) -> f64 {
        (self.l * (self.l + 1)) as f64 - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TensorFamily {
    /// Pure trace `Y g`.
    Trace,
    /// Trace-free Hessian type (even parity).
    TfEven,
    /// Symmetrized curl-gradient type (odd parity).
    TfOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TensorMode {
    pub family: TensorFamily,
    pub l: usize,
    pub m: i64,
}

impl TensorMode {
    pub fn is_trace(&self) -> bool {
        self.family == TensorFamily::Trace
    }

    /// Eigenvalue of `rough + 4 tf` acting on this mode: l(l+1) in every
    /// block (confirmed by the assembled spectra).
    pub fn operator_eigenvalue(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }
}

/// Truncated harmonic bases over a fixed quadrature rule.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub l_max: usize,
    pub quadrature: SphereQuadrature,
}

impl HarmonicBasis {
    /// Basis with the built-in product quadrature (exact well beyond the
    /// required degree `2 l_max + 4`).
    pub fn new(l_max: usize) -> Result<Self> {
        if !(2..=24).contains(&l_max) {
            return Err(Error::invalid("l_max", format!("need 2 <= l_max <= 24, got {l_max}")));
        }
        Ok(HarmonicBasis {
            l_max,
            quadrature: product_rule(2 * l_max + QUADRATURE_DEGREE_MARGIN),
        })
    }

    /// Basis over an externally supplied rule (must integrate degree
    /// `2 l_max + 4`; validated empirically on the Gram matrix by callers).
    pub fn with_quadrature(l_max: usize, quadrature: SphereQuadrature) -> Result<Self> {
        if !(2..=24).contains(&l_max) {
            return Err(Error::invalid("l_max", format!("need 2 <= l_max <= 24, got {l_max}")));
        }
        Ok(HarmonicBasis { l_max, quadrature })
    }

    pub fn scalar_modes(&self) -> Vec<ScalarMode> {
        let mut out = Vec::with_capacity((self.l_max + 1) * (self.l_max + 1));
        for l in 0..=self.l_max {
            for m in -(l as i64)..=(l as i64) {
                out.push(ScalarMode { l, m });
            }
        }
        out
    }

    pub fn one_form_modes(&self) -> Vec<OneFormMode> {
        let mut out = Vec::new();
        for family in [OneFormFamily::Grad, OneFormFamily::Curl] {
            for l in 1..=self.l_max {
                for m in -(l as i64)..=(l as i64) {
                    out.push(OneFormMode { family, l, m });
                }
            }
        }
        out
    }

    pub fn tensor_modes(&self) -> Vec<TensorMode> {
        let mut out = Vec::new();
        for l in 0..=self.l_max {
            for m in -(l as i64)..=(l as i64) {
                out.push(TensorMode {
                    family: TensorFamily::Trace,
                    l,
                    m,
                });
            }
        }
        for family in [TensorFamily::TfEven, TensorFamily::TfOdd] {
            for l in 2..=self.l_max {
                for m in -(l as i64)..=(l as i64) {
                    out.push(TensorMode { family, l, m });
                }
            }
        }
        out
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Evaluations of every basis family at one point of the unit sphere.
///
/// The point's solid-harmonic table is built once and shared by all modes.
pub struct PointEval {
    pub table: HarmonicTable,
    /// Position normal.
    pub n: [f64; 3],
    /// Tangential projector P = I - n n^T.
    pub p: [[f64; 3]; 3],
}

impl PointEval {
    pub fn new(l_max: usize, x: [f64; 3]) -> Self {
        let mut p = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                p[a][b] = f64::from(a == b) - x[a] * x[b];
            }
        }
        PointEval {
            table: HarmonicTable::new(l_max, x),
            n: x,
            p,
        }
    }

    fn project_vec(&self, v: [f64; 3]) -> [f64; 3] {
        let ndot = self.n[0] * v[0] + self.n[1] * v[1] + self.n[2] * v[2];
        [
            v[0] - ndot * self.n[0],
            v[1] - ndot * self.n[1],
            v[2] - ndot * self.n[2],
        ]
    }

    fn matvec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// P M P for a (not necessarily symmetric) ambient matrix.
    fn sandwich(&self, m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut pm = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let mut v = 0.0;
                for c in 0..3 {
                    v += self.p[a][c] * m[c][b];
                }
                pm[a][b] = v;
            }
        }
        let mut out = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let mut v = 0.0;
                for c in 0..3 {
                    v += pm[a][c] * self.p[c][b];
                }
                out[a][b] = v;
            }
        }
        out
    }

    pub fn scalar_value(&self, mode: ScalarMode) -> f64 {
        self.table.value(mode.l, mode.m)
    }

    /// Surface gradient (tangential).
    pub fn scalar_gradient(&self, mode: ScalarMode) -> [f64; 3] {
        self.project_vec(self.table.gradient(mode.l, mode.m))
    }

    pub fn one_form_value(&self, mode: OneFormMode) -> [f64; 3] {
        let g = self.table.gradient(mode.l, mode.m);
        match mode.family {
            OneFormFamily::Grad => self.project_vec(g),
            OneFormFamily::Curl => cross(self.n, g),
        }
    }

    /// Covariant derivative `out[a][b] = (nabla_{P e_a} sigma)_b`.
    pub fn one_form_derivative(&self, mode: OneFormMode) -> [[f64; 3]; 3] {
        let l = mode.l as f64;
        let y = self.table.value(mode.l, mode.m);
        let h = self.table.hessian(mode.l, mode.m);
        let mut out = [[0.0; 3]; 3];
        match mode.family {
            OneFormFamily::Grad => {
                // nabla_X E = P H X - l Y X  =>  (PHP)_{ab} - l Y P_{ab}.
                let php = self.sandwich(&h);
                for a in 0..3 {
                    for b in 0..3 {
                        out[a][b] = php[a][b] - l * y * self.p[a][b];
                    }
                }
            }
            OneFormFamily::Curl => {
                // nabla_X C = n x (H X) - l Y (n x X).
                for a in 0..3 {
                    let x = [self.p[a][0], self.p[a][1], self.p[a][2]];
                    let hx = Self::matvec(&h, x);
                    let t1 = cross(self.n, hx);
                    let t2 = cross(self.n, x);
                    for b in 0..3 {
                        out[a][b] = t1[b] - l * y * t2[b];
                    }
                }
            }
        }
        out
    }

    pub fn tensor_value(&self, mode: TensorMode) -> [[f64; 3]; 3] {
        let l = mode.l as f64;
        match mode.family {
            TensorFamily::Trace => {
                let y = self.table.value(mode.l, mode.m);
                let mut out = [[0.0; 3]; 3];
                for a in 0..3 {
                    for b in 0..3 {
                        out[a][b] = y * self.p[a][b];
                    }
                }
                out
            }
            TensorFamily::TfEven => {
                // P H P + l(l-1)/2 Y P: the trace-free covariant Hessian.
                let y = self.table.value(mode.l, mode.m);
                let h = self.table.hessian(mode.l, mode.m);
                let mut out = self.sandwich(&h);
                let c = l * (l - 1.0) / 2.0 * y;
                for a in 0..3 {
                    for b in 0..3 {
                        out[a][b] += c * self.p[a][b];
                    }
                }
                out
            }
            TensorFamily::TfOdd => {
                // (P (N H - H N) P) / 2 with N the cross-product matrix of n.
                let h = self.table.hessian(mode.l, mode.m);
                let m = self.commutator_with_normal_cross(&h);
                let mut out = self.sandwich(&m);
                for row in &mut out {
                    for v in row {
                        *v *= 0.5;
                    }
                }
                out
            }
        }
    }

    /// N H - H N with N v = n x v.
    fn commutator_with_normal_cross(&self, h: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let n = self.n;
        let nmat = [
            [0.0, -n[2], n[1]],
            [n[2], 0.0, -n[0]],
            [-n[1], n[0], 0.0],
        ];
        let mut out = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let mut v = 0.0;
                for c in 0..3 {
                    v += nmat[a][c] * h[c][b] - h[a][c] * nmat[c][b];
                }
                out[a][b] = v;
            }
        }
        out
    }

    /// Covariant derivative `out[a][b][c] = (nabla_{P e_a} chi)_{bc}`.
    pub fn tensor_derivative(&self, mode: TensorMode) -> [[[f64; 3]; 3]; 3] {
        let l = mode.l as f64;
        let mut out = [[[0.0; 3]; 3]; 3];
        match mode.family {
            TensorFamily::Trace => {
                let e = self.scalar_gradient(ScalarMode {
                    l: mode.l,
                    m: mode.m,
                });
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            out[a][b][c] = e[a] * self.p[b][c];
                        }
                    }
                }
            }
            TensorFamily::TfEven => {
                let e = self.project_vec(self.table.gradient(mode.l, mode.m));
                let t3 = self.table.third(mode.l, mode.m);
                let cl = l * (l - 1.0) / 2.0;
                for a in 0..3 {
                    let x = [self.p[a][0], self.p[a][1], self.p[a][2]];
                    // T3 contracted with X on the last slot.
                    let mut t3x = [[0.0; 3]; 3];
                    for u in 0..3 {
                        for v in 0..3 {
                            t3x[u][v] =
                                t3[u][v][0] * x[0] + t3[u][v][1] * x[1] + t3[u][v][2] * x[2];
                        }
                    }
                    let core = self.sandwich(&t3x);
                    for b in 0..3 {
                        for c in 0..3 {
                            out[a][b][c] = core[b][c] - (l - 1.0) * (x[b] * e[c] + e[b] * x[c])
                                + cl * e[a] * self.p[b][c];
                        }
                    }
                }
            }
            TensorFamily::TfOdd => {
                let h = self.table.hessian(mode.l, mode.m);
                let t3 = self.table.third(mode.l, mode.m);
                let g = self.table.gradient(mode.l, mode.m);
                let curl = cross(self.n, g);
                let n = self.n;
                let nmat = [
                    [0.0, -n[2], n[1]],
                    [n[2], 0.0, -n[0]],
                    [-n[1], n[0], 0.0],
                ];
                for a in 0..3 {
                    let x = [self.p[a][0], self.p[a][1], self.p[a][2]];
                    let xmat = [
                        [0.0, -x[2], x[1]],
                        [x[2], 0.0, -x[0]],
                        [-x[1], x[0], 0.0],
                    ];
                    let mut t3x = [[0.0; 3]; 3];
                    for u in 0..3 {
                        for v in 0..3 {
                            t3x[u][v] =
                                t3[u][v][0] * x[0] + t3[u][v][1] * x[1] + t3[u][v][2] * x[2];
                        }
                    }
                    // X_x H + N T3(X) - T3(X) N - H X_x
                    let mut m = [[0.0; 3]; 3];
                    for u in 0..3 {
                        for v in 0..3 {
                            let mut acc = 0.0;
                            for w in 0..3 {
                                acc += xmat[u][w] * h[w][v] + nmat[u][w] * t3x[w][v]
                                    - t3x[u][w] * nmat[w][v]
                                    - h[u][w] * xmat[w][v];
                            }
                            m[u][v] = acc;
                        }
                    }
                    let core = self.sandwich(&m);
                    for b in 0..3 {
                        for c in 0..3 {
                            out[a][b][c] = 0.5 * core[b][c]
                                - 0.5 * (l - 1.0) * (x[b] * curl[c] + curl[b] * x[c]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Trace-free part of a tangential symmetric 2-tensor (2D trace).
    pub fn trace_free_part(&self, t: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let tr = t[0][0] + t[1][1] + t[2][2]; // tangential: ambient trace = 2D trace
        let mut out = *t;
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] -= 0.5 * tr * self.p[a][b];
            }
        }
        out
    }
}
