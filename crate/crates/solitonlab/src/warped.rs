//! Closed-form geometry of the warped product `g = ds^2 + phi(s)^2 g_{S^2}`.
//!
//! Everything downstream (the soliton ODE reduction, curvature reports,
//! identity checks) is built on these few formulas, so they are validated in
//! `tests/curvature_oracle.rs` against a finite-difference
//! Christoffel/Riemann computation on the warped metric before being trusted.

/// Orthonormal-frame curvature of the warped metric at one radius.
#[derive(Debug, Clone, Copy)]
pub struct WarpedCurvature {
    /// Sectional curvature of planes containing the radial direction: -phi''/phi.
    pub sec_rad: f64,
    /// Sectional curvature of the spherical planes: (1 - phi'^2)/phi^2.
    pub sec_sph: f64,
    /// Ricci eigenvalue in the radial direction: -2 phi''/phi.
    pub ric_rad: f64,
    /// Ricci eigenvalue in the spherical directions: -phi''/phi + (1 - phi'^2)/phi^2.
    pub ric_sph: f64,
    /// Scalar curvature: -4 phi''/phi + 2 (1 - phi'^2)/phi^2.
    pub scalar: f64,
}

/// Curvature from the warping function and its first two derivatives.
pub fn curvature_from_warp(phi: f64, phi_p: f64, phi_pp: f64) -> WarpedCurvature {
    let sec_rad = -phi_pp / phi;
    let sec_sph = (1.0 - phi_p * phi_p) / (phi * phi);
    WarpedCurvature {
        sec_rad,
        sec_sph,
        ric_rad: 2.0 * sec_rad,
        ric_sph: sec_rad + sec_sph,
        scalar: 2.0 * sec_rad + 2.0 * (sec_rad + sec_sph),
    }
}

/// Hessian eigenvalues `(D^2 f)(e0,e0), (D^2 f)(e1,e1)` of a radial function:
/// `(f'', (phi'/phi) f')`.
pub fn hessian_radial(phi: f64, phi_p: f64, f_p: f64, f_pp: f64) -> (f64, f64) {
    (f_pp, phi_p / phi * f_p)
}

/// Second derivatives `(phi'', f'')` from the steady-soliton reduction
/// `Ric = D^2 f`:
///
/// ```text
/// phi'' = (1 - phi'^2 - phi phi' f') / phi      (spherical component)
/// f''   = -2 phi'' / phi                        (radial component)
/// ```
pub fn soliton_rhs(phi: f64, phi_p: f64, f_p: f64) -> (f64, f64) {
    let phi_pp = (1.0 - phi_p * phi_p - phi * phi_p * f_p) / phi;
    (phi_pp, -2.0 * phi_pp / phi)
}

/// Scalar curvature with `phi''` eliminated through the soliton reduction;
/// together with `f'^2` this is the conserved first integral `R + f'^2`.
pub fn scalar_on_shell(phi: f64, phi_p: f64, f_p: f64) -> f64 {
    let (phi_pp, _) = soliton_rhs(phi, phi_p, f_p);
    curvature_from_warp(phi, phi_p, phi_pp).scalar
}

/// Laplacian of a radial function: `u'' + 2 (phi'/phi) u'`.
pub fn laplacian_radial(phi: f64, phi_p: f64, u_p: f64, u_pp: f64) -> f64 {
    u_pp + 2.0 * phi_p / phi * u_p
}

/// Mixed covariant derivative of the Ricci tensor appearing in the
/// second-contracted Bianchi reduction: `D_1 Ric(e0, e1) = (phi'/phi)(ric_rad - ric_sph)`.
pub fn ricci_mixed_derivative(phi: f64, phi_p: f64, ric_rad: f64, ric_sph: f64) -> f64 {
    phi_p / phi * (ric_rad - ric_sph)
}
