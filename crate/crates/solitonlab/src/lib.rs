//! Numerical laboratory for the rotationally symmetric steady gradient Ricci
//! soliton and for spectral estimates on the shrinking cylinder.
//!
//! The crate has four pillars:
//!
//! * [`profile`] — constructs the soliton from its warped-product ODE
//!   reduction, launched from a power series at the tip, with the conserved
//!   first integral `R + |∇f|^2 = 1` as an a-posteriori accuracy monitor.
//! * [`identities`] — evaluates the pointwise curvature identities and fitted
//!   asymptotic decay rates of the profile as numerical residuals.
//! * [`sphere`] — harmonic analysis on the round 2-sphere: quadrature, scalar
//!   / one-form / symmetric-2-tensor bases, Galerkin spectra of the
//!   associated elliptic operators, Hodge splitting, and the Kazdan–Warner
//!   obstruction residual.
//! * [`cylinder`] — diagonal mode evolution of translation-invariant fields
//!   on the shrinking cylinder under the parabolic vector and Lichnerowicz
//!   systems, projection gaps, and the Anderson–Chow subsolution check.
//!
//! Heavy inner loops are data-parallel via rayon when the default `parallel`
//! feature is enabled; disabling it yields identical sequential results.

pub mod cylinder;
pub mod error;
pub mod exec;
pub mod fitting;
pub mod identities;
pub mod ode;
pub mod profile;
pub mod report;
pub mod sphere;
pub mod spline;
pub mod warped;

pub use error::{Error, Result};
pub use fitting::RateFit;
pub use profile::{integrate_profile, tip_series, SolitonProfile, TipExpansion};
