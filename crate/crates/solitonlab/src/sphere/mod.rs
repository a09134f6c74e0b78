//! Harmonic analysis on the round unit 2-sphere.

pub mod basis;
pub mod harmonics;
pub mod quadrature;

pub use basis::{
    HarmonicBasis, OneFormFamily, OneFormMode, PointEval, ScalarMode, TensorFamily, TensorMode,
};
pub use harmonics::HarmonicTable;
pub use quadrature::{product_rule, SphereQuadrature};
