//! Nystrom discretization of the Neumann-Poincare (NP) operator on analytic
//! planar curves, eigenvalue extraction on the mean-zero space, Grauert-radius
//! estimation, and quantitative checks of the exponential eigenvalue decay.

pub mod analysis;
pub mod curves;
pub mod error;
pub mod fft;
pub mod fit;
pub mod grauert;
pub mod np_kernel;
pub mod roots;
pub mod single_layer;
pub mod spectrum;
pub mod verify;

pub use curves::{Curve, CurveSpec, Parametrization};
pub use error::{Error, Result};
pub use grauert::GrauertEstimate;
pub use np_kernel::{DiscreteOperator, OperatorKind};
pub use single_layer::InnerProductForm;
pub use spectrum::Spectrum;

/// Fixed float formatting for all serialized output: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "\"inf\"".into() } else { "\"-inf\"".into() };
    }
    format!("{:.16e}", x)
}
