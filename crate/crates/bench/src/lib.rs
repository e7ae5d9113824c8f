//! Shared fixtures for the pipeline benchmarks.

use npspec_core::curves::{make_curve, Curve, CurveSpec};

pub fn ellipse() -> Curve {
    make_curve(CurveSpec::ellipse(2.0, 1.0)).unwrap()
}
