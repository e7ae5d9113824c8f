//! Single layer potential S[phi](x) = (1/2pi) int ln|x-y| phi(y) dsigma(y)
//! discretized with the Kussmaul-Martensen splitting
//!
//!   ln|q(t)-q(s)| = (1/2) ln(4 sin^2((t-s)/2)) + ln(|q(t)-q(s)| / |2 sin((t-s)/2)|),
//!
//! the singular part integrated with the classical periodic log-quadrature
//! weights and the smooth remainder with the trapezoid rule. The H* inner
//! product <phi, psi> = -<phi, S[psi]> and the Plemelj symmetrization
//! residual live here as well.

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::fft;
use crate::np_kernel::{DiscreteOperator, OperatorKind};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Quadrature weights R_d for the periodic log kernel:
/// int_0^{2pi} ln(4 sin^2((t_i - s)/2)) f(s) ds ~ sum_j R_{(i-j) mod N} f(t_j).
pub fn log_quadrature_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    (0..n)
        .map(|d| {
            let theta = 2.0 * PI * d as f64 / n as f64;
            let mut sum = 0.0;
            for m in 1..half {
                sum += (m as f64 * theta).cos() / m as f64;
            }
            -4.0 * PI / n as f64 * sum
                - 4.0 * PI / (n * n) as f64 * (half as f64 * theta).cos()
        })
        .collect()
}

/// Smooth remainder ln(|q(t)-q(s)| / |2 sin((t-s)/2)|) with diagonal limit
/// ln|q'(t)|.
fn smooth_part(curve: &Curve, t: f64, s: f64) -> f64 {
    let d = (t - s).rem_euclid(2.0 * PI);
    let dist = d.min(2.0 * PI - d);
    if dist < 1e-12 {
        return curve.q_prime(t).norm().ln();
    }
    let num = (curve.q(t) - curve.q(s)).norm();
    let den = (2.0 * ((t - s) / 2.0).sin()).abs();
    (num / den).ln()
}

/// Nystrom matrix for the single layer acting on grid samples of phi,
/// including the arclength factor |q'(s)|.
pub fn single_layer_matrix(curve: &Curve, n: usize) -> Result<DiscreteOperator> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "single_layer_matrix requires even N >= 16, got {n}"
        )));
    }
    let nodes = fft::grid(n);
    let w = 2.0 * PI / n as f64;
    let r = log_quadrature_weights(n);
    let arclen: Vec<f64> = nodes.iter().map(|&t| curve.q_prime(t).norm()).collect();

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = (i + n - j) % n;
                    let kernel = 0.5 * r[d] + w * smooth_part(curve, nodes[i], nodes[j]);
                    kernel / (2.0 * PI) * arclen[j]
                })
                .collect()
        })
        .collect();

    Ok(DiscreteOperator {
        n_nodes: n,
        nodes,
        weight: w,
        matrix: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        kind: OperatorKind::SingleLayer,
        curve: curve.spec().clone(),
        arclen,
    })
}

/// The discrete H* form: gram[i][j] realizes <phi, psi>_{H*} = -<phi, S[psi]>
/// under the arclength quadrature pairing.
#[derive(Clone, Debug)]
pub struct InnerProductForm {
    pub sl: DiscreteOperator,
    pub gram: DMatrix<f64>,
}

impl InnerProductForm {
    pub fn new(sl: DiscreteOperator) -> Result<Self> {
        if sl.kind != OperatorKind::SingleLayer {
            return Err(Error::Invalid(
                "InnerProductForm requires a single-layer operator".into(),
            ));
        }
        let n = sl.n_nodes;
        let mut gram = DMatrix::zeros(n, n);
        for i in 0..n {
            let wi = sl.weight * sl.arclen[i];
            for j in 0..n {
                gram[(i, j)] = -wi * sl.matrix[(i, j)];
            }
        }
        // Exact symmetry up to rounding; enforce it.
        let gram = 0.5 * (&gram + gram.transpose());
        Ok(InnerProductForm { sl, gram })
    }

    pub fn n_nodes(&self) -> usize {
        self.sl.n_nodes
    }

    fn check_mean_zero(&self, f: &[f64]) -> Result<()> {
        let mean: f64 = f
            .iter()
            .zip(&self.sl.arclen)
            .map(|(&fi, &ai)| self.sl.weight * ai * fi)
            .sum();
        let norm: f64 = f
            .iter()
            .zip(&self.sl.arclen)
            .map(|(&fi, &ai)| self.sl.weight * ai * fi * fi)
            .sum::<f64>()
            .sqrt();
        let tol = 1e-8 * (norm + f64::MIN_POSITIVE);
        if mean.abs() > tol {
            return Err(Error::NotMeanZero { mean, tol });
        }
        Ok(())
    }

    /// <f, g>_{H*} = -(f, S g) under the arclength quadrature pairing; both
    /// arguments must be mean-zero in the arclength sense.
    pub fn hstar_inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        if f.len() != self.n_nodes() || g.len() != self.n_nodes() {
            return Err(Error::DimensionMismatch(format!(
                "hstar_inner: vectors of length {}/{} against grid {}",
                f.len(),
                g.len(),
                self.n_nodes()
            )));
        }
        self.check_mean_zero(f)?;
        self.check_mean_zero(g)?;
        let fv = DVector::from_column_slice(f);
        let gv = DVector::from_column_slice(g);
        Ok((fv.transpose() * &self.gram * gv)[(0, 0)])
    }
}

/// Symmetric weighted log-kernel matrix (no arclength column factor):
/// S_w[i][j] = w * (1/2pi) (R_{ij}/2 + w * smooth_{ij}). Plemelj's principle
/// makes S_w M symmetric for the NP Nystrom matrix M.
pub fn symmetrized_single_layer(sl: &DiscreteOperator) -> DMatrix<f64> {
    let n = sl.n_nodes;
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = sl.weight * sl.matrix[(i, j)] / sl.arclen[j];
        }
    }
    0.5 * (&s + s.transpose())
}

/// Relative Frobenius residual ||S_w M - M^T S_w||_F / ||S_w M||_F, the
/// discrete transcription of S K* = K S plus self-adjointness of S.
pub fn plemelj_residual(np: &DiscreteOperator, sl: &DiscreteOperator) -> Result<f64> {
    if np.kind != OperatorKind::Np || sl.kind != OperatorKind::SingleLayer {
        return Err(Error::Invalid(
            "plemelj_residual expects (np, single_layer) operators".into(),
        ));
    }
    if np.n_nodes != sl.n_nodes {
        return Err(Error::DimensionMismatch(format!(
            "plemelj_residual: N = {} vs {}",
            np.n_nodes, sl.n_nodes
        )));
    }
    if np.curve != sl.curve {
        return Err(Error::DimensionMismatch(
            "plemelj_residual: operators come from different curves".into(),
        ));
    }
    let sw = symmetrized_single_layer(sl);
    let sm = &sw * &np.matrix;
    let resid = &sm - sm.transpose();
    // On the circle S_w M vanishes identically (S annihilates the constant
    // range of M), so fall back to the product of norms as the scale rather
    // than dividing rounding noise by rounding noise.
    let product_scale = sw.norm() * np.matrix.norm();
    let scale = if sm.norm() < 1e-10 * product_scale {
        product_scale
    } else {
        sm.norm()
    };
    Ok(resid.norm() / scale)
}
