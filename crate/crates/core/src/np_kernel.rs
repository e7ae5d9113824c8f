//! The parametrized NP kernel
//!
//!   K_q(t,s) = (1/4*pi*i) [ q'(t)/(q(t)-q(s)) - conj(q'(t))/(conj(q(t))-conj(q(s))) ],
//!
//! its removable-singularity diagonal limit, its analytic continuation in s
//! via q*(s) = conj(q(conj(s))), and the Nystrom matrix on the uniform
//! periodic grid. The kernel is smooth and 2*pi-periodic in both variables,
//! so the plain trapezoid rule converges superalgebraically.

use crate::curves::{Curve, CurveSpec};
use crate::error::{Error, Result};
use crate::fft;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Np,
    SingleLayer,
}

/// A Nystrom matrix together with its grid and provenance.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    pub n_nodes: usize,
    pub nodes: Vec<f64>,
    /// Uniform quadrature weight 2*pi/N.
    pub weight: f64,
    pub matrix: DMatrix<f64>,
    pub kind: OperatorKind,
    /// Spec of the source curve.
    pub curve: CurveSpec,
    /// |q'(t_i)| at the nodes.
    pub arclen: Vec<f64>,
}

impl DiscreteOperator {
    /// Row-major CSV with 17 significant digits, for external cross-checks.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n_nodes {
            let row: Vec<String> = (0..self.n_nodes)
                .map(|j| format!("{:.16e}", self.matrix[(i, j)]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn kernel_from_jet(q_t: Complex64, dq_t: Complex64, q_s: Complex64) -> Complex64 {
    let bracket = dq_t / (q_t - q_s) - dq_t.conj() / (q_t.conj() - q_s.conj());
    bracket / (Complex64::i() * 4.0 * PI)
}

/// Off-diagonal kernel value; the two bracket terms are conjugate, so the
/// value is real up to rounding.
pub fn kernel_value(curve: &Curve, t: f64, s: f64) -> Result<f64> {
    let d = (t - s).rem_euclid(2.0 * PI);
    let dist = d.min(2.0 * PI - d);
    if dist < 1e-12 {
        return Err(Error::CoincidentPoints { dist });
    }
    let (q_t, dq_t, _) = curve.jet(t);
    let q_s = curve.q(s);
    let v = kernel_from_jet(q_t, dq_t, q_s);
    debug_assert!(v.im.abs() < 1e-12 * (1.0 + v.re.abs()));
    Ok(v.re)
}

/// Diagonal limit Im(conj(q'(t)) q''(t)) / (4*pi*|q'(t)|^2).
pub fn kernel_diag(curve: &Curve, t: f64) -> f64 {
    let (_, dq, ddq) = curve.jet(t);
    (dq.conj() * ddq).im / (4.0 * PI * dq.norm_sqr())
}

/// Analytic continuation of s -> K_q(t, s) into the strip, using
/// q*(s) = conj(q(conj(s))) for the second bracket term.
pub fn kernel_analytic(curve: &Curve, t: f64, s: Complex64) -> Result<Complex64> {
    let (q_t, dq_t, _) = curve.jet(t);
    let q_s = curve.eval_complex(s)?;
    let q_star = curve.q_star(s)?;
    let d1 = q_t - q_s;
    let d2 = q_t.conj() - q_star;
    if d1.norm() < 1e-13 || d2.norm() < 1e-13 {
        return Err(Error::PoleEncountered { s_re: s.re, s_im: s.im });
    }
    Ok((dq_t / d1 - dq_t.conj() / d2) / (Complex64::i() * 4.0 * PI))
}

/// Nystrom matrix M[i][j] = (2*pi/N) K_q(t_i, t_j), diagonal entries from the
/// removable-singularity limit. N >= 16, even.
pub fn nystrom_matrix(curve: &Curve, n: usize) -> Result<DiscreteOperator> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "nystrom_matrix requires even N >= 16, got {n}"
        )));
    }
    let nodes = fft::grid(n);
    let jets: Vec<_> = nodes.iter().map(|&t| curve.jet(t)).collect();
    let w = 2.0 * PI / n as f64;

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (q_t, dq_t, ddq_t) = jets[i];
            (0..n)
                .map(|j| {
                    if i == j {
                        w * (dq_t.conj() * ddq_t).im / (4.0 * PI * dq_t.norm_sqr())
                    } else {
                        w * kernel_from_jet(q_t, dq_t, jets[j].0).re
                    }
                })
                .collect()
        })
        .collect();

    let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(DiscreteOperator {
        n_nodes: n,
        nodes,
        weight: w,
        matrix,
        kind: OperatorKind::Np,
        curve: curve.spec().clone(),
        arclen: jets.iter().map(|(_, dq, _)| dq.norm()).collect(),
    })
}
