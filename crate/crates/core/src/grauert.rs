//! Grauert-radius estimation per parametrization: closed forms for the
//! built-in curves, a collision-root search for trigonometric-polynomial
//! curves, a coefficient-decay upper bound for the analyticity strip, and the
//! Chebyshev comparison rate.
//!
//! The radius of a parametrization q is the largest strip half-width on which
//! q extends analytically and attains boundary values q(s), s real, only at s
//! itself (condition (G)). Collisions q(t) = q(s) with e^{it} = z reduce, for
//! a finite Laurent series, to polynomial root finding in z.

use crate::curves::{make_curve, CurveSpec, Parametrization};
use crate::error::{Error, Result};
use crate::fit;
use crate::roots::polynomial_roots;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    ClosedForm,
    TrigpolyRoots,
    ExpClosedForm,
    FourierDecayUpper,
    Chebyshev,
}

impl RadiusMethod {
    pub fn name(&self) -> &'static str {
        match self {
            RadiusMethod::ClosedForm => "closed_form",
            RadiusMethod::TrigpolyRoots => "trigpoly_roots",
            RadiusMethod::ExpClosedForm => "exp_closed_form",
            RadiusMethod::FourierDecayUpper => "fourier_decay_upper",
            RadiusMethod::Chebyshev => "chebyshev",
        }
    }
}

/// A collision pair achieving the radius: q(t) = q(s) with |Im t| = value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CollisionWitness {
    pub s: f64,
    pub t_re: f64,
    pub t_im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrauertEstimate {
    pub value: f64,
    pub method: RadiusMethod,
    pub witness: Option<CollisionWitness>,
    pub curve: Option<CurveSpec>,
    pub notes: String,
}

impl GrauertEstimate {
    /// JSON report with the fixed 17-significant-digit float format and
    /// infinity encoded as the string "inf".
    pub fn to_json(&self) -> String {
        let mut s = String::from("{");
        if let Some(c) = &self.curve {
            s.push_str(&format!(
                "\"curve\":{},",
                serde_json::to_string(c).expect("curve spec serializes")
            ));
        }
        s.push_str(&format!(
            "\"method\":\"{}\",\"value\":{}",
            self.method.name(),
            crate::fmt_f64(self.value)
        ));
        if let Some(w) = &self.witness {
            s.push_str(&format!(
                ",\"witness\":{{\"s\":{},\"t_re\":{},\"t_im\":{}}}",
                crate::fmt_f64(w.s),
                crate::fmt_f64(w.t_re),
                crate::fmt_f64(w.t_im)
            ));
        }
        if !self.notes.is_empty() {
            s.push_str(&format!(
                ",\"notes\":{}",
                serde_json::to_string(&self.notes).expect("string serializes")
            ));
        }
        s.push('}');
        s
    }
}

/// Closed-form radius value per kind, the paper-example formulas.
/// None for user Fourier series.
pub(crate) fn closed_form_eps(spec: &CurveSpec) -> Option<f64> {
    match spec {
        CurveSpec::Circle { .. } => Some(f64::INFINITY),
        CurveSpec::Ellipse { a, b } => Some(((a + b) / (a - b)).ln()),
        CurveSpec::Limacon { a, parametrization: Parametrization::Naive } => {
            Some((1.0 / a - 1.0).ln())
        }
        CurveSpec::Limacon { a, parametrization: Parametrization::Optimal } => {
            let s = (1.0 - 4.0 * a * a).sqrt();
            Some(((1.0 + s) / (1.0 - s)).ln())
        }
        CurveSpec::Exp { a } => Some((2.0 * PI / Complex64::from(*a).norm() - 1.0).ln()),
        CurveSpec::Fourier { .. } => None,
    }
}

/// Closed-form collision witness in the raw (unflipped) parametrization:
/// a real s and the collision root z = e^{it}.
fn closed_form_witness(spec: &CurveSpec) -> Option<(f64, Complex64)> {
    match spec {
        CurveSpec::Circle { .. } | CurveSpec::Fourier { .. } => None,
        CurveSpec::Ellipse { a, b } => {
            // e^{it} = ((a-b)/(a+b)) e^{-is}; take s = 0.
            Some((0.0, Complex64::new((a - b) / (a + b), 0.0)))
        }
        CurveSpec::Limacon { a, parametrization: Parametrization::Naive } => {
            // e^{it} = -e^{is} - 1/A, minimized at s = pi.
            Some((PI, Complex64::new(1.0 - 1.0 / a, 0.0)))
        }
        CurveSpec::Limacon { a, parametrization: Parametrization::Optimal } => {
            // Collision of the underlying ellipse parametrization g.
            let e = 2.0 * a;
            let s = (1.0 - e * e).sqrt();
            Some((0.0, Complex64::new((1.0 - s) / (1.0 + s), 0.0)))
        }
        CurveSpec::Exp { a } => {
            // e^{it} = e^{is} + i 2 pi n / A at n = 1, e^{is} opposing.
            let d = Complex64::i() * 2.0 * PI / Complex64::from(*a);
            let u = -d / d.norm();
            Some((u.arg(), u * (1.0 - d.norm())))
        }
    }
}

fn t_from_root(z: Complex64) -> Complex64 {
    Complex64::new(z.arg(), -z.norm().ln())
}

/// The paper-example formula value for the given kind and parametrization.
pub fn closed_form_radius(spec: &CurveSpec) -> Result<GrauertEstimate> {
    spec.validate()?;
    let value = closed_form_eps(spec).ok_or(Error::UnsupportedKind("fourier"))?;
    let method = match spec {
        CurveSpec::Exp { .. } => RadiusMethod::ExpClosedForm,
        _ => RadiusMethod::ClosedForm,
    };
    // Witnesses refer to the canonicalized (counterclockwise) parametrization.
    let flipped = make_curve(spec.clone())?.is_flipped();
    let witness = closed_form_witness(spec).map(|(s, z)| {
        let t = t_from_root(z);
        let (s, t) = if flipped { (-s, -t) } else { (s, t) };
        CollisionWitness { s, t_re: t.re, t_im: t.im }
    });
    Ok(GrauertEstimate {
        value,
        method,
        witness,
        curve: Some(spec.clone()),
        notes: format!("parametrization: {}", spec.kind_name()),
    })
}

/// Evaluate a finite Laurent series at z.
pub fn eval_laurent(coeffs: &[(i64, Complex64)], z: Complex64) -> Complex64 {
    coeffs.iter().map(|&(k, c)| c * z.powi(k as i32)).sum()
}

/// Nontrivial collision roots of q(z) = q(w) for a finite Laurent series q,
/// as roots of z^m (q(z) - q(w)) with the trivial root z = w deflated.
fn collision_roots(
    coeffs: &[(i64, Complex64)],
    shift: usize,
    degree: usize,
    w: Complex64,
) -> Result<Vec<Complex64>> {
    let qw = eval_laurent(coeffs, w);
    let mut poly = vec![Complex64::default(); degree + 1];
    for &(k, c) in coeffs {
        poly[(k + shift as i64) as usize] += c;
    }
    poly[shift] -= qw;
    let mut roots = polynomial_roots(&poly)?;
    // Deflate the trivial root z = w.
    let (trivial, _) = roots
        .iter()
        .enumerate()
        .map(|(i, z)| (i, (z - w).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("degree >= 2 leaves at least one root");
    roots.swap_remove(trivial);
    Ok(roots)
}

fn best_root(roots: &[Complex64]) -> Option<(Complex64, f64)> {
    roots
        .iter()
        .filter(|z| z.norm() > 1e-15)
        .map(|&z| (z, z.norm().ln().abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Collision-root estimate of the radius for a finite Laurent-series curve.
/// Samples w = e^{is} on a uniform grid, finds the nontrivial root of
/// minimal |ln|z|| per sample, and refines the grid infimum by golden-section
/// search in s.
pub fn trigpoly_radius(
    coeffs: &[(i64, Complex64)],
    n_samples: usize,
) -> Result<GrauertEstimate> {
    if n_samples < 64 {
        return Err(Error::Invalid(format!(
            "trigpoly_radius requires n_samples >= 64, got {n_samples}"
        )));
    }
    let max_mag = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let sig: Vec<(i64, Complex64)> = coeffs
        .iter()
        .copied()
        .filter(|(_, c)| c.norm() > 1e-13 * max_mag)
        .collect();
    if !sig.iter().any(|&(k, _)| k != 0) {
        return Err(Error::DegenerateSeries);
    }
    let k_min = sig.iter().map(|&(k, _)| k).min().unwrap().min(0);
    let k_max = sig.iter().map(|&(k, _)| k).max().unwrap().max(0);
    let shift = (-k_min) as usize;
    let degree = (k_max - k_min) as usize;

    if degree <= 1 {
        // Only the trivial root exists; condition (G) never fails.
        return Ok(GrauertEstimate {
            value: f64::INFINITY,
            method: RadiusMethod::TrigpolyRoots,
            witness: None,
            curve: None,
            notes: "degree-one series: no nontrivial collision".into(),
        });
    }

    let objective = |s: f64| -> f64 {
        let w = Complex64::new(0.0, s).exp();
        match collision_roots(&sig, shift, degree, w) {
            Ok(roots) => best_root(&roots).map(|(_, v)| v).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    };

    let values: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|j| {
            let s = -PI + 2.0 * PI * j as f64 / n_samples as f64;
            (s, objective(s))
        })
        .collect();
    let &(s0, v0) = values
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    if v0.is_infinite() {
        return Ok(GrauertEstimate {
            value: f64::INFINITY,
            method: RadiusMethod::TrigpolyRoots,
            witness: None,
            curve: None,
            notes: "no nontrivial collision found on the sample grid".into(),
        });
    }

    let h = 2.0 * PI / n_samples as f64;
    let (s_star, value) = fit::golden_section_min(objective, s0 - h, s0 + h, 1e-12);
    let (s_star, value) = if value <= v0 { (s_star, value) } else { (s0, v0) };

    let w = Complex64::new(0.0, s_star).exp();
    let roots = collision_roots(&sig, shift, degree, w)?;
    let (z, _) = best_root(&roots).expect("finite objective implies a root");
    let t = t_from_root(z);
    Ok(GrauertEstimate {
        value,
        method: RadiusMethod::TrigpolyRoots,
        witness: Some(CollisionWitness { s: s_star, t_re: t.re, t_im: t.im }),
        curve: None,
        notes: format!("grid n_samples = {n_samples}, golden-section refined"),
    })
}

/// Strip-of-analyticity upper bound from the Fourier-coefficient decay:
/// least-squares slope of -ln|c_k| against |k|. A short (finite) series
/// continues as an entire function and reports +infinity, as does any fitted
/// slope above 50.
pub fn strip_radius_upper(coeffs: &[(i64, Complex64)]) -> Result<GrauertEstimate> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(k, c) in coeffs {
        let m = c.norm();
        if k != 0 && m > 1e-14 {
            xs.push(k.unsigned_abs() as f64);
            ys.push(-m.ln());
        }
    }
    if xs.len() < 8 {
        return Ok(GrauertEstimate {
            value: f64::INFINITY,
            method: RadiusMethod::FourierDecayUpper,
            witness: None,
            curve: None,
            notes: format!("finite series ({} significant modes): entire continuation", xs.len()),
        });
    }
    let (slope, _) = fit::least_squares_line(&xs, &ys);
    if slope <= 0.0 {
        return Err(Error::InsufficientDecay);
    }
    let value = if slope > 50.0 { f64::INFINITY } else { slope };
    Ok(GrauertEstimate {
        value,
        method: RadiusMethod::FourierDecayUpper,
        witness: None,
        curve: None,
        notes: format!("fitted over {} modes, slope {:.6}", xs.len(), slope),
    })
}

/// Chebyshev-expansion comparison rate eps_c = log((eps + sqrt(pi^2 + eps^2))/pi).
pub fn chebyshev_rate(eps: f64) -> f64 {
    assert!(eps >= 0.0, "chebyshev_rate requires eps >= 0");
    if eps.is_infinite() {
        return f64::INFINITY;
    }
    ((eps + (PI * PI + eps * eps).sqrt()) / PI).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn closed_forms_match_paper_values() {
        let e = closed_form_radius(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        assert_relative_eq!(e.value, 3.0_f64.ln(), epsilon = 1e-14);

        let naive = closed_form_radius(&CurveSpec::limacon(0.4, Parametrization::Naive)).unwrap();
        assert_relative_eq!(naive.value, 1.5_f64.ln(), epsilon = 1e-14);

        let opt = closed_form_radius(&CurveSpec::limacon(0.4, Parametrization::Optimal)).unwrap();
        assert_relative_eq!(opt.value, 4.0_f64.ln(), epsilon = 1e-14);

        let circle = closed_form_radius(&CurveSpec::circle(3.0)).unwrap();
        assert!(circle.value.is_infinite());

        let exp = closed_form_radius(&CurveSpec::exp_curve(Complex64::i())).unwrap();
        assert_relative_eq!(exp.value, (2.0 * PI - 1.0).ln(), epsilon = 1e-14);
        assert_relative_eq!(exp.value, 1.6645, epsilon = 1e-4);

        assert!(matches!(
            closed_form_radius(&CurveSpec::fourier(vec![(1, Complex64::new(1.0, 0.0))])),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn closed_form_witnesses_collide() {
        for spec in [
            CurveSpec::ellipse(2.0, 1.0),
            CurveSpec::limacon(0.4, Parametrization::Naive),
            CurveSpec::limacon(0.4, Parametrization::Optimal),
            CurveSpec::exp_curve(Complex64::i()),
            CurveSpec::exp_curve(Complex64::new(0.7, -0.3)),
        ] {
            let est = closed_form_radius(&spec).unwrap();
            let w = est.witness.expect("non-circle witness");
            assert_relative_eq!(w.t_im.abs(), est.value, epsilon = 1e-9);
            let curve = make_curve(spec.clone()).unwrap();
            let qs = curve.q(w.s);
            // The witness sits exactly on the strip boundary.
            let qt = curve.eval_unchecked(Complex64::new(w.t_re, w.t_im));
            assert!(
                (qt - qs).norm() <= 1e-9 * (1.0 + qs.norm()),
                "{spec:?}: |q(t)-q(s)| = {:.3e}",
                (qt - qs).norm()
            );
        }
    }

    #[test]
    fn trigpoly_matches_closed_form_for_ellipse() {
        let coeffs = vec![
            (1_i64, Complex64::new(1.5, 0.0)),
            (-1_i64, Complex64::new(0.5, 0.0)),
        ];
        let est = trigpoly_radius(&coeffs, 128).unwrap();
        assert_relative_eq!(est.value, 3.0_f64.ln(), epsilon = 1e-10);
        // The nontrivial root z = (a-b)/((a+b) w) has constant modulus 1/3.
        let w = est.witness.unwrap();
        assert_relative_eq!((-w.t_im).exp(), 1.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn trigpoly_matches_closed_form_for_limacon_naive() {
        let coeffs = vec![
            (1_i64, Complex64::new(1.0, 0.0)),
            (2_i64, Complex64::new(0.4, 0.0)),
        ];
        let est = trigpoly_radius(&coeffs, 512).unwrap();
        assert_relative_eq!(est.value, 1.5_f64.ln(), epsilon = 1e-10);
        let w = est.witness.unwrap();
        // Minimizer at s = pi where |e^{is} + 1/A| = 1/A - 1.
        assert!((w.s.abs() - PI).abs() < 1e-6, "s = {}", w.s);
        // Witness reproduces the collision.
        let t = Complex64::new(w.t_re, w.t_im);
        let z = (Complex64::i() * t).exp();
        let ws = Complex64::new(0.0, w.s).exp();
        let q = |z: Complex64| z + 0.4 * z * z;
        assert!((q(z) - q(ws)).norm() < 1e-9);
    }

    #[test]
    fn trigpoly_circle_is_infinite() {
        let est = trigpoly_radius(&[(1, Complex64::new(1.0, 0.0))], 64).unwrap();
        assert!(est.value.is_infinite());
        assert!(est.witness.is_none());
    }

    #[test]
    fn strip_upper_bound_cases() {
        // Finite series: entire continuation.
        let est = strip_radius_upper(&[
            (1, Complex64::new(1.5, 0.0)),
            (-1, Complex64::new(0.5, 0.0)),
        ])
        .unwrap();
        assert!(est.value.is_infinite());

        // Exact geometric decay c_k = rho^{|k|}.
        let rho: f64 = 0.4;
        let coeffs: Vec<(i64, Complex64)> = (-12..=12)
            .map(|k: i64| (k, Complex64::new(rho.powi(k.unsigned_abs() as i32), 0.0)))
            .collect();
        let est = strip_radius_upper(&coeffs).unwrap();
        assert_relative_eq!(est.value, (1.0 / rho).ln(), max_relative = 0.01);

        // Superexponential decay of exp(i e^{it}): c_k = i^k / k!.
        let curve = make_curve(CurveSpec::exp_curve(Complex64::i())).unwrap();
        let coeffs = curve.fourier_coeffs_of_q(64).unwrap();
        let est = strip_radius_upper(&coeffs).unwrap();
        // Upper bound dominates the condition-(G) radius.
        assert!(est.value > (2.0 * PI - 1.0).ln());

        // Non-decaying coefficients are rejected.
        let flat: Vec<(i64, Complex64)> =
            (1..=12).map(|k| (k, Complex64::new(1.0, 0.0))).collect();
        assert!(matches!(strip_radius_upper(&flat), Err(Error::InsufficientDecay)));
    }

    #[test]
    fn chebyshev_rate_values() {
        assert_relative_eq!(chebyshev_rate(0.0), 0.0, epsilon = 1e-15);
        // Direct arithmetic of the formula at eps = ln 3.
        let eps = 3.0_f64.ln();
        let expect = ((eps + (PI * PI + eps * eps).sqrt()) / PI).ln();
        assert_relative_eq!(chebyshev_rate(eps), expect, epsilon = 1e-15);
        assert_relative_eq!(chebyshev_rate(eps), 0.3429, epsilon = 1e-4);
    }

    proptest! {
        #[test]
        fn chebyshev_rate_below_identity(loge in -3.0_f64..2.0) {
            let eps = 10.0_f64.powf(loge);
            prop_assert!(chebyshev_rate(eps) < eps);
        }
    }
}
