//! Analytic closed-curve parametrizations: the built-in example curves
//! (circle, ellipse, limacon in two parametrizations, transcendental
//! exponential curve) and user-supplied finite Fourier series.
//!
//! A curve is a 2*pi-periodic analytic map q: R -> C with non-vanishing
//! derivative, canonicalized to counterclockwise orientation so that the
//! outward normal is -i q'(t)/|q'(t)|. Every kind carries closed-form
//! derivatives and evaluates at complex arguments inside its validated
//! strip of analyticity.

use crate::error::{Error, Result};
use crate::fft::{self, FourierTable};
use crate::fit;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    #[default]
    Naive,
    Optimal,
}

/// Complex numbers cross the JSON boundary as {re, im} objects.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexParam {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexParam> for Complex64 {
    fn from(c: ComplexParam) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for ComplexParam {
    fn from(c: Complex64) -> Self {
        ComplexParam { re: c.re, im: c.im }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeff {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Limacon {
        #[serde(rename = "A")]
        a: f64,
        #[serde(default)]
        parametrization: Parametrization,
    },
    Exp {
        #[serde(rename = "A")]
        a: ComplexParam,
    },
    Fourier {
        coeffs: Vec<FourierCoeff>,
    },
}

impl CurveSpec {
    pub fn circle(r: f64) -> Self {
        CurveSpec::Circle { r }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        CurveSpec::Ellipse { a, b }
    }

    pub fn limacon(a: f64, parametrization: Parametrization) -> Self {
        CurveSpec::Limacon { a, parametrization }
    }

    pub fn exp_curve(a: Complex64) -> Self {
        CurveSpec::Exp { a: a.into() }
    }

    pub fn fourier(coeffs: Vec<(i64, Complex64)>) -> Self {
        CurveSpec::Fourier {
            coeffs: coeffs
                .into_iter()
                .map(|(k, c)| FourierCoeff { k, re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CurveSpec::Circle { .. } => "circle",
            CurveSpec::Ellipse { .. } => "ellipse",
            CurveSpec::Limacon { parametrization: Parametrization::Naive, .. } => "limacon_naive",
            CurveSpec::Limacon { parametrization: Parametrization::Optimal, .. } => {
                "limacon_optimal"
            }
            CurveSpec::Exp { .. } => "exp",
            CurveSpec::Fourier { .. } => "fourier",
        }
    }

    /// Parameter-domain checks from the defining formulas.
    pub fn validate(&self) -> Result<()> {
        match self {
            CurveSpec::Circle { r } => {
                if !(*r > 0.0) {
                    return Err(Error::Domain(format!("circle requires r > 0, got r = {r}")));
                }
            }
            CurveSpec::Ellipse { a, b } => {
                if !(*a > *b && *b > 0.0) {
                    return Err(Error::Domain(format!(
                        "ellipse requires a > b > 0, got a = {a}, b = {b}"
                    )));
                }
            }
            CurveSpec::Limacon { a, .. } => {
                if !(*a > 0.0 && *a < 0.5) {
                    return Err(Error::Domain(format!(
                        "limacon requires 0 < A < 1/2, got A = {a}"
                    )));
                }
            }
            CurveSpec::Exp { a } => {
                let m = Complex64::from(*a).norm();
                if !(m > 0.0 && m < PI) {
                    return Err(Error::Domain(format!(
                        "exp curve requires 0 < |A| < pi, got |A| = {m}"
                    )));
                }
            }
            CurveSpec::Fourier { coeffs } => {
                let ok = coeffs
                    .iter()
                    .any(|c| c.k != 0 && Complex64::new(c.re, c.im).norm() > 0.0);
                if !ok {
                    return Err(Error::Domain(
                        "fourier curve requires at least one nonzero c_k with k != 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Jet (q, q', q'') of the raw (pre-canonicalization) parametrization at a
/// complex argument. Derivatives are closed forms, never finite differences.
fn raw_jet(spec: &CurveSpec, t: Complex64) -> (Complex64, Complex64, Complex64) {
    let i = Complex64::i();
    let z = (i * t).exp();
    match spec {
        CurveSpec::Circle { r } => {
            let q = *r * z;
            (q, i * q, -q)
        }
        CurveSpec::Ellipse { a, b } => {
            let c1 = Complex64::new(0.5 * (a + b), 0.0);
            let c2 = Complex64::new(0.5 * (a - b), 0.0);
            let zi = 1.0 / z;
            (c1 * z + c2 * zi, i * (c1 * z - c2 * zi), -(c1 * z + c2 * zi))
        }
        CurveSpec::Limacon { a, parametrization: Parametrization::Naive } => {
            let z2 = z * z;
            (z + *a * z2, i * (z + 2.0 * *a * z2), -(z + 4.0 * *a * z2))
        }
        CurveSpec::Limacon { a, parametrization: Parametrization::Optimal } => {
            // q1(t) = h(g(e^{it})) with h(w) = -e/2 + 1/w and g the focal-chord
            // parametrization of the eccentricity-e ellipse centered at -ae.
            let e = 2.0 * a;
            let aa = 1.0 / (1.0 - e * e);
            let bb = aa * (1.0 - e * e).sqrt();
            let p = 0.5 * (aa + bb);
            let m = 0.5 * (aa - bb);
            let u = p * z + m / z - aa * e;
            let du = i * (p * z - m / z);
            let ddu = -(p * z + m / z);
            let q = -0.5 * e + 1.0 / u;
            let dq = -du / (u * u);
            let ddq = -ddu / (u * u) + 2.0 * du * du / (u * u * u);
            (q, dq, ddq)
        }
        CurveSpec::Exp { a } => {
            let a = Complex64::from(*a);
            let az = a * z;
            let q = az.exp();
            (q, q * i * az, q * ((i * az) * (i * az) - az))
        }
        CurveSpec::Fourier { coeffs } => {
            let mut q = Complex64::default();
            let mut dq = Complex64::default();
            let mut ddq = Complex64::default();
            for c in coeffs {
                let ck = Complex64::new(c.re, c.im);
                let ik = i * c.k as f64;
                let e = (ik * t).exp();
                q += ck * e;
                dq += ck * ik * e;
                ddq += ck * ik * ik * e;
            }
            (q, dq, ddq)
        }
    }
}

/// An analytic closed curve with canonicalized (counterclockwise) orientation.
#[derive(Clone, Debug)]
pub struct Curve {
    spec: CurveSpec,
    flipped: bool,
    strip_halfwidth: f64,
}

const ORIENTATION_GRID: usize = 1024;

pub fn make_curve(spec: CurveSpec) -> Result<Curve> {
    spec.validate()?;

    // Regularity and orientation on a fixed sample grid of the raw map.
    let w = 2.0 * PI / ORIENTATION_GRID as f64;
    let mut area = 0.0;
    let mut min_deriv = f64::INFINITY;
    let mut max_deriv: f64 = 0.0;
    let mut min_t = 0.0;
    for j in 0..ORIENTATION_GRID {
        let t = fft::grid_node(ORIENTATION_GRID, j);
        let (q, dq, _) = raw_jet(&spec, Complex64::new(t, 0.0));
        area += 0.5 * w * (q.conj() * dq).im;
        let d = dq.norm();
        if d < min_deriv {
            min_deriv = d;
            min_t = t;
        }
        max_deriv = max_deriv.max(d);
    }
    if min_deriv <= 1e-9 * max_deriv {
        return Err(Error::DegenerateCurve { t: min_t, min_deriv });
    }

    let strip_halfwidth = match &spec {
        CurveSpec::Fourier { coeffs } => fourier_strip_halfwidth(coeffs),
        _ => {
            let eps = crate::grauert::closed_form_eps(&spec).expect("closed-form kind");
            if eps.is_infinite() { f64::INFINITY } else { eps - 1e-9 }
        }
    };

    Ok(Curve { spec, flipped: area < 0.0, strip_halfwidth })
}

/// Conservative analyticity half-width for a user Fourier series: 90% of the
/// least-squares decay slope of -ln|c_k| against |k|. Short series continue
/// as entire functions.
fn fourier_strip_halfwidth(coeffs: &[FourierCoeff]) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for c in coeffs {
        let m = Complex64::new(c.re, c.im).norm();
        if c.k != 0 && m > 1e-14 {
            xs.push(c.k.unsigned_abs() as f64);
            ys.push(-m.ln());
        }
    }
    if xs.len() < 8 {
        return f64::INFINITY;
    }
    let (slope, _) = fit::least_squares_line(&xs, &ys);
    if slope <= 0.0 {
        // No decay evidence; only real-axis evaluation is validated.
        return 0.0;
    }
    0.9 * slope
}

impl Curve {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn strip_halfwidth(&self) -> f64 {
        self.strip_halfwidth
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    fn sigma(&self) -> f64 {
        if self.flipped { -1.0 } else { 1.0 }
    }

    /// (q(t), q'(t), q''(t)) at real t, after orientation canonicalization.
    pub fn jet(&self, t: f64) -> (Complex64, Complex64, Complex64) {
        let s = self.sigma();
        let (q, dq, ddq) = raw_jet(&self.spec, Complex64::new(s * t, 0.0));
        (q, s * dq, ddq)
    }

    pub fn q(&self, t: f64) -> Complex64 {
        self.jet(t).0
    }

    pub fn q_prime(&self, t: f64) -> Complex64 {
        self.jet(t).1
    }

    /// Outward unit normal -i q'(t)/|q'(t)|.
    pub fn normal(&self, t: f64) -> Complex64 {
        let dq = self.q_prime(t);
        -Complex64::i() * dq / dq.norm()
    }

    /// Analytic continuation of q inside the validated strip.
    pub fn eval_complex(&self, t: Complex64) -> Result<Complex64> {
        if t.im != 0.0 && t.im.abs() >= self.strip_halfwidth {
            return Err(Error::OutOfStrip { im: t.im.abs(), halfwidth: self.strip_halfwidth });
        }
        Ok(raw_jet(&self.spec, self.sigma() * t).0)
    }

    /// Analytic continuation without the strip check. Needed to verify
    /// collision witnesses that sit exactly on the strip boundary; the
    /// result is only meaningful where the defining formula is analytic.
    pub fn eval_unchecked(&self, t: Complex64) -> Complex64 {
        raw_jet(&self.spec, self.sigma() * t).0
    }

    /// q*(s) = conj(q(conj(s))), the reflected continuation.
    pub fn q_star(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.eval_complex(s.conj())?.conj())
    }

    /// Signed enclosed area (1/2) int Im(conj(q) q') dt; positive after
    /// canonicalization.
    pub fn signed_area(&self) -> f64 {
        let n = ORIENTATION_GRID;
        let w = 2.0 * PI / n as f64;
        (0..n)
            .map(|j| {
                let t = fft::grid_node(n, j);
                let (q, dq, _) = self.jet(t);
                0.5 * w * (q.conj() * dq).im
            })
            .sum()
    }

    /// FFT Fourier coefficients of q over m uniform samples; m >= 16, power
    /// of two. Returns (k, c_k) for -m/2 < k <= m/2.
    pub fn fourier_coeffs_of_q(&self, m: usize) -> Result<Vec<(i64, Complex64)>> {
        if m < 16 || !m.is_power_of_two() {
            return Err(Error::Invalid(format!(
                "fourier_coeffs_of_q requires m >= 16 and a power of two, got {m}"
            )));
        }
        let samples: Vec<Complex64> = (0..m).map(|j| self.q(fft::grid_node(m, j))).collect();
        let table = FourierTable::new(&samples);
        let half = m as i64 / 2;
        Ok(((-half + 1)..=half).map(|k| (k, table.coeff(k))).collect())
    }

    /// Distance from a point to the curve trace, by dense sampling plus
    /// golden-section refinement.
    pub fn min_distance(&self, p: Complex64) -> f64 {
        let n = 4096;
        let mut best = f64::INFINITY;
        let mut best_t = 0.0;
        for j in 0..n {
            let t = fft::grid_node(n, j);
            let d = (self.q(t) - p).norm();
            if d < best {
                best = d;
                best_t = t;
            }
        }
        let h = 2.0 * PI / n as f64;
        let (_, d) = fit::golden_section_min(
            |t| (self.q(t) - p).norm(),
            best_t - h,
            best_t + h,
            1e-14,
        );
        d.min(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curve(spec: CurveSpec) -> Curve {
        make_curve(spec).unwrap()
    }

    #[test]
    fn ellipse_jet_at_zero() {
        let c = curve(CurveSpec::ellipse(2.0, 1.0));
        let (q, dq, ddq) = c.jet(0.0);
        assert_relative_eq!(q.re, 2.0, epsilon = 1e-14);
        assert!(q.im.abs() < 1e-14);
        assert_relative_eq!(dq.im, 1.0, epsilon = 1e-14);
        assert!(dq.re.abs() < 1e-14);
        assert_relative_eq!(ddq.re, -2.0, epsilon = 1e-14);
    }

    #[test]
    fn circle_signed_area_is_pi() {
        let c = curve(CurveSpec::circle(1.0));
        assert_relative_eq!(c.signed_area(), PI, epsilon = 1e-12);
        assert_relative_eq!((c.q(0.7) - Complex64::new(0.0, 0.7).exp() * 1.0).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn limacon_naive_point() {
        let c = curve(CurveSpec::limacon(0.4, Parametrization::Naive));
        let q = c.q(PI / 2.0);
        assert_relative_eq!(q.re, -0.4, epsilon = 1e-13);
        assert_relative_eq!(q.im, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn parameter_domains_enforced() {
        assert!(make_curve(CurveSpec::circle(0.0)).is_err());
        assert!(make_curve(CurveSpec::ellipse(1.0, 1.0)).is_err());
        assert!(make_curve(CurveSpec::limacon(0.5, Parametrization::Naive)).is_err());
        assert!(make_curve(CurveSpec::exp_curve(Complex64::new(0.0, PI))).is_err());
        assert!(make_curve(CurveSpec::fourier(vec![(0, Complex64::new(1.0, 0.0))])).is_err());
    }

    #[test]
    fn eval_complex_ellipse_imaginary_argument() {
        // c1 e^{it} + c2 e^{-it} at t = i ln 3 evaluates to 0.5 + 1.5 by hand.
        let c = curve(CurveSpec::ellipse(2.0, 1.0));
        let t = Complex64::new(0.0, 3.0_f64.ln() - 1e-6);
        let v = c.eval_complex(t).unwrap();
        let c1 = 1.5;
        let c2 = 0.5;
        let expect = c1 * (Complex64::i() * t).exp() + c2 * (-Complex64::i() * t).exp();
        assert!((v - expect).norm() < 1e-12);
        // Exactly at the collision height the strip check fires.
        assert!(matches!(
            c.eval_complex(Complex64::new(0.0, 3.0_f64.ln())),
            Err(Error::OutOfStrip { .. })
        ));
    }

    #[test]
    fn eval_complex_exp_curve() {
        let c = curve(CurveSpec::exp_curve(Complex64::i()));
        let sigma = 0.3;
        let t = Complex64::new(0.0, sigma);
        let v = c.eval_complex(t).unwrap();
        // q(i sigma) = exp(i e^{-sigma}) for A = i (up to orientation flip).
        let s = if c.is_flipped() { -1.0 } else { 1.0 };
        let expect = (Complex64::i() * (Complex64::i() * s * t).exp()).exp();
        assert!((v - expect).norm() < 1e-13);
    }

    #[test]
    fn complex_eval_agrees_on_real_axis() {
        for spec in [
            CurveSpec::ellipse(2.0, 1.0),
            CurveSpec::limacon(0.4, Parametrization::Optimal),
            CurveSpec::exp_curve(Complex64::i()),
        ] {
            let c = curve(spec);
            for j in 0..17 {
                let t = -PI + 2.0 * PI * j as f64 / 17.0;
                let v = c.eval_complex(Complex64::new(t, 0.0)).unwrap();
                let q = c.q(t);
                assert!((v - q).norm() <= 1e-13 * (1.0 + q.norm()));
            }
        }
    }

    #[test]
    fn fourier_coeffs_of_builtin_curves() {
        let c = curve(CurveSpec::ellipse(2.0, 1.0));
        let coeffs = c.fourier_coeffs_of_q(64).unwrap();
        for (k, ck) in coeffs {
            let expect = match k {
                1 => 1.5,
                -1 => 0.5,
                _ => 0.0,
            };
            assert!((ck - Complex64::new(expect, 0.0)).norm() < 1e-14, "k={k}");
        }

        let c = curve(CurveSpec::circle(1.0));
        for (k, ck) in c.fourier_coeffs_of_q(32).unwrap() {
            let expect = if k == 1 { 1.0 } else { 0.0 };
            assert!((ck - Complex64::new(expect, 0.0)).norm() < 1e-14, "k={k}");
        }

        let c = curve(CurveSpec::limacon(0.4, Parametrization::Naive));
        for (k, ck) in c.fourier_coeffs_of_q(64).unwrap() {
            let expect = match k {
                1 => 1.0,
                2 => 0.4,
                _ => 0.0,
            };
            assert!((ck - Complex64::new(expect, 0.0)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for spec in [
            CurveSpec::ellipse(2.0, 1.0),
            CurveSpec::limacon(0.3, Parametrization::Optimal),
            CurveSpec::exp_curve(Complex64::new(0.5, 0.5)),
        ] {
            let c = curve(spec);
            for j in 0..9 {
                let t = -PI + 2.0 * PI * j as f64 / 9.0;
                let (q, dq, ddq) = c.jet(t);
                let qp = c.q(t + h);
                let qm = c.q(t - h);
                let fd1 = (qp - qm) / (2.0 * h);
                let fd2 = (qp - 2.0 * q + qm) / (h * h);
                assert!((fd1 - dq).norm() <= 1e-7 * (1.0 + dq.norm()), "q' at t={t}");
                assert!((fd2 - ddq).norm() <= 1e-4 * (1.0 + ddq.norm()), "q'' at t={t}");
            }
        }
    }

    #[test]
    fn orientation_canonicalized_for_all_kinds() {
        for spec in [
            CurveSpec::circle(2.0),
            CurveSpec::ellipse(2.0, 1.0),
            CurveSpec::limacon(0.4, Parametrization::Naive),
            CurveSpec::limacon(0.4, Parametrization::Optimal),
            CurveSpec::exp_curve(Complex64::i()),
            CurveSpec::fourier(vec![(-1, Complex64::new(1.0, 0.0))]),
        ] {
            let c = curve(spec);
            assert!(c.signed_area() > 0.0, "{:?}", c.spec());
        }
    }

    #[test]
    fn limacon_parametrizations_trace_same_set() {
        let naive = curve(CurveSpec::limacon(0.4, Parametrization::Naive));
        let optimal = curve(CurveSpec::limacon(0.4, Parametrization::Optimal));
        let n = 2048;
        let mut hausdorff: f64 = 0.0;
        for j in 0..n {
            let t = fft::grid_node(n, j);
            hausdorff = hausdorff.max(optimal.min_distance(naive.q(t)));
            hausdorff = hausdorff.max(naive.min_distance(optimal.q(t)));
        }
        assert!(hausdorff < 1e-10, "hausdorff = {hausdorff:.3e}");
    }

    #[test]
    fn curve_spec_json_round_trip() {
        let json = r#"{"kind":"limacon","A":0.4,"parametrization":"optimal"}"#;
        let spec: CurveSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec, CurveSpec::limacon(0.4, Parametrization::Optimal));

        let json = r#"{"kind":"exp","A":{"re":0.0,"im":1.0}}"#;
        let spec: CurveSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec, CurveSpec::exp_curve(Complex64::i()));

        let json = r#"{"kind":"fourier","coeffs":[{"k":1,"re":1.0,"im":0.0},{"k":2,"re":0.4,"im":0.0}]}"#;
        let spec: CurveSpec = serde_json::from_str(json).unwrap();
        let c = curve(spec);
        let naive = curve(CurveSpec::limacon(0.4, Parametrization::Naive));
        for j in 0..32 {
            let t = fft::grid_node(32, j);
            assert!((c.q(t) - naive.q(t)).norm() < 1e-14);
        }
    }
}
