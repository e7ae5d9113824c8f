//! Self-contained verification suite: each criterion recomputes what it needs
//! and reports pass/fail with a one-line diagnostic. Criteria run
//! concurrently and share no state, so they can be filtered independently.

use crate::analysis::{
    coeff_decay_rate, kernel_fourier_coeffs, truncation_norms, weyl_courant_check,
};
use crate::curves::{make_curve, CurveSpec, Parametrization};
use crate::grauert::{chebyshev_rate, closed_form_radius, trigpoly_radius};
use crate::np_kernel::nystrom_matrix;
use crate::single_layer::{plemelj_residual, single_layer_matrix, InnerProductForm};
use crate::spectrum::{np_spectrum, spectrum_agreement, symmetrized_spectrum};
use num_complex::Complex64;
use rayon::prelude::*;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime: Duration,
}

type Outcome = Result<(bool, String), crate::Error>;

fn builtin_specs() -> Vec<CurveSpec> {
    vec![
        CurveSpec::circle(1.0),
        CurveSpec::ellipse(2.0, 1.0),
        CurveSpec::limacon(0.4, Parametrization::Naive),
        CurveSpec::limacon(0.4, Parametrization::Optimal),
        CurveSpec::exp_curve(Complex64::i()),
    ]
}

fn ellipse_oracle() -> Outcome {
    let c = make_curve(CurveSpec::ellipse(2.0, 1.0))?;
    let spec = np_spectrum(&nystrom_matrix(&c, 256)?)?;
    let mut worst = 0.0_f64;
    for n in 1..=15 {
        let expect = 0.5 * 3.0_f64.powi(-(n as i32));
        worst = worst.max((spec.pair_magnitude(n)? - expect).abs());
        let (x, y) = (spec.lambdas[2 * n - 2], spec.lambdas[2 * n - 1]);
        if !(x * y < 0.0) {
            return Ok((false, format!("pair {n} not sign-split: {x:.3e}, {y:.3e}")));
        }
    }
    Ok((worst <= 1e-10, format!("max |error| vs (1/2)3^-n over n=1..15: {worst:.3e} (<= 1e-10)")))
}

fn circle_degeneracy() -> Outcome {
    let c = make_curve(CurveSpec::circle(1.0))?;
    let spec = np_spectrum(&nystrom_matrix(&c, 128)?)?;
    let (_, dist) = spec.dropped_half.unwrap();
    let stray = spec.lambdas.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
    let near_half = spec.lambdas.iter().filter(|l| (l.abs() - 0.5).abs() < 1e-10).count();
    let pass = dist <= 1e-10 && stray <= 1e-12 && near_half == 0;
    Ok((pass, format!("trivial off 1/2 by {dist:.3e}; largest other |lambda| = {stray:.3e}")))
}

fn limacon_oracle() -> Outcome {
    let naive = np_spectrum(&nystrom_matrix(
        &make_curve(CurveSpec::limacon(0.4, Parametrization::Naive))?,
        256,
    )?)?;
    let optimal = np_spectrum(&nystrom_matrix(
        &make_curve(CurveSpec::limacon(0.4, Parametrization::Optimal))?,
        256,
    )?)?;
    let mut worst = 0.0_f64;
    let mut cross = 0.0_f64;
    for n in 1..=10 {
        let expect = 0.5 * 4.0_f64.powi(-(n as i32));
        worst = worst.max((naive.pair_magnitude(n)? - expect).abs());
        worst = worst.max((optimal.pair_magnitude(n)? - expect).abs());
        cross = cross.max((naive.pair_magnitude(n)? - optimal.pair_magnitude(n)?).abs());
    }
    Ok((
        worst <= 1e-8 && cross <= 1e-8,
        format!("max |error| vs (1/2)4^-n: {worst:.3e}; parametrization mismatch: {cross:.3e}"),
    ))
}

fn grauert_radii() -> Outcome {
    let ln3 = 3.0_f64.ln();
    let ln15 = 1.5_f64.ln();
    let ln4 = 4.0_f64.ln();
    let lnexp = (2.0 * std::f64::consts::PI - 1.0).ln();
    let one = Complex64::new(1.0, 0.0);

    let mut worst = 0.0_f64;
    let mut notes = Vec::new();

    // Collision-root route for the two trigonometric-polynomial curves.
    let tp_ell = trigpoly_radius(&[(1, 1.5 * one), (-1, 0.5 * one)], 512)?;
    worst = worst.max((tp_ell.value - ln3).abs());
    notes.push(format!("trigpoly ellipse {:.12}", tp_ell.value));
    let tp_lim = trigpoly_radius(&[(1, one), (2, 0.4 * one)], 512)?;
    worst = worst.max((tp_lim.value - ln15).abs());
    notes.push(format!("trigpoly limacon {:.12}", tp_lim.value));

    // Closed forms for every builtin.
    for (spec, expect) in [
        (CurveSpec::ellipse(2.0, 1.0), ln3),
        (CurveSpec::limacon(0.4, Parametrization::Naive), ln15),
        (CurveSpec::limacon(0.4, Parametrization::Optimal), ln4),
        (CurveSpec::exp_curve(Complex64::i()), lnexp),
    ] {
        let est = closed_form_radius(&spec)?;
        worst = worst.max((est.value - expect).abs());
    }
    let circle = closed_form_radius(&CurveSpec::circle(1.0))?;
    let pass = worst <= 1e-9 && circle.value.is_infinite();
    Ok((pass, format!("max |radius error| = {worst:.3e}; {}", notes.join(", "))))
}

fn decay_fits() -> Outcome {
    let ln3 = 3.0_f64.ln();
    let ln4 = 4.0_f64.ln();
    let lnexp = (2.0 * std::f64::consts::PI - 1.0).ln();

    let fit_of = |spec: CurveSpec, n: usize| -> Result<f64, crate::Error> {
        let c = make_curve(spec)?;
        let s = np_spectrum(&nystrom_matrix(&c, n)?)?;
        Ok(crate::analysis::decay_fit(&s, 1e-12)?.rate)
    };
    let r_ell = fit_of(CurveSpec::ellipse(2.0, 1.0), 256)?;
    let r_lim = fit_of(CurveSpec::limacon(0.4, Parametrization::Naive), 256)?;
    let r_exp = fit_of(CurveSpec::exp_curve(Complex64::i()), 512)?;
    let pass = (r_ell / ln3 - 1.0).abs() <= 0.01
        && (r_lim / ln4 - 1.0).abs() <= 0.01
        && r_exp >= 0.95 * lnexp;
    Ok((
        pass,
        format!(
            "ellipse {r_ell:.6} (ln3 = {ln3:.6}); limacon {r_lim:.6} (ln4 = {ln4:.6}); \
             exp {r_exp:.6} (>= 0.95*{lnexp:.6})"
        ),
    ))
}

fn kernel_coefficient_decay() -> Outcome {
    let ln3 = 3.0_f64.ln();
    let c = make_curve(CurveSpec::ellipse(2.0, 1.0))?;
    let t256 = kernel_fourier_coeffs(&c, 256)?;
    let rate = coeff_decay_rate(&t256)?;

    // Stability of the weighted sup under grid doubling, over the modes the
    // grid actually resolves (larger |k| is pure round-off).
    let t512 = kernel_fourier_coeffs(&c, 512)?;
    let weighted_sup = |t: &crate::analysis::KernelFourierTable| {
        let mut sup = 0.0_f64;
        for k in 0..=t.k_max {
            let mag = t.max_abs(k).max(t.max_abs(-k));
            if mag > 1e-13 {
                sup = sup.max(mag * (0.95 * ln3 * k as f64).exp());
            }
        }
        sup
    };
    let s256 = weighted_sup(&t256);
    let s512 = weighted_sup(&t512);
    let pass = (rate / ln3 - 1.0).abs() <= 0.02 && s512 <= 1.1 * s256;
    Ok((
        pass,
        format!("coefficient rate {rate:.6} (ln3 = {ln3:.6}); weighted sup {s256:.6e} -> {s512:.6e} under N doubling"),
    ))
}

fn weyl_courant() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut details = Vec::new();
    for spec in [
        CurveSpec::ellipse(2.0, 1.0),
        CurveSpec::limacon(0.4, Parametrization::Naive),
        CurveSpec::exp_curve(Complex64::i()),
    ] {
        let c = make_curve(spec)?;
        let s = np_spectrum(&nystrom_matrix(&c, 256)?)?;
        let table = kernel_fourier_coeffs(&c, 256)?;
        let norms = truncation_norms(&table, 32)?;
        let report = weyl_courant_check(&s, &norms, 1e-12);
        worst = worst.min(report.min_margin);
        details.push(format!(
            "{} margin {:.3e} over {} pairs",
            c.spec().kind_name(),
            report.min_margin,
            report.entries.len()
        ));
    }
    Ok((worst >= -1e-12, details.join("; ")))
}

fn plemelj_symmetrization() -> Outcome {
    let mut worst_resid = 0.0_f64;
    let mut worst_agree = 0.0_f64;
    let mut monotone = true;
    for spec in builtin_specs() {
        let c = make_curve(spec)?;
        let np128 = nystrom_matrix(&c, 128)?;
        let sl128 = single_layer_matrix(&c, 128)?;
        let np256 = nystrom_matrix(&c, 256)?;
        let sl256 = single_layer_matrix(&c, 256)?;
        let r128 = plemelj_residual(&np128, &sl128)?;
        let r256 = plemelj_residual(&np256, &sl256)?;
        worst_resid = worst_resid.max(r256);
        // "Decreasing" bottoms out at rounding noise once the quadrature is
        // converged to machine precision; every builtin curve is there well
        // before N=256, so only flag increases above the noise band.
        if r256 > r128 && r256 > 1e-12 {
            monotone = false;
        }
        let plain = np_spectrum(&np256)?;
        let symm = symmetrized_spectrum(&np256, &InnerProductForm::new(sl256)?)?;
        worst_agree = worst_agree.max(spectrum_agreement(&plain, &symm, 1e-10));
    }
    let pass = worst_resid <= 1e-8 && monotone && worst_agree <= 1e-9;
    Ok((
        pass,
        format!(
            "max residual at N=256: {worst_resid:.3e}; refinement decreasing: {monotone}; \
             max symmetrized-vs-plain deviation: {worst_agree:.3e}"
        ),
    ))
}

fn tightness_probe() -> Outcome {
    // These examples saturate |lambda_2n| = (1/2) e^{-n eps} exactly, so the
    // weighted products must sit at 1/2. Window floor 1e-11 keeps the last
    // half-resolved pair out of the comparison.
    let mut worst = 0.0_f64;
    for (spec, eps) in [
        (CurveSpec::ellipse(2.0, 1.0), 3.0_f64.ln()),
        (CurveSpec::limacon(0.4, Parametrization::Naive), 4.0_f64.ln()),
    ] {
        let c = make_curve(spec)?;
        let s = np_spectrum(&nystrom_matrix(&c, 256)?)?;
        let pair_count = s.lambdas.len() / 2;
        for n in 1..=pair_count {
            let mu = s.pair_magnitude(n)?;
            if mu <= 1e-11 || mu >= 0.4 {
                continue;
            }
            let product = mu * (eps * n as f64).exp();
            worst = worst.max((product / 0.5 - 1.0).abs());
        }
    }
    // Circle: nothing above the floor, trivially constant.
    let circle = np_spectrum(&nystrom_matrix(&make_curve(CurveSpec::circle(1.0))?, 128)?)?;
    let circle_ok = circle.lambdas.iter().all(|l| l.abs() <= 1e-11);
    Ok((
        worst <= 0.01 && circle_ok,
        format!("max relative deviation of |lambda_2n| e^(n eps) from 1/2: {worst:.3e}"),
    ))
}

fn property_suite() -> Outcome {
    let mut fails = Vec::new();

    // chebyshev_rate(eps) < eps across ten decades.
    for i in 0..=60 {
        let eps = 10.0_f64.powf(-6.0 + 0.12 * i as f64);
        if !(chebyshev_rate(eps) < eps) {
            fails.push(format!("chebyshev_rate({eps:.3e}) >= eps"));
        }
    }

    // Pairing, inclusion in (-1/2, 1/2), realness on every builtin.
    for spec in builtin_specs() {
        let c = make_curve(spec)?;
        let s = np_spectrum(&nystrom_matrix(&c, 128)?)?;
        if s.imag_residual_max > 1e-9 {
            fails.push(format!("{}: imag residual {:.3e}", c.spec().kind_name(), s.imag_residual_max));
        }
        // A pair straddling the pairing noise floor leaves one member
        // formally unpaired; only magnitudes clearly above it must pair.
        let unpaired = s
            .pairing
            .unpaired
            .iter()
            .filter(|&&i| s.lambdas[i].abs() > 1e-11)
            .count();
        if unpaired > 0 {
            fails.push(format!("{}: {unpaired} unpaired eigenvalues", c.spec().kind_name()));
        }
        if s.lambdas.iter().any(|l| l.abs() >= 0.5) {
            fails.push(format!("{}: eigenvalue outside (-1/2, 1/2)", c.spec().kind_name()));
        }
    }

    // Refinement agreement on the ellipse.
    let c = make_curve(CurveSpec::ellipse(2.0, 1.0))?;
    let coarse = np_spectrum(&nystrom_matrix(&c, 128)?)?;
    let fine = np_spectrum(&nystrom_matrix(&c, 256)?)?;
    for n in 1..=8 {
        let d = (coarse.pair_magnitude(n)? - fine.pair_magnitude(n)?).abs();
        if d > 1e-11 {
            fails.push(format!("refinement pair {n}: {d:.3e}"));
        }
    }

    // Single-layer definiteness: H* quadratic form positive on mean-zero.
    let form = InnerProductForm::new(single_layer_matrix(&c, 64)?)?;
    let mut state = 0x853c49e6748fea9b_u64;
    let mut rand = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let total: f64 = form.sl.arclen.iter().map(|&a| form.sl.weight * a).sum();
    for trial in 0..32 {
        let mut f: Vec<f64> = (0..64).map(|_| rand()).collect();
        let mean: f64 = f
            .iter()
            .zip(&form.sl.arclen)
            .map(|(&fi, &ai)| form.sl.weight * ai * fi)
            .sum();
        for fi in &mut f {
            *fi -= mean / total;
        }
        if form.hstar_inner(&f, &f)? <= 0.0 {
            fails.push(format!("H* form non-positive on trial {trial}"));
        }
    }

    if fails.is_empty() {
        Ok((true, "pairing, inclusion, realness, refinement, chebyshev bound, H* positivity".into()))
    } else {
        Ok((false, fails.join("; ")))
    }
}

/// Run the acceptance criteria, optionally filtered by a substring of the
/// criterion name. Results come back ordered by criterion id.
pub fn run_criteria(only: Option<&str>) -> Vec<CriterionResult> {
    let criteria: Vec<(usize, &'static str, fn() -> Outcome)> = vec![
        (1, "ellipse-oracle", ellipse_oracle),
        (2, "circle-degeneracy", circle_degeneracy),
        (3, "limacon-oracle", limacon_oracle),
        (4, "grauert-radii", grauert_radii),
        (5, "decay-fits", decay_fits),
        (6, "kernel-coefficient-decay", kernel_coefficient_decay),
        (7, "weyl-courant", weyl_courant),
        (8, "plemelj-symmetrization", plemelj_symmetrization),
        (9, "tightness-probe", tightness_probe),
        (10, "property-suite", property_suite),
    ];
    let mut results: Vec<CriterionResult> = criteria
        .into_par_iter()
        .filter(|(_, name, _)| only.map_or(true, |o| name.contains(o)))
        .map(|(id, name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f() {
                Ok((p, d)) => (p, d),
                Err(e) => (false, format!("error: {e}")),
            };
            CriterionResult {
                id,
                name,
                passed,
                detail,
                runtime: start.elapsed(),
            }
        })
        .collect();
    results.sort_by_key(|r| r.id);
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_by_substring() {
        let results = run_criteria(Some("circle"));
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].name, "circle-degeneracy");
        assert!(results[0].passed, "{}", results[0].detail);
    }
}
