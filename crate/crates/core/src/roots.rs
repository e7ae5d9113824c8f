//! Polynomial root finding via the companion matrix.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// All roots of sum_j coeffs[j] z^j, coefficients in ascending order.
/// Leading coefficients below 1e-14 of the largest magnitude are dropped;
/// trailing zero coefficients contribute roots at the origin.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    let tol = 1e-14 * max_mag;

    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.len() > 1 && cs.last().unwrap().norm() <= tol {
        cs.pop();
    }

    let mut roots = Vec::new();
    let mut lo = 0;
    while lo < cs.len() - 1 && cs[lo].norm() <= tol {
        roots.push(Complex64::default());
        lo += 1;
    }
    let cs = &cs[lo..];
    let deg = cs.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    if deg == 1 {
        roots.push(-cs[0] / cs[1]);
        return Ok(roots);
    }

    if let Some(eigs) = companion_eigenvalues(cs) {
        roots.extend(eigs);
        return Ok(roots);
    }
    // The QR iteration cannot break perfectly rotation-symmetric spectra
    // (e.g. z^n - c, whose companion matrix is cyclic). A Taylor shift
    // z -> z + c destroys the symmetry; shift the roots back afterwards.
    let shift = Complex64::new(0.34718, 0.212347);
    let max_root = 1.0
        + cs[..cs.len() - 1]
            .iter()
            .map(|c| (c / cs[cs.len() - 1]).norm())
            .fold(0.0, f64::max);
    let shift = shift * max_root;
    let mut shifted = cs.to_vec();
    for k in 0..deg {
        for j in (k..deg).rev() {
            let t = shift * shifted[j + 1];
            shifted[j] += t;
        }
    }
    let eigs = companion_eigenvalues(&shifted).ok_or(Error::RootFindingFailure)?;
    roots.extend(eigs.into_iter().map(|z| z + shift));
    Ok(roots)
}

/// Eigenvalues of the (monic-normalized) companion matrix of the ascending
/// coefficient list, which must have a nonzero leading coefficient.
fn companion_eigenvalues(cs: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = cs.len() - 1;
    let lead = cs[deg];
    let mut companion = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -cs[i] / lead;
    }
    let eigs = companion.try_schur(1e-15, 20_000)?.eigenvalues()?;
    Some(eigs.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        // (z - 2)(z + 3i) = z^2 + (3i - 2) z - 6i
        let roots = polynomial_roots(&[c(0.0, -6.0), c(-2.0, 3.0), c(1.0, 0.0)]).unwrap();
        let mut found2 = false;
        let mut found3i = false;
        for r in roots {
            if (r - c(2.0, 0.0)).norm() < 1e-12 {
                found2 = true;
            }
            if (r - c(0.0, -3.0)).norm() < 1e-12 {
                found3i = true;
            }
        }
        assert!(found2 && found3i);
    }

    #[test]
    fn trailing_zero_gives_origin_root() {
        // z^3 - z^2 = z^2 (z - 1)
        let roots =
            polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().filter(|r| r.norm() < 1e-12).count() == 2);
        assert!(roots.iter().any(|r| (r - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn high_degree_unit_roots() {
        // z^16 - 1: all roots on the unit circle.
        let mut cs = vec![c(0.0, 0.0); 17];
        cs[0] = c(-1.0, 0.0);
        cs[16] = c(1.0, 0.0);
        let roots = polynomial_roots(&cs).unwrap();
        assert_eq!(roots.len(), 16);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-10);
            assert!((r.powu(16) - c(1.0, 0.0)).norm() < 1e-9);
        }
    }
}
