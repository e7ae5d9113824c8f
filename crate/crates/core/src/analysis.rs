//! Quantitative checks of the exponential eigenvalue decay: Fourier analysis
//! of the NP kernel in its second argument, the discrete H^{-1/2} norm,
//! operator norms of the high-mode truncations, the Weyl-Courant comparison
//! between those norms and the eigenvalue pairs, and least-squares decay fits.

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::fft::{self, FourierTable};
use crate::fit::least_squares_line;
use crate::np_kernel::{kernel_diag, kernel_value};
use crate::spectrum::Spectrum;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Fourier coefficients a_k(t_i) of s -> K(t_i, s) at every grid node t_i,
/// for |k| <= n/2 - 1.
pub struct KernelFourierTable {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub k_max: i64,
    rows: Vec<FourierTable>,
}

impl KernelFourierTable {
    fn from_rows(n: usize, rows: Vec<FourierTable>) -> Self {
        KernelFourierTable {
            n,
            nodes: fft::grid(n),
            k_max: n as i64 / 2 - 1,
            rows,
        }
    }

    pub fn coeff(&self, i: usize, k: i64) -> Complex64 {
        self.rows[i].coeff(k)
    }

    /// max_i |a_k(t_i)|.
    pub fn max_abs(&self, k: i64) -> f64 {
        self.rows
            .iter()
            .map(|r| r.coeff(k).norm())
            .fold(0.0, f64::max)
    }
}

/// Kernel Fourier table of the NP kernel of `curve` on the N-node grid.
pub fn kernel_fourier_coeffs(curve: &Curve, n: usize) -> Result<KernelFourierTable> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "kernel_fourier_coeffs requires even N >= 16, got {n}"
        )));
    }
    let nodes = fft::grid(n);
    let rows: Vec<Result<FourierTable>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut samples = Vec::with_capacity(n);
            for j in 0..n {
                let v = if i == j {
                    kernel_diag(curve, nodes[i])
                } else {
                    kernel_value(curve, nodes[i], nodes[j])?
                };
                samples.push(v);
            }
            Ok(FourierTable::from_real(&samples))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(KernelFourierTable::from_rows(n, rows))
}

/// Table built from an explicit kernel function; used to validate the
/// analysis pipeline against synthetic kernels with known coefficients.
pub fn kernel_table_from_fn<F>(n: usize, f: F) -> KernelFourierTable
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let nodes = fft::grid(n);
    let rows: Vec<FourierTable> = (0..n)
        .into_par_iter()
        .map(|i| {
            let samples: Vec<f64> = (0..n).map(|j| f(nodes[i], nodes[j])).collect();
            FourierTable::from_real(&samples)
        })
        .collect();
    KernelFourierTable::from_rows(n, rows)
}

/// Exponential decay rate of the kernel coefficients: least-squares slope of
/// -ln(max_i max(|a_k|, |a_{-k}|)) against k, restricted to magnitudes in
/// [1e-12, 1e-2] to stay clear of both round-off and the non-asymptotic head.
pub fn coeff_decay_rate(table: &KernelFourierTable) -> Result<f64> {
    let mut ks = Vec::new();
    let mut logs = Vec::new();
    for k in 1..=table.k_max {
        let mag = table.max_abs(k).max(table.max_abs(-k));
        if (1e-12..=1e-2).contains(&mag) {
            ks.push(k as f64);
            logs.push(mag.ln());
        }
    }
    if ks.len() < 8 {
        return Err(Error::InsufficientRange {
            needed: 8,
            found: ks.len(),
        });
    }
    let (slope, _) = least_squares_line(&ks, &logs);
    if slope >= 0.0 {
        return Err(Error::InsufficientDecay);
    }
    Ok(-slope)
}

/// Discrete H^{-1/2} norm of mean-zero grid samples:
/// ||f||^2 = sum_{0 < |k| < N/2} |f_hat(k)|^2 / |k|.
pub fn hminushalf_norm(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 16 || n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "hminushalf_norm requires even N >= 16, got {n}"
        )));
    }
    let table = FourierTable::from_real(samples);
    let rms = (samples.iter().map(|&x| x * x).sum::<f64>() / n as f64).sqrt();
    let mean = table.coeff(0).re;
    let tol = 1e-10 * (rms + f64::MIN_POSITIVE);
    if mean.abs() > tol {
        return Err(Error::NotMeanZero { mean, tol });
    }
    let mut sum = 0.0;
    for k in 1..(n as i64 / 2) {
        sum += (table.coeff(k).norm_sqr() + table.coeff(-k).norm_sqr()) / k as f64;
    }
    Ok(sum.sqrt())
}

/// Operator norms of the high-mode truncations K (I - P_n) on the discrete
/// H^{-1/2} space, for n = 1..=n_max (capped at N/4).
///
/// In the orthonormal basis e_j / sqrt(|j|) the operator with kernel
/// K(t, s) = sum_{m,k} A(m, k) e^{imt} e^{iks} acting by integration in s has
/// matrix entries 2*pi*A(m, -j)*sqrt(|j|/|m|); dropping the columns |j| < n
/// gives the truncation, whose largest singular value is the norm.
pub fn truncation_norms(table: &KernelFourierTable, n_max: usize) -> Result<Vec<f64>> {
    let k_max = table.k_max;
    let cap = (table.n / 4).max(1);
    if n_max == 0 || n_max > cap {
        return Err(Error::Invalid(format!(
            "truncation level must lie in 1..={cap} for N = {}, got {n_max}",
            table.n
        )));
    }

    // Bi-Fourier coefficients: for fixed k, transform i -> a_k(t_i).
    let modes: Vec<i64> = (1..=k_max).flat_map(|k| [k, -k]).collect();
    let col_tables: Vec<(i64, FourierTable)> = modes
        .par_iter()
        .map(|&j| {
            let samples: Vec<Complex64> = (0..table.n).map(|i| table.coeff(i, -j)).collect();
            (j, FourierTable::new(&samples))
        })
        .collect();

    let two_pi = 2.0 * std::f64::consts::PI;
    let full = DMatrix::from_fn(modes.len(), modes.len(), |mi, ji| {
        let m = modes[mi];
        let (j, ft) = &col_tables[ji];
        two_pi * ft.coeff(m) * (j.unsigned_abs() as f64 / m.unsigned_abs() as f64).sqrt()
    });

    let norms: Vec<f64> = (1..=n_max)
        .into_par_iter()
        .map(|level| {
            let keep: Vec<usize> = modes
                .iter()
                .enumerate()
                .filter(|(_, &j)| j.unsigned_abs() as usize >= level)
                .map(|(ji, _)| ji)
                .collect();
            let sub = full.select_columns(keep.iter());
            sub.singular_values().max()
        })
        .collect();
    Ok(norms)
}

/// Per-pair comparison of eigenvalue magnitudes against the truncation norms.
/// The Weyl-Courant inequality gives |lambda_{2n}| <= ||K (I - P_n)||, so
/// `min_margin` should stay above (minus) discretization noise.
#[derive(Clone, Debug)]
pub struct WeylCourantReport {
    /// (pair index n, pair magnitude, truncation norm at level n).
    pub entries: Vec<(usize, f64, f64)>,
    /// min over entries of norm_n - |lambda_{2n}|.
    pub min_margin: f64,
}

pub fn weyl_courant_check(spec: &Spectrum, norms: &[f64], floor: f64) -> WeylCourantReport {
    let mut entries = Vec::new();
    let mut min_margin = f64::INFINITY;
    let pair_count = spec.lambdas.len() / 2;
    for n in 1..=pair_count.min(norms.len()) {
        let mu = match spec.pair_magnitude(n) {
            Ok(m) => m,
            Err(_) => break,
        };
        if mu <= floor {
            break;
        }
        let norm = norms[n - 1];
        min_margin = min_margin.min(norm - mu);
        entries.push((n, mu, norm));
    }
    WeylCourantReport {
        entries,
        min_margin,
    }
}

/// Least-squares fit of ln |lambda_{2n}| against n.
#[derive(Clone, Copy, Debug)]
pub struct DecayFit {
    /// Fitted decay rate: |lambda_{2n}| ~ C e^{-rate * n}.
    pub rate: f64,
    /// ln C.
    pub intercept: f64,
    /// Number of pairs entering the fit.
    pub n_pairs: usize,
    /// Largest absolute residual of the fit in log scale.
    pub max_residual: f64,
}

/// Fit the decay rate over pairs with magnitude in (floor, 0.4); at least
/// five pairs are required for a meaningful slope.
pub fn decay_fit(spec: &Spectrum, floor: f64) -> Result<DecayFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let pair_count = spec.lambdas.len() / 2;
    for n in 1..=pair_count {
        let mu = spec.pair_magnitude(n)?;
        if mu > floor && mu < 0.4 {
            xs.push(n as f64);
            ys.push(mu.ln());
        }
    }
    if xs.len() < 5 {
        return Err(Error::TooFewPairs {
            needed: 5,
            found: xs.len(),
        });
    }
    let (slope, intercept) = least_squares_line(&xs, &ys);
    if slope >= 0.0 {
        return Err(Error::InsufficientDecay);
    }
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit {
        rate: -slope,
        intercept,
        n_pairs: xs.len(),
        max_residual,
    })
}
