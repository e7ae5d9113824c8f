//! Thin wrapper around rustfft fixing the Fourier-coefficient convention used
//! throughout: grid t_j = -pi + 2*pi*j/N and
//! c_k = (1/2pi) int f(t) e^{-ikt} dt ~ (1/N) sum_j f(t_j) e^{-ik t_j}.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Uniform grid node t_j = -pi + 2*pi*j/n.
pub fn grid_node(n: usize, j: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n as f64
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| grid_node(n, j)).collect()
}

/// Fourier coefficients of samples on the `grid(n)` nodes.
pub struct FourierTable {
    n: usize,
    bins: Vec<Complex64>,
}

impl FourierTable {
    pub fn new(samples: &[Complex64]) -> Self {
        let n = samples.len();
        let mut bins = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut bins);
        let scale = 1.0 / n as f64;
        for b in &mut bins {
            *b *= scale;
        }
        FourierTable { n, bins }
    }

    pub fn from_real(samples: &[f64]) -> Self {
        let cs: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&cs)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Coefficient c_k; valid for |k| < n (aliased beyond n/2 as usual).
    /// The grid starts at -pi, hence the (-1)^k twiddle relative to the raw DFT.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k.rem_euclid(self.n as i64) as usize;
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * self.bins[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_coefficient() {
        let n = 32;
        let samples: Vec<Complex64> = grid(n)
            .iter()
            .map(|&t| (Complex64::i() * 3.0 * t).exp() * 2.5)
            .collect();
        let table = FourierTable::new(&samples);
        assert!((table.coeff(3) - Complex64::new(2.5, 0.0)).norm() < 1e-13);
        for k in -15..=16 {
            if k != 3 {
                assert!(table.coeff(k).norm() < 1e-13, "k={k}");
            }
        }
    }

    #[test]
    fn negative_mode() {
        let n = 64;
        let samples: Vec<Complex64> = grid(n)
            .iter()
            .map(|&t| (Complex64::i() * -5.0 * t).exp())
            .collect();
        let table = FourierTable::new(&samples);
        assert!((table.coeff(-5) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }
}
