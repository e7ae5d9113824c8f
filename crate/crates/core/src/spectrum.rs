//! Eigenvalues of the discretized NP operator on the mean-zero space.
//!
//! Two routes are provided: a plain nonsymmetric eigensolve of the Nystrom
//! matrix with the trivial eigenvalue 1/2 removed, and a symmetrized
//! generalized eigensolve that uses the single-layer Gram form to restrict
//! the (similarity-transformed) Nystrom matrix to the discrete mean-zero
//! subspace, where Plemelj's symmetrization principle makes it self-adjoint.

use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::np_kernel::{DiscreteOperator, OperatorKind};
use crate::single_layer::InnerProductForm;
use nalgebra::{DMatrix, DVector};

/// Floor below which eigenvalues are treated as numerical noise and exempted
/// from the sign-pairing bookkeeping.
pub const PAIRING_NOISE_FLOOR: f64 = 1e-13;

/// Index bookkeeping for the +/- symmetry of the nontrivial NP spectrum.
#[derive(Clone, Debug, Default)]
pub struct PairingReport {
    /// (index of positive member, index of negative member) into `lambdas`.
    pub pairs: Vec<(usize, usize)>,
    /// Indices above the noise floor that found no partner.
    pub unpaired: Vec<usize>,
    /// Largest magnitude mismatch | |l+| - |l-| | over the matched pairs.
    pub max_mismatch: f64,
}

/// Nontrivial spectrum of a discrete NP operator, sorted by decreasing
/// magnitude (positive member of a pair first on ties).
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub lambdas: Vec<f64>,
    /// The removed trivial eigenvalue and its distance to 1/2, when the
    /// spectrum came from the unrestricted Nystrom matrix.
    pub dropped_half: Option<(f64, f64)>,
    /// Largest imaginary part seen in the raw eigensolve.
    pub imag_residual_max: f64,
    pub pairing: PairingReport,
    pub curve: crate::curves::CurveSpec,
    pub n_nodes: usize,
    pub notes: Vec<String>,
}

impl Spectrum {
    /// Magnitude of the n-th eigenvalue pair (1-based): with the list sorted
    /// by decreasing magnitude, the pair {+mu_n, -mu_n} occupies slots
    /// 2n-2 and 2n-1, so its magnitude is |lambdas[2n-1]|.
    pub fn pair_magnitude(&self, n: usize) -> Result<f64> {
        if n == 0 || 2 * n > self.lambdas.len() {
            return Err(Error::Invalid(format!(
                "pair index {n} out of range for {} eigenvalues",
                self.lambdas.len()
            )));
        }
        Ok(self.lambdas[2 * n - 1].abs())
    }

    pub fn to_json(&self) -> String {
        let lams: Vec<String> = self.lambdas.iter().map(|&x| fmt_f64(x)).collect();
        let dropped = match self.dropped_half {
            Some((v, d)) => format!(
                "{{\"value\":{},\"dist_to_half\":{}}}",
                fmt_f64(v),
                fmt_f64(d)
            ),
            None => "null".into(),
        };
        let pairs: Vec<String> = self
            .pairing
            .pairs
            .iter()
            .map(|&(p, m)| format!("[{p},{m}]"))
            .collect();
        let unpaired: Vec<String> =
            self.pairing.unpaired.iter().map(|i| i.to_string()).collect();
        let notes: Vec<String> = self
            .notes
            .iter()
            .map(|s| serde_json::to_string(s).unwrap())
            .collect();
        format!(
            "{{\"curve\":{},\"n_nodes\":{},\"lambdas\":[{}],\"dropped_half\":{},\
             \"imag_residual_max\":{},\"pairing\":{{\"pairs\":[{}],\"unpaired\":[{}],\
             \"max_mismatch\":{}}},\"notes\":[{}]}}",
            serde_json::to_string(&self.curve).unwrap(),
            self.n_nodes,
            lams.join(","),
            dropped,
            fmt_f64(self.imag_residual_max),
            pairs.join(","),
            unpaired.join(","),
            fmt_f64(self.pairing.max_mismatch),
            notes.join(",")
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda\n");
        for (i, &l) in self.lambdas.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", fmt_f64(l)));
        }
        out
    }
}

/// Deterministic ordering: decreasing |lambda|, positive member first on ties.
fn sort_spectrum(lams: &mut [f64]) {
    lams.sort_by(|a, b| {
        b.abs()
            .partial_cmp(&a.abs())
            .unwrap()
            .then(b.partial_cmp(a).unwrap())
    });
}

/// Greedy matching of opposite-sign eigenvalues of equal magnitude.
fn pair_spectrum(lams: &[f64]) -> PairingReport {
    let mut report = PairingReport::default();
    let mut taken = vec![false; lams.len()];
    for i in 0..lams.len() {
        if taken[i] || lams[i].abs() <= PAIRING_NOISE_FLOOR {
            continue;
        }
        let tol = (1e-6 * lams[i].abs()).max(1e-10);
        let mut partner = None;
        for j in i + 1..lams.len() {
            if taken[j] || lams[j].abs() <= PAIRING_NOISE_FLOOR {
                continue;
            }
            if lams[i].signum() != lams[j].signum()
                && (lams[i].abs() - lams[j].abs()).abs() <= tol
            {
                partner = Some(j);
                break;
            }
        }
        match partner {
            Some(j) => {
                taken[i] = true;
                taken[j] = true;
                let (p, m) = if lams[i] > 0.0 { (i, j) } else { (j, i) };
                let mismatch = (lams[i].abs() - lams[j].abs()).abs();
                report.max_mismatch = report.max_mismatch.max(mismatch);
                report.pairs.push((p, m));
            }
            None => report.unpaired.push(i),
        }
    }
    report
}

/// Eigenvalues of the NP Nystrom matrix with the trivial eigenvalue removed.
///
/// The raw spectrum must be real to 1e-6 (the kernel is real and the true
/// operator is symmetrizable); exactly one eigenvalue within 1e-6 of 1/2 is
/// dropped. Eigenvalues come back sorted by decreasing magnitude.
pub fn np_spectrum(op: &DiscreteOperator) -> Result<Spectrum> {
    if op.kind != OperatorKind::Np {
        return Err(Error::UnsupportedKind("np_spectrum requires an NP operator"));
    }
    let eigs = op.matrix.clone().complex_eigenvalues();
    let imag_residual_max = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_residual_max > 1e-6 {
        return Err(Error::NonRealSpectrum {
            residual: imag_residual_max,
        });
    }
    let mut reals: Vec<f64> = eigs.iter().map(|z| z.re).collect();

    let (trivial_idx, closest) = reals
        .iter()
        .enumerate()
        .map(|(i, &l)| (i, (l - 0.5).abs()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    if closest > 1e-6 {
        return Err(Error::TrivialEigNotFound { closest });
    }
    let trivial = reals.swap_remove(trivial_idx);
    let mut notes = Vec::new();
    if closest > 1e-8 {
        notes.push(format!(
            "trivial eigenvalue off 1/2 by {closest:.3e}; grid may be too coarse"
        ));
    }

    sort_spectrum(&mut reals);
    let pairing = pair_spectrum(&reals);
    Ok(Spectrum {
        lambdas: reals,
        dropped_half: Some((trivial, closest)),
        imag_residual_max,
        pairing,
        curve: op.curve.clone(),
        n_nodes: op.n_nodes,
        notes,
    })
}

/// Orthonormal basis of the complement of `u`, as the trailing N-1 columns of
/// the Householder reflector sending e_0 to a multiple of u/|u|.
fn complement_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let uhat = u / u.norm();
    let mut v = uhat.clone();
    v[0] += uhat[0].signum() * 1.0;
    let scale = 2.0 / v.norm_squared();
    let mut h = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= scale * v[i] * v[j];
        }
    }
    h.columns(1, n - 1).into_owned()
}

/// Spectrum of the symmetrized pencil on the discrete mean-zero space.
///
/// With D = diag(|q'_i|), the similarity N~ = D^{-1} M D keeps the Nystrom
/// eigenvalues while making G N~ symmetric (G the single-layer Gram matrix).
/// Restricting to the orthogonal complement of u_i = w |q'_i| removes the
/// constants, where G is positive definite, and the pencil
/// (Q^T G N~ Q) x = lambda (Q^T G Q) x reduces by Cholesky to an ordinary
/// symmetric eigenproblem.
pub fn symmetrized_spectrum(op: &DiscreteOperator, form: &InnerProductForm) -> Result<Spectrum> {
    if op.kind != OperatorKind::Np {
        return Err(Error::UnsupportedKind(
            "symmetrized_spectrum requires an NP operator",
        ));
    }
    let n = op.n_nodes;
    if form.n_nodes() != n {
        return Err(Error::DimensionMismatch(format!(
            "symmetrized_spectrum: N = {} vs {}",
            n,
            form.n_nodes()
        )));
    }
    if op.curve != form.sl.curve {
        return Err(Error::DimensionMismatch(
            "symmetrized_spectrum: operators come from different curves".into(),
        ));
    }

    let d = DVector::from_iterator(n, op.arclen.iter().copied());
    let mut ntilde = op.matrix.clone();
    for i in 0..n {
        for j in 0..n {
            ntilde[(i, j)] *= d[j] / d[i];
        }
    }
    let a_full = {
        let ga = &form.gram * &ntilde;
        0.5 * (&ga + ga.transpose())
    };

    let u = DVector::from_iterator(n, op.arclen.iter().map(|&ai| op.weight * ai));
    let q = complement_basis(&u);
    let a_r = q.transpose() * &a_full * &q;
    let b_r = q.transpose() * &form.gram * &q;

    let chol = nalgebra::Cholesky::new(0.5 * (&b_r + b_r.transpose()))
        .ok_or(Error::IndefiniteForm)?;
    let l = chol.l();
    let tmp = l
        .solve_lower_triangular(&a_r)
        .ok_or(Error::IndefiniteForm)?;
    let c = l
        .solve_lower_triangular(&tmp.transpose())
        .ok_or(Error::IndefiniteForm)?;
    let c = 0.5 * (&c + c.transpose());
    let eig = nalgebra::SymmetricEigen::new(c);

    let mut lams: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    sort_spectrum(&mut lams);
    let pairing = pair_spectrum(&lams);
    Ok(Spectrum {
        lambdas: lams,
        dropped_half: None,
        imag_residual_max: 0.0,
        pairing,
        curve: op.curve.clone(),
        n_nodes: n,
        notes: Vec::new(),
    })
}

/// Largest deviation between two spectra above `floor`. The positive and
/// negative branches are compared separately: the magnitude sort may order
/// the two members of a +/- pair differently between the lists when their
/// magnitudes agree to rounding.
pub fn spectrum_agreement(a: &Spectrum, b: &Spectrum, floor: f64) -> f64 {
    let branch = |s: &Spectrum, sign: f64| -> Vec<f64> {
        s.lambdas
            .iter()
            .filter(|&&l| l.signum() == sign && l.abs() > floor)
            .copied()
            .collect()
    };
    let mut worst = 0.0_f64;
    for sign in [1.0, -1.0] {
        let xs = branch(a, sign);
        let ys = branch(b, sign);
        for (la, lb) in xs.iter().zip(&ys) {
            worst = worst.max((la - lb).abs());
        }
    }
    worst
}
