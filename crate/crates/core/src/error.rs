use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("degenerate curve: |q'(t)| = {min_deriv:.3e} at t = {t:.6} on the sample grid")]
    DegenerateCurve { t: f64, min_deriv: f64 },

    #[error("argument outside strip of analyticity: |Im t| = {im:.6} >= {halfwidth:.6}")]
    OutOfStrip { im: f64, halfwidth: f64 },

    #[error("kernel denominator below 1e-13 at s = {s_re:.6}{s_im:+.6}i (condition (G) collision)")]
    PoleEncountered { s_re: f64, s_im: f64 },

    #[error("coincident points: |t - s| mod 2pi = {dist:.3e} < 1e-12; use the diagonal formula")]
    CoincidentPoints { dist: f64 },

    #[error("not mean-zero: weighted mean {mean:.3e} exceeds tolerance {tol:.3e}")]
    NotMeanZero { mean: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no eigenvalue within 1e-6 of 1/2 (closest at distance {closest:.3e}); grid under-resolved")]
    TrivialEigNotFound { closest: f64 },

    #[error("spectrum not real: max |Im| = {residual:.3e} exceeds 1e-6")]
    NonRealSpectrum { residual: f64 },

    #[error("H* form is not positive definite on the mean-zero subspace")]
    IndefiniteForm,

    #[error("no closed-form Grauert radius for curve kind `{0}`")]
    UnsupportedKind(&'static str),

    #[error("degenerate series: every coefficient with k != 0 vanishes")]
    DegenerateSeries,

    #[error("companion-matrix eigensolve did not converge")]
    RootFindingFailure,

    #[error("Fourier coefficients do not decay")]
    InsufficientDecay,

    #[error("insufficient range: need at least {needed} usable coefficients, found {found}")]
    InsufficientRange { needed: usize, found: usize },

    #[error("too few eigenvalue pairs above the floor: need {needed}, found {found}")]
    TooFewPairs { needed: usize, found: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
