//! `npspec`: spectra, Grauert-radius estimates, and eigenvalue-decay reports
//! for the Neumann-Poincare operator on analytic planar curves.
//!
//! Exit codes: 0 success, 1 computation failure, 2 usage/config error.

mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use npspec_core::analysis::decay_fit;
use npspec_core::curves::{make_curve, Curve, CurveSpec, Parametrization};
use npspec_core::grauert::{chebyshev_rate, closed_form_radius, trigpoly_radius, strip_radius_upper, GrauertEstimate};
use npspec_core::np_kernel::nystrom_matrix;
use npspec_core::spectrum::{np_spectrum, Spectrum};
use npspec_core::verify::run_criteria;
use npspec_core::{fmt_f64, Error};
use num_complex::Complex64;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "npspec", version, about = "NP-operator spectra and analyticity-driven decay estimates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalues of the discretized NP operator (trivial eigenvalue removed)
    Spectrum(RunArgs),
    /// Grauert-radius estimates: closed form, collision roots, decay bound
    Grauert(RunArgs),
    /// Spectrum + decay fit + radius, with the ratio of measured to predicted rate
    Decay(RunArgs),
    /// Run the acceptance criteria suite
    Verify {
        /// Run only criteria whose name contains this substring
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Curve as inline JSON or a path to a JSON file
    #[arg(long)]
    curve: String,

    /// Grid size (even, 16..=4096)
    #[arg(long = "N", default_value_t = 256)]
    n: usize,

    /// Magnitudes below this are treated as numerically zero (1e-15..=1e-3)
    #[arg(long, default_value_t = 1e-12)]
    floor: f64,

    /// Output path prefix; extension is appended. Without it, print to stdout
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Also write an SVG plot (requires --out)
    #[arg(long)]
    plot: bool,
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Invalid(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.cmd {
        Cmd::Spectrum(args) => cmd_spectrum(&args),
        Cmd::Grauert(args) => cmd_grauert(&args),
        Cmd::Decay(args) => cmd_decay(&args),
        Cmd::Verify { only } => return cmd_verify(only.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// NPSPEC_THREADS caps the rayon worker count.
fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("NPSPEC_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("NPSPEC_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

fn validate(args: &RunArgs) -> Result<(), CliError> {
    if args.n % 2 != 0 || !(16..=4096).contains(&args.n) {
        return Err(CliError::Usage(format!(
            "invalid --N {}: must be even and within [16, 4096]",
            args.n
        )));
    }
    if !(1e-15..=1e-3).contains(&args.floor) {
        return Err(CliError::Usage(format!(
            "invalid --floor {:e}: must lie within [1e-15, 1e-3]",
            args.floor
        )));
    }
    Ok(())
}

fn parse_curve(arg: &str) -> Result<Curve, CliError> {
    let json = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| CliError::Usage(format!("cannot read curve file `{arg}`: {e}")))?
    };
    let spec: CurveSpec = serde_json::from_str(&json)
        .map_err(|e| CliError::Usage(format!("invalid curve JSON: {e}")))?;
    Ok(make_curve(spec)?)
}

fn write_output(out: Option<&Path>, ext: &str, content: &str) -> Result<(), CliError> {
    match out {
        Some(prefix) => {
            let mut path = prefix.as_os_str().to_owned();
            path.push(".");
            path.push(ext);
            if let Some(dir) = Path::new(&path).parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(&path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Modified Grauert radius governing the decay rate: the best closed form
/// over parametrizations (the limacon improves from its naive chart).
fn eps_partial(spec: &CurveSpec) -> Option<f64> {
    let best = match spec {
        CurveSpec::Limacon { a, .. } => CurveSpec::limacon(*a, Parametrization::Optimal),
        other => other.clone(),
    };
    closed_form_radius(&best).ok().map(|e| e.value)
}

/// Laurent coefficients of q when the curve is a finite trigonometric series.
fn finite_series(spec: &CurveSpec) -> Option<Vec<(i64, Complex64)>> {
    let one = Complex64::new(1.0, 0.0);
    match spec {
        CurveSpec::Circle { r } => Some(vec![(1, r * one)]),
        CurveSpec::Ellipse { a, b } => {
            Some(vec![(1, (a + b) / 2.0 * one), (-1, (a - b) / 2.0 * one)])
        }
        CurveSpec::Limacon {
            a,
            parametrization: Parametrization::Naive,
        } => Some(vec![(1, one), (2, a * one)]),
        CurveSpec::Fourier { coeffs } => Some(
            coeffs
                .iter()
                .map(|c| (c.k, Complex64::new(c.re, c.im)))
                .collect(),
        ),
        _ => None,
    }
}

fn pair_log_points(spec: &Spectrum, floor: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for n in 1..=spec.lambdas.len() / 2 {
        match spec.pair_magnitude(n) {
            Ok(mu) if mu > floor => pts.push((n as f64, mu.ln())),
            _ => break,
        }
    }
    pts
}

fn decay_series(
    spec: &Spectrum,
    floor: f64,
    eps: Option<f64>,
    fit: Option<&npspec_core::analysis::DecayFit>,
) -> Vec<svg::Series> {
    let pts = pair_log_points(spec, floor);
    let x_last = pts.last().map(|&(x, _)| x);
    let mut series = vec![svg::Series {
        label: "ln |lambda_2n|".into(),
        points: pts,
        color: "#1f6fb2",
        dashed: false,
    }];
    if let (Some(eps), Some(x1)) = (eps.filter(|e| e.is_finite()), x_last) {
        let line = |x: f64| 0.5_f64.ln() - eps * x;
        series.push(svg::Series {
            label: "slope -eps_q".into(),
            points: vec![(1.0, line(1.0)), (x1, line(x1))],
            color: "#b22222",
            dashed: true,
        });
    }
    if let (Some(f), Some(x1)) = (fit, x_last) {
        let line = |x: f64| f.intercept - f.rate * x;
        series.push(svg::Series {
            label: "fitted rate".into(),
            points: vec![(1.0, line(1.0)), (x1, line(x1))],
            color: "#2e8b57",
            dashed: true,
        });
    }
    series
}

fn cmd_spectrum(args: &RunArgs) -> Result<(), CliError> {
    validate(args)?;
    let curve = parse_curve(&args.curve)?;
    let op = nystrom_matrix(&curve, args.n)?;
    let spec = np_spectrum(&op)?;
    match args.format {
        Format::Json => write_output(args.out.as_deref(), "json", &(spec.to_json() + "\n"))?,
        Format::Csv => write_output(args.out.as_deref(), "csv", &spec.to_csv())?,
    }
    if args.plot {
        let out = args
            .out
            .as_deref()
            .ok_or_else(|| CliError::Usage("--plot requires --out".into()))?;
        let series = decay_series(&spec, args.floor, eps_partial(curve.spec()), None);
        let chart = svg::line_chart(
            &format!("NP spectrum: {}", curve.spec().kind_name()),
            "pair index n",
            "ln |lambda_2n|",
            &series,
        );
        write_output(Some(out), "svg", &chart)?;
    }
    Ok(())
}

fn estimate_json(e: &Option<GrauertEstimate>) -> String {
    e.as_ref().map_or("null".into(), |est| est.to_json())
}

fn cmd_grauert(args: &RunArgs) -> Result<(), CliError> {
    validate(args)?;
    let curve = parse_curve(&args.curve)?;
    let spec = curve.spec();

    let trigpoly = match finite_series(spec) {
        Some(coeffs) => Some(trigpoly_radius(&coeffs, 512)?),
        None => None,
    };
    let strip_upper = {
        let coeffs = match finite_series(spec) {
            Some(c) => c,
            None => curve.fourier_coeffs_of_q(256)?,
        };
        match strip_radius_upper(&coeffs) {
            Ok(est) => Some(est),
            Err(Error::InsufficientDecay) | Err(Error::DegenerateSeries) => None,
            Err(e) => return Err(e.into()),
        }
    };

    let json = match spec {
        CurveSpec::Limacon { a, .. } => {
            let naive = closed_form_radius(&CurveSpec::limacon(*a, Parametrization::Naive))?;
            let optimal = closed_form_radius(&CurveSpec::limacon(*a, Parametrization::Optimal))?;
            let eps_c = chebyshev_rate(optimal.value);
            format!(
                "{{\"curve\":{},\"naive\":{},\"optimal\":{},\"trigpoly\":{},\"strip_upper\":{},\"eps_c_of_optimal\":{}}}\n",
                serde_json::to_string(spec).unwrap(),
                naive.to_json(),
                optimal.to_json(),
                estimate_json(&trigpoly),
                estimate_json(&strip_upper),
                fmt_f64(eps_c)
            )
        }
        _ => {
            let closed = closed_form_radius(spec).ok();
            let best = closed
                .as_ref()
                .map(|e| e.value)
                .or(trigpoly.as_ref().map(|e| e.value))
                .or(strip_upper.as_ref().map(|e| e.value));
            let eps_c = best.map_or("null".to_string(), |e| fmt_f64(chebyshev_rate(e)));
            format!(
                "{{\"curve\":{},\"closed_form\":{},\"trigpoly\":{},\"strip_upper\":{},\"eps_c\":{}}}\n",
                serde_json::to_string(spec).unwrap(),
                estimate_json(&closed),
                estimate_json(&trigpoly),
                estimate_json(&strip_upper),
                eps_c
            )
        }
    };

    match args.format {
        Format::Json => write_output(args.out.as_deref(), "json", &json)?,
        Format::Csv => {
            // Flat key,value view of the same report.
            let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
            let mut csv = String::from("key,value\n");
            if let serde_json::Value::Object(map) = parsed {
                for (k, v) in map {
                    if k == "curve" {
                        continue;
                    }
                    let val = match &v {
                        serde_json::Value::Object(o) => o
                            .get("value")
                            .map(|x| x.to_string())
                            .unwrap_or_else(|| "null".into()),
                        other => other.to_string(),
                    };
                    csv.push_str(&format!("{k},{}\n", val.trim_matches('"')));
                }
            }
            write_output(args.out.as_deref(), "csv", &csv)?;
        }
    }
    Ok(())
}

fn cmd_decay(args: &RunArgs) -> Result<(), CliError> {
    validate(args)?;
    let curve = parse_curve(&args.curve)?;
    let op = nystrom_matrix(&curve, args.n)?;
    let spec = np_spectrum(&op)?;
    let eps = eps_partial(curve.spec());

    let fit = match decay_fit(&spec, args.floor) {
        Ok(f) => Some(f),
        Err(Error::TooFewPairs { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let fit_json = match &fit {
        Some(f) => format!(
            "{{\"rate\":{},\"intercept\":{},\"prefactor\":{},\"n_pairs\":{},\"max_residual\":{}}}",
            fmt_f64(f.rate),
            fmt_f64(f.intercept),
            fmt_f64(f.intercept.exp()),
            f.n_pairs,
            fmt_f64(f.max_residual)
        ),
        None => "null".into(),
    };
    let note = if fit.is_none() {
        "\"rate below floor everywhere\""
    } else {
        "null"
    };
    let eps_json = eps.map_or("null".to_string(), |e| fmt_f64(e));
    let ratio = match (&fit, eps) {
        (Some(f), Some(e)) if e.is_finite() => fmt_f64(f.rate / e),
        _ => "null".into(),
    };
    let json = format!(
        "{{\"curve\":{},\"n_nodes\":{},\"floor\":{},\"fit\":{},\"note\":{},\"eps_q\":{},\"ratio\":{}}}\n",
        serde_json::to_string(curve.spec()).unwrap(),
        args.n,
        fmt_f64(args.floor),
        fit_json,
        note,
        eps_json,
        ratio
    );

    match args.format {
        Format::Json => write_output(args.out.as_deref(), "json", &json)?,
        Format::Csv => {
            let mut csv = String::from("key,value\n");
            if let Some(f) = &fit {
                csv.push_str(&format!("rate,{}\n", fmt_f64(f.rate)));
                csv.push_str(&format!("n_pairs,{}\n", f.n_pairs));
            } else {
                csv.push_str("rate,below floor everywhere\n");
            }
            if let Some(e) = eps {
                csv.push_str(&format!("eps_q,{}\n", fmt_f64(e).trim_matches('"')));
            }
            write_output(args.out.as_deref(), "csv", &csv)?;
        }
    }

    if args.plot {
        let out = args
            .out
            .as_deref()
            .ok_or_else(|| CliError::Usage("--plot requires --out".into()))?;
        let series = decay_series(&spec, args.floor, eps, fit.as_ref());
        let chart = svg::line_chart(
            &format!("Eigenvalue decay: {}", curve.spec().kind_name()),
            "pair index n",
            "ln |lambda_2n|",
            &series,
        );
        write_output(Some(out), "svg", &chart)?;
    }
    Ok(())
}

fn cmd_verify(only: Option<&str>) -> ExitCode {
    let results = run_criteria(only);
    if results.is_empty() {
        eprintln!("no criteria match the filter");
        return ExitCode::from(2);
    }
    let mut all = true;
    for r in &results {
        println!(
            "criterion {:>2} {:<26} {} [{:>8.2?}] {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.runtime,
            r.detail
        );
        all &= r.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
