//! `wspace` — command-line front end for the `wspace` toolkit.
//!
//! Subcommands:
//!
//! * `validate` — check a superpotential descriptor and print a JSON report;
//! * `verify` — run the numbered verification criteria and write the report;
//! * `transform` — forward/inverse generalized Fourier transform of a signal;
//! * `spectrogram` — windowed transform over a sequence of centers;
//! * `basis` — write basis-vector CSV files (`mub` | `ho` | `alpha` families);
//! * `coherent` — build a coherent state and write its Fock JSON;
//! * `wigner` — phase-space map of a signal or Fock vector.
//!
//! Configuration comes from a JSON file (`--config`) plus per-flag overrides;
//! the output directory may also be set through `WSPACE_OUT_DIR`. Artifacts
//! are written atomically and deterministically — run metadata lives in a
//! `*.meta.json` sidecar next to each artifact, never inside it.
//!
//! Exit codes are a stable contract: 0 success; 1 usage or I/O error;
//! 2 superpotential validation rejection; 3 verification criterion failure;
//! 4 numeric guard tripped (clipping, center out of range, displacement or
//! tail limits, non-real Wigner output).

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use config::{Overrides, RunConfig};
use wspace::bases;
use wspace::grids::{self, GridError, InterpOrder, MeasureTag};
use wspace::io::{self, IoError};
use wspace::phase_space::{self, PhaseSpaceError};
use wspace::superpotential::ValidationError;
use wspace::verify::{self, VerifyConfig, VerifyError};
use wspace::wtransform::{self, TransformError};
use wspace::{Grid, Representation, Superpotential};

/// Command-layer error; the variant decides the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable files, malformed or mismatched data: exit 1.
    #[error("{0}")]
    Usage(String),
    /// The superpotential failed admission: exit 2.
    #[error("superpotential rejected: {0}")]
    Rejected(#[source] ValidationError),
    /// At least one verification criterion failed: exit 3.
    #[error("one or more verification criteria failed")]
    Verification,
    /// A numeric guard refused to produce an unreliable artifact: exit 4.
    #[error("numeric guard tripped: {0}")]
    Guard(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Rejected(_) => 2,
            CliError::Verification => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> CliError {
        CliError::Rejected(e)
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> CliError {
        match e {
            TransformError::ClippingExceeded { .. } | TransformError::CenterOutOfRange { .. } => {
                CliError::Guard(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<bases::BasisError> for CliError {
    fn from(e: bases::BasisError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<PhaseSpaceError> for CliError {
    fn from(e: PhaseSpaceError) -> CliError {
        match e {
            PhaseSpaceError::TruncationOverflow { .. }
            | PhaseSpaceError::DisplacementTooLarge { .. }
            | PhaseSpaceError::TailTooLarge { .. }
            | PhaseSpaceError::NotNormalized { .. } => CliError::Guard(e.to_string()),
            PhaseSpaceError::Transform(t) => CliError::from(t),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "wspace",
    version,
    about = "Momentum operators, adapted Fourier analysis, and phase space in a monotone polynomial coordinate",
    arg_required_else_help = true
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a superpotential descriptor and print a JSON report.
    Validate(ValidateArgs),
    /// Run the verification criteria; write the full report as JSON.
    Verify(VerifyArgs),
    /// Forward or inverse transform of a CSV signal.
    Transform(TransformArgs),
    /// Windowed transform magnitudes over a sequence of centers.
    Spectrogram(SpectrogramArgs),
    /// Write basis vectors as CSV files.
    Basis(BasisArgs),
    /// Build a coherent state; write Fock coefficients as JSON.
    Coherent(CoherentArgs),
    /// Phase-space map of a signal or Fock vector.
    Wigner(WignerArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Path to a descriptor JSON ({"coeffs": [...]}); defaults to the
    /// configured superpotential.
    descriptor: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict the run to these criterion ids (1-13), comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    only: Option<Vec<usize>>,
    /// Seed for the randomized draws.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Where to write the JSON report (default: <out-dir>/verify_report.json).
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Self-test fixture: corrupt the transform kernel sign so the
    /// eigenvalue criterion must fail.
    #[arg(long, hide = true)]
    inject_kernel_sign_error: bool,
}

#[derive(Args)]
struct TransformArgs {
    /// Input CSV: a signal for `forward`, a spectrum for `inverse`.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Transform direction: forward | inverse.
    #[arg(long, default_value = "forward", value_name = "DIR")]
    direction: String,
    /// Evaluation path: direct | fast. The fast path requires power-of-two
    /// node and bin counts.
    #[arg(long, default_value = "direct", value_name = "PATH")]
    path: String,
    /// Output CSV (default: <out-dir>/spectrum.csv or <out-dir>/signal.csv).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrogramArgs {
    /// Input signal CSV.
    #[arg(long, value_name = "FILE")]
    signal: PathBuf,
    /// Window: "ho0" (oscillator ground state, default) or a signal CSV on
    /// the same grid. A window whose dW-norm is off unit is renormalized
    /// with a warning.
    #[arg(long, default_value = "ho0", value_name = "SPEC")]
    window: String,
    /// Window centers, comma-separated; defaults to nine points across the
    /// central 60% of the grid.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    centers: Option<String>,
    /// Output CSV (default: <out-dir>/spectrogram.csv).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BasisArgs {
    /// Basis family: mub | ho | alpha.
    #[arg(long, value_name = "FAMILY")]
    family: String,
    /// Oscillator indices for `ho`: a comma list or an inclusive range
    /// ("0..3" writes j = 0,1,2,3).
    #[arg(long, value_name = "SPEC")]
    indices: Option<String>,
    /// Momentum labels for `mub`/`alpha`, comma-separated.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    at: Option<String>,
    /// Ordering parameter for the `alpha` family.
    #[arg(long, value_name = "A", allow_negative_numbers = true)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct CoherentArgs {
    /// Displacement label z as "re,im" (or a single real number).
    #[arg(long, default_value = "1,0", value_name = "Z", allow_hyphen_values = true)]
    z: String,
    /// Truncation index of the Fock expansion.
    #[arg(long, default_value_t = 64, value_name = "J")]
    jmax: usize,
    /// Also synthesize the state on the position grid as a signal CSV.
    #[arg(long)]
    synthesize: bool,
    /// Output JSON (default: <out-dir>/coherent.json).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    /// Fock-vector JSON to synthesize; grid params are read as the u-axis.
    #[arg(long, value_name = "FILE", conflicts_with = "signal")]
    fock: Option<PathBuf>,
    /// Signal CSV; resampled onto a uniform u-axis when not already on one.
    #[arg(long, value_name = "FILE")]
    signal: Option<PathBuf>,
    /// Number of momentum bins (default: the configured M).
    #[arg(long, value_name = "M")]
    bins: Option<usize>,
    /// Output CSV (default: <out-dir>/wigner.csv).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    match &cli.command {
        Command::Validate(args) => cmd_validate(&cfg, args),
        Command::Verify(args) => cmd_verify(&cfg, args),
        Command::Transform(args) => cmd_transform(&cfg, args),
        Command::Spectrogram(args) => cmd_spectrogram(&cfg, args),
        Command::Basis(args) => cmd_basis(&cfg, args),
        Command::Coherent(args) => cmd_coherent(&cfg, args),
        Command::Wigner(args) => cmd_wigner(&cfg, args),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn superpotential(cfg: &RunConfig) -> Result<Superpotential, CliError> {
    Ok(Superpotential::validate(&cfg.coeffs)?)
}

fn x_grid(cfg: &RunConfig) -> Result<Grid, CliError> {
    Ok(Grid::uniform_x(cfg.grid.xmin, cfg.grid.xmax, cfg.grid.n)?)
}

fn p_grid(cfg: &RunConfig) -> Result<Grid, CliError> {
    Ok(Grid::uniform_w(
        cfg.p_axis.pmin,
        cfg.p_axis.pmax,
        cfg.p_axis.m,
    )?)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| {
        CliError::Usage(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

fn require_power_of_two(n: usize, what: &str) -> Result<(), CliError> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} = {n}; the fast path requires a power of two"
        )))
    }
}

/// Writes the run-metadata sidecar `<artifact stem>.meta.json`.
fn write_meta(artifact: &Path, meta: &serde_json::Value) -> Result<(), CliError> {
    let path = artifact.with_extension("meta.json");
    io::atomic_write(&path, &serde_json::to_vec_pretty(meta)?)?;
    Ok(())
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<f64> = config::parse_float_list(text, "complex")?;
    match parts.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::Usage(format!(
            "could not parse complex number {text:?}; expected \"re\" or \"re,im\""
        ))),
    }
}

/// Oscillator index spec: "0..3" (inclusive) or "0,2,5".
fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "could not parse index spec {text:?}; expected a comma list or an inclusive range a..b"
        ))
    };
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect()
    }
}

fn default_centers(grid: &Grid) -> Vec<f64> {
    let (lo, hi) = grid.hull();
    let span = hi - lo;
    (0..9)
        .map(|k| lo + span * (0.2 + 0.6 * k as f64 / 8.0))
        .collect()
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_validate(cfg: &RunConfig, args: &ValidateArgs) -> Result<(), CliError> {
    let coeffs = match &args.descriptor {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read descriptor {}: {e}", path.display()))
            })?;
            let d: config::DescriptorFile = serde_json::from_str(&text).map_err(|e| {
                CliError::Usage(format!("malformed descriptor {}: {e}", path.display()))
            })?;
            d.coeffs
        }
        None => cfg.coeffs.clone(),
    };
    match Superpotential::validate(&coeffs) {
        Ok(w) => {
            let report = json!({
                "status": "accepted",
                "coeffs": w.coeffs(),
                "degree": w.degree(),
                "classification": w.monotonicity(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Err(e) => {
            let report = json!({
                "status": "rejected",
                "code": e.code(),
                "reason": e.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Err(CliError::Rejected(e))
        }
    }
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<(), CliError> {
    let mut vcfg = VerifyConfig::default();
    if cfg.coeffs_explicit {
        vcfg.superpotentials = vec![superpotential(cfg)?];
    }
    vcfg.x_min = cfg.grid.xmin;
    vcfg.x_max = cfg.grid.xmax;
    vcfg.n = cfg.grid.n;
    vcfg.m = cfg.p_axis.m;
    vcfg.alphas = cfg.alphas.clone();
    if let Some(seed) = args.seed {
        vcfg.seed = seed;
    }
    vcfg.only = args.only.clone();
    vcfg.flip_kernel_sign = args.inject_kernel_sign_error;

    let report = verify::run(&vcfg).map_err(|e| match e {
        VerifyError::InvalidConfig { reason } => CliError::Usage(reason),
        other => CliError::Usage(other.to_string()),
    })?;

    for criterion in &report.criteria {
        println!("{}", criterion.summary_line());
    }

    ensure_dir(&cfg.out_dir)?;
    let path = args
        .report
        .clone()
        .unwrap_or_else(|| cfg.out_dir.join("verify_report.json"));
    io::atomic_write(&path, &serde_json::to_vec_pretty(&report)?)?;
    write_meta(
        &path,
        &json!({
            "command": "verify",
            "superpotential": cfg.coeffs_explicit.then_some(&cfg.coeffs),
            "grid": cfg.grid,
            "m": cfg.p_axis.m,
            "alphas": cfg.alphas,
            "seed": vcfg.seed,
            "only": args.only,
        }),
    )?;
    println!("report {}", path.display());

    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn cmd_transform(cfg: &RunConfig, args: &TransformArgs) -> Result<(), CliError> {
    let w = superpotential(cfg)?;
    let fast = match args.path.as_str() {
        "direct" => false,
        "fast" => true,
        other => {
            return Err(CliError::Usage(format!(
                "unknown path {other:?} (expected direct|fast)"
            )))
        }
    };
    ensure_dir(&cfg.out_dir)?;

    match args.direction.as_str() {
        "forward" => {
            let f = io::read_signal_csv(&args.input)?;
            let p_axis = p_grid(cfg)?;
            if fast {
                require_power_of_two(f.len(), "signal node count N")?;
                require_power_of_two(p_axis.len(), "momentum bin count M")?;
            }
            let spectrum = if fast {
                wtransform::forward_fast(&w, &f, &p_axis)?
            } else {
                wtransform::forward(&w, &f, &p_axis)?
            };
            let input_norm = f.norm_squared(MeasureTag::Dw, Some(&w))?;
            println!("parseval_ratio {}", spectrum.norm_squared() / input_norm);

            let out = args
                .output
                .clone()
                .unwrap_or_else(|| cfg.out_dir.join("spectrum.csv"));
            io::write_spectrum_csv(&out, &spectrum)?;
            write_meta(
                &out,
                &json!({
                    "command": "transform",
                    "direction": "forward",
                    "path": args.path,
                    "input": args.input.display().to_string(),
                    "superpotential": cfg.coeffs,
                    "p_axis": cfg.p_axis,
                }),
            )?;
            println!("wrote {}", out.display());
            Ok(())
        }
        "inverse" => {
            let spectrum = io::read_spectrum_csv(&args.input)?;
            let target = x_grid(cfg)?;
            if fast {
                require_power_of_two(spectrum.len(), "momentum bin count M")?;
                require_power_of_two(target.len(), "signal node count N")?;
            }
            let f = if fast {
                wtransform::inverse_fast(&w, &spectrum, &target)?
            } else {
                wtransform::inverse(&w, &spectrum, &target)?
            };
            let output_norm = f.norm_squared(MeasureTag::Dw, Some(&w))?;
            println!("parseval_ratio {}", output_norm / spectrum.norm_squared());

            let out = args
                .output
                .clone()
                .unwrap_or_else(|| cfg.out_dir.join("signal.csv"));
            io::write_signal_csv(&out, &f)?;
            write_meta(
                &out,
                &json!({
                    "command": "transform",
                    "direction": "inverse",
                    "path": args.path,
                    "input": args.input.display().to_string(),
                    "superpotential": cfg.coeffs,
                    "grid": cfg.grid,
                }),
            )?;
            println!("wrote {}", out.display());
            Ok(())
        }
        other => Err(CliError::Usage(format!(
            "unknown direction {other:?} (expected forward|inverse)"
        ))),
    }
}

fn cmd_spectrogram(cfg: &RunConfig, args: &SpectrogramArgs) -> Result<(), CliError> {
    let w = superpotential(cfg)?;
    let f = io::read_signal_csv(&args.signal)?;

    let window = match args.window.as_str() {
        "ho0" => wtransform::ho_ground_window(&w, f.grid())?,
        path => {
            let mut win = io::read_signal_csv(Path::new(path))?;
            let norm = win.norm_squared(MeasureTag::Dw, Some(&w))?;
            if norm == 0.0 {
                return Err(CliError::Usage(format!("window {path} has zero norm")));
            }
            if (norm - 1.0).abs() > cfg.window_norm_tol {
                eprintln!("warning: window squared dW-norm is {norm:.6e}; renormalizing to 1");
                let scale = 1.0 / norm.sqrt();
                for v in win.values_mut() {
                    *v *= scale;
                }
            }
            win
        }
    };

    let centers = match &args.centers {
        Some(list) => config::parse_float_list(list, "center")?,
        None => default_centers(f.grid()),
    };
    let p_axis = p_grid(cfg)?;
    let gram = wtransform::windowed(&w, &f, &window, &centers, &p_axis)?;

    ensure_dir(&cfg.out_dir)?;
    let out = args
        .output
        .clone()
        .unwrap_or_else(|| cfg.out_dir.join("spectrogram.csv"));
    io::write_spectrogram_csv(&out, &gram)?;
    write_meta(
        &out,
        &json!({
            "command": "spectrogram",
            "signal": args.signal.display().to_string(),
            "window": args.window,
            "centers": centers,
            "superpotential": cfg.coeffs,
            "p_axis": cfg.p_axis,
        }),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_basis(cfg: &RunConfig, args: &BasisArgs) -> Result<(), CliError> {
    let w = superpotential(cfg)?;
    let grid = x_grid(cfg)?;
    ensure_dir(&cfg.out_dir)?;
    let mut written = Vec::new();

    match args.family.as_str() {
        "ho" => {
            let indices = parse_indices(args.indices.as_deref().unwrap_or("0..3"))?;
            for j in indices {
                let state = bases::ho_eigenstate(&w, &grid, j)?;
                let path = cfg.out_dir.join(format!("ho_j{j}.csv"));
                io::write_signal_csv(&path, state.signal())?;
                written.push(path);
            }
        }
        "mub" => {
            let labels = config::parse_float_list(args.at.as_deref().unwrap_or("0"), "momentum")?;
            for p in labels {
                let state = bases::mub_momentum_state(&w, &grid, p);
                let path = cfg.out_dir.join(format!("mub_p{p}.csv"));
                io::write_signal_csv(&path, state.signal())?;
                written.push(path);
            }
        }
        "alpha" => {
            let alpha = args.alpha.unwrap_or(0.5);
            let labels = config::parse_float_list(args.at.as_deref().unwrap_or("0"), "momentum")?;
            for p in labels {
                let state = bases::alpha_eigenstate(&w, &grid, p, alpha)?;
                let path = cfg.out_dir.join(format!("alpha_a{alpha}_p{p}.csv"));
                io::write_signal_csv(&path, state.signal())?;
                written.push(path);
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown basis family {other:?} (expected mub|ho|alpha)"
            )))
        }
    }

    for path in &written {
        println!("wrote {}", path.display());
    }
    write_meta(
        &cfg.out_dir.join(format!("basis_{}.csv", args.family)),
        &json!({
            "command": "basis",
            "family": args.family,
            "superpotential": cfg.coeffs,
            "grid": cfg.grid,
            "files": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }),
    )?;
    Ok(())
}

fn cmd_coherent(cfg: &RunConfig, args: &CoherentArgs) -> Result<(), CliError> {
    let z = parse_complex(&args.z)?;
    let state = phase_space::coherent_state(z, args.jmax)?;
    println!("eigen_residual {:e}", state.eigen_residual);
    println!("truncated_tail {:e}", state.truncated_tail);

    ensure_dir(&cfg.out_dir)?;
    let out = args
        .output
        .clone()
        .unwrap_or_else(|| cfg.out_dir.join("coherent.json"));
    io::write_fock_json(&out, &state.fock)?;
    write_meta(
        &out,
        &json!({
            "command": "coherent",
            "z": [z.re, z.im],
            "jmax": args.jmax,
        }),
    )?;
    println!("wrote {}", out.display());

    if args.synthesize {
        let w = superpotential(cfg)?;
        let grid = x_grid(cfg)?;
        let signal = phase_space::fock_to_signal(&w, &state.fock, &grid)?;
        let spath = cfg.out_dir.join("coherent_signal.csv");
        io::write_signal_csv(&spath, &signal)?;
        write_meta(
            &spath,
            &json!({
                "command": "coherent",
                "z": [z.re, z.im],
                "jmax": args.jmax,
                "superpotential": cfg.coeffs,
                "grid": cfg.grid,
            }),
        )?;
        println!("wrote {}", spath.display());
    }
    Ok(())
}

fn cmd_wigner(cfg: &RunConfig, args: &WignerArgs) -> Result<(), CliError> {
    let w = superpotential(cfg)?;

    let g = match (&args.fock, &args.signal) {
        (Some(fpath), None) => {
            let v = io::read_fock_json(fpath)?;
            let ugrid = Grid::uniform_w(cfg.grid.xmin, cfg.grid.xmax, cfg.grid.n)?;
            phase_space::fock_to_signal(&w, &v, &ugrid)?
        }
        (None, Some(spath)) => {
            let f = io::read_signal_csv(spath)?;
            let uniform_u =
                f.grid().rep() == Representation::WDomain && f.grid().spacing().is_some();
            if uniform_u {
                f
            } else {
                let (lo, hi) = f.grid().hull();
                let (ulo, uhi) = match f.grid().rep() {
                    Representation::XDomain => (w.eval(lo), w.eval(hi)),
                    Representation::WDomain => (lo, hi),
                };
                let target = Grid::uniform_w(ulo, uhi, f.len())?;
                let (g, report) = grids::resample(&f, &target, &w, InterpOrder::Cubic);
                if report.clipped_energy_fraction > 0.0 {
                    eprintln!(
                        "note: resampling onto the uniform u-axis clipped {:e} of the energy",
                        report.clipped_energy_fraction
                    );
                }
                g
            }
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --fock or --signal is required".into(),
            ))
        }
    };

    let bins = args.bins.unwrap_or(cfg.p_axis.m);
    let p_axis = phase_space::wigner_p_axis(g.grid(), bins)?;
    let map = phase_space::wigner(&g, &p_axis)?;
    if map.imag_residue() > cfg.wigner_imag_tol {
        return Err(CliError::Guard(format!(
            "relative imaginary residue {:e} exceeds the limit {:e}",
            map.imag_residue(),
            cfg.wigner_imag_tol
        )));
    }
    println!("mass {}", map.mass());
    println!("imag_residue {:e}", map.imag_residue());

    ensure_dir(&cfg.out_dir)?;
    let out = args
        .output
        .clone()
        .unwrap_or_else(|| cfg.out_dir.join("wigner.csv"));
    io::write_wigner_csv(&out, &map)?;
    write_meta(
        &out,
        &json!({
            "command": "wigner",
            "fock": args.fock.as_ref().map(|p| p.display().to_string()),
            "signal": args.signal.as_ref().map(|p| p.display().to_string()),
            "bins": bins,
            "superpotential": cfg.coeffs,
        }),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}
