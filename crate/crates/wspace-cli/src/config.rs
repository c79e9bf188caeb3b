//! Run configuration: defaults, JSON file, then command-line overrides.
//!
//! Every knob has a built-in default, may be set in a JSON config file
//! (`--config run.json`), and may be overridden per invocation by a flag.
//! The output directory additionally falls back to the `WSPACE_OUT_DIR`
//! environment variable. Precedence, lowest to highest:
//!
//! ```text
//! built-in default  <  config file  <  WSPACE_OUT_DIR  <  flag
//! ```
//!
//! The file schema mirrors [`FileConfig`]:
//!
//! ```json
//! {
//!   "superpotential": { "coeffs": [1.0, 0.0, 1.0] },
//!   "grid":   { "xmin": -8.0, "xmax": 8.0, "n": 1024 },
//!   "p_axis": { "pmin": -8.0, "pmax": 8.0, "m": 1024 },
//!   "alphas": [0.0, 0.3, 0.5, 1.0],
//!   "tolerances": { "window_norm": 1e-8, "wigner_imag_residue": 1e-10 },
//!   "out_dir": "out"
//! }
//! ```
//!
//! Tolerance overrides govern the numeric gates owned by the command layer
//! (window renormalization, Wigner realness). The bounds inside the `verify`
//! criteria are part of the product contract and are deliberately not
//! configurable.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Position-axis parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

/// Flat momentum-axis parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PAxisParams {
    pub pmin: f64,
    pub pmax: f64,
    pub m: usize,
}

/// Numeric-gate overrides for the artifact-producing commands.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Deviation of a window's squared dW-norm from 1 above which
    /// `spectrogram` renormalizes the window (with a warning).
    pub window_norm: Option<f64>,
    /// Relative imaginary residue above which `wigner` refuses to write the
    /// map (exit 4).
    pub wigner_imag_residue: Option<f64>,
}

/// Superpotential descriptor as stored on disk.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFile {
    pub coeffs: Vec<f64>,
}

/// On-disk run configuration. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub superpotential: Option<DescriptorFile>,
    pub grid: Option<GridParams>,
    pub p_axis: Option<PAxisParams>,
    pub alphas: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub out_dir: Option<PathBuf>,
}

/// Global flags accepted before or after any subcommand; each one overrides
/// the matching config-file field.
#[derive(Debug, Clone, Args)]
pub struct Overrides {
    /// Path to a JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Superpotential coefficients from the linear term up, comma-separated
    /// (e.g. "1,0,1" for x + x^3).
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    /// Left edge of the position grid.
    #[arg(long, global = true, value_name = "X", allow_negative_numbers = true)]
    pub xmin: Option<f64>,

    /// Right edge of the position grid.
    #[arg(long, global = true, value_name = "X", allow_negative_numbers = true)]
    pub xmax: Option<f64>,

    /// Number of position nodes.
    #[arg(long, global = true, value_name = "N")]
    pub nodes: Option<usize>,

    /// Left edge of the momentum axis.
    #[arg(long, global = true, value_name = "P", allow_negative_numbers = true)]
    pub pmin: Option<f64>,

    /// Right edge of the momentum axis.
    #[arg(long, global = true, value_name = "P", allow_negative_numbers = true)]
    pub pmax: Option<f64>,

    /// Number of momentum bins.
    #[arg(long, global = true, value_name = "M")]
    pub bins: Option<usize>,

    /// Ordering parameters, comma-separated (e.g. "0,0.3,0.5,1").
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub alphas: Option<String>,

    /// Directory artifacts are written into.
    #[arg(long, global = true, env = "WSPACE_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

/// Fully resolved configuration used by the command implementations.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Superpotential coefficients (from the linear term up).
    pub coeffs: Vec<f64>,
    /// Whether the superpotential came from the file or a flag rather than
    /// the built-in default; `verify` keeps its two-map default suite unless
    /// one was named explicitly.
    pub coeffs_explicit: bool,
    pub grid: GridParams,
    pub p_axis: PAxisParams,
    pub alphas: Vec<f64>,
    /// See [`Tolerances::window_norm`].
    pub window_norm_tol: f64,
    /// See [`Tolerances::wigner_imag_residue`].
    pub wigner_imag_tol: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            coeffs: vec![1.0, 0.0, 1.0],
            coeffs_explicit: false,
            grid: GridParams {
                xmin: -8.0,
                xmax: 8.0,
                n: 1024,
            },
            p_axis: PAxisParams {
                pmin: -8.0,
                pmax: 8.0,
                m: 1024,
            },
            alphas: vec![0.0, 0.3, 0.5, 1.0],
            window_norm_tol: 1e-8,
            wigner_imag_tol: 1e-10,
            out_dir: PathBuf::from("."),
        }
    }
}

/// Parses a comma-separated list of floats, rejecting empties and non-numbers.
pub fn parse_float_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let items: Result<Vec<f64>, _> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "could not parse {what} list {text:?}; expected comma-separated numbers"
        ))),
    }
}

/// Reads and deserializes the config file, mapping both I/O and JSON shape
/// problems to usage errors.
fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))
}

impl RunConfig {
    /// Resolves defaults, then the config file, then flag overrides.
    pub fn resolve(overrides: &Overrides) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();

        if let Some(path) = &overrides.config {
            let file = load_file(path)?;
            if let Some(d) = file.superpotential {
                cfg.coeffs = d.coeffs;
                cfg.coeffs_explicit = true;
            }
            if let Some(g) = file.grid {
                cfg.grid = g;
            }
            if let Some(p) = file.p_axis {
                cfg.p_axis = p;
            }
            if let Some(a) = file.alphas {
                cfg.alphas = a;
            }
            if let Some(t) = file.tolerances.window_norm {
                cfg.window_norm_tol = t;
            }
            if let Some(t) = file.tolerances.wigner_imag_residue {
                cfg.wigner_imag_tol = t;
            }
            if let Some(dir) = file.out_dir {
                cfg.out_dir = dir;
            }
        }

        if let Some(list) = &overrides.coeffs {
            cfg.coeffs = parse_float_list(list, "coefficient")?;
            cfg.coeffs_explicit = true;
        }
        if let Some(x) = overrides.xmin {
            cfg.grid.xmin = x;
        }
        if let Some(x) = overrides.xmax {
            cfg.grid.xmax = x;
        }
        if let Some(n) = overrides.nodes {
            cfg.grid.n = n;
        }
        if let Some(p) = overrides.pmin {
            cfg.p_axis.pmin = p;
        }
        if let Some(p) = overrides.pmax {
            cfg.p_axis.pmax = p;
        }
        if let Some(m) = overrides.bins {
            cfg.p_axis.m = m;
        }
        if let Some(list) = &overrides.alphas {
            cfg.alphas = parse_float_list(list, "alpha")?;
        }
        if let Some(dir) = &overrides.out_dir {
            cfg.out_dir = dir.clone();
        }

        Ok(cfg)
    }
}
