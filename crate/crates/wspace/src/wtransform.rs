//! The W-generalized Fourier transform: direct quadrature and fast paths,
//! the windowed (spectrogram) variant, and the oscillator-spectrum check.
//!
//! The forward map takes a sampled signal to a spectrum over the conjugate
//! momentum `p`:
//!
//! ```text
//! F(p_a) = (1/√(2π)) Σ_i w_i W′(x_i) e^{−i p_a W(x_i)} f_i
//! ```
//!
//! which is the plain Fourier integral in the image coordinate `u = W(x)`
//! under the `dW` measure. The inverse is the flat Riemann sum
//! `f(x_i) = (1/√(2π)) Σ_a Δp e^{+i p_a W(x_i)} F(p_a)`. The direct
//! quadrature pair is the normative definition; `forward_fast` and
//! `inverse_fast` must agree with it within fast-path tolerance.
//!
//! The fast paths resample onto a uniform auxiliary grid by Gaussian
//! spreading, apply a padded power-of-two FFT, and undo the spreading with
//! exact spectral deconvolution plus the phase/scale corrections of the
//! nonuniform node positions. Unlike polynomial interpolation, the Gaussian
//! kernel's spectrum never vanishes, so the resampling is invertible to
//! near machine precision and the cross-path agreement is limited only by
//! the spreading truncation (~1e−12), far inside the 1e−6 contract.
//!
//! Since `exp(−ip·u)` sampled on a comb of spacing Δp is blind to u-shifts
//! by the period 2π/Δp, any signal energy outside one period window is
//! irrecoverably aliased; the fast forward path treats that energy as
//! clipped by the resampler and rejects the request when it exceeds 0.1% of
//! the total.

use crate::bases::{self, BasisError, SQRT_2PI};
use crate::grids::{
    inner_product, interp_at, Grid, GridError, InterpOrder, MeasureTag, Representation,
    SampledSignal,
};
use crate::superpotential::Superpotential;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Fraction of signal energy the fast path may silently clip.
pub const CLIP_ENERGY_LIMIT: f64 = 1e-3;

/// Largest oscillator index accepted by [`eigenfunction_check`].
pub const EIGENFUNCTION_INDEX_CAP: usize = 16;

/// Errors from transform construction and guards.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    /// The p-axis must be a uniform w-domain grid.
    #[error("the p-axis must be a uniform w-domain grid")]
    BadPAxis,
    /// The fast path would alias more than the permitted energy fraction.
    #[error("fast path would clip {fraction:.3e} of signal energy (limit {limit:.1e})")]
    ClippingExceeded { fraction: f64, limit: f64 },
    /// A spectrogram window center fell outside the grid hull, or its
    /// shifted window retained no mass inside it.
    #[error("window center {center} is outside the usable grid range")]
    CenterOutOfRange { center: f64 },
    /// Oscillator index above the supported range.
    #[error("oscillator index {j} exceeds the supported cap {max}")]
    IndexTooLarge { j: usize, max: usize },
    /// Basis construction failed.
    #[error(transparent)]
    Basis(#[from] BasisError),
    /// Grid bookkeeping failed.
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// A complex spectrum over a uniform momentum axis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<Complex64>,
    p_grid: Grid,
}

impl Spectrum {
    /// Wraps spectrum values over a uniform w-domain p-axis.
    pub fn new(values: Vec<Complex64>, p_grid: Grid) -> Result<Spectrum, TransformError> {
        check_p_axis(&p_grid)?;
        if values.len() != p_grid.len() {
            return Err(TransformError::Grid(GridError::LengthMismatch {
                values: values.len(),
                nodes: p_grid.len(),
            }));
        }
        Ok(Spectrum { values, p_grid })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn p_grid(&self) -> &Grid {
        &self.p_grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The uniform bin width Δp.
    pub fn spacing(&self) -> f64 {
        self.p_grid.spacing().expect("p-axis checked uniform")
    }

    /// `Σ_a Δp |F(p_a)|²` — the flat Riemann norm matching the inverse sum.
    pub fn norm_squared(&self) -> f64 {
        let dp = self.spacing();
        self.values.iter().map(|v| v.norm_sqr() * dp).sum()
    }
}

/// Magnitude rows of a windowed transform: one row per window center.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    magnitudes: Array2<f64>,
    centers: Vec<f64>,
    p_grid: Grid,
}

impl Spectrogram {
    /// `[centers × p-bins]` magnitude array.
    pub fn magnitudes(&self) -> &Array2<f64> {
        &self.magnitudes
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn p_grid(&self) -> &Grid {
        &self.p_grid
    }

    /// Index of the largest magnitude in row `r`.
    pub fn ridge_bin(&self, r: usize) -> usize {
        let row = self.magnitudes.row(r);
        let mut best = 0;
        for (i, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = i;
            }
        }
        best
    }
}

/// Best-fit eigenvalue diagnostics from [`eigenfunction_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenfunctionReport {
    /// Least-squares scalar minimizing ‖F − λ·ψ_j(p)‖.
    pub lambda: Complex64,
    /// The expected fourth root of unity `(−i)^j`.
    pub target: Complex64,
    /// `|λ − target|`.
    pub lambda_error: f64,
    /// Relative misfit ‖F − λψ‖/‖ψ‖.
    pub residual: f64,
}

fn check_p_axis(p_grid: &Grid) -> Result<f64, TransformError> {
    if p_grid.rep() != Representation::WDomain {
        return Err(TransformError::BadPAxis);
    }
    p_grid.spacing().ok_or(TransformError::BadPAxis)
}

/// Quadrature weights of the `dW` measure on either grid representation.
pub(crate) fn dw_weights(w: &Superpotential, grid: &Grid) -> Vec<f64> {
    match grid.rep() {
        Representation::XDomain => grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(&x, &wi)| wi * w.derivative(x))
            .collect(),
        Representation::WDomain => grid.weights().to_vec(),
    }
}

/// A symmetric uniform p-axis spanning the grid's Nyquist range `±π/Δu`,
/// where Δu is the smallest image-coordinate spacing.
pub fn nyquist_p_axis(
    w: &Superpotential,
    grid: &Grid,
    m: usize,
) -> Result<Grid, TransformError> {
    let u = grid.u_coords(w);
    let du_min = u
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(f64::INFINITY, f64::min);
    let p_max = PI / du_min;
    Grid::uniform_w(-p_max, p_max, m).map_err(TransformError::Grid)
}

/// Direct-quadrature forward transform — the normative definition,
/// parallel over output bins.
pub fn forward(
    w: &Superpotential,
    f: &SampledSignal,
    p_grid: &Grid,
) -> Result<Spectrum, TransformError> {
    check_p_axis(p_grid)?;
    let u = f.grid().u_coords(w);
    let weights = dw_weights(w, f.grid());
    let sources: Vec<Complex64> = f
        .values()
        .iter()
        .zip(&weights)
        .map(|(&fi, &wi)| fi * (wi / SQRT_2PI))
        .collect();
    let values: Vec<Complex64> = p_grid
        .nodes()
        .par_iter()
        .map(|&p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &uk) in u.iter().enumerate() {
                acc += sources[k] * Complex64::from_polar(1.0, -p * uk);
            }
            acc
        })
        .collect();
    Spectrum::new(values, p_grid.clone())
}

/// Direct-quadrature inverse transform, parallel over output nodes.
pub fn inverse(
    w: &Superpotential,
    spectrum: &Spectrum,
    target: &Grid,
) -> Result<SampledSignal, TransformError> {
    let dp = spectrum.spacing();
    let p = spectrum.p_grid.nodes();
    let u = target.u_coords(w);
    let values: Vec<Complex64> = u
        .par_iter()
        .map(|&ui| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, &pa) in p.iter().enumerate() {
                acc += spectrum.values[a] * Complex64::from_polar(1.0, pa * ui);
            }
            acc * (dp / SQRT_2PI)
        })
        .collect();
    SampledSignal::new(values, target.clone()).map_err(TransformError::Grid)
}

/// Fast forward path: Gaussian-gridding resample onto a padded uniform
/// grid, FFT, spectral deconvolution, and nonuniform phase corrections.
pub fn forward_fast(
    w: &Superpotential,
    f: &SampledSignal,
    p_grid: &Grid,
) -> Result<Spectrum, TransformError> {
    let dp = check_p_axis(p_grid)?;
    let u = f.grid().u_coords(w);
    let weights = dw_weights(w, f.grid());
    let period = TAU / dp;
    let u_ref = u[0];

    // Energy beyond one u-period of the comb is irrecoverably aliased —
    // treat it as resampler clipping.
    let mut total = 0.0;
    let mut clipped = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        let energy = weights[k] * f.values()[k].norm_sqr();
        total += energy;
        if uk - u_ref >= period {
            clipped += energy;
        }
    }
    if total > 0.0 && clipped / total > CLIP_ENERGY_LIMIT {
        return Err(TransformError::ClippingExceeded {
            fraction: clipped / total,
            limit: CLIP_ENERGY_LIMIT,
        });
    }

    let p0 = p_grid.nodes()[0];
    let mut theta = Vec::with_capacity(u.len());
    let mut coeffs = Vec::with_capacity(u.len());
    for (k, &uk) in u.iter().enumerate() {
        if uk - u_ref >= period {
            continue;
        }
        theta.push((dp * (uk - u_ref)).rem_euclid(TAU));
        coeffs.push(
            f.values()[k] * (weights[k] / SQRT_2PI) * Complex64::from_polar(1.0, -p0 * uk),
        );
    }
    let m = p_grid.len();
    let t = nufft::type1(&theta, &coeffs, m);
    let values = (0..m)
        .map(|a| t[a] * Complex64::from_polar(1.0, -(a as f64) * dp * u_ref))
        .collect();
    Spectrum::new(values, p_grid.clone())
}

/// Fast inverse path: spectral deconvolution, padded inverse FFT, and
/// Gaussian interpolation onto the nonuniform image coordinates. The
/// inverse sum is a trigonometric polynomial in `u`, so the periodic
/// wrap is exact and no clipping guard is needed.
pub fn inverse_fast(
    w: &Superpotential,
    spectrum: &Spectrum,
    target: &Grid,
) -> Result<SampledSignal, TransformError> {
    let dp = spectrum.spacing();
    let p0 = spectrum.p_grid.nodes()[0];
    let u = target.u_coords(w);
    let coeffs: Vec<Complex64> = spectrum
        .values
        .iter()
        .map(|&fa| fa * (dp / SQRT_2PI))
        .collect();
    let theta: Vec<f64> = u.iter().map(|&ui| (dp * ui).rem_euclid(TAU)).collect();
    let t = nufft::type2(&theta, &coeffs);
    let values: Vec<Complex64> = u
        .iter()
        .zip(&t)
        .map(|(&ui, &ti)| ti * Complex64::from_polar(1.0, p0 * ui))
        .collect();
    SampledSignal::new(values, target.clone()).map_err(TransformError::Grid)
}

/// The default spectrogram window: the oscillator ground state,
/// renormalized to exactly unit `dW` norm on the grid.
pub fn ho_ground_window(
    w: &Superpotential,
    grid: &Grid,
) -> Result<SampledSignal, TransformError> {
    let state = bases::ho_eigenstate(w, grid, 0)?;
    let mut signal = state.into_signal();
    normalize_dw(w, &mut signal);
    Ok(signal)
}

pub(crate) fn normalize_dw(w: &Superpotential, signal: &mut SampledSignal) {
    let norm_sq = inner_product(signal, signal, MeasureTag::Dw, Some(w))
        .expect("signal paired with itself")
        .re;
    if norm_sq > 0.0 {
        let scale = 1.0 / norm_sq.sqrt();
        for v in signal.values_mut() {
            *v *= scale;
        }
    }
}

/// Windowed transform: row `r` holds `|forward(f · window shifted to
/// W(centers[r]))|`. The window is translated in the image coordinate `u`
/// (cubic interpolation of its u-profile) and renormalized to unit `dW`
/// norm after the shift, so every row analyzes with the same window mass.
/// Rows are computed in parallel.
pub fn windowed(
    w: &Superpotential,
    f: &SampledSignal,
    window: &SampledSignal,
    centers: &[f64],
    p_grid: &Grid,
) -> Result<Spectrogram, TransformError> {
    check_p_axis(p_grid)?;
    if window.grid() != f.grid() {
        return Err(TransformError::Grid(GridError::GridMismatch));
    }
    let (lo, hi) = f.grid().hull();
    for &c in centers {
        if !(lo..=hi).contains(&c) {
            return Err(TransformError::CenterOutOfRange { center: c });
        }
    }
    let u = f.grid().u_coords(w);
    let mut base = window.clone();
    normalize_dw(w, &mut base);

    let rows: Vec<Result<Vec<f64>, TransformError>> = centers
        .par_iter()
        .map(|&c| {
            let uc = w.eval(c);
            let mut shifted = SampledSignal::zeros(f.grid().clone());
            for (i, &ui) in u.iter().enumerate() {
                shifted.values_mut()[i] =
                    interp_at(&u, base.values(), ui - uc, InterpOrder::Cubic);
            }
            let mass = inner_product(&shifted, &shifted, MeasureTag::Dw, Some(w))
                .expect("shared grid")
                .re;
            if mass < 1e-12 {
                return Err(TransformError::CenterOutOfRange { center: c });
            }
            let scale = 1.0 / mass.sqrt();
            let modulated: Vec<Complex64> = f
                .values()
                .iter()
                .zip(shifted.values())
                .map(|(&fi, &wi)| fi * wi * scale)
                .collect();
            let modulated =
                SampledSignal::new(modulated, f.grid().clone()).map_err(TransformError::Grid)?;
            let spectrum = forward(w, &modulated, p_grid)?;
            Ok(spectrum.values().iter().map(|v| v.norm()).collect())
        })
        .collect();

    let m = p_grid.len();
    let mut magnitudes = Array2::zeros((centers.len(), m));
    for (r, row) in rows.into_iter().enumerate() {
        let row = row?;
        for (a, v) in row.into_iter().enumerate() {
            magnitudes[[r, a]] = v;
        }
    }
    Ok(Spectrogram {
        magnitudes,
        centers: centers.to_vec(),
        p_grid: p_grid.clone(),
    })
}

/// Transforms the oscillator state `j` and fits the best scalar λ against
/// the same state evaluated on the p-axis; λ should land on the fourth
/// root of unity `(−i)^j`.
pub fn eigenfunction_check(
    w: &Superpotential,
    j: usize,
    grid: &Grid,
    p_grid: &Grid,
) -> Result<EigenfunctionReport, TransformError> {
    if j > EIGENFUNCTION_INDEX_CAP {
        return Err(TransformError::IndexTooLarge {
            j,
            max: EIGENFUNCTION_INDEX_CAP,
        });
    }
    let state = bases::ho_eigenstate(w, grid, j)?;
    let spectrum = forward(w, state.signal(), p_grid)?;
    let psi: Vec<f64> = p_grid
        .nodes()
        .iter()
        .map(|&p| bases::normalized_hermite(j, p))
        .collect();
    let mut dot = Complex64::new(0.0, 0.0);
    let mut psi_sq = 0.0;
    for (a, &pa) in psi.iter().enumerate() {
        dot += spectrum.values[a] * pa;
        psi_sq += pa * pa;
    }
    let lambda = dot / psi_sq;
    let mut misfit = 0.0;
    for (a, &pa) in psi.iter().enumerate() {
        misfit += (spectrum.values[a] - lambda * pa).norm_sqr();
    }
    let residual = (misfit / psi_sq).sqrt();
    let target = Complex64::new(0.0, -1.0).powu(j as u32);
    Ok(EigenfunctionReport {
        lambda,
        target,
        lambda_error: (lambda - target).norm(),
        residual,
    })
}

/// Gaussian-gridding nonuniform FFTs on the unit circle.
///
/// Sources are spread onto a padded uniform grid with a periodized Gaussian
/// whose transform `√(4πτ)e^{−b²τ}` never vanishes; after an FFT the
/// spreading is undone exactly in the spectral domain. Kernel width and
/// oversampling are fixed for ~1e−12 worst-case truncation error.
mod nufft {
    use num_complex::Complex64;
    use rustfft::FftPlanner;
    use std::f64::consts::{PI, TAU};

    struct Plan {
        l: usize,
        msp: isize,
        delta: f64,
        tau: f64,
        scale: f64,
        half: isize,
    }

    fn plan(m: usize) -> Plan {
        let l = (2 * m.max(32)).next_power_of_two();
        let msp = 16.min(l as isize / 4);
        let delta = TAU / l as f64;
        let r = l as f64 / m as f64;
        let tau = PI * msp as f64 / ((m * m) as f64 * r * (r - 0.5));
        let scale = delta / (4.0 * PI * tau).sqrt();
        Plan {
            l,
            msp,
            delta,
            tau,
            scale,
            half: (m / 2) as isize,
        }
    }

    /// `T_a = Σ_k c_k e^{−i a θ_k}` for `a = 0..m`, θ in `[0, 2π)`.
    pub fn type1(theta: &[f64], coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
        let p = plan(m);
        let mut spread = vec![Complex64::ZERO; p.l];
        for (k, &th) in theta.iter().enumerate() {
            // Fold the half-shift so frequencies run over [−m/2, m/2).
            let c = coeffs[k] * Complex64::from_polar(1.0, -(p.half as f64) * th);
            let l0 = (th / p.delta).round() as isize;
            for dl in -p.msp..=p.msp {
                let li = l0 + dl;
                let d = th - li as f64 * p.delta;
                let g = (-d * d / (4.0 * p.tau)).exp();
                spread[li.rem_euclid(p.l as isize) as usize] += c * g;
            }
        }
        FftPlanner::new()
            .plan_fft_forward(p.l)
            .process(&mut spread);
        (0..m)
            .map(|a| {
                let b = a as isize - p.half;
                let deconv = p.scale * ((b * b) as f64 * p.tau).exp();
                spread[b.rem_euclid(p.l as isize) as usize] * deconv
            })
            .collect()
    }

    /// `T(θ_i) = Σ_a E_a e^{+i a θ_i}` for each target θ in `[0, 2π)`.
    pub fn type2(theta: &[f64], coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = coeffs.len();
        let p = plan(m);
        let mut spectral = vec![Complex64::ZERO; p.l];
        for (a, &ea) in coeffs.iter().enumerate() {
            let b = a as isize - p.half;
            let deconv = p.scale * ((b * b) as f64 * p.tau).exp();
            spectral[b.rem_euclid(p.l as isize) as usize] = ea * deconv;
        }
        FftPlanner::new()
            .plan_fft_inverse(p.l)
            .process(&mut spectral);
        theta
            .iter()
            .map(|&th| {
                let l0 = (th / p.delta).round() as isize;
                let mut acc = Complex64::ZERO;
                for dl in -p.msp..=p.msp {
                    let li = l0 + dl;
                    let d = th - li as f64 * p.delta;
                    let g = (-d * d / (4.0 * p.tau)).exp();
                    acc += spectral[li.rem_euclid(p.l as isize) as usize] * g;
                }
                acc * Complex64::from_polar(1.0, (p.half as f64) * th)
            })
            .collect()
    }
}
