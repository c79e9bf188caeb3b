//! Quadrature grids, sampled signals, and measure-aware inner products.
//!
//! Signals live on one-dimensional grids in either the position domain (`x`)
//! or the image domain (`u = W(x)`). Quadrature uses trapezoid weights:
//! `h/2` at the ends and `h` inside for uniform grids, with the general
//! mid-gap formula for non-uniform node sets read from files.
//!
//! Two measures appear throughout the crate:
//!
//! * `dx` — the native measure of the grid axis (plain trapezoid weights);
//! * `dW` — the image measure `W'(x) dx`. On an `x`-domain grid this weights
//!   each node by `W'(x_i)`; on a `u`-domain grid the native weights already
//!   integrate in `u`, so no extra factor is applied.

use crate::superpotential::{InversionError, Superpotential};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Minimum number of nodes any grid must carry.
pub const MIN_NODES: usize = 8;

/// Relative tolerance used when deciding whether a grid is uniform.
const UNIFORM_REL_TOL: f64 = 1e-9;

/// Errors from grid construction and inner products.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    /// Lower bound does not lie strictly below the upper bound.
    #[error("bad bounds: {lo} must be strictly less than {hi}")]
    BadBounds { lo: f64, hi: f64 },
    /// Fewer nodes than the supported minimum.
    #[error("too few nodes: {n} < minimum {min}")]
    TooFewNodes { n: usize, min: usize },
    /// Node sequence not strictly increasing at `index`.
    #[error("nodes must increase strictly (violated at index {index})")]
    NonMonotonicNodes { index: usize },
    /// Node value not finite.
    #[error("node {index} is not finite")]
    NonFiniteNode { index: usize },
    /// Signal value not finite.
    #[error("signal value {index} is not finite")]
    NonFiniteValue { index: usize },
    /// Signal length does not match its grid.
    #[error("signal has {values} values but the grid has {nodes} nodes")]
    LengthMismatch { values: usize, nodes: usize },
    /// Two signals do not share the same grid.
    #[error("signals live on different grids")]
    GridMismatch,
    /// A `dW` inner product on an x-domain grid needs the superpotential.
    #[error("dW inner product on an x-domain grid requires the superpotential")]
    MissingJacobian,
}

/// Which domain a grid's nodes live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// Position axis `x`.
    XDomain,
    /// Image axis `u = W(x)` (also used for conjugate momentum axes).
    WDomain,
}

/// Measure selector for inner products and norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureTag {
    /// Native measure of the grid axis.
    Dx,
    /// Image measure `W'(x) dx`; the identity weight on a `u`-domain grid.
    Dw,
}

/// A strictly increasing node set with trapezoid quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rep: Representation,
}

impl Grid {
    /// Uniform grid on `[xmin, xmax]` in the position domain.
    pub fn uniform_x(xmin: f64, xmax: f64, n: usize) -> Result<Grid, GridError> {
        Self::uniform(xmin, xmax, n, Representation::XDomain)
    }

    /// Uniform grid on `[wmin, wmax]` in the image domain. Also used for
    /// conjugate momentum axes, which are uniform in the same sense.
    pub fn uniform_w(wmin: f64, wmax: f64, n: usize) -> Result<Grid, GridError> {
        Self::uniform(wmin, wmax, n, Representation::WDomain)
    }

    fn uniform(lo: f64, hi: f64, n: usize, rep: Representation) -> Result<Grid, GridError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(GridError::BadBounds { lo, hi });
        }
        if n < MIN_NODES {
            return Err(GridError::TooFewNodes { n, min: MIN_NODES });
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                lo + t * (hi - lo)
            })
            .collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Grid { nodes, weights, rep })
    }

    /// Grid over an arbitrary strictly increasing node set (e.g. read from a
    /// file), with general trapezoid weights.
    pub fn from_nodes(nodes: Vec<f64>, rep: Representation) -> Result<Grid, GridError> {
        if nodes.len() < MIN_NODES {
            return Err(GridError::TooFewNodes {
                n: nodes.len(),
                min: MIN_NODES,
            });
        }
        for (i, &x) in nodes.iter().enumerate() {
            if !x.is_finite() {
                return Err(GridError::NonFiniteNode { index: i });
            }
            if i > 0 && x <= nodes[i - 1] {
                return Err(GridError::NonMonotonicNodes { index: i });
            }
        }
        let n = nodes.len();
        let mut weights = vec![0.0; n];
        weights[0] = 0.5 * (nodes[1] - nodes[0]);
        weights[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
        for i in 1..n - 1 {
            weights[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
        }
        Ok(Grid { nodes, weights, rep })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// First and last node.
    pub fn hull(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    /// Node span `last - first`.
    pub fn span(&self) -> f64 {
        self.nodes[self.nodes.len() - 1] - self.nodes[0]
    }

    /// Uniform spacing, if all gaps agree to relative tolerance `1e-9`.
    pub fn spacing(&self) -> Option<f64> {
        let h = self.span() / (self.len() - 1) as f64;
        for pair in self.nodes.windows(2) {
            if ((pair[1] - pair[0]) - h).abs() > UNIFORM_REL_TOL * h {
                return None;
            }
        }
        Some(h)
    }

    /// The nodes mapped to the image axis: `W(x_i)` for an x-domain grid, the
    /// nodes themselves for a u-domain grid.
    pub fn u_coords(&self, w: &Superpotential) -> Vec<f64> {
        match self.rep {
            Representation::XDomain => self.nodes.iter().map(|&x| w.eval(x)).collect(),
            Representation::WDomain => self.nodes.clone(),
        }
    }

    /// The nodes mapped to the position axis, inverting `W` where needed.
    pub fn x_images(&self, w: &Superpotential) -> Result<Vec<f64>, InversionError> {
        match self.rep {
            Representation::XDomain => Ok(self.nodes.clone()),
            Representation::WDomain => self.nodes.iter().map(|&u| w.invert(u)).collect(),
        }
    }
}

/// Complex samples bound to a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    values: Vec<Complex64>,
    grid: Grid,
}

impl SampledSignal {
    /// Binds values to a grid, checking length and finiteness.
    pub fn new(values: Vec<Complex64>, grid: Grid) -> Result<SampledSignal, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                values: values.len(),
                nodes: grid.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(GridError::NonFiniteValue { index: i });
            }
        }
        Ok(SampledSignal { values, grid })
    }

    /// Samples a function of the node coordinate.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> Complex64) -> SampledSignal {
        let values = grid.nodes.iter().map(|&x| f(x)).collect();
        SampledSignal { values, grid }
    }

    /// Samples a real-valued function of the node coordinate.
    pub fn from_real_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> SampledSignal {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid) -> SampledSignal {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        SampledSignal { values, grid }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Squared norm under the chosen measure.
    pub fn norm_squared(
        &self,
        measure: MeasureTag,
        w: Option<&Superpotential>,
    ) -> Result<f64, GridError> {
        inner_product(self, self, measure, w).map(|ip| ip.re)
    }

    /// Scales the signal in place so its norm under the chosen measure is 1.
    pub fn normalize(
        &mut self,
        measure: MeasureTag,
        w: Option<&Superpotential>,
    ) -> Result<(), GridError> {
        let n2 = self.norm_squared(measure, w)?;
        let scale = 1.0 / n2.sqrt();
        for v in &mut self.values {
            *v *= scale;
        }
        Ok(())
    }
}

/// Sesquilinear inner product `<f, g>` (conjugate-linear in `f`) under the
/// chosen measure. Both signals must share a grid; `w` is required exactly
/// when `measure` is `Dw` and the grid is in the x-domain.
pub fn inner_product(
    f: &SampledSignal,
    g: &SampledSignal,
    measure: MeasureTag,
    w: Option<&Superpotential>,
) -> Result<Complex64, GridError> {
    if f.grid != g.grid {
        return Err(GridError::GridMismatch);
    }
    let grid = &f.grid;
    let mut acc = Complex64::new(0.0, 0.0);
    match (measure, grid.rep) {
        (MeasureTag::Dx, _) | (MeasureTag::Dw, Representation::WDomain) => {
            for i in 0..grid.len() {
                acc += f.values[i].conj() * g.values[i] * grid.weights[i];
            }
        }
        (MeasureTag::Dw, Representation::XDomain) => {
            let w = w.ok_or(GridError::MissingJacobian)?;
            for i in 0..grid.len() {
                let jac = w.derivative(grid.nodes[i]);
                acc += f.values[i].conj() * g.values[i] * (grid.weights[i] * jac);
            }
        }
    }
    Ok(acc)
}

/// Interpolation order for [`resample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpOrder {
    /// Piecewise-linear (2-point), error `O(h^2)`.
    Linear,
    /// Local cubic Lagrange (4-point), error `O(h^4)`.
    Cubic,
}

/// What the resampler had to discard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResampleReport {
    /// Target nodes outside the source hull, filled with zero.
    pub clipped_nodes: usize,
    /// Fraction of the source signal's energy (native measure) at nodes whose
    /// image coordinate falls outside the target hull, i.e. energy the target
    /// grid cannot represent.
    pub clipped_energy_fraction: f64,
}

/// Interpolates a signal onto a target grid, possibly in the other domain.
///
/// Both grids are mapped to the common image coordinate `u = W(x)` and the
/// values are interpolated there by local polynomials of the chosen order.
/// Target nodes outside the source hull are set to zero and reported, never
/// raised as errors.
pub fn resample(
    f: &SampledSignal,
    target: &Grid,
    w: &Superpotential,
    order: InterpOrder,
) -> (SampledSignal, ResampleReport) {
    let src_u = f.grid.u_coords(w);
    let tgt_u = target.u_coords(w);
    let values: Vec<Complex64> = tgt_u
        .iter()
        .map(|&u| interp_at(&src_u, &f.values, u, order))
        .collect();
    let (t_lo, t_hi) = (tgt_u[0], tgt_u[tgt_u.len() - 1]);
    let clipped_nodes = tgt_u
        .iter()
        .filter(|&&u| u < src_u[0] || u > src_u[src_u.len() - 1])
        .count();
    let mut total = 0.0;
    let mut outside = 0.0;
    for i in 0..f.len() {
        let e = f.values[i].norm_sqr() * f.grid.weights[i];
        total += e;
        if src_u[i] < t_lo || src_u[i] > t_hi {
            outside += e;
        }
    }
    let clipped_energy_fraction = if total > 0.0 { outside / total } else { 0.0 };
    (
        SampledSignal {
            values,
            grid: target.clone(),
        },
        ResampleReport {
            clipped_nodes,
            clipped_energy_fraction,
        },
    )
}

/// Local polynomial interpolation of `(xs, ys)` at `x`; zero outside the hull.
pub(crate) fn interp_at(xs: &[f64], ys: &[Complex64], x: f64, order: InterpOrder) -> Complex64 {
    let n = xs.len();
    if x < xs[0] || x > xs[n - 1] {
        return Complex64::new(0.0, 0.0);
    }
    // Index of the gap containing x: xs[k] <= x <= xs[k+1].
    let k = match xs.partition_point(|&v| v <= x) {
        0 => 0,
        p => (p - 1).min(n - 2),
    };
    match order {
        InterpOrder::Linear => {
            let gap = xs[k + 1] - xs[k];
            if gap <= 0.0 {
                return ys[k];
            }
            let t = (x - xs[k]) / gap;
            ys[k] * (1.0 - t) + ys[k + 1] * t
        }
        InterpOrder::Cubic => {
            // Centered 4-point stencil, clamped at the boundaries.
            let start = k.saturating_sub(1).min(n - 4);
            lagrange(&xs[start..start + 4], &ys[start..start + 4], x)
        }
    }
}

fn lagrange(xs: &[f64], ys: &[Complex64], x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..xs.len() {
        let mut basis = 1.0;
        for j in 0..xs.len() {
            if i != j {
                basis *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += ys[i] * basis;
    }
    acc
}
