//! Closed-form basis families and their orthogonality diagnostics.
//!
//! Three kinds of (improper) continuum states are evaluated on grids:
//!
//! * the constant-modulus pair `e^{ipW(x)}/√(2π)` (momentum) and
//!   `e^{ipW(x) − iW(x)²/2}/√(2π)` (linear chirp in `W`), which together with
//!   the position basis form a mutually unbiased triple;
//! * the α-family eigenstates `(W′)^α e^{ipW}/√(2π)` and their duals
//!   `(W′)^{1−α} e^{−ipW}/√(2π)` — the product of a state with its dual
//!   supplies the `dW` measure weight by itself;
//! * the Hermite-in-`W` oscillator states `c_j H_j(W) e^{−W²/2}`, evaluated
//!   through a normalized three-term recurrence that is overflow-safe up to
//!   the truncation cap.
//!
//! Delta-normalized families can only be probed on a finite grid through
//! windowed overlaps, so the checks here taper the outer fraction of the
//! u-range with a raised cosine and compare against finite sidelobe bounds.

use crate::grids::{inner_product, Grid, MeasureTag, Representation, SampledSignal};
use crate::superpotential::Superpotential;
use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Largest admissible Hermite index.
pub const TRUNCATION_CAP: usize = 64;

pub(crate) const SQRT_2PI: f64 = 2.5066282746310002; // √(2π)

/// Errors from basis evaluation and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    /// The family needs the position-domain grid.
    #[error("this basis family requires an x-domain grid")]
    WrongDomain,
    /// Hermite index above the supported truncation cap.
    #[error("Hermite index {j} exceeds the truncation cap {max}")]
    TruncationCap { j: usize, max: usize },
    /// Two requested eigenvalues cannot be resolved on this grid.
    #[error(
        "eigenvalues {a} and {b} are separated by {separation:e}, below the grid's \
         resolution bin {resolution:e}"
    )]
    DegenerateEigenvalues {
        a: usize,
        b: usize,
        separation: f64,
        resolution: f64,
    },
}

/// Which family a [`BasisVector`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BasisLabel {
    MubMomentum { p: f64 },
    MubChirp { p: f64 },
    AlphaState { p: f64, alpha: f64 },
    AlphaDual { p: f64, alpha: f64 },
    SymState { p: f64 },
    HoState { j: usize },
}

/// A labeled basis state sampled on a grid.
#[derive(Debug, Clone)]
pub struct BasisVector {
    signal: SampledSignal,
    label: BasisLabel,
}

impl BasisVector {
    pub fn signal(&self) -> &SampledSignal {
        &self.signal
    }

    pub fn values(&self) -> &[Complex64] {
        self.signal.values()
    }

    pub fn grid(&self) -> &Grid {
        self.signal.grid()
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn into_signal(self) -> SampledSignal {
        self.signal
    }
}

/// Momentum-family state `e^{ipW(x)}/√(2π)` (the plane wave of the image
/// coordinate). Valid on either grid representation.
pub fn mub_momentum_state(w: &Superpotential, grid: &Grid, p: f64) -> BasisVector {
    let u = grid.u_coords(w);
    let signal = SampledSignal::new(
        u.iter()
            .map(|&ui| Complex64::from_polar(1.0 / SQRT_2PI, p * ui))
            .collect(),
        grid.clone(),
    )
    .expect("finite phases");
    BasisVector {
        signal,
        label: BasisLabel::MubMomentum { p },
    }
}

/// Chirp-family state `e^{ipW(x) − iW(x)²/2}/√(2π)`, a linear chirp in the
/// image coordinate. Valid on either grid representation.
pub fn mub_chirp_state(w: &Superpotential, grid: &Grid, p: f64) -> BasisVector {
    let u = grid.u_coords(w);
    let signal = SampledSignal::new(
        u.iter()
            .map(|&ui| Complex64::from_polar(1.0 / SQRT_2PI, p * ui - 0.5 * ui * ui))
            .collect(),
        grid.clone(),
    )
    .expect("finite phases");
    BasisVector {
        signal,
        label: BasisLabel::MubChirp { p },
    }
}

fn alpha_values(
    w: &Superpotential,
    grid: &Grid,
    p: f64,
    exponent: f64,
    phase_sign: f64,
) -> Result<Vec<Complex64>, BasisError> {
    if grid.rep() != Representation::XDomain {
        return Err(BasisError::WrongDomain);
    }
    Ok(grid
        .nodes()
        .iter()
        .map(|&x| {
            let g = w.derivative(x);
            let amp = if exponent == 0.0 {
                1.0
            } else if exponent == 1.0 {
                g
            } else if exponent == 0.5 {
                g.sqrt()
            } else {
                g.powf(exponent)
            };
            Complex64::from_polar(amp / SQRT_2PI, phase_sign * p * w.eval(x))
        })
        .collect())
}

/// Eigenstate of the α-ordered momentum: `(W′(x))^α e^{ipW(x)}/√(2π)`.
pub fn alpha_eigenstate(
    w: &Superpotential,
    grid: &Grid,
    p: f64,
    alpha: f64,
) -> Result<BasisVector, BasisError> {
    let values = alpha_values(w, grid, p, alpha, 1.0)?;
    Ok(BasisVector {
        signal: SampledSignal::new(values, grid.clone()).expect("finite values"),
        label: BasisLabel::AlphaState { p, alpha },
    })
}

/// Dual of [`alpha_eigenstate`], stored as the row-functional density
/// `(W′(x))^{1−α} e^{−ipW(x)}/√(2π)`. Pairings against states are bilinear
/// (no extra conjugation): the state–dual product alone reproduces the
/// `W′/(2π)` measure weight.
pub fn alpha_dual(
    w: &Superpotential,
    grid: &Grid,
    p: f64,
    alpha: f64,
) -> Result<BasisVector, BasisError> {
    let values = alpha_values(w, grid, p, 1.0 - alpha, -1.0)?;
    Ok(BasisVector {
        signal: SampledSignal::new(values, grid.clone()).expect("finite values"),
        label: BasisLabel::AlphaDual { p, alpha },
    })
}

/// Eigenstate of the symmetrized momentum: `(W′)^{1/2} e^{ipW}/√(2π)`,
/// the α = 1/2 member of the family.
pub fn sym_eigenstate(w: &Superpotential, grid: &Grid, p: f64) -> Result<BasisVector, BasisError> {
    let state = alpha_eigenstate(w, grid, p, 0.5)?;
    Ok(BasisVector {
        signal: state.signal,
        label: BasisLabel::SymState { p },
    })
}

/// Oscillator eigenstate `c_j H_j(u) e^{−u²/2}` with `u = W(x)`, evaluated by
/// the normalized recurrence
/// `h̃_{j+1} = u·√(2/(j+1))·h̃_j − √(j/(j+1))·h̃_{j−1}`, `h̃_0 = π^{−1/4}e^{−u²/2}`,
/// which keeps every intermediate at unit scale. Valid on either grid
/// representation.
pub fn ho_eigenstate(w: &Superpotential, grid: &Grid, j: usize) -> Result<BasisVector, BasisError> {
    if j > TRUNCATION_CAP {
        return Err(BasisError::TruncationCap {
            j,
            max: TRUNCATION_CAP,
        });
    }
    let u = grid.u_coords(w);
    let values: Vec<Complex64> = u
        .iter()
        .map(|&ui| Complex64::new(normalized_hermite(j, ui), 0.0))
        .collect();
    Ok(BasisVector {
        signal: SampledSignal::new(values, grid.clone()).expect("finite values"),
        label: BasisLabel::HoState { j },
    })
}

/// `c_j H_j(u) e^{−u²/2}` via the normalized three-term recurrence.
pub(crate) fn normalized_hermite(j: usize, u: f64) -> f64 {
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp();
    if j == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = std::f64::consts::SQRT_2 * u * h0;
    for m in 1..j {
        let m_f = m as f64;
        let next = u * (2.0 / (m_f + 1.0)).sqrt() * cur - (m_f / (m_f + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Window applied to u-coordinates before overlap quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Taper {
    /// No windowing; appropriate for periodic-fit grids.
    None,
    /// Raised-cosine roll-off over `edge_fraction` of the u-range at each end.
    RaisedCosine { edge_fraction: f64 },
}

impl Taper {
    /// The default window: raised cosine over the outer 10% per side.
    pub fn default_raised_cosine() -> Taper {
        Taper::RaisedCosine { edge_fraction: 0.1 }
    }

    /// Evaluates the window over the grid's u-coordinates.
    pub fn profile(&self, w: &Superpotential, grid: &Grid) -> Vec<f64> {
        let u = grid.u_coords(w);
        match *self {
            Taper::None => vec![1.0; u.len()],
            Taper::RaisedCosine { edge_fraction } => {
                let (lo, hi) = (u[0], u[u.len() - 1]);
                let width = edge_fraction * (hi - lo);
                u.iter()
                    .map(|&ui| {
                        let from_edge = (ui - lo).min(hi - ui);
                        if from_edge >= width {
                            1.0
                        } else {
                            let t = (from_edge / width).clamp(0.0, 1.0);
                            0.5 * (1.0 - (std::f64::consts::PI * t).cos())
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Result of a biorthogonality quadrature.
#[derive(Debug, Clone)]
pub struct BiorthReport {
    /// Diagonal-normalized pairing matrix `M̂_ab = M_ab/√(M_aa M_bb)`.
    pub matrix: Array2<Complex64>,
    /// Largest off-diagonal modulus of the normalized matrix.
    pub max_off_diagonal: f64,
}

/// Pairs each dual against each state through a tapered bilinear quadrature
/// under `dx` weights: `M_ab = Σ_i dual_a(x_i)·taper_i·state_b(x_i)·w_i`.
/// The `(W′)^{1−α}·(W′)^α` amplitudes supply the `dW` weight, so the result
/// is independent of α up to rounding. Eigenvalues closer than one
/// resolution bin `2π/(u-span)` are rejected.
pub fn biorthogonality_check(
    w: &Superpotential,
    grid: &Grid,
    alpha: f64,
    p_list: &[f64],
    taper: Taper,
) -> Result<BiorthReport, BasisError> {
    if grid.rep() != Representation::XDomain {
        return Err(BasisError::WrongDomain);
    }
    let u = grid.u_coords(w);
    let span = u[u.len() - 1] - u[0];
    let resolution = 2.0 * std::f64::consts::PI / span;
    for a in 0..p_list.len() {
        for b in a + 1..p_list.len() {
            let separation = (p_list[a] - p_list[b]).abs();
            if separation < resolution * (1.0 - 1e-9) {
                return Err(BasisError::DegenerateEigenvalues {
                    a,
                    b,
                    separation,
                    resolution,
                });
            }
        }
    }
    let window = taper.profile(w, grid);
    let states: Vec<BasisVector> = p_list
        .iter()
        .map(|&p| alpha_eigenstate(w, grid, p, alpha))
        .collect::<Result<_, _>>()?;
    let duals: Vec<BasisVector> = p_list
        .iter()
        .map(|&p| alpha_dual(w, grid, p, alpha))
        .collect::<Result<_, _>>()?;
    let m = p_list.len();
    let mut raw = Array2::zeros((m, m));
    for a in 0..m {
        for b in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..grid.len() {
                acc += duals[a].values()[i]
                    * states[b].values()[i]
                    * (window[i] * grid.weights()[i]);
            }
            raw[[a, b]] = acc;
        }
    }
    let mut matrix = Array2::zeros((m, m));
    for a in 0..m {
        for b in 0..m {
            matrix[[a, b]] = raw[[a, b]] / (raw[[a, a]].re * raw[[b, b]].re).sqrt();
        }
    }
    let mut max_off_diagonal = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            if a != b {
                max_off_diagonal = max_off_diagonal.max(matrix[[a, b]].norm());
            }
        }
    }
    Ok(BiorthReport {
        matrix,
        max_off_diagonal,
    })
}

/// Gram matrix of the oscillator states `j = 0..=j_max` under the `dW`
/// measure.
pub fn ho_gram(
    w: &Superpotential,
    grid: &Grid,
    j_max: usize,
) -> Result<Array2<Complex64>, BasisError> {
    let states: Vec<BasisVector> = (0..=j_max)
        .map(|j| ho_eigenstate(w, grid, j))
        .collect::<Result<_, _>>()?;
    let n = states.len();
    let mut gram = Array2::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            gram[[a, b]] = inner_product(
                states[a].signal(),
                states[b].signal(),
                MeasureTag::Dw,
                Some(w),
            )
            .expect("states share the grid");
        }
    }
    Ok(gram)
}

/// Moduli statistics of one basis pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingDeviation {
    /// Largest relative deviation of the overlap modulus from `1/√(2π)`.
    pub max_relative_deviation: f64,
    /// Number of overlaps sampled.
    pub samples: usize,
}

/// Mutual-unbiasedness diagnostics across the three basis pairings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnbiasednessReport {
    /// Position basis against momentum states (exact modulus constancy).
    pub position_momentum: PairingDeviation,
    /// Position basis against chirp states (exact modulus constancy).
    pub position_chirp: PairingDeviation,
    /// Momentum states against chirp states (tapered Fresnel overlaps).
    pub momentum_chirp: PairingDeviation,
    /// Worst deviation across all three pairings.
    pub max_relative_deviation: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Checks that all three cross-basis overlap moduli are constant at
/// `1/√(2π)`.
///
/// Position-basis overlaps are node-indicator densities `⟨W_i|·⟩`, i.e. the
/// state values themselves, so those two pairings are exact to rounding. The
/// momentum–chirp pairing is a tapered Fresnel quadrature whose stationary
/// point `u* = c − p` must sit well inside the window: eigenvalues are
/// sampled from `[−1, 1]`, and the caller must supply a grid fine enough to
/// resolve the chirp phase (node spacing × max phase rate ≲ π).
pub fn unbiasedness_check(w: &Superpotential, grid: &Grid) -> Result<UnbiasednessReport, BasisError> {
    if grid.rep() != Representation::XDomain {
        return Err(BasisError::WrongDomain);
    }
    let target = 1.0 / SQRT_2PI;
    let eigenvalues = linspace(-1.0, 1.0, 5);

    let pointwise = |family: &dyn Fn(f64) -> BasisVector| -> PairingDeviation {
        let mut worst = 0.0f64;
        let mut samples = 0;
        for &p in &eigenvalues {
            let state = family(p);
            for v in state.values() {
                worst = worst.max((v.norm() - target).abs() / target);
                samples += 1;
            }
        }
        PairingDeviation {
            max_relative_deviation: worst,
            samples,
        }
    };
    let position_momentum = pointwise(&|p| mub_momentum_state(w, grid, p));
    let position_chirp = pointwise(&|p| mub_chirp_state(w, grid, p));

    let window = Taper::default_raised_cosine().profile(w, grid);
    let jacobian: Vec<f64> = grid.nodes().iter().map(|&x| w.derivative(x)).collect();
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &p in &eigenvalues {
        let momentum = mub_momentum_state(w, grid, p);
        for &c in &eigenvalues {
            let chirp = mub_chirp_state(w, grid, c);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..grid.len() {
                acc += momentum.values()[i].conj()
                    * chirp.values()[i]
                    * (window[i] * jacobian[i] * grid.weights()[i]);
            }
            worst = worst.max((acc.norm() - target).abs() / target);
            samples += 1;
        }
    }
    let momentum_chirp = PairingDeviation {
        max_relative_deviation: worst,
        samples,
    };

    let max_relative_deviation = position_momentum
        .max_relative_deviation
        .max(position_chirp.max_relative_deviation)
        .max(momentum_chirp.max_relative_deviation);
    Ok(UnbiasednessReport {
        position_momentum,
        position_chirp,
        momentum_chirp,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn w_mixed() -> Superpotential {
        Superpotential::validate(&[1.0, 0.0, 1.0]).unwrap()
    }

    fn w_identity() -> Superpotential {
        Superpotential::validate(&[1.0]).unwrap()
    }

    fn w_cubic() -> Superpotential {
        Superpotential::validate(&[0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn mub_states_have_exactly_constant_modulus() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-4.0, 4.0, 128).unwrap();
        let target = 1.0 / SQRT_2PI;
        for v in mub_momentum_state(&w, &grid, 2.7).values() {
            assert_relative_eq!(v.norm(), target, max_relative = 1e-15);
        }
        for v in mub_chirp_state(&w, &grid, -1.3).values() {
            assert_relative_eq!(v.norm(), target, max_relative = 1e-15);
        }
    }

    #[test]
    fn identity_w_momentum_state_is_plane_wave() {
        let w = w_identity();
        let grid = Grid::uniform_x(-3.0, 3.0, 64).unwrap();
        let p = 1.7;
        let state = mub_momentum_state(&w, &grid, p);
        for (i, &x) in grid.nodes().iter().enumerate() {
            let expected = Complex64::from_polar(1.0 / SQRT_2PI, p * x);
            assert_abs_diff_eq!(state.values()[i].re, expected.re, epsilon = 1e-15);
            assert_abs_diff_eq!(state.values()[i].im, expected.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn alpha_zero_state_equals_momentum_state_bitwise() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-4.0, 4.0, 96).unwrap();
        let plain = mub_momentum_state(&w, &grid, 1.9);
        let alpha0 = alpha_eigenstate(&w, &grid, 1.9, 0.0).unwrap();
        assert_eq!(plain.values(), alpha0.values());
    }

    #[test]
    fn sym_state_is_alpha_half_bitwise() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-4.0, 4.0, 96).unwrap();
        let sym = sym_eigenstate(&w, &grid, 0.8).unwrap();
        let half = alpha_eigenstate(&w, &grid, 0.8, 0.5).unwrap();
        assert_eq!(sym.values(), half.values());
        assert_eq!(sym.label(), BasisLabel::SymState { p: 0.8 });
    }

    #[test]
    fn alpha_state_modulus_tracks_jacobian_power() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-2.0, 2.0, 64).unwrap();
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let state = alpha_eigenstate(&w, &grid, 2.2, alpha).unwrap();
            for (i, &x) in grid.nodes().iter().enumerate() {
                let expected = w.derivative(x).powf(alpha) / SQRT_2PI;
                assert_relative_eq!(state.values()[i].norm(), expected, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn state_dual_product_supplies_the_measure_weight() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-2.0, 2.0, 64).unwrap();
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let state = alpha_eigenstate(&w, &grid, 1.4, alpha).unwrap();
            let dual = alpha_dual(&w, &grid, 1.4, alpha).unwrap();
            for (i, &x) in grid.nodes().iter().enumerate() {
                let product = dual.values()[i] * state.values()[i];
                let expected = w.derivative(x) / (2.0 * std::f64::consts::PI);
                assert_relative_eq!(product.re, expected, max_relative = 1e-13);
                assert_abs_diff_eq!(product.im, 0.0, epsilon = 1e-16 + 1e-13 * expected);
            }
        }
    }

    #[test]
    fn basis_families_demand_x_domain_where_jacobian_is_needed() {
        let w = w_mixed();
        let gw = Grid::uniform_w(-2.0, 2.0, 32).unwrap();
        assert_eq!(
            alpha_eigenstate(&w, &gw, 1.0, 0.3).unwrap_err(),
            BasisError::WrongDomain
        );
        assert_eq!(
            alpha_dual(&w, &gw, 1.0, 0.3).unwrap_err(),
            BasisError::WrongDomain
        );
        // The u-form families work directly on a w-grid.
        let state = mub_momentum_state(&w, &gw, 1.0);
        assert_eq!(state.values().len(), 32);
        assert!(ho_eigenstate(&w, &gw, 3).is_ok());
    }

    #[test]
    fn ho_ground_states_match_closed_forms() {
        let norm = std::f64::consts::PI.powf(-0.25);
        let w = w_identity();
        let gx = Grid::uniform_x(-3.0, 3.0, 64).unwrap();
        let ground = ho_eigenstate(&w, &gx, 0).unwrap();
        for (i, &x) in gx.nodes().iter().enumerate() {
            assert_relative_eq!(
                ground.values()[i].re,
                norm * (-0.5 * x * x).exp(),
                max_relative = 1e-14
            );
        }
        let wc = w_cubic();
        let ground = ho_eigenstate(&wc, &gx, 0).unwrap();
        for (i, &x) in gx.nodes().iter().enumerate() {
            assert_relative_eq!(
                ground.values()[i].re,
                norm * (-0.5 * x.powi(6)).exp(),
                max_relative = 1e-13,
                epsilon = 1e-300
            );
        }
    }

    #[test]
    fn ho_recurrence_matches_explicit_hermite_polynomials() {
        // Oracle: H_j from the raw recurrence H_{j+1} = 2uH_j − 2jH_{j−1}
        // with c_j = (√π 2^j j!)^{−1/2}.
        let explicit = |j: usize, u: f64| -> f64 {
            let mut h = vec![1.0, 2.0 * u];
            for m in 1..j {
                let next = 2.0 * u * h[m] - 2.0 * m as f64 * h[m - 1];
                h.push(next);
            }
            let mut denom = std::f64::consts::PI.sqrt();
            for m in 1..=j {
                denom *= 2.0 * m as f64;
            }
            h[j] * (-0.5 * u * u).exp() / denom.sqrt()
        };
        for j in 0..=8 {
            for &u in &[-2.3, -0.7, 0.0, 0.4, 1.9, 3.1] {
                assert_relative_eq!(
                    normalized_hermite(j, u),
                    explicit(j, u),
                    max_relative = 1e-10,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn ho_states_inherit_parity_from_odd_w() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-5.0, 5.0, 128).unwrap();
        for j in 0..=6 {
            let state = ho_eigenstate(&w, &grid, j).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let n = grid.len();
            for i in 0..n {
                assert_abs_diff_eq!(
                    state.values()[i].re,
                    sign * state.values()[n - 1 - i].re,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn ho_index_above_cap_is_rejected() {
        let w = w_identity();
        let grid = Grid::uniform_x(-3.0, 3.0, 32).unwrap();
        assert!(ho_eigenstate(&w, &grid, 64).is_ok());
        assert_eq!(
            ho_eigenstate(&w, &grid, 65).unwrap_err(),
            BasisError::TruncationCap { j: 65, max: 64 }
        );
    }

    #[test]
    fn ho_gram_is_identity_under_dw() {
        for w in [w_identity(), w_mixed()] {
            let grid = Grid::uniform_x(-8.0, 8.0, 1024).unwrap();
            let gram = ho_gram(&w, &grid, 12).unwrap();
            let mut worst = 0.0f64;
            for a in 0..=12 {
                for b in 0..=12 {
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((gram[[a, b]] - target).norm());
                }
            }
            assert!(worst <= 1e-8, "Gram deviation {worst:.2e}");
        }
    }

    #[test]
    fn biorthogonality_on_periodic_fit_grid_is_discrete_fourier() {
        // W = x on [0, L] with period-fitting eigenvalues: the half weights at
        // the equal-valued endpoints make the trapezoid sum an exact DFT
        // orthogonality relation, so M is the identity to rounding.
        let w = w_identity();
        let l = 10.0;
        let grid = Grid::uniform_x(0.0, l, 501).unwrap();
        let p_list: Vec<f64> = (0..3)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / l)
            .collect();
        let report = biorthogonality_check(&w, &grid, 0.0, &p_list, Taper::None).unwrap();
        for a in 0..3 {
            assert_relative_eq!(report.matrix[[a, a]].re, 1.0, max_relative = 1e-12);
        }
        assert!(
            report.max_off_diagonal <= 1e-10,
            "off-diagonal {:.2e}",
            report.max_off_diagonal
        );
    }

    #[test]
    fn biorthogonality_off_diagonals_respect_taper_sidelobe_oracle() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-2.0, 2.0, 1024).unwrap();
        let p_list = [-3.0, 0.0, 3.0];
        let taper = Taper::default_raised_cosine();
        let report = biorthogonality_check(&w, &grid, 0.3, &p_list, taper).unwrap();
        // Independent oracle: the normalized taper spectrum at the eigenvalue
        // separation, from a fine u-quadrature of the window itself.
        let sidelobe = |dp: f64| -> f64 {
            let fine = 16384;
            let (lo, hi) = (w.eval(-2.0), w.eval(2.0));
            let du = (hi - lo) / fine as f64;
            let width = 0.1 * (hi - lo);
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for i in 0..=fine {
                let u = lo + i as f64 * du;
                let from_edge = (u - lo).min(hi - u);
                let wgt = if from_edge >= width {
                    1.0
                } else {
                    0.5 * (1.0 - (std::f64::consts::PI * from_edge / width).cos())
                };
                let trap = if i == 0 || i == fine { 0.5 } else { 1.0 };
                num += Complex64::from_polar(wgt * trap * du, dp * u);
                den += wgt * trap * du;
            }
            num.norm() / den
        };
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    let bound = sidelobe(p_list[b] - p_list[a]);
                    let measured = report.matrix[[a, b]].norm();
                    assert!(
                        measured <= 1.5 * bound + 1e-9,
                        "({a},{b}): measured {measured:.3e} vs oracle {bound:.3e}"
                    );
                }
            }
        }
    }

    #[test]
    fn biorthogonality_is_alpha_free_and_conjugate_symmetric() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-2.0, 2.0, 512).unwrap();
        let p_list = [-2.0, 0.5, 3.0];
        let taper = Taper::default_raised_cosine();
        let m03 = biorthogonality_check(&w, &grid, 0.3, &p_list, taper).unwrap();
        let m07 = biorthogonality_check(&w, &grid, 0.7, &p_list, taper).unwrap();
        let m05 = biorthogonality_check(&w, &grid, 0.5, &p_list, taper).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_abs_diff_eq!(
                    (m03.matrix[[a, b]] - m07.matrix[[a, b]]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
                assert_abs_diff_eq!(
                    (m03.matrix[[a, b]] - m05.matrix[[a, b]]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
                assert_abs_diff_eq!(
                    (m03.matrix[[a, b]] - m03.matrix[[b, a]].conj()).norm(),
                    0.0,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn unresolvable_eigenvalues_are_rejected() {
        let w = w_identity();
        let grid = Grid::uniform_x(-5.0, 5.0, 256).unwrap();
        // u-span 10 -> resolution bin 2π/10 ≈ 0.628.
        let err = biorthogonality_check(&w, &grid, 0.0, &[0.0, 0.3], Taper::None).unwrap_err();
        match err {
            BasisError::DegenerateEigenvalues { a, b, separation, .. } => {
                assert_eq!((a, b), (0, 1));
                assert_abs_diff_eq!(separation, 0.3, epsilon = 1e-15);
            }
            other => panic!("expected DegenerateEigenvalues, got {other:?}"),
        }
    }

    #[test]
    fn unbiasedness_holds_for_identity_w() {
        let w = w_identity();
        let grid = Grid::uniform_x(-8.0, 8.0, 1024).unwrap();
        let report = unbiasedness_check(&w, &grid).unwrap();
        assert!(report.position_momentum.max_relative_deviation <= 1e-12);
        assert!(report.position_chirp.max_relative_deviation <= 1e-12);
        assert!(
            report.momentum_chirp.max_relative_deviation <= 0.02,
            "momentum-chirp deviation {:.3e}",
            report.momentum_chirp.max_relative_deviation
        );
    }

    #[test]
    fn unbiasedness_holds_for_mixed_w_on_phase_resolving_grid() {
        let w = w_mixed();
        // Chirp phase rate |(c − p − u)·W′| stays resolvable on [−2, 2].
        let grid = Grid::uniform_x(-2.0, 2.0, 1024).unwrap();
        let report = unbiasedness_check(&w, &grid).unwrap();
        assert!(report.position_momentum.max_relative_deviation <= 1e-12);
        assert!(report.position_chirp.max_relative_deviation <= 1e-12);
        assert!(
            report.momentum_chirp.max_relative_deviation <= 0.05,
            "momentum-chirp deviation {:.3e}",
            report.momentum_chirp.max_relative_deviation
        );
    }
}
