//! Dense discretizations of the position operator, the α-family of momentum
//! operators, and their verification reports.
//!
//! On a uniform x-grid the first derivative `D` uses central differences on
//! interior rows and second-order one-sided stencils on the two boundary
//! rows. The momentum family is
//!
//! ```text
//! P_α = −i · diag((W′)^{α−1}) · D · diag((W′)^{−α})        (ħ = 1)
//! ```
//!
//! whose interior block satisfies `P_α† = P_{1−α}` exactly, so the average
//! `(P_α + P_{1−α})/2` is Hermitian on the interior for every α. All of those
//! averages discretize one and the same continuum operator
//! `−i (W′)^{−1} d/dx + (i/2) W″ (W′)^{−2}`, but as matrices they retain an
//! `O(h²)` dependence on α. [`build_momentum_symmetrized`] therefore returns
//! the canonical α-free member — the anticommutator form
//! `−(i/2)(G·D + D·G)` with `G = diag(1/W′)`, equal to the ordering average
//! at the endpoints α ∈ {0, 1} — while [`build_momentum_sandwich_average`]
//! exposes the literal per-α average for cross-checks.
//!
//! Adjointness is always judged on the interior block (first and last row
//! and column dropped) so one-sided boundary stencils cannot pollute the
//! classification. Norms are largest singular values estimated by power
//! iteration.

use crate::grids::{Grid, GridError, MeasureTag, Representation, SampledSignal};
use crate::superpotential::{MonotonicityClass, Superpotential};
use ndarray::{s, Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Nodes where W′ falls below this floor make `(W′)^{−β}` unusable.
pub const SINGULARITY_FLOOR: f64 = 1e-10;

/// Relative defect below which an interior block counts as self-adjoint.
pub const SELF_ADJOINT_REL_TOL: f64 = 1e-8;

/// Errors from operator construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    /// The construction needs a grid in the other domain.
    #[error("operator requires a grid in the {expected:?} representation")]
    WrongDomain { expected: Representation },
    /// Finite-difference stencils require uniform spacing.
    #[error("operator requires a uniformly spaced grid")]
    NonUniformGrid,
    /// A node's Jacobian W′(x_i) is below the singularity floor.
    #[error("W'(x_{index}) = {value:e} is below the singularity floor")]
    SingularJacobian { index: usize, value: f64 },
    /// W has a critical point inside the grid hull, so (W′)^{−β} is not
    /// controlled between nodes.
    #[error("W has a critical point at x = {critical_point} inside the grid hull")]
    NonMonotone { critical_point: f64 },
}

/// What an [`OperatorMatrix`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    Position,
    MomentumAlpha { alpha: f64 },
    MomentumSymmetrized,
    MomentumSandwichAverage { alpha: f64 },
    MomentumW,
    Similarity { alpha: f64 },
}

/// A dense complex matrix bound to the grid it acts on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: Array2<Complex64>,
    grid: Grid,
    measure: MeasureTag,
    kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Native measure of the axis the operator acts on.
    pub fn measure(&self) -> MeasureTag {
        self.measure
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Matrix–vector action on a signal sharing the operator's grid.
    pub fn apply(&self, f: &SampledSignal) -> Result<SampledSignal, GridError> {
        if f.grid() != &self.grid {
            return Err(GridError::GridMismatch);
        }
        let v = Array1::from_iter(f.values().iter().copied());
        let out = self.matrix.dot(&v);
        SampledSignal::new(out.to_vec(), self.grid.clone())
    }
}

/// `(W′)^e` with exact handling of the exponents that occur in the family.
fn jacobian_power(g: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        g
    } else if e == -1.0 {
        1.0 / g
    } else if e == 0.5 {
        g.sqrt()
    } else if e == -0.5 {
        1.0 / g.sqrt()
    } else {
        g.powf(e)
    }
}

/// Second-order first-derivative matrix on a uniform grid: central
/// differences inside, one-sided (−3, 4, −1)/(2h) rows at the ends.
pub fn derivative_matrix(grid: &Grid) -> Result<Array2<f64>, OperatorError> {
    let h = grid.spacing().ok_or(OperatorError::NonUniformGrid)?;
    let n = grid.len();
    let inv2h = 1.0 / (2.0 * h);
    let mut d = Array2::zeros((n, n));
    d[[0, 0]] = -3.0 * inv2h;
    d[[0, 1]] = 4.0 * inv2h;
    d[[0, 2]] = -inv2h;
    for j in 1..n - 1 {
        d[[j, j - 1]] = -inv2h;
        d[[j, j + 1]] = inv2h;
    }
    d[[n - 1, n - 1]] = 3.0 * inv2h;
    d[[n - 1, n - 2]] = -4.0 * inv2h;
    d[[n - 1, n - 3]] = inv2h;
    Ok(d)
}

fn require_x_domain(grid: &Grid) -> Result<(), OperatorError> {
    if grid.rep() != Representation::XDomain {
        return Err(OperatorError::WrongDomain {
            expected: Representation::XDomain,
        });
    }
    Ok(())
}

/// Checks every node's Jacobian against the floor, then the hull for
/// critical points lying between nodes.
fn check_jacobian(w: &Superpotential, grid: &Grid) -> Result<Vec<f64>, OperatorError> {
    let g: Vec<f64> = grid.nodes().iter().map(|&x| w.derivative(x)).collect();
    for (i, &gi) in g.iter().enumerate() {
        if gi < SINGULARITY_FLOOR {
            return Err(OperatorError::SingularJacobian { index: i, value: gi });
        }
    }
    if let MonotonicityClass::MonotoneWithCriticalPoints { critical_points } = w.monotonicity() {
        let (lo, hi) = grid.hull();
        if let Some(&c) = critical_points.iter().find(|&&c| c >= lo && c <= hi) {
            return Err(OperatorError::NonMonotone { critical_point: c });
        }
    }
    Ok(g)
}

/// Diagonal position operator: `diag(W(x_i))` on an x-grid, `diag(u_i)` on a
/// w-grid.
pub fn build_position(w: &Superpotential, grid: &Grid) -> OperatorMatrix {
    let (diag, measure): (Vec<f64>, MeasureTag) = match grid.rep() {
        Representation::XDomain => (grid.nodes().iter().map(|&x| w.eval(x)).collect(), MeasureTag::Dx),
        Representation::WDomain => (grid.nodes().to_vec(), MeasureTag::Dw),
    };
    let n = grid.len();
    let mut m = Array2::zeros((n, n));
    for (i, &v) in diag.iter().enumerate() {
        m[[i, i]] = Complex64::new(v, 0.0);
    }
    OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure,
        kind: OperatorKind::Position,
    }
}

/// One ordering of the momentum family:
/// `P_α = −i · diag((W′)^{α−1}) · D · diag((W′)^{−α})`.
pub fn build_momentum_alpha(
    w: &Superpotential,
    grid: &Grid,
    alpha: f64,
) -> Result<OperatorMatrix, OperatorError> {
    require_x_domain(grid)?;
    let g = check_jacobian(w, grid)?;
    let d = derivative_matrix(grid)?;
    let n = grid.len();
    let left: Vec<f64> = g.iter().map(|&gi| jacobian_power(gi, alpha - 1.0)).collect();
    let right: Vec<f64> = g.iter().map(|&gi| jacobian_power(gi, -alpha)).collect();
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            let djk = d[[j, k]];
            if djk != 0.0 {
                m[[j, k]] = Complex64::new(0.0, -(left[j] * djk * right[k]));
            }
        }
    }
    Ok(OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure: MeasureTag::Dx,
        kind: OperatorKind::MomentumAlpha { alpha },
    })
}

/// The canonical symmetrized momentum: `−(i/2)(G·D + D·G)`, `G = diag(1/W′)`.
///
/// This is the ordering average `(P_0 + P_1)/2` and the unique member of the
/// averaged family that is independent of α at the matrix level; its interior
/// block is Hermitian to the last bit. See [`build_momentum_sandwich_average`]
/// for the literal per-α average, which differs from this matrix by `O(h²)`.
pub fn build_momentum_symmetrized(
    w: &Superpotential,
    grid: &Grid,
) -> Result<OperatorMatrix, OperatorError> {
    require_x_domain(grid)?;
    let g = check_jacobian(w, grid)?;
    let d = derivative_matrix(grid)?;
    let n = grid.len();
    let inv_g: Vec<f64> = g.iter().map(|&gi| 1.0 / gi).collect();
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            let djk = d[[j, k]];
            if djk != 0.0 {
                m[[j, k]] = Complex64::new(0.0, -0.5 * djk * (inv_g[j] + inv_g[k]));
            }
        }
    }
    Ok(OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure: MeasureTag::Dx,
        kind: OperatorKind::MomentumSymmetrized,
    })
}

/// The literal arithmetic average of the two orderings, `(P_α + P_{1−α})/2`.
///
/// Exactly interior-Hermitian for every α, but distinct α values give
/// matrices that differ by `O(h²)`; the α-free representative of the family
/// is [`build_momentum_symmetrized`].
pub fn build_momentum_sandwich_average(
    w: &Superpotential,
    grid: &Grid,
    alpha: f64,
) -> Result<OperatorMatrix, OperatorError> {
    let a = build_momentum_alpha(w, grid, alpha)?;
    let b = build_momentum_alpha(w, grid, 1.0 - alpha)?;
    let m = (&a.matrix + &b.matrix).mapv(|z| 0.5 * z);
    Ok(OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure: MeasureTag::Dx,
        kind: OperatorKind::MomentumSandwichAverage { alpha },
    })
}

/// Momentum in the w-representation: `−i D` on a uniform u-grid.
pub fn build_momentum_w(grid: &Grid) -> Result<OperatorMatrix, OperatorError> {
    if grid.rep() != Representation::WDomain {
        return Err(OperatorError::WrongDomain {
            expected: Representation::WDomain,
        });
    }
    let d = derivative_matrix(grid)?;
    let m = d.mapv(|v| Complex64::new(0.0, -v));
    Ok(OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure: MeasureTag::Dw,
        kind: OperatorKind::MomentumW,
    })
}

/// Diagonal similarity transform `S = diag((W′)^{−α})`.
pub fn build_similarity(
    w: &Superpotential,
    grid: &Grid,
    alpha: f64,
) -> Result<OperatorMatrix, OperatorError> {
    require_x_domain(grid)?;
    let g = check_jacobian(w, grid)?;
    let n = grid.len();
    let mut m = Array2::zeros((n, n));
    for (i, &gi) in g.iter().enumerate() {
        m[[i, i]] = Complex64::new(jacobian_power(gi, -alpha), 0.0);
    }
    Ok(OperatorMatrix {
        matrix: m,
        grid: grid.clone(),
        measure: MeasureTag::Dx,
        kind: OperatorKind::Similarity { alpha },
    })
}

/// Interior block: everything except the first and last row and column.
pub fn interior_block(m: &Array2<Complex64>) -> Array2<Complex64> {
    let n = m.nrows();
    m.slice(s![1..n - 1, 1..n - 1]).to_owned()
}

fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|z| z.conj())
}

fn l2(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on the normal matrix.
///
/// Deterministic start vector; relative-change stop at 1e−6 with a 300-step
/// cap. For operators with tightly clustered top singular values the estimate
/// is good to a few tenths of a percent, which is ample for threshold
/// comparisons spanning several decades.
pub fn operator_norm(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    if n == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let mh = adjoint(m);
    let mut v = Array1::from_shape_fn(n.min(m.ncols()).max(m.ncols()), |j| {
        let t = j as f64;
        Complex64::new(1.0 + 0.37 * (1.618 * t).sin(), 0.3 * (0.711 * t).cos())
    });
    let nv = l2(&v);
    v.mapv_inplace(|z| z / nv);
    let mut sigma = 0.0;
    for _ in 0..300 {
        let u = m.dot(&v);
        let s = l2(&u);
        if s == 0.0 {
            return 0.0;
        }
        let next = mh.dot(&u);
        let nn = l2(&next);
        if nn == 0.0 {
            return s;
        }
        v = next.mapv(|z| z / nn);
        if (s - sigma).abs() <= 1e-6 * s {
            return s;
        }
        sigma = s;
    }
    sigma
}

/// Interior-block adjointness diagnostics under both measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjointReport {
    /// ‖B − B†‖ over the interior block.
    pub defect_dx: f64,
    /// ‖B − M⁻¹B†M‖ with the dW metric M = diag(w_i·W′(x_i)).
    pub defect_dw: f64,
    /// ‖B‖, the scale the defects are judged against.
    pub norm: f64,
    /// Number of interior rows the report covers.
    pub interior_rows: usize,
    /// defect_dx ≤ 1e−8·‖B‖.
    pub self_adjoint_dx: bool,
    /// defect_dw ≤ 1e−8·‖B‖.
    pub self_adjoint_dw: bool,
}

/// Measures how far an operator's interior block is from self-adjointness
/// under the dx and dW measures.
pub fn adjoint_report(p: &OperatorMatrix, w: &Superpotential) -> AdjointReport {
    let b = interior_block(&p.matrix);
    let bh = adjoint(&b);
    let n = b.nrows();
    let grid = &p.grid;
    // dW metric over interior nodes; on a w-grid the Jacobian is identity.
    let metric: Vec<f64> = (1..grid.len() - 1)
        .map(|i| {
            let jac = match grid.rep() {
                Representation::XDomain => w.derivative(grid.nodes()[i]),
                Representation::WDomain => 1.0,
            };
            grid.weights()[i] * jac
        })
        .collect();
    let defect_dx = operator_norm(&(&b - &bh));
    let mut conj_dw = Array2::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            conj_dw[[j, k]] = bh[[j, k] ] * (metric[k] / metric[j]);
        }
    }
    let defect_dw = operator_norm(&(&b - &conj_dw));
    let norm = operator_norm(&b);
    AdjointReport {
        defect_dx,
        defect_dw,
        norm,
        interior_rows: n,
        self_adjoint_dx: defect_dx <= SELF_ADJOINT_REL_TOL * norm,
        self_adjoint_dw: defect_dw <= SELF_ADJOINT_REL_TOL * norm,
    }
}

/// Relative interior residual of the canonical commutator acting on a smooth
/// test signal: ‖(ŴP − PŴ − i)f‖ / ‖f‖ over nodes 1..N−1.
pub fn commutator_defect(
    w: &Superpotential,
    p: &OperatorMatrix,
    f: &SampledSignal,
) -> Result<f64, GridError> {
    let grid = &p.grid;
    if f.grid() != grid {
        return Err(GridError::GridMismatch);
    }
    let wd: Vec<f64> = match grid.rep() {
        Representation::XDomain => grid.nodes().iter().map(|&x| w.eval(x)).collect(),
        Representation::WDomain => grid.nodes().to_vec(),
    };
    let v = Array1::from_iter(f.values().iter().copied());
    let pv = p.matrix.dot(&v);
    let wv = Array1::from_shape_fn(v.len(), |j| v[j] * wd[j]);
    let pwv = p.matrix.dot(&wv);
    let i_unit = Complex64::new(0.0, 1.0);
    let n = v.len();
    let mut res = 0.0;
    let mut ref_norm = 0.0;
    for j in 1..n - 1 {
        let r = wd[j] * pv[j] - pwv[j] - i_unit * v[j];
        res += r.norm_sqr();
        ref_norm += v[j].norm_sqr();
    }
    Ok((res / ref_norm).sqrt())
}

/// Result of the similarity-equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityReport {
    /// ‖S P_α S⁻¹ − P₀‖ over the interior block.
    pub residual: f64,
    /// ‖P₀‖ over the interior block, the comparison scale.
    pub reference_norm: f64,
}

impl SimilarityReport {
    pub fn relative(&self) -> f64 {
        if self.reference_norm == 0.0 {
            self.residual
        } else {
            self.residual / self.reference_norm
        }
    }
}

/// Verifies that `S P_α S⁻¹` reproduces `P₀` at the matrix level,
/// `S = diag((W′)^{−α})`. The identity is exact in exact arithmetic, so the
/// residual is pure rounding noise.
pub fn similarity_check(
    w: &Superpotential,
    grid: &Grid,
    alpha: f64,
) -> Result<SimilarityReport, OperatorError> {
    let p_alpha = build_momentum_alpha(w, grid, alpha)?;
    let p_zero = build_momentum_alpha(w, grid, 0.0)?;
    let g: Vec<f64> = grid.nodes().iter().map(|&x| w.derivative(x)).collect();
    let s: Vec<f64> = g.iter().map(|&gi| jacobian_power(gi, -alpha)).collect();
    let s_inv: Vec<f64> = g.iter().map(|&gi| jacobian_power(gi, alpha)).collect();
    let n = grid.len();
    let mut transformed = Array2::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            transformed[[j, k]] = p_alpha.matrix[[j, k]] * (s[j] * s_inv[k]);
        }
    }
    let diff = interior_block(&(&transformed - &p_zero.matrix));
    let residual = operator_norm(&diff);
    let reference_norm = operator_norm(&interior_block(&p_zero.matrix));
    Ok(SimilarityReport {
        residual,
        reference_norm,
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

    fn max_entry_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn derivative_matrix_is_exact_on_quadratics() {
        let grid = Grid::uniform_x(-2.0, 3.0, 41).unwrap();
        let d = derivative_matrix(&grid).unwrap();
        let cases: [(fn(f64) -> f64, fn(f64) -> f64); 3] = [
            (|_| 1.0, |_| 0.0),
            (|x| x, |_| 1.0),
            (|x| x * x, |x| 2.0 * x),
        ];
        for (f, df) in cases {
            let v = Array1::from_iter(grid.nodes().iter().map(|&x| f(x)));
            let dv = d.dot(&v);
            for (i, &x) in grid.nodes().iter().enumerate() {
                assert_abs_diff_eq!(dv[i], df(x), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn derivative_matrix_requires_uniform_spacing() {
        let mut nodes: Vec<f64> = (0..16).map(|i| i as f64).collect();
        nodes[7] = 6.7;
        let grid = Grid::from_nodes(nodes, Representation::XDomain).unwrap();
        assert_eq!(
            derivative_matrix(&grid).unwrap_err(),
            OperatorError::NonUniformGrid
        );
    }

    #[test]
    fn position_operator_is_diagonal_in_both_domains() {
        let w = w_cubic();
        let gx = Grid::uniform_x(1.0, 2.0, 8).unwrap();
        let px = build_position(&w, &gx);
        for (i, &x) in gx.nodes().iter().enumerate() {
            assert_abs_diff_eq!(px.matrix()[[i, i]].re, x * x * x, epsilon = 1e-12);
        }
        let gw = Grid::uniform_w(0.0, 8.0, 9).unwrap();
        let pw = build_position(&w, &gw);
        for (i, &u) in gw.nodes().iter().enumerate() {
            assert_eq!(pw.matrix()[[i, i]].re, u);
        }
    }

    #[test]
    fn momentum_for_identity_w_is_neg_i_d_for_every_alpha() {
        let w = w_identity();
        let grid = Grid::uniform_x(-4.0, 4.0, 32).unwrap();
        let d = derivative_matrix(&grid).unwrap();
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let p = build_momentum_alpha(&w, &grid, alpha).unwrap();
            for j in 0..grid.len() {
                for k in 0..grid.len() {
                    assert_eq!(p.matrix()[[j, k]], Complex64::new(0.0, -d[[j, k]]));
                }
            }
        }
    }

    #[test]
    fn momentum_alpha_and_its_mirror_are_interior_adjoints() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-3.0, 3.0, 96).unwrap();
        for alpha in [0.0, 0.3, 0.5] {
            let p = build_momentum_alpha(&w, &grid, alpha).unwrap();
            let q = build_momentum_alpha(&w, &grid, 1.0 - alpha).unwrap();
            let b = interior_block(p.matrix());
            let qh = adjoint(&interior_block(q.matrix()));
            let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(
                max_entry_diff(&b, &qh) <= 1e-14 * scale,
                "adjoint pairing failed for alpha = {alpha}"
            );
        }
    }

    #[test]
    fn momentum_builders_reject_bad_grids() {
        let w = w_cubic();
        // Node exactly on the critical point: Jacobian floor trips first.
        let with_node_at_zero = Grid::uniform_x(-4.0, 4.0, 9).unwrap();
        assert_eq!(
            build_momentum_alpha(&w, &with_node_at_zero, 0.5).unwrap_err(),
            OperatorError::SingularJacobian { index: 4, value: 0.0 }
        );
        // Hull straddles the critical point without a node on it.
        let straddling = Grid::uniform_x(-4.0, 4.0, 8).unwrap();
        assert_eq!(
            build_momentum_alpha(&w, &straddling, 0.5).unwrap_err(),
            OperatorError::NonMonotone { critical_point: 0.0 }
        );
        // Hull excluding the critical point is fine.
        let clear = Grid::uniform_x(1.0, 9.0, 16).unwrap();
        assert!(build_momentum_alpha(&w, &clear, 0.5).is_ok());
        // Wrong representation.
        let gw = Grid::uniform_w(-1.0, 1.0, 16).unwrap();
        assert_eq!(
            build_momentum_alpha(&w_mixed(), &gw, 0.0).unwrap_err(),
            OperatorError::WrongDomain {
                expected: Representation::XDomain
            }
        );
    }

    #[test]
    fn symmetrized_interior_block_is_hermitian_to_the_last_bit() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-5.0, 5.0, 128).unwrap();
        let p = build_momentum_symmetrized(&w, &grid).unwrap();
        let b = interior_block(p.matrix());
        let bh = adjoint(&b);
        assert_eq!(max_entry_diff(&b, &bh), 0.0);
    }

    #[test]
    fn sandwich_average_at_endpoint_matches_symmetrized() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-3.0, 3.0, 64).unwrap();
        let sym = build_momentum_symmetrized(&w, &grid).unwrap();
        let avg = build_momentum_sandwich_average(&w, &grid, 0.0).unwrap();
        let scale = sym.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_entry_diff(sym.matrix(), avg.matrix()) <= 1e-15 * scale);
    }

    #[test]
    fn sandwich_average_alpha_wobble_shrinks_at_second_order() {
        let w = w_mixed();
        let gap = |n: usize| -> f64 {
            let grid = Grid::uniform_x(-3.0, 3.0, n).unwrap();
            let sym = build_momentum_symmetrized(&w, &grid).unwrap();
            let avg = build_momentum_sandwich_average(&w, &grid, 0.3).unwrap();
            let diff = interior_block(&(avg.matrix() - sym.matrix()));
            operator_norm(&diff) / operator_norm(&interior_block(sym.matrix()))
        };
        let (g1, g2, g3) = (gap(65), gap(129), gap(257));
        assert!(g1 > g2 && g2 > g3, "wobble must shrink: {g1:.2e} {g2:.2e} {g3:.2e}");
        assert!(
            g1 / g2 >= 2.5 && g2 / g3 >= 2.5,
            "expected ~4x decay per halving: {g1:.2e} {g2:.2e} {g3:.2e}"
        );
    }

    #[test]
    fn momentum_w_differentiates_plane_waves() {
        let grid = Grid::uniform_w(-6.0, 6.0, 256).unwrap();
        let p = build_momentum_w(&grid).unwrap();
        let wave = SampledSignal::from_fn(grid.clone(), |u| {
            Complex64::new(0.0, 2.0 * u).exp()
        });
        let out = p.apply(&wave).unwrap();
        let mut worst = 0.0f64;
        for j in 1..grid.len() - 1 {
            let err = (out.values()[j] - wave.values()[j] * 2.0).norm();
            worst = worst.max(err);
        }
        // O(h^2) Taylor remainder: h = 12/255, p = 2 -> p^3 h^2 / 6 = 2.9e-3.
        assert!(worst < 4e-3, "interior residual too large: {worst:.2e}");
        let constant = SampledSignal::from_real_fn(grid.clone(), |_| 1.0);
        let flat = p.apply(&constant).unwrap();
        for v in flat.values() {
            assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn operator_norm_matches_known_singular_values() {
        let mut diag = Array2::zeros((8, 8));
        for i in 0..8 {
            diag[[i, i]] = Complex64::new(-(i as f64), 0.0);
        }
        assert_relative_eq!(operator_norm(&diag), 7.0, max_relative = 1e-4);
        let mut nilpotent = Array2::zeros((4, 4));
        nilpotent[[0, 3]] = Complex64::new(0.0, 2.0);
        assert_relative_eq!(operator_norm(&nilpotent), 2.0, max_relative = 1e-4);
        let zero: Array2<Complex64> = Array2::zeros((5, 5));
        assert_eq!(operator_norm(&zero), 0.0);
    }

    #[test]
    fn adjoint_classification_reproduces_the_table() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-8.0, 8.0, 256).unwrap();
        // alpha = 1/2: self-adjoint under dx only.
        let half = adjoint_report(&build_momentum_alpha(&w, &grid, 0.5).unwrap(), &w);
        assert!(half.self_adjoint_dx, "{half:?}");
        assert!(!half.self_adjoint_dw, "{half:?}");
        assert!(half.defect_dw >= 1e-3 * half.norm);
        // Symmetrized: same classification.
        let sym = adjoint_report(&build_momentum_symmetrized(&w, &grid).unwrap(), &w);
        assert!(sym.self_adjoint_dx, "{sym:?}");
        assert!(sym.defect_dw >= 1e-3 * sym.norm);
        // alpha = 0: self-adjoint under dW only.
        let zero = adjoint_report(&build_momentum_alpha(&w, &grid, 0.0).unwrap(), &w);
        assert!(zero.self_adjoint_dw, "{zero:?}");
        assert!(!zero.self_adjoint_dx, "{zero:?}");
        assert!(zero.defect_dx >= 1e-3 * zero.norm);
        // alpha = 0.3: neither.
        let frac = adjoint_report(&build_momentum_alpha(&w, &grid, 0.3).unwrap(), &w);
        assert!(!frac.self_adjoint_dx && !frac.self_adjoint_dw, "{frac:?}");
        assert!(frac.defect_dx >= 1e-3 * frac.norm && frac.defect_dw >= 1e-3 * frac.norm);
        // W = x: every measure coincides, defects all vanish.
        let id = w_identity();
        let both = adjoint_report(&build_momentum_alpha(&id, &grid, 0.3).unwrap(), &id);
        assert!(both.self_adjoint_dx && both.self_adjoint_dw, "{both:?}");
    }

    #[test]
    fn commutator_defect_shrinks_at_second_order() {
        for w in [w_identity(), w_mixed()] {
            for alpha in [0.0, 0.5] {
                let defect = |n: usize| -> f64 {
                    let grid = Grid::uniform_x(-8.0, 8.0, n).unwrap();
                    let p = build_momentum_alpha(&w, &grid, alpha).unwrap();
                    let f = SampledSignal::from_real_fn(grid, |x| (-x * x).exp());
                    commutator_defect(&w, &p, &f).unwrap()
                };
                let (d1, d2, d3) = (defect(256), defect(512), defect(1024));
                assert!(
                    d1 / d2 >= 3.0 && d1 / d2 <= 5.0,
                    "ratio out of range: {d1:.2e}/{d2:.2e}"
                );
                assert!(
                    d2 / d3 >= 3.0 && d2 / d3 <= 5.0,
                    "ratio out of range: {d2:.2e}/{d3:.2e}"
                );
            }
        }
    }

    #[test]
    fn similarity_transform_reproduces_alpha_zero_exactly() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-6.0, 6.0, 256).unwrap();
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let report = similarity_check(&w, &grid, alpha).unwrap();
            assert!(
                report.relative() <= 1e-13,
                "alpha = {alpha}: relative residual {:.2e}",
                report.relative()
            );
        }
        // W = x: S is the identity, residual must be exactly zero.
        let id = w_identity();
        let report = similarity_check(&id, &grid, 0.7).unwrap();
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn apply_checks_grid_identity() {
        let w = w_mixed();
        let grid = Grid::uniform_x(-2.0, 2.0, 32).unwrap();
        let other = Grid::uniform_x(-2.0, 2.0, 33).unwrap();
        let p = build_momentum_symmetrized(&w, &grid).unwrap();
        let f = SampledSignal::from_real_fn(other, |x| (-x * x).exp());
        assert_eq!(p.apply(&f).unwrap_err(), GridError::GridMismatch);
    }
}
