//! The reproducible verification suite.
//!
//! [`run`] evaluates thirteen numbered criteria covering the whole toolkit —
//! operator algebra, basis structure, transform analysis, and phase-space
//! invariants — against a [`VerifyConfig`] rig and returns a structured
//! [`VerifyReport`]. Every criterion decomposes into labelled sub-checks,
//! each carrying the measured value, the bound it is judged against, and the
//! direction of the comparison, so a report is auditable without re-running
//! anything. The default configuration is the project's acceptance rig:
//! `x ∈ [−8, 8]`, `N = M = 1024`, coordinate maps `x` and `x + x³`
//! (plus `x³` for the transform-only checks), `α ∈ {0, 0.3, 0.5, 1}`.
//!
//! Criteria with fixed targets (the classification matrix, similarity
//! equivalence, the cubic-map invariance, ridge analysis) construct their
//! coordinate maps internally; the configurable superpotential list drives
//! the per-map criteria. Runs are deterministic for a fixed seed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bases::{self, BasisError};
use crate::grids::{inner_product, Grid, GridError, MeasureTag, SampledSignal};
use crate::grids::{resample, InterpOrder};
use crate::operators::{
    adjoint_report, build_momentum_alpha, build_momentum_sandwich_average,
    build_momentum_symmetrized, commutator_defect, interior_block, operator_norm,
    similarity_check, OperatorError,
};
use crate::phase_space::{
    self, coherent_overlap, coherent_state, FockVector, PhaseSpaceError,
};
use crate::superpotential::{Superpotential, ValidationError};
use crate::wtransform::{self, TransformError};

/// Seed of the default verification rig.
pub const DEFAULT_SEED: u64 = 7;

/// Parameters of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Coordinate maps driving the per-map criteria.
    pub superpotentials: Vec<Superpotential>,
    /// Left edge of the position grid.
    pub x_min: f64,
    /// Right edge of the position grid.
    pub x_max: f64,
    /// Position nodes.
    pub n: usize,
    /// Momentum nodes.
    pub m: usize,
    /// Ordering parameters for the operator criteria.
    pub alphas: Vec<f64>,
    /// Seed for the random-superposition draws.
    pub seed: u64,
    /// When set, only the listed criterion ids (1–13) are evaluated.
    pub only: Option<Vec<usize>>,
    /// Self-test fixture: emulates a sign error in the transform kernel so
    /// the eigenvalue criterion must fail. The emulation is exact for the
    /// real-valued oscillator states, whose flipped-kernel transform is the
    /// complex conjugate of the true one.
    #[doc(hidden)]
    pub flip_kernel_sign: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            superpotentials: vec![identity_map(), mixed_map()],
            x_min: -8.0,
            x_max: 8.0,
            n: 1024,
            m: 1024,
            alphas: vec![0.0, 0.3, 0.5, 1.0],
            seed: DEFAULT_SEED,
            only: None,
            flip_kernel_sign: false,
        }
    }
}

/// Direction of a sub-check comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Passes when `measured <= bound`.
    AtMost,
    /// Passes when `measured >= bound`.
    AtLeast,
}

/// One measured quantity compared against one bound.
#[derive(Debug, Clone, Serialize)]
pub struct SubCheck {
    /// What was measured, including the case (map, α, index, …).
    pub label: String,
    /// Measured value.
    pub measured: f64,
    /// Bound the value is compared against.
    pub bound: f64,
    /// Direction of the comparison.
    pub kind: BoundKind,
    /// Whether the comparison holds.
    pub passed: bool,
}

impl SubCheck {
    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> SubCheck {
        SubCheck {
            label: label.into(),
            measured,
            bound,
            kind: BoundKind::AtMost,
            passed: measured <= bound,
        }
    }

    fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> SubCheck {
        SubCheck {
            label: label.into(),
            measured,
            bound,
            kind: BoundKind::AtLeast,
            passed: measured >= bound,
        }
    }

    /// How close the measurement is to its bound; > 1 means failed.
    fn severity(&self) -> f64 {
        match self.kind {
            BoundKind::AtMost => {
                if self.bound > 0.0 {
                    self.measured / self.bound
                } else if self.measured <= 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            BoundKind::AtLeast => {
                if self.measured > 0.0 {
                    self.bound / self.measured
                } else if self.bound <= 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// Outcome of one numbered criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    /// Criterion id, 1–13.
    pub id: usize,
    /// Snake-case criterion name.
    pub name: &'static str,
    /// Whether every sub-check passed.
    pub passed: bool,
    /// Individual measurements.
    pub subchecks: Vec<SubCheck>,
}

impl CriterionResult {
    fn from_subchecks(id: usize, name: &'static str, subchecks: Vec<SubCheck>) -> Self {
        let passed = subchecks.iter().all(|s| s.passed);
        CriterionResult {
            id,
            name,
            passed,
            subchecks,
        }
    }

    /// The sub-check closest to (or furthest past) its bound.
    pub fn binding(&self) -> Option<&SubCheck> {
        self.subchecks.iter().max_by(|a, b| {
            a.severity()
                .partial_cmp(&b.severity())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    /// One-line human summary: id, verdict, name, and the binding sub-check.
    pub fn summary_line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match self.binding() {
            Some(s) => {
                let sym = match s.kind {
                    BoundKind::AtMost => "<=",
                    BoundKind::AtLeast => ">=",
                };
                format!(
                    "criterion {:02} {} {} — {}: {:.3e} (required {} {:.3e})",
                    self.id, verdict, self.name, s.label, s.measured, sym, s.bound
                )
            }
            None => format!("criterion {:02} {} {}", self.id, verdict, self.name),
        }
    }
}

/// Operator diagnostics for one (map, α) cell of the rig.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorRecord {
    /// Human-readable form of the coordinate map.
    pub superpotential: String,
    /// Ordering parameter.
    pub alpha: f64,
    /// Grid size the record was measured at.
    pub n: usize,
    /// Interior adjointness defect under the flat measure.
    pub defect_dx: f64,
    /// Interior adjointness defect under the warped measure.
    pub defect_dw: f64,
    /// Operator norm the defects are judged against.
    pub norm: f64,
    /// Commutator defect on a centered Gaussian probe.
    pub commutator_defect: f64,
    /// Relative residual of the similarity map onto the α = 0 operator.
    pub similarity_residual: f64,
    /// Which measures the operator is self-adjoint under.
    pub classification: &'static str,
}

/// Full outcome of a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// Criterion outcomes, ascending by id (filtered runs list a subset).
    pub criteria: Vec<CriterionResult>,
    /// Per-(map, α) operator diagnostics at the configured grid size.
    pub operator_records: Vec<OperatorRecord>,
    /// Whether every evaluated criterion passed.
    pub passed: bool,
}

/// Errors aborting a verification run before a report exists.
#[derive(Debug, Error)]
pub enum VerifyError {
    /// The configuration is unusable.
    #[error("invalid verification config: {reason}")]
    InvalidConfig {
        /// What is wrong with it.
        reason: String,
    },
    /// Grid construction failed.
    #[error(transparent)]
    Grid(#[from] GridError),
    /// Operator construction failed.
    #[error(transparent)]
    Operator(#[from] OperatorError),
    /// Basis synthesis failed.
    #[error(transparent)]
    Basis(#[from] BasisError),
    /// Transform evaluation failed.
    #[error(transparent)]
    Transform(#[from] TransformError),
    /// Phase-space evaluation failed.
    #[error(transparent)]
    PhaseSpace(#[from] PhaseSpaceError),
    /// A built-in coordinate map failed validation (unreachable in practice).
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

fn identity_map() -> Superpotential {
    Superpotential::validate(&[1.0]).expect("x is admissible")
}

fn mixed_map() -> Superpotential {
    Superpotential::validate(&[1.0, 0.0, 1.0]).expect("x + x^3 is admissible")
}

fn cubic_map() -> Superpotential {
    Superpotential::validate(&[0.0, 0.0, 1.0]).expect("x^3 is admissible")
}

/// Renders a coefficient list as a polynomial, e.g. `x + x^3`.
pub fn poly_label(w: &Superpotential) -> String {
    let mut terms = Vec::new();
    for (idx, &a) in w.coeffs().iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let power = idx + 1;
        let var = if power == 1 {
            "x".to_string()
        } else {
            format!("x^{power}")
        };
        if a == 1.0 {
            terms.push(var);
        } else {
            terms.push(format!("{a}{var}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Runs the verification suite described by `cfg`.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    validate_config(cfg)?;
    let included =
        |id: usize| cfg.only.as_ref().map_or(true, |ids| ids.contains(&id));
    let x_grid = Grid::uniform_x(cfg.x_min, cfg.x_max, cfg.n)?;

    // Operator diagnostics accompany every unfiltered report; filtered runs
    // keep them only when an operator criterion is in scope.
    let wants_records = cfg.only.is_none() || (1..=4).any(|id| included(id));
    let operator_records = if wants_records {
        build_operator_records(cfg, &x_grid)?
    } else {
        Vec::new()
    };

    let mut criteria = Vec::new();
    if included(1) {
        criteria.push(c1_commutator_convergence(cfg)?);
    }
    if included(2) {
        criteria.push(c2_adjointness_classification(&x_grid)?);
    }
    if included(3) {
        criteria.push(c3_similarity_equivalence(cfg, &x_grid)?);
    }
    if included(4) {
        criteria.push(c4_ordering_free_symmetrization(cfg, &x_grid)?);
    }
    if included(5) {
        criteria.push(c5_oscillator_orthonormality(cfg, &x_grid)?);
    }
    if included(6) {
        criteria.push(c6_transform_eigenvalues(cfg, &x_grid)?);
    }
    if included(7) {
        criteria.push(c7_cubic_invariance(cfg, &x_grid)?);
    }
    if included(8) {
        criteria.push(c8_round_trip(cfg, &x_grid)?);
    }
    if included(9) {
        criteria.push(c9_uncertainty_floor(cfg, &x_grid)?);
    }
    if included(10) {
        criteria.push(c10_unbiased_moduli(cfg, &x_grid)?);
    }
    if included(11) {
        criteria.push(c11_coherent_ladder()?);
    }
    if included(12) {
        criteria.push(c12_wigner_ground(cfg)?);
    }
    if included(13) {
        criteria.push(c13_chirp_ridge(&x_grid)?);
    }

    let passed = criteria.iter().all(|c| c.passed);
    Ok(VerifyReport {
        criteria,
        operator_records,
        passed,
    })
}

fn validate_config(cfg: &VerifyConfig) -> Result<(), VerifyError> {
    let fail = |reason: &str| {
        Err(VerifyError::InvalidConfig {
            reason: reason.to_string(),
        })
    };
    if cfg.superpotentials.is_empty() {
        return fail("superpotential list is empty");
    }
    if cfg.alphas.is_empty() {
        return fail("alpha list is empty");
    }
    if !(cfg.x_min.is_finite() && cfg.x_max.is_finite()) || cfg.x_min >= cfg.x_max {
        return fail("position window must be finite with x_min < x_max");
    }
    if cfg.n < 32 {
        return fail("need at least 32 position nodes (convergence runs use n/4)");
    }
    if cfg.m < 32 {
        return fail("need at least 32 momentum nodes");
    }
    if let Some(ids) = &cfg.only {
        if ids.is_empty() || ids.iter().any(|&id| id == 0 || id > 13) {
            return fail("criterion filter must list ids in 1..=13");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared probes and metrics
// ---------------------------------------------------------------------------

fn gaussian_probe(grid: &Grid) -> SampledSignal {
    SampledSignal::from_real_fn(grid.clone(), |x| (-0.5 * x * x).exp())
}

fn dw_norm(w: &Superpotential, f: &SampledSignal) -> f64 {
    inner_product(f, f, MeasureTag::Dw, Some(w))
        .expect("signal pairs with itself")
        .re
        .sqrt()
}

fn rel_l2_dw(w: &Superpotential, got: &SampledSignal, want: &SampledSignal) -> f64 {
    let diff: Vec<Complex64> = got
        .values()
        .iter()
        .zip(want.values())
        .map(|(a, b)| a - b)
        .collect();
    let diff = SampledSignal::new(diff, want.grid().clone()).expect("same grid");
    dw_norm(w, &diff) / dw_norm(w, want)
}

fn spectrum_rel_l2(got: &[Complex64], want: &[Complex64]) -> f64 {
    let num: f64 = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = want.iter().map(|b| b.norm_sqr()).sum();
    (num / den).sqrt()
}

fn random_fock(rng: &mut ChaCha8Rng, j_max: usize) -> FockVector {
    let coeffs = (0..=j_max)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut v = FockVector::new(coeffs).expect("within the truncation cap");
    v.normalize();
    v
}

/// Momentum axis for round trips: wide enough for the oscillator spectra,
/// but short enough that the first periodic copy of the reconstruction
/// (period 2π/Δp in the image coordinate) clears the grid's image hull by a
/// safety margin. Capped at the Nyquist rate of the finest image spacing.
///
/// Two regimes. When `m` affords full spectral coverage of the checked
/// states (`P = 8`) with a comb period that still clears the hull by the
/// same 8, take it — every extra bin then widens the ghost clearance. When
/// it does not, spend the bins on the best constrained trade instead:
/// the widest axis whose comb period keeps 6.5 beyond the hull.
fn round_trip_axis(
    w: &Superpotential,
    grid: &Grid,
    m: usize,
) -> Result<Grid, VerifyError> {
    let u = grid.u_coords(w);
    let u_abs = u.iter().fold(0.0f64, |acc, &ui| acc.max(ui.abs()));
    let du_min = u
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(f64::INFINITY, f64::min);
    let p_full = 8.0;
    let p_req = if PI * (m - 1) as f64 / p_full >= u_abs + p_full {
        p_full
    } else {
        let ghost_clearance = 6.5;
        PI * (m - 1) as f64 / (u_abs + ghost_clearance)
    };
    let p_nyq = PI / du_min;
    let p = p_req.min(p_nyq);
    Ok(Grid::uniform_w(-p, p, m)?)
}

// ---------------------------------------------------------------------------
// Operator records
// ---------------------------------------------------------------------------

fn classification(dx: bool, dw: bool) -> &'static str {
    match (dx, dw) {
        (true, true) => "self_adjoint_dx_and_dw",
        (true, false) => "self_adjoint_dx",
        (false, true) => "self_adjoint_dw",
        (false, false) => "quasi_hermitian",
    }
}

fn build_operator_records(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<Vec<OperatorRecord>, VerifyError> {
    let probe = gaussian_probe(x_grid);
    let mut records = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        for &alpha in &cfg.alphas {
            let p = build_momentum_alpha(w, x_grid, alpha)?;
            let adj = adjoint_report(&p, w);
            let defect = commutator_defect(w, &p, &probe)?;
            let sim = similarity_check(w, x_grid, alpha)?;
            records.push(OperatorRecord {
                superpotential: label.clone(),
                alpha,
                n: cfg.n,
                defect_dx: adj.defect_dx,
                defect_dw: adj.defect_dw,
                norm: adj.norm,
                commutator_defect: defect,
                similarity_residual: sim.relative(),
                classification: classification(adj.self_adjoint_dx, adj.self_adjoint_dw),
            });
        }
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Criterion 1: the interior commutator defect on a centered Gaussian decays
/// at second order — ratio 4 ± 0.5 per grid halving — for every (map, α).
fn c1_commutator_convergence(cfg: &VerifyConfig) -> Result<CriterionResult, VerifyError> {
    let sizes = [cfg.n / 4, cfg.n / 2, cfg.n];
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        for &alpha in &cfg.alphas {
            let mut defects = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let grid = Grid::uniform_x(cfg.x_min, cfg.x_max, n)?;
                let p = build_momentum_alpha(w, &grid, alpha)?;
                let probe = gaussian_probe(&grid);
                defects.push(commutator_defect(w, &p, &probe)?);
            }
            for k in 0..sizes.len() - 1 {
                let ratio = defects[k] / defects[k + 1];
                subchecks.push(SubCheck::at_most(
                    format!(
                        "W={} alpha={} defect ratio {}→{} minus 4",
                        label,
                        alpha,
                        sizes[k],
                        sizes[k + 1]
                    ),
                    (ratio - 4.0).abs(),
                    0.5,
                ));
            }
        }
    }
    Ok(CriterionResult::from_subchecks(
        1,
        "commutator_convergence",
        subchecks,
    ))
}

/// Criterion 2: the self-adjointness classification matrix for `x + x³` —
/// α = 1/2 and the symmetrized form are flat-measure self-adjoint but not
/// warped-measure; α = 0 is the reverse; α = 0.3 is neither.
fn c2_adjointness_classification(x_grid: &Grid) -> Result<CriterionResult, VerifyError> {
    let w = mixed_map();
    let mut subchecks = Vec::new();

    let mut push_pair = |name: &str, adj: &crate::operators::AdjointReport,
                         small_dx: bool| {
        let (small, large, small_name, large_name) = if small_dx {
            (adj.defect_dx, adj.defect_dw, "dx", "dw")
        } else {
            (adj.defect_dw, adj.defect_dx, "dw", "dx")
        };
        subchecks.push(SubCheck::at_most(
            format!("{name} defect_{small_name}/norm"),
            small / adj.norm,
            1e-8,
        ));
        subchecks.push(SubCheck::at_least(
            format!("{name} defect_{large_name}/norm"),
            large / adj.norm,
            1e-3,
        ));
    };

    let p_half = build_momentum_alpha(&w, x_grid, 0.5)?;
    push_pair("alpha=0.5", &adjoint_report(&p_half, &w), true);

    let p_sym = build_momentum_symmetrized(&w, x_grid)?;
    push_pair("symmetrized", &adjoint_report(&p_sym, &w), true);

    let p_zero = build_momentum_alpha(&w, x_grid, 0.0)?;
    push_pair("alpha=0", &adjoint_report(&p_zero, &w), false);

    let p_point3 = build_momentum_alpha(&w, x_grid, 0.3)?;
    let adj = adjoint_report(&p_point3, &w);
    subchecks.push(SubCheck::at_least(
        "alpha=0.3 defect_dx/norm".to_string(),
        adj.defect_dx / adj.norm,
        1e-3,
    ));
    subchecks.push(SubCheck::at_least(
        "alpha=0.3 defect_dw/norm".to_string(),
        adj.defect_dw / adj.norm,
        1e-3,
    ));

    Ok(CriterionResult::from_subchecks(
        2,
        "adjointness_classification",
        subchecks,
    ))
}

/// Criterion 3: conjugating each ordering by the Jacobian-power similarity
/// map reproduces the α = 0 operator to rounding, for `x + x³`.
fn c3_similarity_equivalence(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let w = mixed_map();
    let mut subchecks = Vec::new();
    for &alpha in &cfg.alphas {
        let report = similarity_check(&w, x_grid, alpha)?;
        subchecks.push(SubCheck::at_most(
            format!("alpha={alpha} similarity residual"),
            report.relative(),
            1e-12,
        ));
    }
    Ok(CriterionResult::from_subchecks(
        3,
        "similarity_equivalence",
        subchecks,
    ))
}

/// Criterion 4: the symmetrized operator carries no ordering dependence —
/// repeated constructions agree bitwise on the interior — and each two-sided
/// ordering average sits within a small discretization wobble of it.
fn c4_ordering_free_symmetrization(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        let sym_a = build_momentum_symmetrized(w, x_grid)?;
        let sym_b = build_momentum_symmetrized(w, x_grid)?;
        let block_a = interior_block(sym_a.matrix());
        let block_b = interior_block(sym_b.matrix());
        let norm = operator_norm(&block_a);
        let diff = operator_norm(&(&block_a - &block_b));
        subchecks.push(SubCheck::at_most(
            format!("W={label} pairwise interior difference"),
            diff / norm,
            1e-10,
        ));
        for &alpha in &cfg.alphas {
            let avg = build_momentum_sandwich_average(w, x_grid, alpha)?;
            let avg_block = interior_block(avg.matrix());
            let dev = operator_norm(&(&avg_block - &block_a));
            subchecks.push(SubCheck::at_most(
                format!("W={label} alpha={alpha} two-sided average vs symmetrized"),
                dev / norm,
                1e-2,
            ));
        }
    }
    Ok(CriterionResult::from_subchecks(
        4,
        "ordering_free_symmetrization",
        subchecks,
    ))
}

/// Criterion 5: the oscillator tower is orthonormal under the warped measure.
fn c5_oscillator_orthonormality(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let gram = bases::ho_gram(w, x_grid, 12)?;
        let mut max_dev: f64 = 0.0;
        for ((r, c), v) in gram.indexed_iter() {
            let target = if r == c { 1.0 } else { 0.0 };
            max_dev = max_dev.max((v - Complex64::new(target, 0.0)).norm());
        }
        subchecks.push(SubCheck::at_most(
            format!("W={} max |Gram − I| for j ≤ 12", poly_label(w)),
            max_dev,
            1e-8,
        ));
    }
    Ok(CriterionResult::from_subchecks(
        5,
        "oscillator_orthonormality",
        subchecks,
    ))
}

/// Criterion 6: transform eigenvalues of the oscillator states cycle through
/// the fourth roots of unity with small best-fit residuals.
fn c6_transform_eigenvalues(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let p_grid = Grid::uniform_w(-10.0, 10.0, cfg.m)?;
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        let mut max_lambda_err: f64 = 0.0;
        let mut max_residual: f64 = 0.0;
        for j in 0..=12 {
            let report = wtransform::eigenfunction_check(w, j, x_grid, &p_grid)?;
            let mut lambda = report.lambda;
            if cfg.flip_kernel_sign {
                lambda = lambda.conj();
            }
            max_lambda_err = max_lambda_err.max((lambda - report.target).norm());
            max_residual = max_residual.max(report.residual);
        }
        subchecks.push(SubCheck::at_most(
            format!("W={label} max |lambda(j) − (−i)^j| for j ≤ 12"),
            max_lambda_err,
            1e-5,
        ));
        subchecks.push(SubCheck::at_most(
            format!("W={label} max eigenfunction residual for j ≤ 12"),
            max_residual,
            1e-5,
        ));
    }
    Ok(CriterionResult::from_subchecks(
        6,
        "transform_eigenvalues",
        subchecks,
    ))
}

/// Criterion 7: for the cubic map, the transform of the warped Gaussian is
/// the standard Gaussian momentum profile.
fn c7_cubic_invariance(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let w = cubic_map();
    let amp = PI.powf(-0.25);
    let f = SampledSignal::from_real_fn(x_grid.clone(), |x| {
        amp * (-0.5 * x.powi(6)).exp()
    });
    let p_grid = Grid::uniform_w(-9.0, 9.0, cfg.m)?;
    let spectrum = wtransform::forward(&w, &f, &p_grid)?;
    let want: Vec<Complex64> = p_grid
        .nodes()
        .iter()
        .map(|&p| Complex64::new(amp * (-0.5 * p * p).exp(), 0.0))
        .collect();
    let rel = spectrum_rel_l2(spectrum.values(), &want);
    Ok(CriterionResult::from_subchecks(
        7,
        "cubic_invariance",
        vec![SubCheck::at_most(
            "W=x^3 warped-Gaussian spectrum vs Gaussian profile (rel L2)",
            rel,
            1e-6,
        )],
    ))
}

/// Criterion 8: inverse∘forward recovers the first five oscillator states,
/// and the fast path tracks the direct path, per map.
fn c8_round_trip(cfg: &VerifyConfig, x_grid: &Grid) -> Result<CriterionResult, VerifyError> {
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        let p_grid = round_trip_axis(w, x_grid, cfg.m)?;
        let mut max_fast_forward: f64 = 0.0;
        let mut max_fast_inverse: f64 = 0.0;
        for j in 0..=4 {
            let state = bases::ho_eigenstate(w, x_grid, j)?.into_signal();
            let spectrum = wtransform::forward(w, &state, &p_grid)?;
            let recovered = wtransform::inverse(w, &spectrum, x_grid)?;
            subchecks.push(SubCheck::at_most(
                format!("W={label} j={j} round-trip rel L2 (dW)"),
                rel_l2_dw(w, &recovered, &state),
                1e-6,
            ));

            let fast = wtransform::forward_fast(w, &state, &p_grid)?;
            max_fast_forward = max_fast_forward
                .max(spectrum_rel_l2(fast.values(), spectrum.values()));
            let rec_fast = wtransform::inverse_fast(w, &spectrum, x_grid)?;
            max_fast_inverse = max_fast_inverse
                .max(spectrum_rel_l2(rec_fast.values(), recovered.values()));
        }
        subchecks.push(SubCheck::at_most(
            format!("W={label} fast vs direct forward (rel L2, j ≤ 4)"),
            max_fast_forward,
            1e-6,
        ));
        subchecks.push(SubCheck::at_most(
            format!("W={label} fast vs direct inverse (rel L2, j ≤ 4)"),
            max_fast_inverse,
            1e-6,
        ));
    }
    Ok(CriterionResult::from_subchecks(8, "round_trip", subchecks))
}

/// Criterion 9: the ground state saturates the uncertainty floor and random
/// superpositions never dip below it.
fn c9_uncertainty_floor(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let p_grid = Grid::uniform_w(-12.0, 12.0, cfg.m)?;
    let mut subchecks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        let ground = FockVector::pure(0, 0)?;
        let mut f = phase_space::fock_to_signal(w, &ground, x_grid)?;
        wtransform::normalize_dw(w, &mut f);
        let product = phase_space::uncertainty_product(w, &f, &p_grid)?;
        subchecks.push(SubCheck::at_most(
            format!("W={label} ground-state |product − 1/2|"),
            (product - 0.5).abs(),
            1e-6,
        ));

        let mut min_product = f64::INFINITY;
        for _ in 0..100 {
            let v = random_fock(&mut rng, 16);
            let mut f = phase_space::fock_to_signal(w, &v, x_grid)?;
            wtransform::normalize_dw(w, &mut f);
            min_product = min_product.min(phase_space::uncertainty_product(w, &f, &p_grid)?);
        }
        subchecks.push(SubCheck::at_least(
            format!("W={label} min product over 100 random superpositions"),
            min_product,
            0.5 - 1e-6,
        ));
    }
    Ok(CriterionResult::from_subchecks(
        9,
        "uncertainty_floor",
        subchecks,
    ))
}

/// Criterion 10: momentum and chirp states have formula-level constant
/// modulus, and the tapered cross-overlap protocol sees flat pairings.
fn c10_unbiased_moduli(
    cfg: &VerifyConfig,
    x_grid: &Grid,
) -> Result<CriterionResult, VerifyError> {
    let target = 1.0 / (2.0 * PI).sqrt();
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        // Chirp phases for steep maps need the phase-resolving window; the
        // overlap protocol's stationary point must stay inside the grid.
        let grid = if w.degree() > 1 {
            Grid::uniform_x(-2.0, 2.0, cfg.n)?
        } else {
            x_grid.clone()
        };
        let mut max_modulus_dev: f64 = 0.0;
        for p in [-1.0, 0.0, 1.0] {
            for state in [
                bases::mub_momentum_state(w, &grid, p),
                bases::mub_chirp_state(w, &grid, p),
            ] {
                for v in state.values() {
                    max_modulus_dev = max_modulus_dev.max((v.norm() - target).abs());
                }
            }
        }
        subchecks.push(SubCheck::at_most(
            format!("W={label} max modulus deviation from (2π)^(-1/2)"),
            max_modulus_dev,
            1e-15,
        ));

        let report = bases::unbiasedness_check(w, &grid)?;
        subchecks.push(SubCheck::at_most(
            format!("W={label} tapered cross-overlap max relative deviation"),
            report.max_relative_deviation,
            0.05,
        ));
    }
    Ok(CriterionResult::from_subchecks(
        10,
        "unbiased_moduli",
        subchecks,
    ))
}

/// Criterion 11: truncated coherent states are accurate ladder eigenvectors
/// and their overlaps match the closed form.
fn c11_coherent_ladder() -> Result<CriterionResult, VerifyError> {
    let mut max_residual: f64 = 0.0;
    for r in [0.5, 1.0, 1.5, 2.0] {
        for k in 0..8 {
            let theta = 2.0 * PI * k as f64 / 8.0;
            let z = Complex64::from_polar(r, theta);
            let state = coherent_state(z, 64)?;
            max_residual = max_residual.max(state.eigen_residual);
        }
    }
    max_residual = max_residual.max(coherent_state(Complex64::ZERO, 64)?.eigen_residual);

    let pairs = [
        (Complex64::new(0.4, -0.3), Complex64::new(-1.1, 0.6)),
        (Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0)),
        (Complex64::new(-1.5, 1.2), Complex64::new(1.3, -0.7)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)),
        (Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)),
    ];
    let mut max_overlap_err: f64 = 0.0;
    for (z1, z2) in pairs {
        let s1 = coherent_state(z1, 64)?;
        let s2 = coherent_state(z2, 64)?;
        let numeric = s1.fock.dot(&s2.fock);
        max_overlap_err = max_overlap_err.max((numeric - coherent_overlap(z1, z2)).norm());
    }

    Ok(CriterionResult::from_subchecks(
        11,
        "coherent_ladder",
        vec![
            SubCheck::at_most(
                "max ladder eigen-residual over |z| ≤ 2 at truncation 64",
                max_residual,
                1e-10,
            ),
            SubCheck::at_most(
                "max overlap deviation from the closed form",
                max_overlap_err,
                1e-10,
            ),
        ],
    ))
}

/// Criterion 12: the ground-state Wigner map is the Gaussian blob, with an
/// exact momentum marginal and unit mass.
fn c12_wigner_ground(cfg: &VerifyConfig) -> Result<CriterionResult, VerifyError> {
    let mut subchecks = Vec::new();
    for w in &cfg.superpotentials {
        let label = poly_label(w);
        let u_grid = Grid::uniform_w(-8.0, 8.0, cfg.n)?;
        let g = if w.degree() == 1 {
            SampledSignal::from_real_fn(u_grid.clone(), |u| {
                PI.powf(-0.25) * (-0.5 * u * u).exp()
            })
        } else {
            // Sample in x, then pull onto the uniform image axis.
            let x_grid = Grid::uniform_x(-2.0, 2.0, cfg.n)?;
            let ground = FockVector::pure(0, 0)?;
            let sampled = phase_space::fock_to_signal(w, &ground, &x_grid)?;
            let (resampled, _report) = resample(&sampled, &u_grid, w, InterpOrder::Cubic);
            resampled
        };
        let p_axis = phase_space::wigner_p_axis(&u_grid, cfg.m)?;
        let map = phase_space::wigner(&g, &p_axis)?;

        let mut max_err: f64 = 0.0;
        for (i, &u) in u_grid.nodes().iter().enumerate() {
            for (a, &p) in p_axis.nodes().iter().enumerate() {
                let exact = (1.0 / PI) * (-u * u - p * p).exp();
                max_err = max_err.max((map.values()[(i, a)] - exact).abs());
            }
        }
        subchecks.push(SubCheck::at_most(
            format!("W={label} max |Wigner − Gaussian blob|"),
            max_err,
            1e-6,
        ));

        let marginal = map.u_marginal();
        let mut l1_err = 0.0;
        let mut l1_ref = 0.0;
        for (m, v) in marginal.iter().zip(g.values()) {
            l1_err += (m - v.norm_sqr()).abs();
            l1_ref += v.norm_sqr();
        }
        subchecks.push(SubCheck::at_most(
            format!("W={label} momentum marginal vs |g|² (rel L1)"),
            l1_err / l1_ref,
            1e-4,
        ));
        subchecks.push(SubCheck::at_most(
            format!("W={label} |mass − 1|"),
            (map.mass() - 1.0).abs(),
            1e-4,
        ));
        subchecks.push(SubCheck::at_most(
            format!("W={label} discarded imaginary residue"),
            map.imag_residue(),
            1e-10,
        ));
    }
    Ok(CriterionResult::from_subchecks(12, "wigner_ground", subchecks))
}

/// Criterion 13: the spectrogram of a pure warped tone ridges at the bin
/// containing its rate, in every row, for `x + x³`.
fn c13_chirp_ridge(x_grid: &Grid) -> Result<CriterionResult, VerifyError> {
    let w = mixed_map();
    let window = wtransform::ho_ground_window(&w, x_grid)?;
    let p_grid = Grid::uniform_w(-5.0, 5.0, 512)?;
    let centers: Vec<f64> = (0..9).map(|k| -1.2 + 0.3 * k as f64).collect();
    let mut subchecks = Vec::new();
    for c in [1.0, 3.0] {
        let f = SampledSignal::from_fn(x_grid.clone(), |x| {
            Complex64::from_polar(1.0, c * w.eval(x))
        });
        let gram = wtransform::windowed(&w, &f, &window, &centers, &p_grid)?;
        let expected = p_grid
            .nodes()
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - c).abs().total_cmp(&(b.1 - c).abs()))
            .map(|(i, _)| i)
            .expect("momentum axis is non-empty");
        let max_offset = (0..centers.len())
            .map(|r| gram.ridge_bin(r).abs_diff(expected))
            .max()
            .unwrap_or(0);
        subchecks.push(SubCheck::at_most(
            format!("tone rate c={c} max ridge offset from containing bin (bins)"),
            max_offset as f64,
            0.0,
        ));
    }
    Ok(CriterionResult::from_subchecks(13, "chirp_ridge", subchecks))
}
