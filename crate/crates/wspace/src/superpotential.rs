//! Admissible polynomial coordinate maps `u = W(x)` and their calculus.
//!
//! A superpotential here is a polynomial `W(x) = sum_{j=1}^{d} a_j x^j` with
//!
//! * non-negative coefficients `a_j >= 0`,
//! * odd lowest and highest powers carrying nonzero coefficients, and
//! * every even coefficient dominated by the next lower odd one,
//!   `a_{2m} <= a_{2m-1}`.
//!
//! These conditions make `W' >= 0` everywhere, so `W` is a monotone bijection
//! of the real line onto itself, strictly monotone except possibly at
//! isolated critical points where `W'` touches zero (e.g. `W = x^3` at the
//! origin). [`Superpotential::validate`] enforces the conditions and
//! classifies the map; the accessors then provide evaluation, derivatives,
//! the inverse map, and the supersymmetric ground-state profile
//! `exp(-int_0^x W)` together with its partner potential `W^2 - W'`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on `|W'(t)|` below which a stationary point of `W'`
/// counts as a critical point of `W`.
const CRITICAL_POINT_TOL: f64 = 1e-12;

/// Reasons a coefficient sequence is rejected by [`Superpotential::validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    /// The coefficient sequence was empty.
    #[error("coefficient sequence is empty")]
    Empty,
    /// A coefficient was NaN or infinite. `power` is the exponent it belongs to.
    #[error("coefficient of x^{power} is not finite")]
    NonFinite { power: usize },
    /// Every coefficient was zero; the zero polynomial is not a bijection.
    #[error("all coefficients are zero")]
    AllZero,
    /// A coefficient was negative.
    #[error("coefficient of x^{power} is negative ({value})")]
    NegativeCoefficient { power: usize, value: f64 },
    /// The highest power with a nonzero coefficient is even.
    #[error("leading power {power} is even; the highest nonzero power must be odd")]
    EvenLeadingPower { power: usize },
    /// The lowest power with a nonzero coefficient is even.
    #[error("lowest power {power} is even; the lowest nonzero power must be odd")]
    EvenLowestPower { power: usize },
    /// An even coefficient exceeds the next lower odd coefficient.
    #[error("coefficient {even} of x^{power} exceeds coefficient {odd} of x^{}", power - 1)]
    EvenDominance { power: usize, even: f64, odd: f64 },
}

impl ValidationError {
    /// Stable machine-readable rejection code used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::Empty => "RejectEmpty",
            ValidationError::NonFinite { .. } => "RejectNonFinite",
            ValidationError::AllZero => "RejectZeroPolynomial",
            ValidationError::NegativeCoefficient { .. } => "RejectNegativeCoefficient",
            ValidationError::EvenLeadingPower { .. } => "RejectEvenLeadingPower",
            ValidationError::EvenLowestPower { .. } => "RejectEvenLowestPower",
            ValidationError::EvenDominance { .. } => "RejectEvenDominance",
        }
    }
}

/// Errors from [`Superpotential::invert`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    /// The target value was NaN/infinite, or no finite bracket could enclose it.
    #[error("cannot bracket a preimage of {target}")]
    BracketFailure { target: f64 },
}

/// Whether `W` is strictly increasing or merely non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotonicityClass {
    /// `W' > 0` everywhere.
    StrictlyMonotone,
    /// `W' >= 0` with isolated zeros at the listed points (sorted ascending).
    MonotoneWithCriticalPoints { critical_points: Vec<f64> },
}

/// Serialization shape for a superpotential: the raw coefficient list,
/// `coeffs[0]` multiplying `x^1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub coeffs: Vec<f64>,
}

impl TryFrom<Descriptor> for Superpotential {
    type Error = ValidationError;

    fn try_from(d: Descriptor) -> Result<Self, Self::Error> {
        Superpotential::validate(&d.coeffs)
    }
}

impl From<Superpotential> for Descriptor {
    fn from(w: Superpotential) -> Descriptor {
        Descriptor {
            coeffs: w.coeffs,
        }
    }
}

/// A validated, admissible polynomial coordinate map.
///
/// Construction goes through [`Superpotential::validate`], so every value of
/// this type satisfies the admissibility conditions in the module docs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Descriptor", into = "Descriptor")]
pub struct Superpotential {
    /// `coeffs[j-1]` multiplies `x^j`; trailing zeros trimmed.
    coeffs: Vec<f64>,
    monotonicity: MonotonicityClass,
}

impl Superpotential {
    /// Validates a coefficient sequence (`coeffs[0]` multiplying `x^1`) and
    /// classifies the resulting map. Trailing zero coefficients are trimmed
    /// before the leading-power check.
    pub fn validate(coeffs: &[f64]) -> Result<Self, ValidationError> {
        if coeffs.is_empty() {
            return Err(ValidationError::Empty);
        }
        for (idx, &a) in coeffs.iter().enumerate() {
            let power = idx + 1;
            if !a.is_finite() {
                return Err(ValidationError::NonFinite { power });
            }
            if a < 0.0 {
                return Err(ValidationError::NegativeCoefficient { power, value: a });
            }
        }
        let last_nonzero = match coeffs.iter().rposition(|&a| a != 0.0) {
            Some(idx) => idx,
            None => return Err(ValidationError::AllZero),
        };
        let trimmed = coeffs[..=last_nonzero].to_vec();
        let leading_power = last_nonzero + 1;
        if leading_power % 2 == 0 {
            return Err(ValidationError::EvenLeadingPower {
                power: leading_power,
            });
        }
        let lowest_power = trimmed
            .iter()
            .position(|&a| a != 0.0)
            .expect("nonzero coefficient exists")
            + 1;
        if lowest_power % 2 == 0 {
            return Err(ValidationError::EvenLowestPower {
                power: lowest_power,
            });
        }
        for (idx, &a) in trimmed.iter().enumerate() {
            let power = idx + 1;
            if power % 2 == 0 && a > 0.0 {
                let odd = trimmed[idx - 1];
                if a > odd {
                    return Err(ValidationError::EvenDominance {
                        power,
                        even: a,
                        odd,
                    });
                }
            }
        }
        let monotonicity = classify(&trimmed);
        Ok(Superpotential {
            coeffs: trimmed,
            monotonicity,
        })
    }

    /// Coefficients `a_1 ..= a_d` (index 0 multiplies `x^1`).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The (odd) degree of the polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Monotonicity classification computed at validation time.
    pub fn monotonicity(&self) -> &MonotonicityClass {
        &self.monotonicity
    }

    /// True when `W' > 0` everywhere.
    pub fn is_strictly_monotone(&self) -> bool {
        matches!(self.monotonicity, MonotonicityClass::StrictlyMonotone)
    }

    /// `W(x)` by Horner evaluation. Values beyond f64 range saturate to
    /// infinity; no panics.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc * x
    }

    /// `W'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &a) in self.coeffs.iter().enumerate().rev() {
            let j = (idx + 1) as f64;
            acc = acc * x + j * a;
        }
        acc
    }

    /// `W''(x)`.
    pub fn second_derivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &a) in self.coeffs.iter().enumerate().rev() {
            let j = (idx + 1) as f64;
            if idx >= 1 {
                acc = acc * x + j * (j - 1.0) * a;
            }
        }
        acc
    }

    /// `int_0^x W(t) dt`, the exact polynomial antiderivative with value 0 at
    /// the origin.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &a) in self.coeffs.iter().enumerate().rev() {
            let j = (idx + 1) as f64;
            acc = acc * x + a / (j + 1.0);
        }
        acc * x * x
    }

    /// Normalizable zero-energy profile `exp(-int_0^x W)`; equals 1 at `x = 0`.
    pub fn susy_ground_state(&self, x: f64) -> f64 {
        (-self.antiderivative(x)).exp()
    }

    /// Partner potential `W(x)^2 - W'(x)`.
    pub fn susy_potential(&self, x: f64) -> f64 {
        let w = self.eval(x);
        w * w - self.derivative(x)
    }

    /// Solves `W(x) = w` for the unique preimage.
    ///
    /// Starts from an exponentially expanded bracket and refines by bisection
    /// with safeguarded Newton steps (a Newton step is taken only when
    /// `W'` exceeds `1e-8` and the step stays inside the bracket). Iterates
    /// until the bracket collapses to machine precision in `x`, which also
    /// meets the residual tolerance `|W(x) - w| <= 1e-12 * (1 + |w|)`.
    pub fn invert(&self, w: f64) -> Result<f64, InversionError> {
        if !w.is_finite() {
            return Err(InversionError::BracketFailure { target: w });
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
        let mut expansions = 0;
        while self.eval(lo) > w {
            lo *= 2.0;
            expansions += 1;
            if expansions > 1100 || !lo.is_finite() {
                return Err(InversionError::BracketFailure { target: w });
            }
        }
        while self.eval(hi) < w {
            hi *= 2.0;
            expansions += 1;
            if expansions > 1100 || !hi.is_finite() {
                return Err(InversionError::BracketFailure { target: w });
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.eval(x) - w;
            if f == 0.0 {
                return Ok(x);
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
                break;
            }
            let slope = self.derivative(x);
            let newton = x - f / slope;
            x = if slope > 1e-8 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(x)
    }
}

/// Classifies monotonicity by locating the zeros of `W'`.
///
/// Admissibility forces `W' >= 0`, so zeros of `W'` sit at stationary points
/// of `W'` itself. Roots are isolated by recursive differentiation:
/// the stationary points of each derivative split the axis into intervals on
/// which sign-change bisection (plus Newton refinement) is reliable. A
/// stationary point `t` of `W'` with `|W'(t)| <= 1e-12` is recorded as a
/// critical point.
fn classify(coeffs: &[f64]) -> MonotonicityClass {
    // W'(x) as a dense polynomial, entry k multiplying x^k.
    let wp: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(idx, &a)| (idx + 1) as f64 * a)
        .collect();
    let stationary = real_roots(&poly_derivative(&wp));
    let mut critical: Vec<f64> = Vec::new();
    for &t in &stationary {
        if poly_eval(&wp, t).abs() <= CRITICAL_POINT_TOL {
            critical.push(t);
        }
    }
    // Sign-change roots of W' would indicate a dip below zero; admissible
    // coefficients exclude them analytically, but collect them anyway so a
    // borderline rounding case is still reported as a critical point.
    for r in real_roots(&wp) {
        critical.push(r);
    }
    // `+ 0.0` folds a negative zero from the root solver into plain zero.
    for t in critical.iter_mut() {
        *t += 0.0;
    }
    critical.sort_by(|a, b| a.partial_cmp(b).unwrap());
    critical.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    if critical.is_empty() {
        MonotonicityClass::StrictlyMonotone
    } else {
        MonotonicityClass::MonotoneWithCriticalPoints {
            critical_points: critical,
        }
    }
}

fn poly_eval(poly: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_derivative(poly: &[f64]) -> Vec<f64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn poly_trim(poly: &[f64]) -> &[f64] {
    let end = poly.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    &poly[..end]
}

/// All real roots of a dense polynomial, sorted ascending, found by the
/// classical recursion: roots of the derivative partition the axis into
/// monotone intervals, on which sign changes bracket each root.
fn real_roots(poly: &[f64]) -> Vec<f64> {
    let poly = poly_trim(poly);
    match poly.len() {
        0 | 1 => Vec::new(),
        2 => vec![-poly[0] / poly[1]],
        _ => {
            let degree = poly.len() - 1;
            // Cauchy bound: all real roots lie within [-bound, bound].
            let lead = poly[degree].abs();
            let max_ratio = poly[..degree]
                .iter()
                .map(|c| c.abs() / lead)
                .fold(0.0_f64, f64::max);
            let bound = 1.0 + max_ratio;
            let mut breakpoints = real_roots(&poly_derivative(poly));
            breakpoints.retain(|t| t.abs() <= bound);
            let mut edges = Vec::with_capacity(breakpoints.len() + 2);
            edges.push(-bound - 1.0);
            edges.extend(breakpoints);
            edges.push(bound + 1.0);
            let mut roots = Vec::new();
            for pair in edges.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if b <= a {
                    continue;
                }
                let (fa, fb) = (poly_eval(poly, a), poly_eval(poly, b));
                if fa == 0.0 {
                    push_root(&mut roots, a);
                }
                if fa * fb < 0.0 {
                    push_root(&mut roots, bisect_root(poly, a, b));
                }
            }
            let last = *edges.last().unwrap();
            if poly_eval(poly, last) == 0.0 {
                push_root(&mut roots, last);
            }
            roots
        }
    }
}

fn push_root(roots: &mut Vec<f64>, r: f64) {
    if roots
        .last()
        .is_none_or(|&prev| (r - prev).abs() > 1e-12 * (1.0 + r.abs()))
    {
        roots.push(r);
    }
}

/// Bisection with safeguarded Newton refinement on a bracket with a strict
/// sign change.
fn bisect_root(poly: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let deriv = poly_derivative(poly);
    let mut flo = poly_eval(poly, lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = poly_eval(poly, x);
        if fx == 0.0 || hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let slope = poly_eval(&deriv, x);
        let newton = x - fx / slope;
        x = if slope.abs() > 1e-12 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn w_cubic() -> Superpotential {
        Superpotential::validate(&[0.0, 0.0, 1.0]).unwrap()
    }

    fn w_mixed() -> Superpotential {
        Superpotential::validate(&[1.0, 0.0, 1.0]).unwrap()
    }

    fn w_linear() -> Superpotential {
        Superpotential::validate(&[1.0]).unwrap()
    }

    /// Draws a random admissible coefficient sequence: odd degree, odd-power
    /// skeleton strictly positive, even powers bounded by the next lower odd.
    fn random_admissible(rng: &mut ChaCha8Rng) -> Superpotential {
        let j_max = rng.random_range(0..4usize);
        let degree = 2 * j_max + 1;
        let mut coeffs = vec![0.0; degree];
        for idx in (0..degree).step_by(2) {
            coeffs[idx] = rng.random_range(0.01..3.0);
        }
        for idx in (1..degree).step_by(2) {
            if rng.random_bool(0.5) {
                coeffs[idx] = rng.random_range(0.0..coeffs[idx - 1]);
            }
        }
        Superpotential::validate(&coeffs).expect("constructed sequence is admissible")
    }

    #[test]
    fn accepts_pure_cubic_with_origin_critical_point() {
        let w = w_cubic();
        assert_eq!(w.degree(), 3);
        match w.monotonicity() {
            MonotonicityClass::MonotoneWithCriticalPoints { critical_points } => {
                assert_eq!(critical_points.len(), 1);
                assert_abs_diff_eq!(critical_points[0], 0.0, epsilon = 1e-12);
            }
            other => panic!("expected critical point at origin, got {other:?}"),
        }
    }

    #[test]
    fn accepts_strictly_monotone_maps() {
        assert!(w_linear().is_strictly_monotone());
        assert!(w_mixed().is_strictly_monotone());
        // Equality a_2 = a_1 is allowed by the dominance rule.
        let w = Superpotential::validate(&[1.0, 1.0, 1.0]).unwrap();
        assert!(w.is_strictly_monotone());
    }

    #[test]
    fn rejects_even_dominance_violation() {
        let err = Superpotential::validate(&[1.0, 2.0, 1.0]).unwrap_err();
        assert_eq!(
            err,
            ValidationError::EvenDominance {
                power: 2,
                even: 2.0,
                odd: 1.0
            }
        );
        assert_eq!(err.code(), "RejectEvenDominance");
    }

    #[test]
    fn rejects_even_leading_power() {
        let err = Superpotential::validate(&[0.0, 1.0]).unwrap_err();
        assert_eq!(err, ValidationError::EvenLeadingPower { power: 2 });
        assert_eq!(err.code(), "RejectEvenLeadingPower");
    }

    #[test]
    fn rejects_even_lowest_power() {
        let err = Superpotential::validate(&[0.0, 1.0, 1.0]).unwrap_err();
        assert_eq!(err, ValidationError::EvenLowestPower { power: 2 });
        assert_eq!(err.code(), "RejectEvenLowestPower");
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert_eq!(
            Superpotential::validate(&[]).unwrap_err(),
            ValidationError::Empty
        );
        assert_eq!(
            Superpotential::validate(&[0.0, 0.0, 0.0]).unwrap_err(),
            ValidationError::AllZero
        );
        assert_eq!(
            Superpotential::validate(&[-1.0]).unwrap_err(),
            ValidationError::NegativeCoefficient {
                power: 1,
                value: -1.0
            }
        );
        assert_eq!(
            Superpotential::validate(&[1.0, f64::NAN, 1.0]).unwrap_err(),
            ValidationError::NonFinite { power: 2 }
        );
    }

    #[test]
    fn trims_trailing_zeros_before_leading_power_check() {
        let w = Superpotential::validate(&[0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(w.degree(), 3);
        assert_eq!(w.coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn evaluates_polynomial_and_derivatives() {
        let w = w_mixed();
        assert_abs_diff_eq!(w.eval(2.0), 10.0);
        assert_abs_diff_eq!(w.derivative(2.0), 13.0);
        assert_abs_diff_eq!(w.second_derivative(2.0), 12.0);
        assert_abs_diff_eq!(w.eval(0.0), 0.0);
        // Antiderivative of x + x^3 is x^2/2 + x^4/4.
        assert_abs_diff_eq!(w.antiderivative(2.0), 2.0 + 4.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let w = random_admissible(&mut rng);
            for &x in &[-2.7f64, -1.0, -0.3, 0.0, 0.4, 1.1, 2.9] {
                let h = 1e-6 * (1.0 + x.abs());
                let fd = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
                let exact = w.derivative(x);
                let scale = 1.0 + exact.abs();
                assert!(
                    (fd - exact).abs() / scale <= 1e-6,
                    "derivative mismatch at x={x}: fd={fd}, exact={exact}"
                );
            }
        }
    }

    #[test]
    fn monotone_on_dense_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let w = random_admissible(&mut rng);
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=2000 {
                let x = -10.0 + k as f64 * 0.01;
                let val = w.eval(x);
                assert!(
                    val >= prev - 1e-12 * (1.0 + val.abs()),
                    "W not monotone at x={x} for coeffs {:?}",
                    w.coeffs()
                );
                prev = val;
            }
        }
    }

    #[test]
    fn inverts_cube() {
        let w = w_cubic();
        let x = w.invert(8.0).unwrap();
        assert_relative_eq!(x, 2.0, max_relative = 1e-12);
        assert_eq!(w.invert(0.0).unwrap(), 0.0);
        let x = w.invert(-27.0).unwrap();
        assert_relative_eq!(x, -3.0, max_relative = 1e-12);
    }

    #[test]
    fn invert_after_eval_is_identity_on_log_spaced_points() {
        for w in [w_linear(), w_cubic(), w_mixed()] {
            for k in 0..=60 {
                let x = 1e-3 * 10f64.powf(k as f64 / 10.0);
                for x in [x, -x] {
                    let u = w.eval(x);
                    let back = w.invert(u).unwrap();
                    assert_relative_eq!(back, x, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn invert_rejects_non_finite_targets() {
        let w = w_mixed();
        assert!(matches!(
            w.invert(f64::NAN),
            Err(InversionError::BracketFailure { .. })
        ));
        assert!(matches!(
            w.invert(f64::INFINITY),
            Err(InversionError::BracketFailure { .. })
        ));
    }

    #[test]
    fn ground_state_profiles_match_closed_forms() {
        // W = x: exp(-x^2/2). W = x^3: exp(-x^4/4).
        let lin = w_linear();
        let cub = w_cubic();
        for &x in &[-2.0, -0.7, 0.0, 0.3, 1.9] {
            assert_relative_eq!(
                lin.susy_ground_state(x),
                (-x * x / 2.0).exp(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                cub.susy_ground_state(x),
                (-x.powi(4) / 4.0).exp(),
                max_relative = 1e-14
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let w = random_admissible(&mut rng);
            assert_eq!(w.susy_ground_state(0.0), 1.0);
        }
    }

    #[test]
    fn ground_state_even_for_odd_maps() {
        // Odd-power-only W gives an even antiderivative, hence an even profile.
        let w = w_mixed();
        for &x in &[0.3, 1.1, 2.4] {
            assert_eq!(w.susy_ground_state(x), w.susy_ground_state(-x));
        }
    }

    #[test]
    fn partner_potential_matches_closed_forms() {
        let lin = w_linear();
        let cub = w_cubic();
        for &x in &[-1.5, 0.0, 0.8, 2.2] {
            assert_relative_eq!(
                lin.susy_potential(x),
                x * x - 1.0,
                max_relative = 1e-14,
                epsilon = 1e-14
            );
            assert_relative_eq!(
                cub.susy_potential(x),
                x.powi(6) - 3.0 * x * x,
                max_relative = 1e-14,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn descriptor_round_trips_through_json() {
        let w = w_mixed();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"coeffs":[1.0,0.0,1.0]}"#);
        let back: Superpotential = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn deserialization_validates() {
        let err = serde_json::from_str::<Superpotential>(r#"{"coeffs":[0.0,1.0]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn large_arguments_do_not_panic() {
        let w = w_mixed();
        assert!(w.eval(1e6).is_finite());
        assert!(w.derivative(1e6).is_finite());
        // Degree-65 polynomial at huge x saturates to infinity gracefully.
        let mut coeffs = vec![0.0; 65];
        coeffs[0] = 1.0;
        coeffs[64] = 1.0;
        let big = Superpotential::validate(&coeffs).unwrap();
        assert!(big.eval(1e6).is_infinite());
    }
}
