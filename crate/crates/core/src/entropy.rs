//! Von Neumann and Shannon entropies (base 2) and the extremum conditions.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::kinematics::Rapidity;
use crate::states::{BellBasisDM, DensityMatrix, PairWeights, ProductBasisDM};
use crate::wigner::{sin_cos_angle, GeometryParams, WignerCoeffs};

/// Eigenvalues below this are treated as exact zeros in `λ log λ`.
const ZERO_EIGEN: f64 = 1e-15;

/// Negative eigenvalues down to `-NEG_CLIP` are rounding and get clamped.
const NEG_CLIP: f64 = 1e-12;

/// Upper end of the rapidity bracket used by the extremum solvers.
pub const MAX_RAPIDITY: f64 = 50.0;

/// Residual allowed at a reported extremum.
pub const CONDITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct EntropyBits(f64);

impl EntropyBits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<EntropyBits> for f64 {
    fn from(e: EntropyBits) -> f64 {
        e.0
    }
}

impl fmt::Display for EntropyBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

fn plogp(p: f64) -> f64 {
    if p < ZERO_EIGEN {
        0.0
    } else {
        -p * p.log2()
    }
}

/// `−p log₂ p − q log₂ q`.
pub fn binary_entropy(p: f64, q: f64) -> f64 {
    plogp(p) + plogp(q)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_of_probabilities(probs: &[f64]) -> EntropyBits {
    EntropyBits(probs.iter().map(|&p| plogp(p)).sum())
}

/// Eigenvalues from a general symmetric eigensolver, ascending, with
/// rounding-level negatives clamped to zero.
pub fn eigenvalues_numeric<D: DensityMatrix>(dm: &D) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(dm.to_dmatrix());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    if let Some(&lowest) = values.first() {
        if lowest < -NEG_CLIP {
            return Err(Error::contract(format!(
                "density matrix has eigenvalue {lowest:e} < 0"
            )));
        }
    }
    for v in values.iter_mut() {
        *v = v.max(0.0);
    }
    Ok(values)
}

/// `−Tr ρ log₂ ρ` from numerically computed eigenvalues.
pub fn von_neumann<D: DensityMatrix>(dm: &D) -> Result<EntropyBits> {
    Ok(shannon_of_probabilities(&eigenvalues_numeric(dm)?))
}

/// `λ = ½ ± ½ √(1 − 4 det)` for a unit-trace 2×2 density matrix.
pub fn eigen_closed_form(det: f64) -> Result<(f64, f64)> {
    if !(-NEG_CLIP..=0.25 + NEG_CLIP).contains(&det) {
        return Err(Error::domain(format!("determinant {det} is outside [0, 1/4]")));
    }
    let root = (1.0 - 4.0 * det.clamp(0.0, 0.25)).sqrt();
    Ok((0.5 + 0.5 * root, 0.5 - 0.5 * root))
}

/// Von Neumann entropy of a 2×2 density matrix through its determinant.
pub fn von_neumann_closed_form(dm: &BellBasisDM) -> Result<EntropyBits> {
    let (l1, l2) = eigen_closed_form(dm.det())?;
    Ok(EntropyBits(binary_entropy(l1, l2)))
}

/// Singlet and triplet weights `(Ā, B̄) = (p₁a₀² + p₂a_θ², p₁b₀² + p₂b_θ²)`.
pub fn bell_weights(weights: PairWeights, w_zero: &WignerCoeffs, w_theta: &WignerCoeffs) -> (f64, f64) {
    let (p1, p2) = (weights.p1(), weights.p2());
    (
        p1 * w_zero.a * w_zero.a + p2 * w_theta.a * w_theta.a,
        p1 * w_zero.b * w_zero.b + p2 * w_theta.b * w_theta.b,
    )
}

/// Shannon entropy of the four z-basis outcomes. Each outcome probability is
/// doubly degenerate, which contributes the `+1`.
pub fn shannon(weights: PairWeights, w_zero: &WignerCoeffs, w_theta: &WignerCoeffs) -> EntropyBits {
    let (sa, sb) = bell_weights(weights, w_zero, w_theta);
    EntropyBits(binary_entropy(sa, sb) + 1.0)
}

/// Shannon entropy of the diagonal of a product-basis density matrix.
pub fn shannon_product(dm: &ProductBasisDM) -> EntropyBits {
    shannon_of_probabilities(&dm.probabilities())
}

/// Von Neumann entropy of the antisymmetrised (indistinguishable) state,
/// which is diagonal in the Bell sub-basis.
pub fn vn_indistinguishable(weights: PairWeights, w_zero: &WignerCoeffs, w_theta: &WignerCoeffs) -> EntropyBits {
    let (sa, sb) = bell_weights(weights, w_zero, w_theta);
    EntropyBits(binary_entropy(sa, sb))
}

/// `((ch α + ch φ) / (sh α sh φ))²`, the left side of both extremum
/// relations. Requires both rapidities strictly positive.
pub fn condition_lhs(phi: Rapidity, alpha: Rapidity) -> Result<f64> {
    if phi.value() <= 0.0 || alpha.value() <= 0.0 {
        return Err(Error::domain("extremum relations need positive rapidities"));
    }
    Ok(((alpha.cosh() + phi.cosh()) / (alpha.sinh() * phi.sinh())).powi(2))
}

/// Both sides of an extremum relation at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionValue {
    pub lhs: f64,
    pub rhs: f64,
    /// Whether the relation can hold anywhere for this `θ` (and weights).
    pub admits_solution: bool,
}

impl ConditionValue {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Relation for the distinguishable-state maximum: `lhs = −cos θ`.
///
/// `lhs >= 1` always, so nothing solves it for `θ <= π/2`; that case is
/// reported through `admits_solution = false` rather than an error.
pub fn max_condition_distinguishable(g: &GeometryParams) -> Result<ConditionValue> {
    let lhs = condition_lhs(g.phi, g.alpha)?;
    let rhs = -sin_cos_angle(g.theta).1;
    Ok(ConditionValue { lhs, rhs, admits_solution: g.theta > FRAC_PI_2 })
}

/// Right side of the extremum relation for the Shannon and
/// indistinguishable entropies:
/// `((p₁ − p₂) sin²θ + √((p₁ − p₂)² sin⁴θ + 4 cos²θ)) / 2`.
pub fn extremum_condition_indistinguishable(theta: f64, weights: PairWeights) -> f64 {
    let (s, c) = sin_cos_angle(theta);
    let d = weights.p1() - weights.p2();
    let s2 = s * s;
    0.5 * (d * s2 + (d * d * s2 * s2 + 4.0 * c * c).sqrt())
}

/// A boost rapidity at which an extremum relation holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumSolution {
    pub alpha: Rapidity,
    pub condition_lhs: f64,
    pub condition_rhs: f64,
}

impl ExtremumSolution {
    pub fn residual(&self) -> f64 {
        self.condition_lhs - self.condition_rhs
    }
}

/// Solve `lhs(φ, α) = target` for α by bisection. `lhs` decreases strictly
/// from `+∞` at `α = 0` to `1/sh²φ` as `α → ∞`, so a root exists iff
/// `1/sh²φ < target` (and lies below [`MAX_RAPIDITY`] in practice).
fn solve_lhs_equals(phi: Rapidity, target: f64) -> Option<ExtremumSolution> {
    if phi.value() <= 0.0 || !target.is_finite() {
        return None;
    }
    let f = |alpha: f64| {
        let a = Rapidity(alpha);
        ((a.cosh() + phi.cosh()) / (a.sinh() * phi.sinh())).powi(2) - target
    };
    let (mut lo, mut hi) = (0.0_f64, MAX_RAPIDITY);
    if f(hi) > 0.0 {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // f(0) is +∞
        if mid > 0.0 && f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (flo, fhi) = (if lo > 0.0 { f(lo).abs() } else { f64::INFINITY }, f(hi).abs());
    let alpha = if flo < fhi { lo } else { hi };
    let alpha = Rapidity(alpha);
    let lhs = condition_lhs(phi, alpha).ok()?;
    let sol = ExtremumSolution { alpha, condition_lhs: lhs, condition_rhs: target };
    (sol.residual().abs() <= CONDITION_TOL).then_some(sol)
}

/// Boost rapidity at which the distinguishable-state entropy reaches
/// `−p₁ log₂ p₁ − p₂ log₂ p₂` for ejection rapidity `phi` and angle
/// `theta > π/2`. `None` outside the regime `1 + cos θ sh²φ < 0`.
pub fn solve_alpha_at_max(phi: Rapidity, theta: f64) -> Option<ExtremumSolution> {
    if !(theta > FRAC_PI_2 && theta <= std::f64::consts::PI + 1e-12) {
        return None;
    }
    let c = sin_cos_angle(theta).1;
    if 1.0 + c * phi.sinh().powi(2) >= 0.0 {
        return None;
    }
    solve_lhs_equals(phi, -c)
}

/// Explicit solution `ch α = (−ch φ − sh²φ √(−cos θ (1 − cos θ))) / (1 + cos θ sh²φ)`
/// of the distinguishable maximum relation.
pub fn alpha_at_max_closed_form(phi: Rapidity, theta: f64) -> Option<Rapidity> {
    let c = sin_cos_angle(theta).1;
    let s2 = phi.sinh().powi(2);
    let den = 1.0 + c * s2;
    if theta <= FRAC_PI_2 || den >= 0.0 {
        return None;
    }
    let cosh_alpha = (-phi.cosh() - s2 * (-c * (1.0 - c)).sqrt()) / den;
    Rapidity::from_cosh(cosh_alpha).ok()
}

/// Boost rapidity on the extremum ridge of the Shannon and indistinguishable
/// entropies. `None` when the right side is not reachable for this `phi`,
/// which includes the `θ = π/2`, `p₁ < p₂` case where the right side is 0.
pub fn solve_alpha_at_extremum_indistinguishable(
    phi: Rapidity,
    theta: f64,
    weights: PairWeights,
) -> Option<ExtremumSolution> {
    solve_lhs_equals(phi, extremum_condition_indistinguishable(theta, weights))
}
