//! Boosted pair states and their spin-reduced density matrices.
//!
//! Every boosted pair lives in the two-dimensional span of
//! `singlet = (|↑↓⟩ − |↓↑⟩)/√2` and `triplet = (|↑↑⟩ + |↓↓⟩)/√2`, so the
//! primary representation is a real symmetric 2×2 matrix in that basis.
//! Tracing out momentum drops every cross term between pairs flying in
//! different directions; what is left is a convex combination of the
//! per-direction projectors.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::wigner::{sin_cos_angle, WignerCoeffs};

/// Tolerance on trace, symmetry and positivity of density matrices.
pub const DM_TOL: f64 = 1e-12;

/// Probabilities `p₁ = |c₁|²`, `p₂ = |c₂|²` of the two pair directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWeights {
    p1: f64,
    p2: f64,
}

impl PairWeights {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1 >= 0.0 && p2 >= 0.0) || (p1 + p2 - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "weights must be non-negative and sum to 1, got ({p1}, {p2})"
            )));
        }
        Ok(PairWeights { p1, p2 })
    }

    /// `(p1, 1 − p1)`.
    pub fn from_p1(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::domain(format!("p1 must lie in [0, 1], got {p1}")));
        }
        Ok(PairWeights { p1, p2: 1.0 - p1 })
    }

    pub const EQUAL: PairWeights = PairWeights { p1: 0.5, p2: 0.5 };

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `−p₁ log₂ p₁ − p₂ log₂ p₂`.
    pub fn mixing_entropy(&self) -> f64 {
        crate::entropy::binary_entropy(self.p1, self.p2)
    }
}

/// Common view of the two density-matrix representations.
pub trait DensityMatrix {
    fn dim(&self) -> usize;
    fn entry(&self, row: usize, col: usize) -> f64;

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.entry(i, j))
    }

    fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.entry(i, j) - self.entry(j, i)).abs());
            }
        }
        worst
    }
}

/// Spin density matrix in the `[singlet, triplet]` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellBasisDM {
    m: [[f64; 2]; 2],
}

impl BellBasisDM {
    /// Validating constructor: symmetric, unit trace, positive semidefinite.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        let dm = BellBasisDM { m };
        if dm.asymmetry() > DM_TOL {
            return Err(Error::domain("density matrix is not symmetric"));
        }
        if (dm.trace() - 1.0).abs() > DM_TOL {
            return Err(Error::domain(format!("trace {} is not 1", dm.trace())));
        }
        // 2×2 symmetric with unit trace is PSD iff det >= 0
        if dm.det() < -DM_TOL {
            return Err(Error::domain("density matrix has a negative eigenvalue"));
        }
        Ok(dm)
    }

    pub fn diag(singlet: f64, triplet: f64) -> Result<Self> {
        Self::new([[singlet, 0.0], [0.0, triplet]])
    }

    /// Rank-1 projector onto `a · singlet + b · triplet`.
    pub fn projector(w: &WignerCoeffs) -> Self {
        BellBasisDM {
            m: [[w.a * w.a, w.a * w.b], [w.a * w.b, w.b * w.b]],
        }
    }

    pub fn rows(&self) -> &[[f64; 2]; 2] {
        &self.m
    }

    pub fn singlet_weight(&self) -> f64 {
        self.m[0][0]
    }

    pub fn triplet_weight(&self) -> f64 {
        self.m[1][1]
    }

    pub fn coherence(&self) -> f64 {
        self.m[0][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn max_abs_diff(&self, other: &BellBasisDM) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }

    /// Matrix product, used for the orthogonality check `M(0) M(θ) = 0`.
    pub fn product(&self, other: &BellBasisDM) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = (0..2).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        out
    }
}

impl DensityMatrix for BellBasisDM {
    fn dim(&self) -> usize {
        2
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }
}

/// Spin density matrix in the `[↑↑, ↑↓, ↓↑, ↓↓]` product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductBasisDM {
    m: [[f64; 4]; 4],
}

impl ProductBasisDM {
    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    /// Outcome probabilities of a z-basis measurement on both spins.
    pub fn probabilities(&self) -> [f64; 4] {
        [self.m[0][0], self.m[1][1], self.m[2][2], self.m[3][3]]
    }

    /// Conjugation by the simultaneous `↑ ↔ ↓` flip on both particles.
    pub fn spin_flipped(&self) -> Self {
        const FLIP: [usize; 4] = [3, 2, 1, 0];
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.m[FLIP[i]][FLIP[j]];
            }
        }
        ProductBasisDM { m }
    }
}

impl DensityMatrix for ProductBasisDM {
    fn dim(&self) -> usize {
        4
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }
}

/// Amplitudes of the boosted pair over `[singlet, triplet]`.
pub fn boosted_pair_bell_vector(w: &WignerCoeffs) -> [f64; 2] {
    [w.a, w.b]
}

/// Convex combination `Σ pᵢ M(θᵢ)` of per-direction projectors.
pub fn general_superposition_dm(weights: &[f64], coeffs: &[WignerCoeffs]) -> Result<BellBasisDM> {
    if weights.is_empty() || weights.len() != coeffs.len() {
        return Err(Error::domain(format!(
            "need equally many weights and coefficient pairs (got {} and {})",
            weights.len(),
            coeffs.len()
        )));
    }
    if weights.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::domain("weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("weights sum to {total}, not 1")));
    }
    Ok(convex_combination(weights, coeffs))
}

fn convex_combination(weights: &[f64], coeffs: &[WignerCoeffs]) -> BellBasisDM {
    let mut m = [[0.0; 2]; 2];
    for (&p, w) in weights.iter().zip(coeffs) {
        let proj = BellBasisDM::projector(w);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += p * proj.m[i][j];
            }
        }
    }
    BellBasisDM { m }
}

/// `ρ′ = p₁ M(0) + p₂ M(θ)` for the two-direction superposition.
pub fn reduced_dm_distinguishable(
    weights: PairWeights,
    w_zero: &WignerCoeffs,
    w_theta: &WignerCoeffs,
) -> BellBasisDM {
    let a = BellBasisDM::projector(w_zero);
    let b = BellBasisDM::projector(w_theta);
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = weights.p1 * a.m[i][j] + weights.p2 * b.m[i][j];
        }
    }
    BellBasisDM { m }
}

/// `det ρ′ = p₁ p₂ a(θ)² b(0)² (cos θ − 1)²`, the closed form of the
/// determinant of [`reduced_dm_distinguishable`].
pub fn det_distinguishable_closed_form(
    weights: PairWeights,
    w_zero: &WignerCoeffs,
    w_theta: &WignerCoeffs,
    theta: f64,
) -> f64 {
    let c = sin_cos_angle(theta).1;
    weights.p1 * weights.p2 * (w_theta.a * w_zero.b * (c - 1.0)).powi(2)
}

/// Spatially antisymmetrised superposition over the directions
/// `(0, θ, π, π + θ)` with `c₁ = −c₃`, `c₂ = −c₄`.
///
/// The partner directions carry the same singlet amplitude and the opposite
/// triplet amplitude, so their coherences cancel and the result is diagonal.
pub fn reduced_dm_indistinguishable(
    weights: PairWeights,
    w_zero: &WignerCoeffs,
    w_theta: &WignerCoeffs,
) -> BellBasisDM {
    let flip = |w: &WignerCoeffs| WignerCoeffs { a: w.a, b: -w.b };
    let (h1, h2) = (0.5 * weights.p1, 0.5 * weights.p2);
    // ordered so each coherence cancels against its partner first
    convex_combination(
        &[h1, h1, h2, h2],
        &[*w_zero, flip(w_zero), *w_theta, flip(w_theta)],
    )
}

/// Embed a `[singlet, triplet]` density matrix into the product basis.
pub fn to_product_basis(dm: &BellBasisDM) -> ProductBasisDM {
    const SINGLET: [f64; 4] = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
    const TRIPLET: [f64; 4] = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
    let basis = [SINGLET, TRIPLET];
    let mut m = [[0.0; 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, out) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    acc += dm.m[i][j] * basis[i][r] * basis[j][c];
                }
            }
            *out = acc;
        }
    }
    ProductBasisDM { m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Rapidity;
    use crate::wigner::{pair_coeffs, pair_coeffs_velocity, GeometryParams};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spot() -> (WignerCoeffs, WignerCoeffs) {
        (
            WignerCoeffs { a: 40.0 / 41.0, b: 9.0 / 41.0 },
            WignerCoeffs { a: 40.0 / 41.0, b: -9.0 / 41.0 },
        )
    }

    #[test]
    fn weights_validation() {
        assert!(PairWeights::new(0.3, 0.7).is_ok());
        assert!(PairWeights::new(0.3, 0.6).is_err());
        assert!(PairWeights::new(-0.1, 1.1).is_err());
        assert!(PairWeights::from_p1(1.2).is_err());
        assert_eq!(PairWeights::from_p1(0.25).unwrap().p2(), 0.75);
    }

    #[test]
    fn bell_vector_examples() {
        assert_eq!(boosted_pair_bell_vector(&WignerCoeffs::SINGLET), [1.0, 0.0]);
        assert_eq!(boosted_pair_bell_vector(&WignerCoeffs { a: 0.0, b: -1.0 }), [0.0, -1.0]);
        let [a, b] = boosted_pair_bell_vector(&spot().0);
        assert!((a * a + b * b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distinguishable_spot_value() {
        let (w0, wpi) = spot();
        let dm = reduced_dm_distinguishable(PairWeights::EQUAL, &w0, &wpi);
        assert!((dm.singlet_weight() - 1600.0 / 1681.0).abs() < 1e-15);
        assert!((dm.triplet_weight() - 81.0 / 1681.0).abs() < 1e-15);
        assert!(dm.coherence().abs() < 1e-16);
    }

    #[test]
    fn distinguishable_pure_when_one_weight_vanishes() {
        let w = WignerCoeffs { a: 0.6, b: 0.8 };
        let dm = reduced_dm_distinguishable(PairWeights::new(1.0, 0.0).unwrap(), &w, &spot().0);
        assert!(dm.max_abs_diff(&BellBasisDM::projector(&w)) < 1e-16);
        assert!(dm.det().abs() < 1e-16);
    }

    #[test]
    fn determinant_closed_form_matches() {
        let weights = PairWeights::from_p1(0.3).unwrap();
        for &(phi, alpha, theta) in &[(0.4, 1.1, 0.7), (2.0, 0.3, 2.2), (3.0, 3.0, PI), (1.0, 2.0, FRAC_PI_2)] {
            let g0 = GeometryParams::from_rapidities(phi, alpha, 0.0).unwrap();
            let gt = g0.with_theta(theta).unwrap();
            let (w0, wt) = (pair_coeffs(&g0), pair_coeffs(&gt));
            let dm = reduced_dm_distinguishable(weights, &w0, &wt);
            let closed = det_distinguishable_closed_form(weights, &w0, &wt, theta);
            assert!((dm.det() - closed).abs() < 1e-14, "{} vs {}", dm.det(), closed);
        }
    }

    #[test]
    fn indistinguishable_examples() {
        let w0 = pair_coeffs(&GeometryParams::from_rapidities(0.0, 2.0, 0.0).unwrap());
        let wt = pair_coeffs(&GeometryParams::from_rapidities(0.0, 2.0, 1.0).unwrap());
        let dm = reduced_dm_indistinguishable(PairWeights::from_p1(0.3).unwrap(), &w0, &wt);
        assert!(dm.max_abs_diff(&BellBasisDM::diag(1.0, 0.0).unwrap()) < 1e-15);
        assert_eq!(dm.coherence(), 0.0);

        let (w0, wpi) = spot();
        let ind = reduced_dm_indistinguishable(PairWeights::EQUAL, &w0, &wpi);
        let dis = reduced_dm_distinguishable(PairWeights::EQUAL, &w0, &wpi);
        assert!(ind.max_abs_diff(&dis) < 1e-15);

        let ultra = Rapidity::from_velocity(1.0 - 1e-8).unwrap();
        let g0 = GeometryParams::new(ultra, ultra, 0.0).unwrap();
        let w0 = pair_coeffs(&g0);
        let wt = pair_coeffs(&g0.with_theta(FRAC_PI_2).unwrap());
        let weights = PairWeights::from_p1(0.25).unwrap();
        let dm = reduced_dm_indistinguishable(weights, &w0, &wt);
        assert!((dm.singlet_weight() - 0.75).abs() < 1e-6);
        assert!((dm.triplet_weight() - 0.25).abs() < 1e-6);
        assert_eq!(dm.coherence(), 0.0);
    }

    #[test]
    fn partner_direction_flips_triplet_sign() {
        let alpha = Rapidity::new(1.3).unwrap();
        for &theta in &[0.0, 0.4, 1.9, PI] {
            let w = pair_coeffs_velocity(0.7, alpha, theta).unwrap();
            let partner = pair_coeffs_velocity(0.7, alpha, theta + PI).unwrap();
            assert!((partner.a - w.a).abs() < 1e-15);
            assert!((partner.b + w.b).abs() < 1e-15);
        }
    }

    #[test]
    fn product_basis_examples() {
        let s = to_product_basis(&BellBasisDM::projector(&WignerCoeffs::SINGLET));
        let expected = [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, -0.5, 0.0],
            [0.0, -0.5, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((s.rows()[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }

        let t = to_product_basis(&BellBasisDM::projector(&WignerCoeffs::TRIPLET));
        assert!((t.rows()[0][0] - 0.5).abs() < 1e-15);
        assert!((t.rows()[0][3] - 0.5).abs() < 1e-15);
        assert!((t.rows()[3][3] - 0.5).abs() < 1e-15);
        assert!(t.rows()[1][1].abs() < 1e-15);

        let (w0, wpi) = spot();
        let p = to_product_basis(&reduced_dm_distinguishable(PairWeights::EQUAL, &w0, &wpi));
        let [uu, ud, du, dd] = p.probabilities();
        assert!((ud - 800.0 / 1681.0).abs() < 1e-15 && (du - 800.0 / 1681.0).abs() < 1e-15);
        assert!((uu - 81.0 / 3362.0).abs() < 1e-15 && (dd - 81.0 / 3362.0).abs() < 1e-15);
        assert!((p.trace() - 1.0).abs() < 1e-15);
        assert_eq!(p.spin_flipped(), p);
    }

    #[test]
    fn general_superposition_cases() {
        let w = WignerCoeffs { a: 0.6, b: -0.8 };
        let single = general_superposition_dm(&[1.0], &[w]).unwrap();
        assert!(single.max_abs_diff(&BellBasisDM::projector(&w)) < 1e-16);

        let (w0, wt) = (spot().0, WignerCoeffs { a: 0.8, b: 0.6 });
        let weights = PairWeights::from_p1(0.35).unwrap();
        let two = general_superposition_dm(&[0.35, 0.65], &[w0, wt]).unwrap();
        assert!(two.max_abs_diff(&reduced_dm_distinguishable(weights, &w0, &wt)) < 1e-15);

        // natural order (0, θ, π, π+θ) also reproduces the antisymmetrised state
        let flip = |w: WignerCoeffs| WignerCoeffs { a: w.a, b: -w.b };
        let four = general_superposition_dm(
            &[0.175, 0.325, 0.175, 0.325],
            &[w0, wt, flip(w0), flip(wt)],
        )
        .unwrap();
        assert!(four.max_abs_diff(&reduced_dm_indistinguishable(weights, &w0, &wt)) < 1e-15);

        assert!(general_superposition_dm(&[0.5, 0.5], &[w0]).is_err());
        assert!(general_superposition_dm(&[], &[]).is_err());
        assert!(general_superposition_dm(&[0.5, 0.6], &[w0, wt]).is_err());
    }

    #[test]
    fn validating_constructor() {
        assert!(BellBasisDM::new([[0.5, 0.1], [0.1, 0.5]]).is_ok());
        assert!(BellBasisDM::new([[0.5, 0.1], [0.2, 0.5]]).is_err());
        assert!(BellBasisDM::new([[0.6, 0.1], [0.1, 0.5]]).is_err());
        assert!(BellBasisDM::new([[0.5, 0.6], [0.6, 0.5]]).is_err());
    }
}
