//! Closed-form Wigner-rotation coefficients for the back-to-back pair geometry.
//!
//! The boost is along `−z` with rapidity `alpha`; each particle of a pair is
//! ejected in the x–z plane with rapidity `phi` at angle `theta` from the x
//! axis, its partner at `theta + π`. For one particle the spin rotation is
//! the real SU(2) matrix `[[A, −B], [B, A]]`; for the pair, the boosted
//! singlet becomes `a · singlet + b · triplet` with
//! `triplet = (|↑↑⟩ + |↓↓⟩)/√2`.
//!
//! Shared denominators are evaluated as `hypot` of the two numerators. That
//! is algebraically identical to the textbook square roots, e.g.
//! `(1 + ch α ch φ)² − sh²α sh²φ sin²θ = (ch α + ch φ)² + (sh α sh φ cos θ)²`,
//! but does not cancel catastrophically at large rapidity and makes
//! `a² + b² = 1` hold to rounding.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kinematics::{
    boost_matrix, rotation_angle_axis, wigner_matrix_numeric, FourMomentum, Rapidity,
    RotationAngleAxis,
};

/// Tolerance on `A² + B² = 1` and `a² + b² = 1`.
pub const NORM_TOL: f64 = 1e-12;

const AXIS_TOL: f64 = 1e-9;

/// Boost direction of the laboratory frame relative to the pair's rest frame.
pub const BOOST_DIRECTION: [f64; 3] = [0.0, 0.0, -1.0];

/// Ejection rapidity, boost rapidity and ejection angle of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub phi: Rapidity,
    pub alpha: Rapidity,
    pub theta: f64,
}

impl GeometryParams {
    pub fn new(phi: Rapidity, alpha: Rapidity, theta: f64) -> Result<Self> {
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::domain(format!("theta must lie in [0, π], got {theta}")));
        }
        Ok(GeometryParams { phi, alpha, theta: theta.clamp(0.0, PI) })
    }

    /// Convenience constructor from raw rapidity values.
    pub fn from_rapidities(phi: f64, alpha: f64, theta: f64) -> Result<Self> {
        Self::new(Rapidity::new(phi)?, Rapidity::new(alpha)?, theta)
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.phi, self.alpha, theta)
    }

    pub fn swapped(self) -> Self {
        GeometryParams { phi: self.alpha, alpha: self.phi, theta: self.theta }
    }
}

/// Diagonal (`A`) and off-diagonal (`B`) entries of the single-particle
/// spin rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCoeffs {
    pub a_coeff: f64,
    pub b_coeff: f64,
}

impl SingleCoeffs {
    pub fn norm_defect(&self) -> f64 {
        (self.a_coeff.mul_add(self.a_coeff, self.b_coeff * self.b_coeff) - 1.0).abs()
    }
}

/// Singlet (`a`) and triplet (`b`) amplitudes of a boosted pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerCoeffs {
    pub a: f64,
    pub b: f64,
}

impl WignerCoeffs {
    pub const SINGLET: WignerCoeffs = WignerCoeffs { a: 1.0, b: 0.0 };
    pub const TRIPLET: WignerCoeffs = WignerCoeffs { a: 0.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        let c = WignerCoeffs { a, b };
        if c.norm_defect().is_nan() || c.norm_defect() > NORM_TOL {
            return Err(Error::domain(format!("a² + b² = {} is not 1", a * a + b * b)));
        }
        Ok(c)
    }

    pub fn norm_defect(&self) -> f64 {
        (self.a.mul_add(self.a, self.b * self.b) - 1.0).abs()
    }
}

/// `A`, `B` at an arbitrary angle (`theta + π` included).
pub(crate) fn single_coeffs_at(phi: Rapidity, alpha: Rapidity, theta: f64) -> SingleCoeffs {
    let (sin, cos) = sin_cos_angle(theta);
    single_coeffs_sc(phi, alpha, sin, cos)
}

/// `A`, `B` from the sine and cosine of the ejection angle.
fn single_coeffs_sc(phi: Rapidity, alpha: Rapidity, sin: f64, cos: f64) -> SingleCoeffs {
    let (sa, ca) = half_sinh_cosh(alpha.value());
    let (sp, cp) = half_sinh_cosh(phi.value());
    let num_a = ca * cp - sa * sp * sin;
    let num_b = sa * sp * cos;
    let den = num_a.hypot(num_b);
    SingleCoeffs { a_coeff: num_a / den, b_coeff: num_b / den }
}

/// `(sin θ, cos θ)` with `cos` taken as `sin(π/2 − θ)` in the middle band, so
/// that `θ = π/2` gives an exact zero.
pub(crate) fn sin_cos_angle(theta: f64) -> (f64, f64) {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let (s, c) = theta.sin_cos();
    if (theta - FRAC_PI_2).abs() <= FRAC_PI_4 {
        (s, (FRAC_PI_2 - theta).sin())
    } else {
        (s, c)
    }
}

fn half_sinh_cosh(x: f64) -> (f64, f64) {
    let h = 0.5 * x;
    (h.sinh(), h.cosh())
}

/// Single-particle rotation coefficients `A(φ, α, θ)`, `B(φ, α, θ)`.
pub fn coeff_ab(g: &GeometryParams) -> SingleCoeffs {
    single_coeffs_at(g.phi, g.alpha, g.theta)
}

/// Pair amplitudes `(a, b)` in closed form.
pub fn pair_coeffs(g: &GeometryParams) -> WignerCoeffs {
    let num_a = g.alpha.cosh() + g.phi.cosh();
    let num_b = g.alpha.sinh() * g.phi.sinh() * sin_cos_angle(g.theta).1;
    let den = num_a.hypot(num_b);
    WignerCoeffs { a: num_a / den, b: num_b / den }
}

/// Pair amplitudes assembled from the two single-particle rotations at
/// `theta` and `theta + π`: `a = A A' + B B'`, `b = B A' − A B'`.
pub fn pair_coeffs_from_single(g: &GeometryParams) -> WignerCoeffs {
    let (sin, cos) = sin_cos_angle(g.theta);
    combine_single(
        single_coeffs_sc(g.phi, g.alpha, sin, cos),
        single_coeffs_sc(g.phi, g.alpha, -sin, -cos),
    )
}

pub(crate) fn combine_single(near: SingleCoeffs, far: SingleCoeffs) -> WignerCoeffs {
    WignerCoeffs {
        a: near.a_coeff * far.a_coeff + near.b_coeff * far.b_coeff,
        b: near.b_coeff * far.a_coeff - near.a_coeff * far.b_coeff,
    }
}

/// Pair amplitudes written with the ejection speed `v` instead of its
/// rapidity.
pub fn pair_coeffs_velocity(v: f64, alpha: Rapidity, theta: f64) -> Result<WignerCoeffs> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::domain(format!("speed must lie in [0, 1), got {v}")));
    }
    let inv_gamma = ((1.0 - v) * (1.0 + v)).sqrt();
    let num_a = 1.0 + inv_gamma * alpha.cosh();
    let num_b = v * alpha.sinh() * sin_cos_angle(theta).1;
    let den = num_a.hypot(num_b);
    Ok(WignerCoeffs { a: num_a / den, b: num_b / den })
}

/// Same as [`pair_coeffs_velocity`] with the roles swapped: boost speed `V`
/// and ejection rapidity `phi`.
pub fn pair_coeffs_boost_velocity(big_v: f64, phi: Rapidity, theta: f64) -> Result<WignerCoeffs> {
    pair_coeffs_velocity(big_v, phi, theta)
}

/// Second-order expansion in the ejection speed; meant for `v <= 0.1`.
pub fn pair_coeffs_nonrel(v: f64, alpha: Rapidity, theta: f64) -> WignerCoeffs {
    let t = (0.5 * alpha.value()).tanh();
    let c = sin_cos_angle(theta).1;
    WignerCoeffs {
        a: 1.0 - 0.5 * v * v * c * c * t * t,
        b: v * c * t,
    }
}

/// Half-angle SU(2) coefficients of a rotation about `±y`:
/// `(cos(ω/2), s · sin(ω/2))` with `s` the sign of the axis' y component.
pub fn su2_from_rotation(r: &RotationAngleAxis) -> Result<SingleCoeffs> {
    let [x, y, z] = r.axis;
    if x.abs() > AXIS_TOL || z.abs() > AXIS_TOL || (y.abs() - 1.0).abs() > AXIS_TOL {
        return Err(Error::contract(format!(
            "rotation axis {:?} is not ±y",
            r.axis
        )));
    }
    let half = 0.5 * r.angle;
    Ok(SingleCoeffs {
        a_coeff: half.cos(),
        b_coeff: y.signum() * half.sin(),
    })
}

/// Single-particle coefficients obtained by building `W(Λ, p)` from 4×4
/// matrices and reading off its rotation. Independent of [`coeff_ab`].
/// The sign of `B` follows the rotation sense of the 4×4 matrix, which agrees
/// with the closed form for an active boost along `−z`.
pub fn coeff_ab_oracle(g: &GeometryParams) -> Result<SingleCoeffs> {
    let boost = boost_matrix(g.alpha, BOOST_DIRECTION)?;
    let p = FourMomentum::from_speed(1.0, g.phi.velocity(), g.theta)?;
    let w = wigner_matrix_numeric(&boost, &p)?;
    su2_from_rotation(&rotation_angle_axis(&w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn g(phi: f64, alpha: f64, theta: f64) -> GeometryParams {
        GeometryParams::from_rapidities(phi, alpha, theta).unwrap()
    }

    /// The displayed closed forms, evaluated literally with their own
    /// square-root denominators.
    fn textbook_ab(phi: f64, alpha: f64, theta: f64) -> (f64, f64) {
        let den = (0.5 + 0.5 * alpha.cosh() * phi.cosh()
            - 0.5 * alpha.sinh() * phi.sinh() * theta.sin())
        .sqrt();
        let a = ((alpha / 2.0).cosh() * (phi / 2.0).cosh()
            - (alpha / 2.0).sinh() * (phi / 2.0).sinh() * theta.sin())
            / den;
        let b = (alpha / 2.0).sinh() * (phi / 2.0).sinh() * theta.cos() / den;
        (a, b)
    }

    fn textbook_pair(phi: f64, alpha: f64, theta: f64) -> (f64, f64) {
        let den = ((1.0 + alpha.cosh() * phi.cosh()).powi(2)
            - (alpha.sinh() * phi.sinh() * theta.sin()).powi(2))
        .sqrt();
        (
            (alpha.cosh() + phi.cosh()) / den,
            alpha.sinh() * phi.sinh() * theta.cos() / den,
        )
    }

    #[test]
    fn coeff_ab_examples() {
        let c = coeff_ab(&g(0.0, 1.7, 0.4));
        assert_eq!((c.a_coeff, c.b_coeff), (1.0, 0.0));

        let r = 0.6f64.atanh();
        let c = coeff_ab(&g(r, r, 0.0));
        assert!((c.a_coeff * c.a_coeff - 81.0 / 82.0).abs() < 1e-15);
        assert!((c.b_coeff * c.b_coeff - 1.0 / 82.0).abs() < 1e-15);
        assert!((c.b_coeff / c.a_coeff - 1.0 / 9.0).abs() < 1e-15);

        let c = coeff_ab(&g(2.0, 3.0, FRAC_PI_2));
        assert!(c.b_coeff.abs() < 1e-15);
    }

    #[test]
    fn coeff_ab_matches_textbook_denominator() {
        for &(p, a, t) in &[(0.3, 0.8, 0.2), (1.5, 0.4, 2.0), (2.5, 2.5, 3.0), (0.9, 3.0, 1.0)] {
            let c = coeff_ab(&g(p, a, t));
            let (ta, tb) = textbook_ab(p, a, t);
            assert!((c.a_coeff - ta).abs() < 1e-12);
            assert!((c.b_coeff - tb).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_coeffs_examples() {
        let r = 0.6f64.atanh();
        let w = pair_coeffs(&g(r, r, 0.0));
        assert!((w.a - 40.0 / 41.0).abs() < 1e-15);
        assert!((w.b - 9.0 / 41.0).abs() < 1e-15);

        for &(p, a) in &[(0.1, 0.2), (3.0, 5.0), (9.0, 9.0)] {
            let w = pair_coeffs(&g(p, a, FRAC_PI_2));
            assert!((w.a - 1.0).abs() < 1e-15);
            assert!(w.b.abs() < 1e-15);
        }

        let ultra = (1.0 - 1e-8f64).atanh();
        let w = pair_coeffs(&g(ultra, ultra, 0.3));
        assert!(w.a < 1e-3 && w.a > 0.0);
        assert!(w.b > 0.999_999);
        let w = pair_coeffs(&g(ultra, ultra, 2.8));
        assert!(w.a < 1e-3 && w.a > 0.0);
        assert!(w.b < -0.999_999);
    }

    #[test]
    fn pair_coeffs_match_single_product_route_and_textbook() {
        for &(p, a, t) in &[(0.3, 0.8, 0.2), (1.5, 0.4, 2.0), (2.5, 2.5, 3.0), (4.0, 1.0, 0.0)] {
            let w = pair_coeffs(&g(p, a, t));
            let s = pair_coeffs_from_single(&g(p, a, t));
            assert!((w.a - s.a).abs() < 1e-12 && (w.b - s.b).abs() < 1e-12);
            let (ta, tb) = textbook_pair(p, a, t);
            assert!((w.a - ta).abs() < 1e-12 && (w.b - tb).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_form_examples() {
        let r = Rapidity::from_velocity(0.6).unwrap();
        let w = pair_coeffs_velocity(0.6, r, 0.0).unwrap();
        assert!((w.a - 40.0 / 41.0).abs() < 1e-15);
        assert!((w.b - 9.0 / 41.0).abs() < 1e-15);

        let w = pair_coeffs_velocity(0.0, Rapidity::new(2.0).unwrap(), 0.7).unwrap();
        assert_eq!((w.a, w.b), (1.0, 0.0));

        let r = Rapidity::from_velocity(0.999).unwrap();
        let w = pair_coeffs_velocity(0.999, r, FRAC_PI_2).unwrap();
        assert!((w.a - 1.0).abs() < 1e-15 && w.b.abs() < 1e-15);

        assert!(pair_coeffs_velocity(1.0, r, 0.0).is_err());

        let alpha = Rapidity::new(1.1).unwrap();
        let phi = Rapidity::from_velocity(0.8).unwrap();
        let w = pair_coeffs_velocity(0.8, alpha, 0.9).unwrap();
        let ex = pair_coeffs(&GeometryParams::new(phi, alpha, 0.9).unwrap());
        assert!((w.a - ex.a).abs() < 1e-12 && (w.b - ex.b).abs() < 1e-12);

        let w = pair_coeffs_boost_velocity(alpha.velocity(), phi, 0.9).unwrap();
        assert!((w.a - ex.a).abs() < 1e-12 && (w.b - ex.b).abs() < 1e-12);
    }

    #[test]
    fn nonrel_examples() {
        let w = pair_coeffs_nonrel(0.0, Rapidity::new(1.0).unwrap(), 0.3);
        assert_eq!((w.a, w.b), (1.0, 0.0));
        let w = pair_coeffs_nonrel(0.05, Rapidity::new(2.0).unwrap(), FRAC_PI_3);
        assert!((w.b - 0.05 * FRAC_PI_3.cos() * 1.0f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn nonrel_error_is_cubic() {
        // halve v repeatedly; the truncation error must drop by ~2³ each time
        let alpha = Rapidity::new(1.0).unwrap();
        let errs: Vec<f64> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&v| {
                let exact = pair_coeffs_velocity(v, alpha, 0.0).unwrap();
                (exact.b - pair_coeffs_nonrel(v, alpha, 0.0).b).abs()
            })
            .collect();
        for pair in errs.windows(2) {
            let slope = (pair[0] / pair[1]).log2();
            assert!((slope - 3.0).abs() < 0.05, "slope {slope}");
        }
    }

    #[test]
    fn su2_examples() {
        let r = RotationAngleAxis { angle: 0.0, axis: [0.0, 1.0, 0.0] };
        let c = su2_from_rotation(&r).unwrap();
        assert_eq!((c.a_coeff, c.b_coeff), (1.0, 0.0));

        let r = RotationAngleAxis { angle: PI, axis: [0.0, 1.0, 0.0] };
        let c = su2_from_rotation(&r).unwrap();
        assert!(c.a_coeff.abs() < 1e-16 && (c.b_coeff - 1.0).abs() < 1e-16);

        let r = RotationAngleAxis { angle: 0.5, axis: [0.0, -1.0, 0.0] };
        assert!(su2_from_rotation(&r).unwrap().b_coeff < 0.0);

        let r = RotationAngleAxis { angle: 0.5, axis: [1.0, 0.0, 0.0] };
        assert!(matches!(su2_from_rotation(&r), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn oracle_spot_value() {
        let r = 0.6f64.atanh();
        let o = coeff_ab_oracle(&g(r, r, 0.0)).unwrap();
        assert!((o.a_coeff.abs() - (81.0f64 / 82.0).sqrt()).abs() < 1e-10);
        assert!((o.b_coeff.abs() - (1.0f64 / 82.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn oracle_sign_convention() {
        for &(p, a, t) in &[(0.5, 0.7, 0.1), (1.2, 2.0, 1.2), (2.0, 0.3, 2.5), (0.8, 1.4, 3.0)] {
            let c = coeff_ab(&g(p, a, t));
            let o = coeff_ab_oracle(&g(p, a, t)).unwrap();
            assert!((c.a_coeff - o.a_coeff).abs() < 1e-10);
            assert!((c.b_coeff - o.b_coeff).abs() < 1e-10, "{c:?} {o:?}");
        }
    }
}
