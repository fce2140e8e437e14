//! Four-vectors and Lorentz matrices.
//!
//! Everything here is plain dense `f64` arithmetic on 4×4 matrices indexed in
//! `(t, x, y, z)` order with metric `diag(+1, -1, -1, -1)`. The Wigner rotation
//! built by [`wigner_matrix_numeric`] is the brute-force reference the
//! closed-form coefficients in [`crate::wigner`] are checked against.

use std::ops::Mul;

use crate::error::{Error, Result};

/// Minkowski metric diagonal.
const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Tolerance on the Lorentz-matrix invariants (metric preservation, det, etc).
pub const LORENTZ_TOL: f64 = 1e-10;

/// First row/column deviation above which a matrix is not a pure rotation.
pub const ROTATION_TOL: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;

/// Hyperbolic velocity parameter, `tanh(value) = v`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Rapidity(pub(crate) f64);

impl Rapidity {
    pub const ZERO: Rapidity = Rapidity(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::domain(format!(
                "rapidity must be finite and non-negative, got {value}"
            )));
        }
        Ok(Rapidity(value))
    }

    /// `atanh(v)` for a speed `0 <= v < 1`. The endpoint `v = 1` is rejected.
    pub fn from_velocity(v: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::domain(format!("speed must lie in [0, 1), got {v}")));
        }
        Ok(Rapidity(v.atanh()))
    }

    /// Rapidity with the given `cosh`, which must be at least 1.
    pub fn from_cosh(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 1.0 {
            return Err(Error::domain(format!("cosh of a rapidity must be >= 1, got {c}")));
        }
        Ok(Rapidity(c.acosh()))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn velocity(self) -> f64 {
        self.0.tanh()
    }

    pub fn cosh(self) -> f64 {
        self.0.cosh()
    }

    pub fn sinh(self) -> f64 {
        self.0.sinh()
    }
}

/// Timelike four-momentum `(E, px, py, pz)` of a massive particle, `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl FourMomentum {
    /// Validating constructor: requires `E > 0` and a strictly timelike vector.
    pub fn new(e: f64, px: f64, py: f64, pz: f64) -> Result<Self> {
        let p = FourMomentum { e, px, py, pz };
        if ![e, px, py, pz].iter().all(|c| c.is_finite()) {
            return Err(Error::domain("four-momentum components must be finite"));
        }
        if e <= 0.0 {
            return Err(Error::domain(format!("energy must be positive, got {e}")));
        }
        let m2 = p.mass_squared();
        if m2 <= 1e-10 * e * e {
            return Err(Error::domain(format!(
                "four-momentum is not timelike (m^2 = {m2:e}, E = {e})"
            )));
        }
        Ok(p)
    }

    /// Rest momentum `(m, 0, 0, 0)`.
    pub fn at_rest(mass: f64) -> Result<Self> {
        Self::from_speed(mass, 0.0, 0.0)
    }

    /// Particle of mass `mass` moving with speed `v` in the x–z plane at angle
    /// `theta` from the x axis toward the z axis.
    pub fn from_speed(mass: f64, v: f64, theta: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        if !(0.0..1.0).contains(&v) {
            return Err(Error::domain(format!("speed must lie in [0, 1), got {v}")));
        }
        let gamma = 1.0 / ((1.0 - v) * (1.0 + v)).sqrt();
        let p = gamma * mass * v;
        Ok(FourMomentum {
            e: gamma * mass,
            px: p * theta.cos(),
            py: 0.0,
            pz: p * theta.sin(),
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.e, self.px, self.py, self.pz]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }

    pub fn spatial_norm(&self) -> f64 {
        norm3(self.spatial())
    }

    pub fn mass_squared(&self) -> f64 {
        let p = self.spatial_norm();
        (self.e - p) * (self.e + p)
    }

    pub fn mass(&self) -> f64 {
        self.mass_squared().sqrt()
    }

    /// Rapidity of the particle relative to the frame the vector is expressed in.
    pub fn rapidity(&self) -> Rapidity {
        Rapidity((self.spatial_norm() / self.e).atanh())
    }
}

/// Proper orthochronous Lorentz transformation as a dense 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix {
    m: [[f64; 4]; 4],
}

impl LorentzMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMatrix { m }
    }

    /// Validating constructor; checks metric preservation, `det = +1` and
    /// `m[0][0] >= 1` within [`LORENTZ_TOL`].
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        let l = LorentzMatrix { m };
        let defect = l.metric_defect();
        if defect > LORENTZ_TOL {
            return Err(Error::domain(format!(
                "matrix does not preserve the metric (defect {defect:e})"
            )));
        }
        if (l.det() - 1.0).abs() > LORENTZ_TOL {
            return Err(Error::domain(format!("determinant {} is not +1", l.det())));
        }
        if m[0][0] < 1.0 - LORENTZ_TOL {
            return Err(Error::domain("matrix is not orthochronous"));
        }
        Ok(l)
    }

    /// Spatial rotation embedded in the lower-right 3×3 block.
    pub fn from_rotation(r: [[f64; 3]; 3]) -> Self {
        let mut m = Self::identity().m;
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        LorentzMatrix { m }
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }

    pub fn spatial_block(&self) -> [[f64; 3]; 3] {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = self.m[i + 1][j + 1];
            }
        }
        r
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.m[j][i];
            }
        }
        LorentzMatrix { m }
    }

    /// `η mᵀ η`, exact for any Lorentz matrix.
    pub fn inverse(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = METRIC[i] * self.m[j][i] * METRIC[j];
            }
        }
        LorentzMatrix { m }
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.m[i][j] * v[j]).sum();
        }
        out
    }

    /// Transform a momentum. Lorentz matrices preserve timelike-ness, so the
    /// result is not re-validated.
    pub fn transform(&self, p: &FourMomentum) -> FourMomentum {
        let [e, px, py, pz] = self.apply(p.as_array());
        FourMomentum { e, px, py, pz }
    }

    /// Largest entrywise deviation of `mᵀ η m` from `η`.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| self.m[k][i] * METRIC[k] * self.m[k][j]).sum();
                let target = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        nalgebra::Matrix4::from_fn(|i, j| self.m[i][j]).determinant()
    }

    /// Largest deviation of the first row and column from `(1, 0, 0, 0)`.
    pub fn rotation_defect(&self) -> f64 {
        let mut worst = (self.m[0][0] - 1.0).abs();
        for k in 1..4 {
            worst = worst.max(self.m[0][k].abs()).max(self.m[k][0].abs());
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &LorentzMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        LorentzMatrix { m }
    }
}

impl Mul for &LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: &LorentzMatrix) -> LorentzMatrix {
        *self * *rhs
    }
}

/// Pure boost with given `cosh`/`sinh` of the rapidity along a unit direction.
fn boost_from_hyperbolic(ch: f64, sh: f64, n: [f64; 3]) -> LorentzMatrix {
    let mut m = [[0.0; 4]; 4];
    m[0][0] = ch;
    for i in 0..3 {
        m[0][i + 1] = sh * n[i];
        m[i + 1][0] = sh * n[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i + 1][j + 1] = delta + (ch - 1.0) * n[i] * n[j];
        }
    }
    LorentzMatrix { m }
}

/// Pure boost of the given rapidity along a unit 3-vector. Applied to the
/// rest momentum `(m, 0, 0, 0)` it produces a particle moving along `direction`.
pub fn boost_matrix(rapidity: Rapidity, direction: [f64; 3]) -> Result<LorentzMatrix> {
    let len = norm3(direction);
    if (len - 1.0).abs() > UNIT_TOL {
        return Err(Error::domain(format!(
            "boost direction must be a unit vector, |n| = {len}"
        )));
    }
    Ok(boost_from_hyperbolic(rapidity.cosh(), rapidity.sinh(), direction))
}

/// The standard boost `L(p)` taking `(m, 0, 0, 0)` to `p`.
pub fn standard_boost(p: &FourMomentum) -> Result<LorentzMatrix> {
    // re-validate: FourMomentum fields are public
    let p = FourMomentum::new(p.e, p.px, p.py, p.pz)?;
    let pn = p.spatial_norm();
    if pn == 0.0 {
        return Ok(LorentzMatrix::identity());
    }
    let m = p.mass();
    let n = p.spatial().map(|c| c / pn);
    Ok(boost_from_hyperbolic(p.e / m, pn / m, n))
}

/// Wigner element `W(Λ, p) = L⁻¹(Λp) Λ L(p)` by explicit matrix products.
pub fn wigner_matrix_numeric(boost: &LorentzMatrix, p: &FourMomentum) -> Result<LorentzMatrix> {
    let lp = standard_boost(p)?;
    let lambda_p = boost.transform(p);
    let l_lambda_p = standard_boost(&lambda_p)?;
    Ok((&l_lambda_p.inverse() * boost) * lp)
}

/// Rotation by `angle ∈ [0, π]` about a unit `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngleAxis {
    pub angle: f64,
    pub axis: [f64; 3],
}

impl RotationAngleAxis {
    pub const CANONICAL_AXIS: [f64; 3] = [0.0, 1.0, 0.0];

    /// Rodrigues form `R = I + sin ω K + (1 − cos ω) K²`.
    pub fn to_matrix(&self) -> [[f64; 3]; 3] {
        let [x, y, z] = self.axis;
        let (s, c) = self.angle.sin_cos();
        let t = 1.0 - c;
        [
            [c + t * x * x, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, c + t * y * y, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, c + t * z * z],
        ]
    }

    pub fn to_lorentz(&self) -> LorentzMatrix {
        LorentzMatrix::from_rotation(self.to_matrix())
    }
}

/// Angle and axis of a pure spatial rotation embedded in a Lorentz matrix.
///
/// The angle comes from `atan2(|antisymmetric part|, (tr R − 1) / 2)`, which
/// is the same quantity as `arccos((tr R − 1)/2)` without the loss of precision
/// near 0 and π. Zero rotations report the axis `+y`.
pub fn rotation_angle_axis(w: &LorentzMatrix) -> Result<RotationAngleAxis> {
    let defect = w.rotation_defect();
    if defect > ROTATION_TOL {
        return Err(Error::contract(format!(
            "matrix is not a pure spatial rotation (first row/column defect {defect:e})"
        )));
    }
    let r = w.spatial_block();
    let trace = r[0][0] + r[1][1] + r[2][2];
    let cos = (trace - 1.0) / 2.0;
    // sin(angle) * axis
    let v = [
        (r[2][1] - r[1][2]) / 2.0,
        (r[0][2] - r[2][0]) / 2.0,
        (r[1][0] - r[0][1]) / 2.0,
    ];
    let sin = norm3(v);
    let angle = sin.atan2(cos);

    if sin < 1e-15 && cos > 0.0 {
        return Ok(RotationAngleAxis {
            angle: 0.0,
            axis: RotationAngleAxis::CANONICAL_AXIS,
        });
    }

    let axis = if cos >= 0.0 {
        v.map(|c| c / sin)
    } else {
        // (R + Rᵀ)/2 − cos I = (1 − cos) n nᵀ; take its best-conditioned column.
        let mut sym = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                sym[i][j] = (r[i][j] + r[j][i]) / 2.0 - if i == j { cos } else { 0.0 };
            }
        }
        let k = (0..3)
            .max_by(|&a, &b| sym[a][a].total_cmp(&sym[b][b]))
            .unwrap_or(1);
        let col = [sym[0][k], sym[1][k], sym[2][k]];
        let len = norm3(col);
        let mut n = col.map(|c| c / len);
        let orient = if sin > 1e-15 {
            dot3(n, v)
        } else {
            // angle π: n and −n describe the same rotation
            n[1] + 1e-3 * (n[0] + 1e-3 * n[2])
        };
        if orient < 0.0 {
            n = n.map(|c| -c);
        }
        n
    };
    Ok(RotationAngleAxis { angle, axis })
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
