//! Four-vectors, rotations, boosts and Wigner rotations.
//!
//! Metric signature is `(+, -, -, -)`. Transformations act on contravariant
//! components `(t, x, y, z)`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Input validation tolerance for unit length and orthogonality.
pub const DIRECTION_TOL: f64 = 1e-10;

/// Relative tolerance for mass-shell checks.
pub const ON_SHELL_TOL: f64 = 1e-10;

/// The Minkowski metric `diag(1, -1, -1, -1)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn from_parts(t: f64, spatial: Vector3<f64>) -> Self {
        Self::new(t, spatial.x, spatial.y, spatial.z)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.t, self.x, self.y, self.z)
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// Minkowski inner product `a⁰b⁰ − a·b`.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    /// Minkowski square `v·v`.
    pub fn square(&self) -> f64 {
        self.dot(self)
    }

    /// Space inversion: `(t, x) -> (t, -x)`.
    pub fn parity_flip(&self) -> FourVector {
        Self::new(self.t, -self.x, -self.y, -self.z)
    }

    /// Covariant components `v_μ = η_μν v^ν`.
    pub fn lowered(&self) -> Vector4<f64> {
        self.parity_flip().to_vector()
    }

    /// Largest squared component, used to scale on-shell tolerances.
    pub(crate) fn scale_sq(&self) -> f64 {
        self.t
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
            .powi(2)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector::new(
            self.t + rhs.t,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector::new(
            self.t - rhs.t,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, mu: usize) -> &f64 {
        match mu {
            0 => &self.t,
            1 => &self.x,
            2 => &self.y,
            3 => &self.z,
            _ => panic!("four-vector index {mu} out of range"),
        }
    }
}

/// Check `p² = m²` (relative to the largest component squared), `p⁰ > 0`, `m > 0`.
pub(crate) fn check_on_shell(p: &FourVector, m: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::NonPositiveMass(m));
    }
    if !(p.t > 0.0) {
        return Err(Error::NonPositiveEnergy(p.t));
    }
    let actual = p.square();
    let expected = m * m;
    if (actual - expected).abs() > ON_SHELL_TOL * p.scale_sq().max(expected) {
        return Err(Error::OffShell { actual, expected });
    }
    Ok(())
}

/// A unit 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeDirection(Vector3<f64>);

impl ThreeDirection {
    pub const X: ThreeDirection = ThreeDirection(Vector3::new(1.0, 0.0, 0.0));
    pub const Y: ThreeDirection = ThreeDirection(Vector3::new(0.0, 1.0, 0.0));
    pub const Z: ThreeDirection = ThreeDirection(Vector3::new(0.0, 0.0, 1.0));

    /// Accepts vectors of unit length within [`DIRECTION_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self(v / norm))
    }

    /// Normalizes any finite nonzero vector.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self(v / norm))
    }

    /// `(cos ς, sin ς sin φ, sin ς cos φ)`: polar angle measured from the
    /// x axis (the photon direction in the planar configuration), azimuth
    /// measured from z towards y.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (s, c) = polar.sin_cos();
        Self(Vector3::new(c, s * azimuth.sin(), s * azimuth.cos()))
    }

    /// Inverse of [`ThreeDirection::from_angles`], with polar ∈ [0, π] and
    /// azimuth ∈ (-π, π]. The azimuth is 0 on the x axis.
    pub fn angles(&self) -> (f64, f64) {
        let polar = self.0.x.clamp(-1.0, 1.0).acos();
        let azimuth = if self.0.y == 0.0 && self.0.z == 0.0 {
            0.0
        } else {
            self.0.y.atan2(self.0.z)
        };
        (polar, azimuth)
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn into_vector(self) -> Vector3<f64> {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, v: &Vector3<f64>) -> f64 {
        self.0.dot(v)
    }

    /// A deterministic unit vector orthogonal to `self`.
    pub fn perpendicular(&self) -> ThreeDirection {
        let v = self.0;
        let (ax, ay, az) = (v.x.abs(), v.y.abs(), v.z.abs());
        let helper = if ax <= ay && ax <= az {
            Vector3::x()
        } else if ay <= az {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let w = helper - v * v.dot(&helper);
        Self(w.normalize())
    }
}

impl Neg for ThreeDirection {
    type Output = ThreeDirection;
    fn neg(self) -> ThreeDirection {
        ThreeDirection(-self.0)
    }
}

/// A proper orthochronous Lorentz transformation acting on contravariant
/// components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform(Matrix4<f64>);

impl LorentzTransform {
    pub const VALIDATION_TOL: f64 = 1e-10;

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Validates `ΛᵀηΛ = η`, `det Λ = 1`, `Λ⁰₀ ≥ 1`.
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let lt = Self(matrix);
        let scale = matrix.abs().max().max(1.0);
        let residual = lt.metric_residual();
        if residual > Self::VALIDATION_TOL * scale * scale {
            return Err(Error::NotLorentz(residual));
        }
        let det = matrix.determinant();
        if (det - 1.0).abs() > 1e-6 {
            return Err(Error::NotLorentz((det - 1.0).abs()));
        }
        if matrix[(0, 0)] < 1.0 - Self::VALIDATION_TOL {
            return Err(Error::NotLorentz(1.0 - matrix[(0, 0)]));
        }
        Ok(lt)
    }

    /// Embeds a 3×3 proper rotation.
    pub fn from_rotation_matrix(r: &Matrix3<f64>) -> Result<Self> {
        let residual = rotation_residual(r);
        if residual > Self::VALIDATION_TOL {
            return Err(Error::NotRotation(residual));
        }
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
        Ok(Self(m))
    }

    /// Active right-handed rotation by `angle` about `axis`.
    pub fn rotation(axis: &ThreeDirection, angle: f64) -> Self {
        let n = axis.as_vector();
        let k = n.cross_matrix();
        let (s, c) = angle.sin_cos();
        let r = Matrix3::identity() + k * s + k * k * (1.0 - c);
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn spatial_block(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        FourVector::from_vector(&(self.0 * v.to_vector()))
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let eta = metric();
        Self(eta * self.0.transpose() * eta)
    }

    /// `max |ΛᵀηΛ − η|`.
    pub fn metric_residual(&self) -> f64 {
        let eta = metric();
        (self.0.transpose() * eta * self.0 - eta).abs().max()
    }

    /// How far the time row and column are from those of a pure rotation.
    pub fn rotation_defect(&self) -> f64 {
        let mut d = (self.0[(0, 0)] - 1.0).abs();
        for i in 1..4 {
            d = d.max(self.0[(0, i)].abs()).max(self.0[(i, 0)].abs());
        }
        d
    }
}

impl Mul for LorentzTransform {
    type Output = LorentzTransform;
    fn mul(self, rhs: LorentzTransform) -> LorentzTransform {
        LorentzTransform(self.0 * rhs.0)
    }
}

impl Mul<FourVector> for &LorentzTransform {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        self.apply(&v)
    }
}

/// `max |RᵀR − 1|` plus the deviation of `det R` from 1.
pub(crate) fn rotation_residual(r: &Matrix3<f64>) -> f64 {
    (r.transpose() * r - Matrix3::identity()).abs().max() + (r.determinant() - 1.0).abs()
}

/// The rotation whose spatial block has columns `(a, n × a, n)`; it carries
/// the z axis onto `n` and the x axis onto `a`.
pub fn rotation_to_direction(n: &ThreeDirection, a: &ThreeDirection) -> Result<LorentzTransform> {
    let overlap = n.dot(a.as_vector());
    if overlap.abs() > DIRECTION_TOL {
        return Err(Error::NotOrthogonal(overlap));
    }
    let nv = n.as_vector();
    let av = a.as_vector();
    let r = Matrix3::from_columns(&[*av, nv.cross(av), *nv]);
    Ok(LorentzTransform(rotation_block(&r)))
}

fn rotation_block(r: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
    m
}

/// Boost along `n` with the given rapidity.
pub fn pure_boost(n: &ThreeDirection, rapidity: f64) -> LorentzTransform {
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let nv = n.as_vector();
    let mut m = Matrix4::zeros();
    m[(0, 0)] = ch;
    for i in 0..3 {
        m[(0, i + 1)] = sh * nv[i];
        m[(i + 1, 0)] = sh * nv[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[(i + 1, j + 1)] = delta + (ch - 1.0) * nv[i] * nv[j];
        }
    }
    LorentzTransform(m)
}

/// The rotation-free boost `L_p` with `L_p (m, 0, 0, 0) = p`.
pub fn standard_boost_massive(p: &FourVector, m: f64) -> Result<LorentzTransform> {
    check_on_shell(p, m)?;
    let pv = p.spatial();
    let mut l = Matrix4::zeros();
    l[(0, 0)] = p.t / m;
    for i in 0..3 {
        l[(0, i + 1)] = pv[i] / m;
        l[(i + 1, 0)] = pv[i] / m;
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            l[(i + 1, j + 1)] = delta + pv[i] * pv[j] / (m * (p.t + m));
        }
    }
    Ok(LorentzTransform(l))
}

/// `R(Λ, p) = L_{Λp}⁻¹ Λ L_p`, a pure rotation for on-shell `p`.
pub fn wigner_rotation(lt: &LorentzTransform, p: &FourVector, m: f64) -> Result<LorentzTransform> {
    let lp = standard_boost_massive(p, m)?;
    let moved = lt.apply(p);
    // Λp is on shell whenever p is; recompute its energy so that rounding in
    // large boosts does not trip the shell check.
    let moved = FourVector::from_parts(
        (m * m + moved.spatial().norm_squared()).sqrt(),
        moved.spatial(),
    );
    let lmoved = standard_boost_massive(&moved, m)?;
    let w = lmoved.inverse() * *lt * lp;
    debug_assert!(w.rotation_defect() < 1e-8 * lt.matrix().abs().max().powi(2));
    Ok(w)
}
