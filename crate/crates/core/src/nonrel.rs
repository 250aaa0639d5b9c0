//! Non-relativistic analog: a spin-1/2 fermion and a spin-1 boson coupled
//! to total spin 1/2.
//!
//! Product states use the basis `|m_f⟩ ⊗ |m_b⟩` with the fermion index
//! ordered `(+½, −½)` and the boson index `(1, 0, −1)`, flattened as
//! `3·f + b`.

use nalgebra::{Matrix2, Matrix3, SMatrix, SVector, Vector3};

use crate::decay::BlochVector;
use crate::dirac::{pauli_matrices, sigma_dot};
use crate::minkowski::{rotation_residual, rotation_to_direction, ThreeDirection};
use crate::{Complex64, Error, Result};

pub type ProductState = SVector<Complex64, 6>;
pub type ProductOperator = SMatrix<Complex64, 6, 6>;
pub type Spin1Matrix = Matrix3<Complex64>;

const UNIT_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pure state `α|↑⟩ + β|↓⟩` of total spin 1/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridSpinState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl HybridSpinState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(norm.sqrt()));
        }
        Ok(Self { alpha, beta })
    }

    /// State with `|α|² = (1+ξ₃)/2`, `|β|² = (1−ξ₃)/2`, `αβ* = (ξ₁ − iξ₂)/2`,
    /// choosing `α` real and non-negative.
    pub fn from_bloch(xi: &BlochVector) -> Result<Self> {
        let v = xi.as_vector();
        if (v.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(v.norm()));
        }
        let alpha = (0.5 * (1.0 + v.z)).max(0.0).sqrt();
        if alpha < 1e-8 {
            return Ok(Self {
                alpha: c(0.0),
                beta: c(1.0),
            });
        }
        let beta = Complex64::new(v.x, v.y) / (2.0 * alpha);
        Self::new(c(alpha), beta)
    }

    pub fn bloch(&self) -> Vector3<f64> {
        let cross = self.alpha * self.beta.conj();
        Vector3::new(
            2.0 * cross.re,
            -2.0 * cross.im,
            self.alpha.norm_sqr() - self.beta.norm_sqr(),
        )
    }

    pub fn embedded(&self) -> ProductState {
        let basis = cg_hybrid_states();
        basis.up.map(c) * self.alpha + basis.down.map(c) * self.beta
    }
}

/// Total-spin-1/2 states in the product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridBasis {
    pub up: SVector<f64, 6>,
    pub down: SVector<f64, 6>,
}

/// `|↑⟩ = √(2/3)|−½⟩|1⟩ − √(1/3)|½⟩|0⟩`,
/// `|↓⟩ = √(1/3)|−½⟩|0⟩ − √(2/3)|½⟩|−1⟩`.
pub fn cg_hybrid_states() -> HybridBasis {
    let (two, one) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    let mut up = SVector::<f64, 6>::zeros();
    let mut down = SVector::<f64, 6>::zeros();
    up[3] = two;
    up[1] = -one;
    down[4] = one;
    down[2] = -two;
    HybridBasis { up, down }
}

/// Spin-1 rotation matrix on the `(|1⟩, |0⟩, |−1⟩)` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spin1Rotation(Spin1Matrix);

impl Spin1Rotation {
    pub fn identity() -> Self {
        Self(Spin1Matrix::identity())
    }

    pub fn matrix(&self) -> &Spin1Matrix {
        &self.0
    }
}

/// Cartesian components of `|1⟩ = −(x̂+iŷ)/√2`, `|0⟩ = ẑ`, `|−1⟩ = (x̂−iŷ)/√2`
/// as columns.
fn spherical_basis() -> Spin1Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Spin1Matrix::new(
        c(-s),
        c(0.0),
        c(s),
        Complex64::new(0.0, -s),
        c(0.0),
        Complex64::new(0.0, -s),
        c(0.0),
        c(1.0),
        c(0.0),
    )
}

/// `𝒟⁽¹⁾(R) = U† R U` with `U` the spherical basis.
pub fn spin1_rotation(r: &Matrix3<f64>) -> Result<Spin1Rotation> {
    let residual = rotation_residual(r);
    if residual > 1e-10 {
        return Err(Error::NotRotation(residual));
    }
    let u = spherical_basis();
    Ok(Spin1Rotation(u.adjoint() * r.map(c) * u))
}

/// Phases applied to the rotated spin states, ordered `λ = (1, 0, −1)`.
/// They make `n_k = x̂`, `a_k = ẑ` reproduce the standard expansions
/// `|x̂,1⟩ = −½(|1⟩+√2|0⟩+|−1⟩)`, `|x̂,0⟩ = (|1⟩−|−1⟩)/√2`,
/// `|x̂,−1⟩ = ½(|1⟩−√2|0⟩+|−1⟩)`.
const HELICITY_PHASES: [f64; 3] = [1.0, -1.0, -1.0];

/// Spin-1 helicity states along `n_k`, ordered `λ = (1, 0, −1)`.
pub fn helicity_states(
    n_k: &ThreeDirection,
    a_k: &ThreeDirection,
) -> Result<[Vector3<Complex64>; 3]> {
    let r = rotation_to_direction(n_k, a_k)?.spatial_block();
    let d = spin1_rotation(&r)?;
    Ok([0, 1, 2].map(|j| d.0.column(j) * c(HELICITY_PHASES[j])))
}

/// `Ŝ_θ = |ε_θ⟩⟨ε_θ| − |ε_θ⊥⟩⟨ε_θ⊥|`, where
/// `|ε_θ⟩ = (e^{iθ}|n_k,1⟩ + e^{−iθ}|n_k,−1⟩)/√2` and `θ⊥ = θ + π/2`.
pub fn nonrel_polarization_observable(
    theta: f64,
    n_k: &ThreeDirection,
    a_k: &ThreeDirection,
) -> Result<Spin1Matrix> {
    let [plus, _, minus] = helicity_states(n_k, a_k)?;
    let linear = |t: f64| {
        (plus * Complex64::from_polar(1.0, t) + minus * Complex64::from_polar(1.0, -t))
            * c(std::f64::consts::FRAC_1_SQRT_2)
    };
    let par = linear(theta);
    let perp = linear(theta + std::f64::consts::FRAC_PI_2);
    Ok(par * par.adjoint() - perp * perp.adjoint())
}

/// `ρ = (1 + ξ·σ)/2` on `{|↑⟩, |↓⟩}`, embedded in the product space.
pub fn embedded_density(xi: &BlochVector) -> ProductOperator {
    let [id, ..] = pauli_matrices();
    let rho2: Matrix2<Complex64> = (id + sigma_dot(xi.as_vector())) * c(0.5);
    let basis = cg_hybrid_states();
    let mut b = SMatrix::<Complex64, 6, 2>::zeros();
    b.set_column(0, &basis.up.map(c));
    b.set_column(1, &basis.down.map(c));
    b * rho2 * b.adjoint()
}

/// `⟨2a·S ⊗ Ŝ_θ⟩` in the hybrid state with Bloch vector `ξ`, as a full
/// operator expectation value in the six-dimensional product space.
pub fn nonrel_correlation(
    xi: &BlochVector,
    a: &ThreeDirection,
    theta: f64,
    n_k: &ThreeDirection,
    a_k: &ThreeDirection,
) -> Result<f64> {
    let rho = embedded_density(xi);
    let observable =
        sigma_dot(a.as_vector()).kronecker(&nonrel_polarization_observable(theta, n_k, a_k)?);
    let value = (rho * observable).trace();
    debug_assert!(value.im.abs() < 1e-12);
    debug_assert!(
        *n_k != ThreeDirection::X
            || *a_k != ThreeDirection::Z
            || (value.re - nonrel_correlation_closed(xi, a, theta)).abs() < 1e-12
    );
    Ok(value.re)
}

/// Closed form for `n_k = x̂`, `a_k = ẑ`:
/// `(2/3)[(a₃ξ₃ − a₂ξ₂) cos 2θ + (a₂ξ₃ + a₃ξ₂) sin 2θ]`.
pub fn nonrel_correlation_closed(xi: &BlochVector, a: &ThreeDirection, theta: f64) -> f64 {
    let xi = xi.as_vector();
    let (s2, c2) = (2.0 * theta).sin_cos();
    2.0 / 3.0 * ((a.z() * xi.z - a.y() * xi.y) * c2 + (a.y() * xi.z + a.z() * xi.y) * s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::correlation_nonrel_limit;
    use crate::dirac::max_entry_norm;
    use crate::minkowski::LorentzTransform;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cg_states_orthonormal() {
        let b = cg_hybrid_states();
        assert_abs_diff_eq!(b.up.dot(&b.up), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.down.dot(&b.down), 1.0, epsilon = 1e-15);
        assert_eq!(b.up.dot(&b.down), 0.0);
        assert_abs_diff_eq!(b.up[3], (2.0f64 / 3.0).sqrt());
        assert_abs_diff_eq!(b.up[1], -(1.0f64 / 3.0).sqrt());
        assert_abs_diff_eq!(b.down[4], (1.0f64 / 3.0).sqrt());
        assert_abs_diff_eq!(b.down[2], -(2.0f64 / 3.0).sqrt());
    }

    #[test]
    fn bloch_round_trip() {
        for v in [
            Vector3::new(0.6, 0.0, 0.8),
            Vector3::new(-0.36, 0.48, 0.8),
            Vector3::new(0.0, 0.0, -1.0),
        ] {
            let xi = BlochVector::from_vector(v).unwrap();
            let state = HybridSpinState::from_bloch(&xi).unwrap();
            assert!((state.bloch() - v).norm() < 1e-12);
            assert_abs_diff_eq!(state.embedded().norm(), 1.0, epsilon = 1e-12);
        }
        assert!(HybridSpinState::from_bloch(&BlochVector::new(0.1, 0.0, 0.0).unwrap()).is_err());
        assert!(HybridSpinState::new(c(1.0), c(1.0)).is_err());
    }

    #[test]
    fn spin1_rotation_basics() {
        let id = spin1_rotation(&Matrix3::identity()).unwrap();
        assert!(max_entry_norm(&(id.matrix() - Spin1Rotation::identity().matrix())) < 1e-15);
        assert!(spin1_rotation(&(Matrix3::identity() * 2.0)).is_err());

        let r1 = LorentzTransform::rotation(
            &ThreeDirection::normalize(Vector3::new(1.0, 2.0, -0.5)).unwrap(),
            0.9,
        )
        .spatial_block();
        let r2 = LorentzTransform::rotation(&ThreeDirection::Y, 2.4).spatial_block();
        let d12 = spin1_rotation(&(r1 * r2)).unwrap();
        let d1 = spin1_rotation(&r1).unwrap();
        let d2 = spin1_rotation(&r2).unwrap();
        assert!(max_entry_norm(&(d12.matrix() - d1.matrix() * d2.matrix())) < 1e-12);
        assert!(
            max_entry_norm(&(d1.matrix() * d1.matrix().adjoint() - Spin1Matrix::identity()))
                < 1e-12
        );
    }

    #[test]
    fn x_axis_helicity_expansions() {
        let [p, z, m] = helicity_states(&ThreeDirection::X, &ThreeDirection::Z).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r2 = std::f64::consts::SQRT_2;
        let expect = [
            Vector3::new(-0.5, -0.5 * r2, -0.5),
            Vector3::new(s, 0.0, -s),
            Vector3::new(0.5, -0.5 * r2, 0.5),
        ];
        for (got, want) in [p, z, m].iter().zip(expect.iter()) {
            assert!((got - want.map(c)).norm() < 1e-12);
        }
    }

    #[test]
    fn observable_structure() {
        let (n_k, a_k) = (ThreeDirection::X, ThreeDirection::Z);
        for theta in [0.0, 0.4, 2.2, -1.3] {
            let s = nonrel_polarization_observable(theta, &n_k, &a_k).unwrap();
            assert!(max_entry_norm(&(s - s.adjoint())) < 1e-14);
            assert_abs_diff_eq!(s.trace().norm(), 0.0, epsilon = 1e-14);
            let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ev[1], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ev[2], 1.0, epsilon = 1e-12);
            let shifted =
                nonrel_polarization_observable(theta + std::f64::consts::PI, &n_k, &a_k).unwrap();
            assert!(max_entry_norm(&(s - shifted)) < 1e-14);
        }
    }

    #[test]
    fn linear_state_on_x_axis() {
        let [p, _, m] = helicity_states(&ThreeDirection::X, &ThreeDirection::Z).unwrap();
        let theta: f64 = 0.7;
        let eps = (p * Complex64::from_polar(1.0, theta) + m * Complex64::from_polar(1.0, -theta))
            * c(std::f64::consts::FRAC_1_SQRT_2);
        let i_sin = Complex64::new(0.0, -theta.sin() * std::f64::consts::FRAC_1_SQRT_2);
        let expect = Vector3::new(i_sin, c(-theta.cos()), i_sin);
        assert!((eps - expect).norm() < 1e-12);
    }

    #[test]
    fn correlation_examples() {
        let (n_k, a_k) = (ThreeDirection::X, ThreeDirection::Z);
        let up = BlochVector::from(ThreeDirection::Z);
        let c0 = nonrel_correlation(&up, &ThreeDirection::Z, 0.0, &n_k, &a_k).unwrap();
        assert_abs_diff_eq!(c0, 2.0 / 3.0, epsilon = 1e-12);

        let xi = BlochVector::new(0.3, -0.4, 0.5).unwrap();
        for theta in [0.0, 0.9, 2.0] {
            let cx = nonrel_correlation(&xi, &ThreeDirection::X, theta, &n_k, &a_k).unwrap();
            assert_abs_diff_eq!(cx, 0.0, epsilon = 1e-12);
        }

        for (polar, azimuth, theta) in [(0.4, 1.0, 0.2), (2.9, -2.0, 1.7)] {
            let a = ThreeDirection::from_angles(polar, azimuth);
            let value = nonrel_correlation(&up, &a, theta, &n_k, &a_k).unwrap();
            assert_abs_diff_eq!(
                value,
                2.0 / 3.0 * polar.sin() * (azimuth - 2.0 * theta).cos(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                1.5 * value,
                correlation_nonrel_limit(polar, azimuth, theta),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn operator_route_matches_closed_form() {
        let (n_k, a_k) = (ThreeDirection::X, ThreeDirection::Z);
        let xi = BlochVector::new(-0.2, 0.6, 0.3).unwrap();
        let a = ThreeDirection::normalize(Vector3::new(0.2, -0.7, 0.4)).unwrap();
        for theta in [-0.3, 0.5, 1.4, 3.0] {
            let op = nonrel_correlation(&xi, &a, theta, &n_k, &a_k).unwrap();
            assert_abs_diff_eq!(
                op,
                nonrel_correlation_closed(&xi, &a, theta),
                epsilon = 1e-12
            );
        }
    }
}
