//! Fermion–photon spin/polarization correlation function.
//!
//! Two independent routes are provided for arbitrary kinematics: a
//! gamma-matrix trace ([`correlation_trace`]) and the closed vector form
//! ([`correlation_closed`]). The c.m. reduction, the planar parametrized
//! form and its two limits are cheap special cases.

use nalgebra::Vector3;
use serde::Serialize;

use crate::decay::{
    hybrid_vertex, planar_kinematics, spin_factor, BlochVector, DecayKinematics, InnerParity,
};
use crate::dirac::{spin_projection_bilinear, v_amplitude, BispinorMatrix, DiracAdjoint};
use crate::minkowski::{FourVector, ThreeDirection};
use crate::photon::{linear_polarization_pair, Helicity};
use crate::{Complex64, Error, Result};

/// Alice's spin axis `a` and Bob's polarizer angle `θ` (radians).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementSettings {
    pub a: ThreeDirection,
    pub theta: f64,
}

impl MeasurementSettings {
    pub fn new(a: ThreeDirection, theta: f64) -> Self {
        Self { a, theta }
    }

    /// `a = (cos ς, sin ς sin φ, sin ς cos φ)`.
    pub fn from_angles(polar: f64, azimuth: f64, theta: f64) -> Self {
        Self {
            a: ThreeDirection::from_angles(polar, azimuth),
            theta,
        }
    }
}

/// Largest tolerated imaginary part of the trace route, relative to `1 + |C|`.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Correlation via Dirac traces:
///
/// ```text
/// C = Σ_λ e^{−2iλθ} tr{ B̄_{−λ} ρ̃ B_λ X(a) } / Σ_λ tr{ B̄_λ ρ̃ B_λ v v̄ }
/// ```
///
/// with `B_λ` the decay vertex, `ρ̃ = 1 + 2γ⁵w̸/M` and `X(a) = v (a·σ)ᵀ v̄`.
/// The denominator equals `16 M (kp)²/m`; it is evaluated rather than
/// hard-coded so the route carries its own normalization.
pub fn correlation_trace(
    kin: &DecayKinematics,
    xi: &BlochVector,
    s: &MeasurementSettings,
    a_k: &ThreeDirection,
    parity: InnerParity,
) -> Result<f64> {
    let (p, m) = (kin.p(), kin.mass());
    let x_spin = spin_projection_bilinear(&p, m, &s.a)?;
    let v = v_amplitude(&p, m)?;
    let x_unit: BispinorMatrix = v * v.dirac_adjoint();
    let rho = spin_factor(kin, xi);

    let mut vertices = [BispinorMatrix::zeros(); 2];
    for h in Helicity::ALL {
        vertices[h.index()] = hybrid_vertex(kin, h, a_k, parity)?;
    }
    let bar = vertices.map(|b| b.dirac_adjoint());

    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for h in Helicity::ALL {
        let b = &vertices[h.index()];
        let phase = Complex64::from_polar(1.0, -2.0 * h.sign() * s.theta);
        num += phase * (bar[h.flipped().index()] * rho * b * x_spin).trace();
        den += (bar[h.index()] * rho * b * x_unit).trace();
    }
    debug_assert!({
        let kp = kin.kp();
        let expected = 16.0 * kin.parent_mass() * kp * kp / m;
        (den - expected).norm() < 1e-8 * expected
    });
    let c = num / den;
    if !c.re.is_finite() {
        return Err(Error::NonFinite(c.re));
    }
    if c.im.abs() > IMAGINARY_TOL * (1.0 + c.re.abs()) {
        return Err(Error::ImaginaryResidue {
            residue: c.im,
            value: c.re,
        });
    }
    Ok(c.re)
}

/// `α = (kp)(M+p⁰+k⁰) ξ + [(M+p⁰)(k·ξ) − k⁰(p·ξ)] p`.
pub fn alpha_vector(kin: &DecayKinematics, xi: &BlochVector) -> Vector3<f64> {
    let (p, k) = (kin.p(), kin.k());
    let (pv, kv) = (p.spatial(), k.spatial());
    let xi = xi.as_vector();
    let big_m = kin.parent_mass();
    xi * (kin.kp() * (big_m + p.t + k.t)) + pv * ((big_m + p.t) * kv.dot(xi) - k.t * pv.dot(xi))
}

/// `β = (kp) a + [(a·k) − k⁰(a·p)/(m+p⁰)] p`.
pub fn beta_vector(kin: &DecayKinematics, a: &ThreeDirection) -> Vector3<f64> {
    let (p, k) = (kin.p(), kin.k());
    let pv = p.spatial();
    let av = a.as_vector();
    av * kin.kp() + pv * (a.dot(&k.spatial()) - k.t * a.dot(&pv) / (kin.mass() + p.t))
}

/// `C = [(α·ε_θ)(β·ε_θ) − (α·ε_θ⊥)(β·ε_θ⊥)] / [(kp)²(M+k⁰+p⁰)]`,
/// with the sign flipped for opposite inner parity.
pub fn correlation_closed(
    kin: &DecayKinematics,
    xi: &BlochVector,
    s: &MeasurementSettings,
    a_k: &ThreeDirection,
    parity: InnerParity,
) -> Result<f64> {
    let eps = linear_polarization_pair(&kin.k(), s.theta, a_k)?;
    let alpha = alpha_vector(kin, xi);
    let beta = beta_vector(kin, &s.a);
    let kp = kin.kp();
    let norm = kp * kp * (kin.parent_mass() + kin.k().t + kin.p().t);
    let value = (alpha.dot(&eps.parallel) * beta.dot(&eps.parallel)
        - alpha.dot(&eps.perpendicular) * beta.dot(&eps.perpendicular))
        / norm;
    Ok(parity.correlation_sign() * value)
}

/// Parent rest frame: `C = (a·ε_θ)(ξ·ε_θ) − (a·ε_θ⊥)(ξ·ε_θ⊥)`,
/// independent of the momenta.
pub fn correlation_cm(
    xi: &BlochVector,
    s: &MeasurementSettings,
    n_k: &ThreeDirection,
    a_k: &ThreeDirection,
) -> Result<f64> {
    let k = FourVector::from_parts(1.0, *n_k.as_vector());
    let eps = linear_polarization_pair(&k, s.theta, a_k)?;
    let (a, xi) = (s.a.as_vector(), xi.as_vector());
    Ok(a.dot(&eps.parallel) * xi.dot(&eps.parallel)
        - a.dot(&eps.perpendicular) * xi.dot(&eps.perpendicular))
}

/// Planar configuration with `ξ = ẑ`, photon along x, fermion at angle
/// `ψ` in the xy-plane and `x = (|p|/m)²`:
///
/// ```text
/// sin ς cos(φ − 2θ) + √x/(√(x+1) − √x cos ψ)
///     · [cos ς − √x/(√(x+1) + 1) (cos ς cos ψ + sin ς sin ψ sin φ)] sin ψ sin 2θ
/// ```
///
/// Negative `x` yields NaN.
pub fn correlation_planar(x: f64, psi: f64, polar: f64, azimuth: f64, theta: f64) -> f64 {
    let (sx, sx1) = (x.sqrt(), (x + 1.0).sqrt());
    let (ss, cs) = polar.sin_cos();
    let (sp, cp) = psi.sin_cos();
    let lead = ss * (azimuth - 2.0 * theta).cos();
    if sp == 0.0 {
        return lead;
    }
    let bracket = cs - sx / (sx1 + 1.0) * (cs * cp + ss * sp * azimuth.sin());
    lead + sx / (sx1 - sx * cp) * bracket * sp * (2.0 * theta).sin()
}

/// `x → ∞` limit of [`correlation_planar`]:
/// `sin ς cos φ cos 2θ + sin 2θ (cos ς sin ψ − sin ς cos ψ sin φ)`.
pub fn correlation_ultrarel(polar: f64, azimuth: f64, psi: f64, theta: f64) -> f64 {
    let (ss, cs) = polar.sin_cos();
    ss * azimuth.cos() * (2.0 * theta).cos()
        + (2.0 * theta).sin() * (cs * psi.sin() - ss * psi.cos() * azimuth.sin())
}

/// `x → 0` limit of [`correlation_planar`]: `sin ς cos(φ − 2θ)`.
pub fn correlation_nonrel_limit(polar: f64, azimuth: f64, theta: f64) -> f64 {
    polar.sin() * (azimuth - 2.0 * theta).cos()
}

/// Both general routes evaluated on the planar configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualEvaluation {
    pub closed: f64,
    pub trace: f64,
}

impl DualEvaluation {
    pub fn difference(&self) -> f64 {
        (self.closed - self.trace).abs()
    }
}

/// Evaluates the closed form and the trace route on
/// `planar_kinematics(m = 1, x, ψ, k0)` with `ξ = ẑ` and `a_k = ẑ`.
pub fn planar_dual(x: f64, psi: f64, s: &MeasurementSettings, k0: f64) -> Result<DualEvaluation> {
    let kin = planar_kinematics(1.0, x, psi, k0)?;
    let xi = BlochVector::from(ThreeDirection::Z);
    let a_k = ThreeDirection::Z;
    Ok(DualEvaluation {
        closed: correlation_closed(&kin, &xi, s, &a_k, InnerParity::Equal)?,
        trace: correlation_trace(&kin, &xi, s, &a_k, InnerParity::Equal)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::cm_kinematics;
    use crate::minkowski::pure_boost;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn boosted_kinematics() -> DecayKinematics {
        let n_p = ThreeDirection::normalize(Vector3::new(0.4, -0.2, 0.9)).unwrap();
        cm_kinematics(3.1, 1.0, &n_p)
            .unwrap()
            .transformed(&pure_boost(
                &ThreeDirection::normalize(Vector3::new(-1.0, 0.5, 0.2)).unwrap(),
                0.8,
            ))
            .unwrap()
    }

    #[test]
    fn trace_and_closed_agree() {
        let kin = boosted_kinematics();
        let a_k = ThreeDirection::normalize(kin.k().spatial())
            .unwrap()
            .perpendicular();
        let xi = BlochVector::new(0.1, -0.6, 0.5).unwrap();
        for (i, theta) in [0.0, 0.4, 1.9, -2.5].into_iter().enumerate() {
            let s = MeasurementSettings::from_angles(0.3 + i as f64, 1.1 * i as f64, theta);
            for parity in [InnerParity::Equal, InnerParity::Opposite] {
                let c1 = correlation_closed(&kin, &xi, &s, &a_k, parity).unwrap();
                let c2 = correlation_trace(&kin, &xi, &s, &a_k, parity).unwrap();
                assert_abs_diff_eq!(c1, c2, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn opposite_parity_flips_sign() {
        let kin = boosted_kinematics();
        let a_k = ThreeDirection::normalize(kin.k().spatial())
            .unwrap()
            .perpendicular();
        let xi = BlochVector::new(0.0, 0.3, 0.9).unwrap();
        let s = MeasurementSettings::from_angles(1.0, 2.0, 0.7);
        let c = correlation_trace(&kin, &xi, &s, &a_k, InnerParity::Equal).unwrap();
        let cp = correlation_trace(&kin, &xi, &s, &a_k, InnerParity::Opposite).unwrap();
        assert_abs_diff_eq!(c, -cp, epsilon = 1e-12);
    }

    #[test]
    fn cm_examples() {
        let n_k = ThreeDirection::X;
        let a_k = ThreeDirection::Z;
        let theta = 0.6;
        let k = FourVector::new(1.0, 1.0, 0.0, 0.0);
        let eps = linear_polarization_pair(&k, theta, &a_k).unwrap();
        let par = ThreeDirection::from_vector(eps.parallel).unwrap();
        let perp = ThreeDirection::from_vector(eps.perpendicular).unwrap();

        let s = MeasurementSettings::new(par, theta);
        assert_abs_diff_eq!(
            correlation_cm(&BlochVector::from(par), &s, &n_k, &a_k).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            correlation_cm(&BlochVector::from(perp), &s, &n_k, &a_k).unwrap(),
            0.0,
            epsilon = 1e-14
        );

        // the closed form in the rest frame reduces to the same expression
        let kin = cm_kinematics(2.5, 1.0, &-n_k).unwrap();
        let xi = BlochVector::new(0.2, 0.5, -0.4).unwrap();
        let s = MeasurementSettings::from_angles(0.8, 2.1, theta);
        let c_cm = correlation_cm(&xi, &s, &n_k, &a_k).unwrap();
        let c = correlation_closed(&kin, &xi, &s, &a_k, InnerParity::Equal).unwrap();
        assert_abs_diff_eq!(c, c_cm, epsilon = 1e-12);

        let c_trace = correlation_trace(
            &kin,
            &BlochVector::from(par),
            &MeasurementSettings::new(par, theta),
            &a_k,
            InnerParity::Equal,
        )
        .unwrap();
        assert_abs_diff_eq!(c_trace, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cm_matches_nonrel_limit_in_planar_setup() {
        let xi = BlochVector::from(ThreeDirection::Z);
        for (polar, azimuth, theta) in [
            (0.3, 1.2, 2.0),
            (2.0, -0.5, 0.1),
            (FRAC_PI_4, FRAC_PI_4, FRAC_PI_3),
        ] {
            let s = MeasurementSettings::from_angles(polar, azimuth, theta);
            let c = correlation_cm(&xi, &s, &ThreeDirection::X, &ThreeDirection::Z).unwrap();
            assert_abs_diff_eq!(
                c,
                correlation_nonrel_limit(polar, azimuth, theta),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn alpha_is_along_xi_in_planar_setup() {
        let kin = planar_kinematics(1.0, 2.0, 0.7, 3.0).unwrap();
        let alpha = alpha_vector(&kin, &BlochVector::from(ThreeDirection::Z));
        assert_eq!((alpha.x, alpha.y), (0.0, 0.0));

        let a = ThreeDirection::from_angles(0.9, 0.4);
        let b1 = beta_vector(&kin, &a) / kin.kp();
        let kin2 = planar_kinematics(1.0, 2.0, 0.7, 30.0).unwrap();
        let b2 = beta_vector(&kin2, &a) / kin2.kp();
        assert!((b1 - b2).norm() < 1e-12);
    }

    #[test]
    fn planar_formula_examples() {
        let c = correlation_planar(1.36, FRAC_PI_3, FRAC_PI_4, FRAC_PI_4, FRAC_PI_3);
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-3);
        for (polar, azimuth, theta) in [(0.2, 0.4, 0.6), (2.5, -1.0, 3.0)] {
            let lim = correlation_nonrel_limit(polar, azimuth, theta);
            assert_eq!(correlation_planar(0.0, 1.1, polar, azimuth, theta), lim);
            assert_eq!(correlation_planar(7.0, 0.0, polar, azimuth, theta), lim);
        }
        assert_abs_diff_eq!(
            correlation_ultrarel(0.7, 0.3, 0.0, 0.0),
            0.7f64.sin() * 0.3f64.cos(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            correlation_ultrarel(0.0, 0.3, 0.9, 0.4),
            0.8f64.sin() * 0.9f64.sin(),
            epsilon = 1e-15
        );
        assert!(correlation_planar(-1.0, 0.5, 0.5, 0.5, 0.5).is_nan());
    }

    #[test]
    fn planar_formula_matches_general_routes() {
        for (x, psi, polar, azimuth, theta) in [
            (1.0 / 3.0, FRAC_PI_3, 2.0 * FRAC_PI_3, 1.5 * PI, FRAC_PI_4),
            (4.2, -2.0, 1.0, 0.3, 2.2),
            (0.01, 0.5, 0.1, 4.0, -1.0),
        ] {
            let s = MeasurementSettings::from_angles(polar, azimuth, theta);
            let dual = planar_dual(x, psi, &s, 1.0).unwrap();
            let c = correlation_planar(x, psi, polar, azimuth, theta);
            assert_abs_diff_eq!(dual.closed, c, epsilon = 1e-12);
            assert!(dual.difference() < 1e-10);
        }
    }

    #[test]
    fn figure_two_minimum_value() {
        let c = correlation_planar(1.0 / 3.0, FRAC_PI_3, 2.0 * FRAC_PI_3, 1.5 * PI, FRAC_PI_4);
        assert_abs_diff_eq!(c, -1.0, epsilon = 1e-12);
        let c0 = correlation_planar(0.0, FRAC_PI_3, 2.0 * FRAC_PI_3, 1.5 * PI, FRAC_PI_4);
        assert_abs_diff_eq!(c0, -(3f64.sqrt()) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ultrarel_tail_converges() {
        let (psi, polar, azimuth, theta) = (0.8, 1.3, 2.4, 0.35);
        let lim = correlation_ultrarel(polar, azimuth, psi, theta);
        let gaps: Vec<f64> = [1e4, 1e6, 1e8]
            .iter()
            .map(|&x| (correlation_planar(x, psi, polar, azimuth, theta) - lim).abs())
            .collect();
        assert!(gaps[0] >= gaps[1] && gaps[1] >= gaps[2]);
        assert!(gaps[2] < 1e-3);
    }

    #[test]
    fn closed_is_pi_periodic_in_theta() {
        let kin = boosted_kinematics();
        let a_k = ThreeDirection::normalize(kin.k().spatial())
            .unwrap()
            .perpendicular();
        let xi = BlochVector::new(0.5, 0.5, 0.5).unwrap();
        let s = MeasurementSettings::from_angles(1.2, 0.4, 0.3);
        let s2 = MeasurementSettings {
            theta: s.theta + PI,
            ..s
        };
        let c1 = correlation_closed(&kin, &xi, &s, &a_k, InnerParity::Equal).unwrap();
        let c2 = correlation_closed(&kin, &xi, &s2, &a_k, InnerParity::Equal).unwrap();
        assert_abs_diff_eq!(c1, c2, epsilon = 1e-12);
    }
}
