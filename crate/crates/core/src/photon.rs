//! Photon polarization amplitudes and Bob's polarization observable.

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};

use crate::minkowski::{rotation_to_direction, FourVector, ThreeDirection};
use crate::{Complex64, Error, Result};

/// Relative tolerance for `k² = 0`, scaled by `(k⁰)²`.
pub const LIGHTLIKE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub const ALL: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Helicity {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }

    /// Position in the `[+1, −1]` basis ordering.
    pub fn index(self) -> usize {
        match self {
            Helicity::Plus => 0,
            Helicity::Minus => 1,
        }
    }
}

pub(crate) fn check_lightlike(k: &FourVector) -> Result<()> {
    if !(k.t > 0.0) {
        return Err(Error::NonPositiveEnergy(k.t));
    }
    let sq = k.square();
    if sq.abs() >= LIGHTLIKE_TOL * k.t * k.t {
        return Err(Error::NotLightlike(sq));
    }
    Ok(())
}

/// Photon propagation direction of a lightlike `k`.
pub fn photon_direction(k: &FourVector) -> Result<ThreeDirection> {
    check_lightlike(k)?;
    ThreeDirection::normalize(k.spatial())
}

/// `e_λ(k)` as contravariant components; the time component vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationAmplitude {
    pub helicity: Helicity,
    components: Vector4<Complex64>,
}

impl PolarizationAmplitude {
    pub fn components(&self) -> &Vector4<Complex64> {
        &self.components
    }

    pub fn spatial(&self) -> Vector3<Complex64> {
        Vector3::new(self.components[1], self.components[2], self.components[3])
    }

    /// Minkowski product with a real four-vector.
    pub fn dot(&self, v: &FourVector) -> Complex64 {
        let e = &self.components;
        e[0] * v.t - e[1] * v.x - e[2] * v.y - e[3] * v.z
    }

    /// Minkowski product `e*·e`.
    pub fn norm_sq(&self) -> Complex64 {
        let e = &self.components;
        e[0].conj() * e[0] - e[1].conj() * e[1] - e[2].conj() * e[2] - e[3].conj() * e[3]
    }
}

/// `e_λ(k) = (1/√2) R_{n_k} (0, −1, iλ, 0)ᵀ` with `R_{n_k}` from
/// [`rotation_to_direction`]`(n_k, a_k)`.
pub fn polarization_amplitude(
    k: &FourVector,
    helicity: Helicity,
    a_k: &ThreeDirection,
) -> Result<PolarizationAmplitude> {
    let n = photon_direction(k)?;
    let r = rotation_to_direction(&n, a_k)?.spatial_block();
    let standard = Vector3::new(
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, helicity.sign()),
        Complex64::new(0.0, 0.0),
    );
    let spatial = r.map(|x| Complex64::new(x, 0.0)) * standard / Complex64::new(2f64.sqrt(), 0.0);
    Ok(PolarizationAmplitude {
        helicity,
        components: Vector4::new(Complex64::new(0.0, 0.0), spatial[0], spatial[1], spatial[2]),
    })
}

/// Real linear-polarization vectors `ε_θ` and `ε_θ⊥ = ε_{θ+π/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPolarizationPair {
    pub parallel: Vector3<f64>,
    pub perpendicular: Vector3<f64>,
}

/// `ε_θ = (1/√2) Σ_λ e_λ e^{−iλθ}`, `ε_θ⊥ = (−i/√2) Σ_λ λ e_λ e^{−iλθ}`.
///
/// For `k` along x with `a_k = ẑ` this gives `−(0, sin θ, cos θ)` and
/// `−(0, cos θ, −sin θ)`; the overall sign cancels in every correlation.
pub fn linear_polarization_pair(
    k: &FourVector,
    theta: f64,
    a_k: &ThreeDirection,
) -> Result<LinearPolarizationPair> {
    let mut parallel = Vector3::<Complex64>::zeros();
    let mut perpendicular = Vector3::<Complex64>::zeros();
    for h in Helicity::ALL {
        let e = polarization_amplitude(k, h, a_k)?.spatial();
        let phase = Complex64::from_polar(1.0, -h.sign() * theta);
        parallel += e * phase;
        perpendicular += e * (phase * Complex64::new(0.0, -h.sign()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let parallel = parallel * Complex64::new(s, 0.0);
    let perpendicular = perpendicular * Complex64::new(s, 0.0);
    debug_assert!(parallel
        .iter()
        .chain(perpendicular.iter())
        .all(|z| z.im.abs() < 1e-12));
    Ok(LinearPolarizationPair {
        parallel: parallel.map(|z| z.re),
        perpendicular: perpendicular.map(|z| z.re),
    })
}

/// `f^{μν}_λ(k) = k^μ e^ν_λ − k^ν e^μ_λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldStrengthAmplitude(Matrix4<Complex64>);

impl FieldStrengthAmplitude {
    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }
}

pub fn field_strength(
    k: &FourVector,
    helicity: Helicity,
    a_k: &ThreeDirection,
) -> Result<FieldStrengthAmplitude> {
    let e = polarization_amplitude(k, helicity, a_k)?;
    let kv = k.to_vector().map(|x| Complex64::new(x, 0.0));
    let outer = kv * e.components().transpose();
    Ok(FieldStrengthAmplitude(outer - outer.transpose()))
}

/// `max |Σ_λ f*^{μν}_λ f^{μ'ν'}_λ − (η^{μν'}k^ν k^{μ'} + η^{νμ'}k^μ k^{ν'}
/// − η^{μμ'}k^ν k^{ν'} − η^{νν'}k^μ k^{μ'})|`.
pub fn completeness_residual(k: &FourVector, a_k: &ThreeDirection) -> Result<f64> {
    let fp = field_strength(k, Helicity::Plus, a_k)?.0;
    let fm = field_strength(k, Helicity::Minus, a_k)?.0;
    let eta = [1.0, -1.0, -1.0, -1.0];
    let g = |a: usize, b: usize| if a == b { eta[a] } else { 0.0 };
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            for mp in 0..4 {
                for np in 0..4 {
                    let lhs =
                        fp[(mu, nu)].conj() * fp[(mp, np)] + fm[(mu, nu)].conj() * fm[(mp, np)];
                    let rhs = g(mu, np) * k[nu] * k[mp] + g(nu, mp) * k[mu] * k[np]
                        - g(mu, mp) * k[nu] * k[np]
                        - g(nu, np) * k[mu] * k[mp];
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Polarization observable in the helicity basis ordered `[+1, −1]`:
/// entry `(λ', λ)` is `⟨λ'|Ŝ(θ)|λ⟩ = (1 − λλ')/2 · e^{i(λ' − λ)θ}`.
pub fn polarization_observable(theta: f64) -> Matrix2<Complex64> {
    let mut m = Matrix2::zeros();
    for out in Helicity::ALL {
        for inp in Helicity::ALL {
            let (lp, l) = (out.sign(), inp.sign());
            m[(out.index(), inp.index())] =
                Complex64::from_polar(0.5 * (1.0 - l * lp), (lp - l) * theta);
        }
    }
    m
}
