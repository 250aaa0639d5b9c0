//! Two-body decay `q → p + k` of a polarized spin-1/2 parent into a
//! spin-1/2 fermion and a photon.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::dirac::{gamma5, slash, slash_complex, BispinorMatrix};
use crate::minkowski::{
    check_on_shell, FourVector, LorentzTransform, ThreeDirection, ON_SHELL_TOL,
};
use crate::photon::{check_lightlike, polarization_amplitude, Helicity};
use crate::{Complex64, Error, Result};

/// Validated decay kinematics: `p² = m²`, `k² = 0`, `q = p + k`, `q² = M²`,
/// `M > m > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayKinematics {
    p: FourVector,
    k: FourVector,
    q: FourVector,
    mass: f64,
    parent_mass: f64,
}

impl DecayKinematics {
    pub fn new(p: FourVector, k: FourVector, mass: f64, parent_mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::NonPositiveMass(mass));
        }
        if !(parent_mass > mass) {
            return Err(Error::MassOrdering {
                parent: parent_mass,
                daughter: mass,
            });
        }
        check_on_shell(&p, mass)?;
        check_lightlike(&k)?;
        let q = p + k;
        check_on_shell(&q, parent_mass)?;
        let kp = k.dot(&p);
        let expected = 0.5 * (parent_mass * parent_mass - mass * mass);
        if (kp - expected).abs() > ON_SHELL_TOL * q.scale_sq() {
            return Err(Error::OffShell {
                actual: q.square(),
                expected: parent_mass * parent_mass,
            });
        }
        Ok(Self {
            p,
            k,
            q,
            mass,
            parent_mass,
        })
    }

    /// Fermion four-momentum.
    pub fn p(&self) -> FourVector {
        self.p
    }

    /// Photon four-momentum.
    pub fn k(&self) -> FourVector {
        self.k
    }

    /// Parent four-momentum.
    pub fn q(&self) -> FourVector {
        self.q
    }

    /// Fermion mass `m`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Parent mass `M`.
    pub fn parent_mass(&self) -> f64 {
        self.parent_mass
    }

    /// `k·p = (M² − m²)/2`.
    pub fn kp(&self) -> f64 {
        self.k.dot(&self.p)
    }

    /// The same decay seen from another inertial frame.
    pub fn transformed(&self, lt: &LorentzTransform) -> Result<Self> {
        let p = lt.apply(&self.p);
        let k = lt.apply(&self.k);
        Self::new(p, k, self.mass, self.parent_mass)
    }
}

/// Parent rest frame with the fermion moving along `n_p`:
/// `k⁰ = (M² − m²)/2M`, `p⁰ = (M² + m²)/2M`, `k = −p`.
pub fn cm_kinematics(parent_mass: f64, mass: f64, n_p: &ThreeDirection) -> Result<DecayKinematics> {
    if !(mass > 0.0) {
        return Err(Error::NonPositiveMass(mass));
    }
    if !(parent_mass > mass) {
        return Err(Error::MassOrdering {
            parent: parent_mass,
            daughter: mass,
        });
    }
    let k0 = (parent_mass * parent_mass - mass * mass) / (2.0 * parent_mass);
    let p0 = (parent_mass * parent_mass + mass * mass) / (2.0 * parent_mass);
    let n = *n_p.as_vector();
    let p = FourVector::from_parts(p0, n * k0);
    let k = FourVector::from_parts(k0, -n * k0);
    DecayKinematics::new(p, k, mass, parent_mass)
}

/// Photon along x with energy `k0`, fermion momentum `m√x (cos ψ, sin ψ, 0)`.
/// The parent mass follows from `q = p + k`.
pub fn planar_kinematics(mass: f64, x: f64, psi: f64, k0: f64) -> Result<DecayKinematics> {
    if !(mass > 0.0) {
        return Err(Error::NonPositiveMass(mass));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "x must be finite and non-negative, got {x}"
        )));
    }
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::NonPositiveEnergy(k0));
    }
    let pabs = mass * x.sqrt();
    let p = FourVector::new(
        mass * (x + 1.0).sqrt(),
        pabs * psi.cos(),
        pabs * psi.sin(),
        0.0,
    );
    let k = FourVector::new(k0, k0, 0.0, 0.0);
    // M² = m² + 2 k·p, with k·p evaluated without cancellation
    let kp = k0 * (p.t - p.x);
    let kp = if kp > 0.0 {
        kp
    } else {
        k0 * mass * mass / (p.t + p.x)
    };
    let parent_mass = (mass * mass + 2.0 * kp).sqrt();
    DecayKinematics::new(p, k, mass, parent_mass)
}

/// Parent polarization vector `ξ` with `|ξ| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    pub const UNPOLARIZED: BlochVector = BlochVector(Vector3::new(0.0, 0.0, 0.0));

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let len = v.norm();
        if !len.is_finite() || len > 1.0 + 1e-12 {
            return Err(Error::BlochOutOfRange(len));
        }
        Ok(Self(v))
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }
}

impl From<ThreeDirection> for BlochVector {
    fn from(d: ThreeDirection) -> Self {
        BlochVector(d.into_vector())
    }
}

/// Mean Pauli–Lubanski vector of the parent:
/// `w⁰ = q·ξ/2`, `w = (M ξ + q (q·ξ)/(M + q⁰))/2`.
pub fn pauli_lubanski_mean(kin: &DecayKinematics, xi: &BlochVector) -> FourVector {
    let q = kin.q();
    let big_m = kin.parent_mass();
    let qv = q.spatial();
    let qxi = qv.dot(xi.as_vector());
    let w = (xi.as_vector() * big_m + qv * (qxi / (big_m + q.t))) * 0.5;
    FourVector::from_parts(0.5 * qxi, w)
}

/// `ρ = (1/8)(1 + q̸/M)(1 + 2γ⁵ w̸/M)(1 + q̸/M)`.
pub fn parent_density(kin: &DecayKinematics, xi: &BlochVector) -> BispinorMatrix {
    let big_m = Complex64::new(kin.parent_mass(), 0.0);
    let id = BispinorMatrix::identity();
    let proj = id + slash(&kin.q()) / big_m;
    let spin = spin_factor(kin, xi);
    proj * spin * proj / Complex64::new(8.0, 0.0)
}

/// `1 + 2γ⁵ w̸/M`, the polarization factor sandwiched inside `ρ`.
pub fn spin_factor(kin: &DecayKinematics, xi: &BlochVector) -> BispinorMatrix {
    let w = pauli_lubanski_mean(kin, xi);
    BispinorMatrix::identity() + gamma5() * slash(&w) * Complex64::new(2.0 / kin.parent_mass(), 0.0)
}

/// Relative inner parity of parent and daughter fermion. `Opposite`
/// selects the primed hybrid states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerParity {
    #[default]
    Equal,
    Opposite,
}

impl InnerParity {
    /// Sign the parity choice imprints on the correlation function.
    pub fn correlation_sign(self) -> f64 {
        match self {
            InnerParity::Equal => 1.0,
            InnerParity::Opposite => -1.0,
        }
    }
}

/// Decay vertex bracket contracted with the photon amplitude `e_λ`:
///
/// ```text
/// Equal:    (m + M) k̸ e̸ + 2(kp) e̸ − 2(e·p) k̸
/// Opposite: γ⁵ [(m − M) k̸ e̸ + 2(kp) e̸ − 2(e·p) k̸]
/// ```
pub fn hybrid_vertex(
    kin: &DecayKinematics,
    helicity: Helicity,
    a_k: &ThreeDirection,
    parity: InnerParity,
) -> Result<BispinorMatrix> {
    let e = polarization_amplitude(&kin.k(), helicity, a_k)?;
    let ks = slash(&kin.k());
    let es = slash_complex(e.components());
    let kp = Complex64::new(kin.kp(), 0.0);
    let ep = e.dot(&kin.p());
    let two = Complex64::new(2.0, 0.0);
    let tail = es * kp * two - ks * ep * two;
    let (m, big_m) = (kin.mass(), kin.parent_mass());
    Ok(match parity {
        InnerParity::Equal => ks * es * Complex64::new(m + big_m, 0.0) + tail,
        InnerParity::Opposite => gamma5() * (ks * es * Complex64::new(m - big_m, 0.0) + tail),
    })
}
