//! Seeded random inputs for property checks and the self-test.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlation::MeasurementSettings;
use crate::decay::{cm_kinematics, BlochVector, DecayKinematics};
use crate::minkowski::{pure_boost, FourVector, LorentzTransform, ThreeDirection};
use crate::Result;

/// Reproducible source of random physical inputs.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// A complete random input for the general correlation routes.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationInput {
    pub kin: DecayKinematics,
    pub xi: BlochVector,
    pub settings: MeasurementSettings,
    pub a_k: ThreeDirection,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Uniform on the unit sphere.
    pub fn direction(&mut self) -> ThreeDirection {
        let z = self.uniform(-1.0, 1.0);
        let phi = self.uniform(0.0, std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        ThreeDirection::normalize(Vector3::new(r * phi.cos(), r * phi.sin(), z))
            .expect("sphere sample has unit length")
    }

    /// Uniform direction orthogonal to `n`.
    pub fn perpendicular_to(&mut self, n: &ThreeDirection) -> ThreeDirection {
        let u = n.perpendicular();
        let w = ThreeDirection::normalize(n.as_vector().cross(u.as_vector()))
            .expect("unit cross product");
        let t = self.uniform(0.0, std::f64::consts::TAU);
        ThreeDirection::normalize(u.as_vector() * t.cos() + w.as_vector() * t.sin())
            .expect("unit combination")
    }

    /// Direction of random length up to one, covering mixed states.
    pub fn bloch_vector(&mut self) -> BlochVector {
        let r = self.uniform(0.0, 1.0);
        BlochVector::from_vector(self.direction().into_vector() * r).expect("radius below one")
    }

    /// Proper rotation with angle in `[0, π)`.
    pub fn rotation(&mut self) -> LorentzTransform {
        let axis = self.direction();
        let angle = self.uniform(0.0, std::f64::consts::PI);
        LorentzTransform::rotation(&axis, angle)
    }

    /// Boost with rapidity in `[0, max_rapidity)` along a random axis.
    pub fn boost(&mut self, max_rapidity: f64) -> LorentzTransform {
        let axis = self.direction();
        let rapidity = self.uniform(0.0, max_rapidity);
        pure_boost(&axis, rapidity)
    }

    /// Rotation composed with a boost of rapidity below 2.
    pub fn lorentz_transform(&mut self) -> LorentzTransform {
        let r = self.rotation();
        let b = self.boost(2.0);
        b * r
    }

    /// On-shell momentum with `|p| < 3m`.
    pub fn on_shell(&mut self, m: f64) -> FourVector {
        let pv = self.direction().into_vector() * (3.0 * m * self.uniform(0.0, 1.0));
        FourVector::from_parts((m * m + pv.norm_squared()).sqrt(), pv)
    }

    /// Light-like momentum with energy in `[0.1, 5)`.
    pub fn lightlike(&mut self) -> FourVector {
        let k0 = self.uniform(0.1, 5.0);
        FourVector::from_parts(k0, self.direction().into_vector() * k0)
    }

    /// Decay with `m = 1`, `M/m ∈ (1, 10]`, seen from a randomly boosted
    /// frame.
    pub fn decay(&mut self) -> Result<DecayKinematics> {
        let ratio = 10.0 - self.uniform(0.0, 9.0 * (1.0 - 1e-3));
        let n_p = self.direction();
        let lt = self.lorentz_transform();
        cm_kinematics(ratio, 1.0, &n_p)?.transformed(&lt)
    }

    pub fn settings(&mut self) -> MeasurementSettings {
        let a = self.direction();
        let theta = self.uniform(0.0, std::f64::consts::TAU);
        MeasurementSettings::new(a, theta)
    }

    pub fn correlation_input(&mut self) -> Result<CorrelationInput> {
        let kin = self.decay()?;
        let xi = self.bloch_vector();
        let settings = self.settings();
        let n_k = ThreeDirection::normalize(kin.k().spatial())?;
        let a_k = self.perpendicular_to(&n_k);
        Ok(CorrelationInput {
            kin,
            xi,
            settings,
            a_k,
        })
    }

    /// Planar angles `(ψ, ς, φ, θ)`.
    pub fn planar_angles(&mut self) -> [f64; 4] {
        use std::f64::consts::{PI, TAU};
        [
            self.uniform(0.0, TAU),
            self.uniform(0.0, PI),
            self.uniform(0.0, TAU),
            self.uniform(0.0, TAU),
        ]
    }

    /// CHSH angles `(ς₁, φ₁, θ₁, ς₂, φ₂, θ₂)`.
    pub fn chsh_angles(&mut self) -> [f64; 6] {
        use std::f64::consts::{PI, TAU};
        let mut out = [0.0; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.uniform(0.0, if i % 3 == 0 { PI } else { TAU });
        }
        out
    }
}
