//! Gamma matrices in the chiral representation, bispinor amplitudes `v(p)`
//! and the bispinor representation of rotations and boosts.
//!
//! Layout (2×2 blocks):
//!
//! ```text
//! γ⁰ = [[0, 1], [1, 0]]   γⁱ = [[0, -σᵢ], [σᵢ, 0]]   γ⁵ = [[1, 0], [0, -1]]
//! ```

use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix, Vector3, Vector4};

use crate::minkowski::{
    check_on_shell, rotation_residual, standard_boost_massive, wigner_rotation, FourVector,
    LorentzTransform, ThreeDirection,
};
use crate::{Complex64, Error, Result};

pub type SpinorMatrix = Matrix2<Complex64>;
pub type BispinorMatrix = Matrix4<Complex64>;
/// Bispinor index × spin index.
pub type BispinorAmplitude = SMatrix<Complex64, 4, 2>;

/// Largest entry modulus, the norm used for all matrix residuals.
pub fn max_entry_norm<const R: usize, const C: usize>(m: &SMatrix<Complex64, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `[σ₀, σ₁, σ₂, σ₃]` with `σ₀ = 1`.
pub fn pauli_matrices() -> [SpinorMatrix; 4] {
    [
        Matrix2::new(ONE, ZERO, ZERO, ONE),
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// `v·σ` for a real 3-vector.
pub fn sigma_dot(v: &Vector3<f64>) -> SpinorMatrix {
    Matrix2::new(
        re(v.z),
        Complex64::new(v.x, -v.y),
        Complex64::new(v.x, v.y),
        re(-v.z),
    )
}

fn blocks(
    tl: &SpinorMatrix,
    tr: &SpinorMatrix,
    bl: &SpinorMatrix,
    br: &SpinorMatrix,
) -> BispinorMatrix {
    let mut m = BispinorMatrix::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(tl);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(tr);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(bl);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(br);
    m
}

/// `γ^μ` for `μ ∈ {0, 1, 2, 3}`.
pub fn gamma(mu: usize) -> Result<BispinorMatrix> {
    let s = pauli_matrices();
    let z = SpinorMatrix::zeros();
    match mu {
        0 => Ok(blocks(&z, &s[0], &s[0], &z)),
        1..=3 => Ok(blocks(&z, &(-s[mu]), &s[mu], &z)),
        _ => Err(Error::GammaIndex(mu)),
    }
}

/// All four `γ^μ`.
pub fn gammas() -> [BispinorMatrix; 4] {
    [0, 1, 2, 3].map(|mu| gamma(mu).expect("index in range"))
}

pub fn gamma5() -> BispinorMatrix {
    let s = pauli_matrices();
    let z = SpinorMatrix::zeros();
    blocks(&s[0], &z, &z, &(-s[0]))
}

/// `p̸ = p_μ γ^μ = p⁰γ⁰ − p·γ`.
pub fn slash(p: &FourVector) -> BispinorMatrix {
    slash_complex(&p.to_vector().map(re))
}

/// Slash of a complex four-vector given by contravariant components.
pub fn slash_complex(e: &Vector4<Complex64>) -> BispinorMatrix {
    let g = gammas();
    g[0] * e[0] - g[1] * e[1] - g[2] * e[2] - g[3] * e[3]
}

/// The covariant fermion amplitude
/// `v(p) = [2√(1 + p⁰/m)]⁻¹ ((1 + pσ/m)σ₂ ; (1 + p^π σ/m)σ₂)` with
/// `pσ = p⁰ + p·σ`.
pub fn v_amplitude(p: &FourVector, m: f64) -> Result<BispinorAmplitude> {
    check_on_shell(p, m)?;
    let s = pauli_matrices();
    let norm = 1.0 / (2.0 * (1.0 + p.t / m).sqrt());
    let ps = sigma_dot(&p.spatial());
    let upper = (s[0] * re(1.0 + p.t / m) + ps / re(m)) * s[2];
    let lower = (s[0] * re(1.0 + p.t / m) - ps / re(m)) * s[2];
    let mut v = BispinorAmplitude::zeros();
    v.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&(upper * re(norm)));
    v.fixed_view_mut::<2, 2>(2, 0)
        .copy_from(&(lower * re(norm)));
    Ok(v)
}

/// Dirac conjugation.
pub trait DiracAdjoint {
    type Output;
    fn dirac_adjoint(&self) -> Self::Output;
}

impl DiracAdjoint for BispinorMatrix {
    type Output = BispinorMatrix;

    /// `γ⁰ A† γ⁰`.
    fn dirac_adjoint(&self) -> BispinorMatrix {
        let g0 = gammas()[0];
        g0 * self.adjoint() * g0
    }
}

impl DiracAdjoint for BispinorAmplitude {
    type Output = SMatrix<Complex64, 2, 4>;

    /// `v̄ = v† γ⁰`.
    fn dirac_adjoint(&self) -> Self::Output {
        self.adjoint() * gammas()[0]
    }
}

/// `v(p) (a·σ)ᵀ v̄(p)` by direct matrix product.
///
/// In debug builds the four-term closed form
/// ([`spin_projection_closed_form`]) is checked against the product.
pub fn spin_projection_bilinear(
    p: &FourVector,
    m: f64,
    a: &ThreeDirection,
) -> Result<BispinorMatrix> {
    let v = v_amplitude(p, m)?;
    let direct = v * sigma_dot(a.as_vector()).transpose() * v.dirac_adjoint();
    debug_assert!({
        let closed = spin_projection_closed_form(p, m, a)?;
        let scale = 1.0 + p.t / m;
        max_entry_norm(&(closed - direct)) < 1e-10 * scale * scale
    });
    Ok(direct)
}

/// The closed form of `v (a·σ)ᵀ v̄`:
///
/// ```text
/// (1/2m) { −(m a + (a·p)/(m+p⁰) p)·γ γ⁵ + (a·p) γ⁰γ⁵
///          − i ((a×p)·γ) γ⁰ + (p⁰ a − (a·p)/(m+p⁰) p)·γ γ⁰γ⁵ }
/// ```
pub fn spin_projection_closed_form(
    p: &FourVector,
    m: f64,
    a: &ThreeDirection,
) -> Result<BispinorMatrix> {
    check_on_shell(p, m)?;
    let g = gammas();
    let g5 = gamma5();
    let av = a.as_vector();
    let pv = p.spatial();
    let ap = av.dot(&pv);
    let gdot = |u: Vector3<f64>| g[1] * re(u.x) + g[2] * re(u.y) + g[3] * re(u.z);

    let t1 = -gdot(av * m + pv * (ap / (m + p.t))) * g5;
    let t2 = g[0] * g5 * re(ap);
    let t3 = -gdot(av.cross(&pv)) * g[0] * I;
    let t4 = gdot(av * p.t - pv * (ap / (m + p.t))) * g[0] * g5;
    Ok((t1 + t2 + t3 + t4) / re(2.0 * m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Rotation,
    Boost,
}

/// Bispinor image of a rotation by `param` about `n` or a boost of rapidity
/// `param` along `n`.
///
/// Rotations act as `exp(−i θ/2 n·σ)` on both chiral blocks; boosts act as
/// `exp(+χ/2 n·σ)` on the upper block and `exp(−χ/2 n·σ)` on the lower one.
/// With this sign `D(Λ) v(p) 𝒟ᵀ(R(Λ,p)) = v(Λp)` holds and
/// `D(Λ) γ^μ D(Λ)⁻¹ = (Λ⁻¹)^μ_ν γ^ν`.
pub fn bispinor_rep(kind: TransformKind, n: &ThreeDirection, param: f64) -> BispinorMatrix {
    let ns = sigma_dot(n.as_vector());
    let id = SpinorMatrix::identity();
    let z = SpinorMatrix::zeros();
    let half = 0.5 * param;
    match kind {
        TransformKind::Rotation => {
            let u = id * re(half.cos()) - ns * Complex64::new(0.0, half.sin());
            blocks(&u, &z, &z, &u)
        }
        TransformKind::Boost => {
            let (c, s) = (half.cosh(), half.sinh());
            blocks(
                &(id * re(c) + ns * re(s)),
                &z,
                &z,
                &(id * re(c) - ns * re(s)),
            )
        }
    }
}

/// SU(2) lift `exp(−i θ/2 n·σ)` of a proper rotation, with `θ ∈ [0, π]`.
///
/// At `θ = π` the axis is fixed so that its first nonzero component is
/// positive.
pub fn su2_from_rotation(r: &Matrix3<f64>) -> Result<SpinorMatrix> {
    let residual = rotation_residual(r);
    if residual > LorentzTransform::VALIDATION_TOL {
        return Err(Error::NotRotation(residual));
    }
    let (w, mut axis) = rotation_quaternion(r);
    if w.abs() < 1e-12 {
        let lead = axis.iter().copied().find(|c| c.abs() > 1e-9).unwrap_or(1.0);
        if lead < 0.0 {
            axis = -axis;
        }
    }
    Ok(SpinorMatrix::identity() * re(w) - sigma_dot(&axis) * I)
}

/// Unit quaternion `(w, v)` with `w ≥ 0`, `R = rotation by 2 acos(w) about v/|v|`.
fn rotation_quaternion(r: &Matrix3<f64>) -> (f64, Vector3<f64>) {
    let tr = r.trace();
    let (w, x, y, z);
    if tr >= r[(0, 0)] && tr >= r[(1, 1)] && tr >= r[(2, 2)] {
        let s = 2.0 * (1.0 + tr).sqrt();
        w = 0.25 * s;
        x = (r[(2, 1)] - r[(1, 2)]) / s;
        y = (r[(0, 2)] - r[(2, 0)]) / s;
        z = (r[(1, 0)] - r[(0, 1)]) / s;
    } else if r[(0, 0)] >= r[(1, 1)] && r[(0, 0)] >= r[(2, 2)] {
        let s = 2.0 * (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt();
        w = (r[(2, 1)] - r[(1, 2)]) / s;
        x = 0.25 * s;
        y = (r[(0, 1)] + r[(1, 0)]) / s;
        z = (r[(0, 2)] + r[(2, 0)]) / s;
    } else if r[(1, 1)] >= r[(2, 2)] {
        let s = 2.0 * (1.0 - r[(0, 0)] + r[(1, 1)] - r[(2, 2)]).sqrt();
        w = (r[(0, 2)] - r[(2, 0)]) / s;
        x = (r[(0, 1)] + r[(1, 0)]) / s;
        y = 0.25 * s;
        z = (r[(1, 2)] + r[(2, 1)]) / s;
    } else {
        let s = 2.0 * (1.0 - r[(0, 0)] - r[(1, 1)] + r[(2, 2)]).sqrt();
        w = (r[(1, 0)] - r[(0, 1)]) / s;
        x = (r[(0, 2)] + r[(2, 0)]) / s;
        y = (r[(1, 2)] + r[(2, 1)]) / s;
        z = 0.25 * s;
    }
    let sign = if w < 0.0 { -1.0 } else { 1.0 };
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    (sign * w / norm, Vector3::new(x, y, z) * (sign / norm))
}

/// Bispinor image of an arbitrary proper orthochronous transformation via
/// `Λ = L R` (rotation-free boost after a rotation). The overall sign follows
/// the lift of [`su2_from_rotation`].
pub fn bispinor_of_transform(lt: &LorentzTransform) -> Result<BispinorMatrix> {
    let image = lt.apply(&FourVector::new(1.0, 0.0, 0.0, 0.0));
    let boost = standard_boost_massive(&image, 1.0)?;
    let rotation = boost.inverse() * *lt;
    let u = su2_from_rotation(&rotation.spatial_block())?;
    let z = SpinorMatrix::zeros();
    let rot = blocks(&u, &z, &z, &u);
    let pv = image.spatial();
    let boost_rep = match ThreeDirection::normalize(pv) {
        Ok(n) => bispinor_rep(TransformKind::Boost, &n, pv.norm().asinh()),
        Err(_) => BispinorMatrix::identity(),
    };
    Ok(boost_rep * rot)
}

/// `max |D(Λ) v(p) 𝒟ᵀ(R(Λ,p)) − v(Λp)|` for a given bispinor image `d`.
pub fn weinberg_residual(
    d: &BispinorMatrix,
    lt: &LorentzTransform,
    p: &FourVector,
    m: f64,
) -> Result<f64> {
    let w = wigner_rotation(lt, p, m)?;
    let su2 = su2_from_rotation(&w.spatial_block())?;
    let moved = lt.apply(p);
    let moved = FourVector::from_parts(
        (m * m + moved.spatial().norm_squared()).sqrt(),
        moved.spatial(),
    );
    let lhs = d * v_amplitude(p, m)? * su2.transpose();
    Ok(max_entry_norm(&(lhs - v_amplitude(&moved, m)?)))
}

/// [`weinberg_residual`] up to the overall sign left open by lifting the
/// Wigner rotation to SU(2) on its own.
pub fn weinberg_residual_up_to_sign(
    d: &BispinorMatrix,
    lt: &LorentzTransform,
    p: &FourVector,
    m: f64,
) -> Result<f64> {
    let plus = weinberg_residual(d, lt, p, m)?;
    let minus = weinberg_residual(&-d, lt, p, m)?;
    Ok(plus.min(minus))
}

/// `max_μ |D γ^μ D⁻¹ − (Λ⁻¹)^μ_ν γ^ν|`.
pub fn intertwining_residual(d: &BispinorMatrix, lt: &LorentzTransform) -> f64 {
    let g = gammas();
    let inv = lt.inverse();
    let d_inv = d.try_inverse().expect("bispinor images are invertible");
    (0..4)
        .map(|mu| {
            let rhs = (0..4).fold(BispinorMatrix::zeros(), |acc, nu| {
                acc + g[nu] * re(inv.matrix()[(mu, nu)])
            });
            max_entry_norm(&(d * g[mu] * d_inv - rhs))
        })
        .fold(0.0, f64::max)
}

/// `max |{γ^μ, γ^ν} − 2η^{μν}|` over a supplied set of gamma matrices.
pub fn clifford_residual(g: &[BispinorMatrix; 4]) -> f64 {
    let eta = [1.0, -1.0, -1.0, -1.0];
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let expected = if mu == nu { 2.0 * eta[mu] } else { 0.0 };
            let ac = g[mu] * g[nu] + g[nu] * g[mu] - BispinorMatrix::identity() * re(expected);
            worst = worst.max(max_entry_norm(&ac));
        }
    }
    worst
}
