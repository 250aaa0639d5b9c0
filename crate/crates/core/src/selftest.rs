//! Self-test suite: every invariant the library relies on, evaluated on
//! seeded random inputs and reported with its tolerance and residual.

use serde::Serialize;

use crate::chsh::{chsh_lhs, ChshSettings, TSIRELSON_BOUND};
use crate::correlation::{
    correlation_closed, correlation_nonrel_limit, correlation_planar, correlation_trace,
    planar_dual, MeasurementSettings,
};
use crate::decay::{
    parent_density, pauli_lubanski_mean, planar_kinematics, BlochVector, InnerParity,
};
use crate::dirac::{
    bispinor_of_transform, clifford_residual, gammas, intertwining_residual, max_entry_norm, slash,
    spin_projection_bilinear, spin_projection_closed_form, v_amplitude,
    weinberg_residual_up_to_sign, BispinorMatrix, DiracAdjoint,
};
use crate::minkowski::ThreeDirection;
use crate::nonrel::{helicity_states, nonrel_correlation, nonrel_correlation_closed};
use crate::photon::completeness_residual;
use crate::sampling::Sampler;
use crate::{Complex64, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub tolerance: f64,
    /// Worst observed residual; absent when the check could not be evaluated.
    pub residual: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub passed: bool,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelfTestOptions {
    pub seed: u64,
    /// Random inputs per identity check.
    pub samples: usize,
    /// Random inputs for the trace-versus-closed comparison.
    pub dual_samples: usize,
    /// Perturbs one gamma matrix before the Clifford check, as a negative
    /// control for the harness itself.
    pub corrupt_gamma: bool,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            samples: 100,
            dual_samples: 1000,
            corrupt_gamma: false,
        }
    }
}

struct Suite {
    checks: Vec<CheckOutcome>,
}

impl Suite {
    fn record(
        &mut self,
        name: &'static str,
        tolerance: f64,
        outcome: Result<f64>,
        note: Option<String>,
    ) {
        let check = match outcome {
            Ok(residual) => CheckOutcome {
                name,
                tolerance,
                residual: Some(residual),
                passed: residual <= tolerance,
                note,
            },
            Err(e) => CheckOutcome {
                name,
                tolerance,
                residual: None,
                passed: false,
                note: Some(e.to_string()),
            },
        };
        self.checks.push(check);
    }
}

/// Largest value produced by `n` evaluations of `f`.
fn worst_over(n: usize, mut f: impl FnMut() -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        worst = worst.max(f()?);
    }
    Ok(worst)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn run(opts: &SelfTestOptions) -> SelfTestReport {
    let mut suite = Suite { checks: Vec::new() };
    let n = opts.samples;
    let mut rng = Sampler::new(opts.seed);

    let mut g = gammas();
    if opts.corrupt_gamma {
        g[2] *= re(1.01);
    }
    suite.record("clifford_algebra", 1e-14, Ok(clifford_residual(&g)), None);

    suite.record(
        "fermion_amplitude_identities",
        1e-12,
        worst_over(n, || {
            let m = rng.uniform(0.2, 3.0);
            let p = rng.on_shell(m);
            let v = v_amplitude(&p, m)?;
            let unit = max_entry_norm(&(v.dirac_adjoint() * v - nalgebra::Matrix2::identity()));
            let proj = (BispinorMatrix::identity() * re(m) + slash(&p)) / re(2.0 * m);
            let outer = max_entry_norm(&(v * v.dirac_adjoint() - proj));
            Ok(unit.max(outer) / (1.0 + p.t / m))
        }),
        None,
    );

    suite.record(
        "spin_bilinear_closed_form",
        1e-12,
        worst_over(n, || {
            let m = rng.uniform(0.2, 3.0);
            let p = rng.on_shell(m);
            let a = rng.direction();
            let scale = (1.0 + p.t / m).powi(2);
            Ok(max_entry_norm(
                &(spin_projection_bilinear(&p, m, &a)? - spin_projection_closed_form(&p, m, &a)?),
            ) / scale)
        }),
        None,
    );

    suite.record(
        "weinberg_condition",
        1e-10,
        worst_over(n, || {
            let lt = rng.lorentz_transform();
            let m = rng.uniform(0.2, 3.0);
            let p = rng.on_shell(m);
            let d = bispinor_of_transform(&lt)?;
            Ok(weinberg_residual_up_to_sign(&d, &lt, &p, m)?.max(intertwining_residual(&d, &lt)))
        }),
        None,
    );

    suite.record(
        "photon_completeness",
        1e-10,
        worst_over(n, || {
            let k = rng.lightlike();
            let n_k = ThreeDirection::normalize(k.spatial())?;
            let a_k = rng.perpendicular_to(&n_k);
            Ok(completeness_residual(&k, &a_k)? / (k.t * k.t))
        }),
        None,
    );

    suite.record(
        "parent_density_identities",
        1e-12,
        worst_over(n, || {
            let kin = rng.decay()?;
            let xi = rng.bloch_vector();
            let rho = parent_density(&kin, &xi);
            let big_m = kin.parent_mass();
            let trace = (rho.trace() - re(1.0)).norm();
            let eigen = max_entry_norm(&(slash(&kin.q()) * rho - rho * re(big_m))) / big_m;
            let q = kin.q();
            let transverse = pauli_lubanski_mean(&kin, &xi).dot(&q).abs() / (q.t * q.t);
            Ok(trace.max(eigen).max(transverse))
        }),
        None,
    );

    let mut worst_c: f64 = 0.0;
    suite.record(
        "trace_vs_closed_form",
        1e-10,
        worst_over(opts.dual_samples, || {
            let input = rng.correlation_input()?;
            let closed = correlation_closed(
                &input.kin,
                &input.xi,
                &input.settings,
                &input.a_k,
                InnerParity::Equal,
            )?;
            let trace = correlation_trace(
                &input.kin,
                &input.xi,
                &input.settings,
                &input.a_k,
                InnerParity::Equal,
            )?;
            worst_c = worst_c.max(closed.abs()).max(trace.abs());
            Ok((closed - trace).abs())
        }),
        None,
    );
    suite.record(
        "correlation_bound",
        1e-12,
        Ok((worst_c - 1.0).max(0.0)),
        Some(format!("max |C| = {worst_c:.15}")),
    );

    suite.record(
        "opposite_parity_sign",
        1e-12,
        worst_over(n, || {
            let input = rng.correlation_input()?;
            let c = correlation_trace(
                &input.kin,
                &input.xi,
                &input.settings,
                &input.a_k,
                InnerParity::Equal,
            )?;
            let cp = correlation_trace(
                &input.kin,
                &input.xi,
                &input.settings,
                &input.a_k,
                InnerParity::Opposite,
            )?;
            Ok((c + cp).abs())
        }),
        None,
    );

    suite.record(
        "k0_invariance",
        1e-10,
        worst_over(n, || {
            let x = rng.uniform(0.0, 10.0);
            let [psi, polar, azimuth, theta] = rng.planar_angles();
            let s = MeasurementSettings::from_angles(polar, azimuth, theta);
            let xi = BlochVector::from(ThreeDirection::Z);
            let values = [0.1, 1.0, 10.0, 100.0]
                .iter()
                .map(|&k0| {
                    let kin = planar_kinematics(1.0, x, psi, k0)?;
                    correlation_closed(&kin, &xi, &s, &ThreeDirection::Z, InnerParity::Equal)
                })
                .collect::<Result<Vec<f64>>>()?;
            let formula = correlation_planar(x, psi, polar, azimuth, theta);
            Ok(values
                .iter()
                .map(|v| (v - formula).abs())
                .fold(0.0, f64::max))
        }),
        None,
    );

    let mut worst_lhs: f64 = 0.0;
    for _ in 0..10 * n {
        let x = rng.uniform(0.0, 20.0);
        let psi = rng.uniform(0.0, std::f64::consts::TAU);
        let s = ChshSettings::from_angles(rng.chsh_angles());
        worst_lhs = worst_lhs.max(chsh_lhs(x, psi, &s));
    }
    suite.record(
        "tsirelson_bound",
        1e-12,
        Ok((worst_lhs - TSIRELSON_BOUND).max(0.0)),
        Some(format!("max CHSH left-hand side = {worst_lhs:.15}")),
    );

    suite.record(
        "nonrel_operator_vs_closed",
        1e-12,
        worst_over(n, || {
            let xi = rng.bloch_vector();
            let a = rng.direction();
            let theta = rng.uniform(0.0, std::f64::consts::TAU);
            let op = nonrel_correlation(&xi, &a, theta, &ThreeDirection::X, &ThreeDirection::Z)?;
            Ok((op - nonrel_correlation_closed(&xi, &a, theta)).abs())
        }),
        None,
    );

    suite.record(
        "nonrel_three_halves",
        1e-12,
        worst_over(n, || {
            let [_, polar, azimuth, theta] = rng.planar_angles();
            let a = ThreeDirection::from_angles(polar, azimuth);
            let up = BlochVector::from(ThreeDirection::Z);
            let value = nonrel_correlation(&up, &a, theta, &ThreeDirection::X, &ThreeDirection::Z)?;
            Ok((1.5 * value - correlation_nonrel_limit(polar, azimuth, theta)).abs())
        }),
        None,
    );

    suite.record(
        "nonrel_helicity_expansions",
        1e-12,
        helicity_expansion_residual(),
        None,
    );

    let fig2 = planar_dual(
        1.0 / 3.0,
        std::f64::consts::FRAC_PI_3,
        &MeasurementSettings::from_angles(
            2.0 * std::f64::consts::FRAC_PI_3,
            1.5 * std::f64::consts::PI,
            std::f64::consts::FRAC_PI_4,
        ),
        1.0,
    );
    let note = fig2.as_ref().ok().map(|d| {
        format!(
            "C(x=1/3) = {:.6} by both routes; the reference minimum -0.87 is not reproduced; it equals the x=0 value -sqrt(3)/2",
            d.closed
        )
    });
    suite.record(
        "figure2_minimum_dual",
        1e-10,
        fig2.map(|d| d.difference()),
        note,
    );

    let passed = suite.checks.iter().all(|c| c.passed);
    SelfTestReport {
        passed,
        seed: opts.seed,
        checks: suite.checks,
    }
}

fn helicity_expansion_residual() -> Result<f64> {
    let [p, z, m] = helicity_states(&ThreeDirection::X, &ThreeDirection::Z)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let expect = [
        nalgebra::Vector3::new(-0.5, -s, -0.5),
        nalgebra::Vector3::new(s, 0.0, -s),
        nalgebra::Vector3::new(0.5, -s, 0.5),
    ];
    Ok([p, z, m]
        .iter()
        .zip(expect.iter())
        .map(|(got, want)| max_entry_norm(&(got - want.map(re))))
        .fold(0.0, f64::max))
}
