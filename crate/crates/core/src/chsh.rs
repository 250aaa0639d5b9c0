//! CHSH analysis: left-hand side evaluation, grid scans with extremum
//! refinement and threshold crossings, and angle optimization.

use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::correlation_planar;
use crate::minkowski::ThreeDirection;
use crate::{Error, Result};

/// Classical CHSH bound.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Tsirelson bound `2√2`.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Default number of grid points for scans.
pub const DEFAULT_GRID: usize = 512;

/// Two spin axes for Alice and two polarizer angles for Bob.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSettings {
    pub a1: ThreeDirection,
    pub theta1: f64,
    pub a2: ThreeDirection,
    pub theta2: f64,
}

impl ChshSettings {
    /// Angles ordered `(ς₁, φ₁, θ₁, ς₂, φ₂, θ₂)`.
    pub fn from_angles(angles: [f64; 6]) -> Self {
        let [s1, p1, t1, s2, p2, t2] = angles;
        Self {
            a1: ThreeDirection::from_angles(s1, p1),
            theta1: t1,
            a2: ThreeDirection::from_angles(s2, p2),
            theta2: t2,
        }
    }

    /// Inverse of [`ChshSettings::from_angles`] with polar angles in `[0, π]`.
    pub fn to_angles(&self) -> [f64; 6] {
        let (s1, p1) = self.a1.angles();
        let (s2, p2) = self.a2.angles();
        [s1, p1, self.theta1, s2, p2, self.theta2]
    }
}

/// `|C(θ₁,a₁) + C(θ₁,a₂) + C(θ₂,a₂) − C(θ₂,a₁)|` for any correlation `C`.
pub fn chsh_combination(s: &ChshSettings, c: impl Fn(&ThreeDirection, f64) -> f64) -> f64 {
    (c(&s.a1, s.theta1) + c(&s.a2, s.theta1) + c(&s.a2, s.theta2) - c(&s.a1, s.theta2)).abs()
}

/// CHSH left-hand side built from the planar correlation at shared `(x, ψ)`.
pub fn chsh_lhs(x: f64, psi: f64, s: &ChshSettings) -> f64 {
    chsh_combination(s, |a, theta| {
        let (polar, azimuth) = a.angles();
        correlation_planar(x, psi, polar, azimuth, theta)
    })
}

/// Rest-frame CHSH left-hand side:
/// `2|sin ς₁ sin(φ₁−θ₁−θ₂) sin(θ₁−θ₂) + sin ς₂ cos(φ₂−θ₁−θ₂) cos(θ₁−θ₂)|`.
pub fn chsh_lhs_cm(s: &ChshSettings) -> f64 {
    let [s1, p1, t1, s2, p2, t2] = s.to_angles();
    let (sum, diff) = (t1 + t2, t1 - t2);
    2.0 * (s1.sin() * (p1 - sum).sin() * diff.sin() + s2.sin() * (p2 - sum).cos() * diff.cos())
        .abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumMode {
    Min,
    Max,
}

impl ExtremumMode {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            ExtremumMode::Min => a < b,
            ExtremumMode::Max => a > b,
        }
    }
}

/// Located extremum. `refined` is false when only grid points were used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub refined: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub mode: ExtremumMode,
    /// Level whose crossings are located, if any.
    pub threshold: Option<f64>,
    /// Width below which golden-section refinement stops.
    pub x_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            mode: ExtremumMode::Max,
            threshold: None,
            x_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    /// `(x, value)` pairs with strictly increasing `x`.
    pub samples: Vec<(f64, f64)>,
    pub extremum: Extremum,
    /// Points where the curve changes sides of the threshold.
    pub crossings: Vec<f64>,
    /// Points where the curve reaches the threshold without crossing it.
    pub touches: Vec<f64>,
}

/// Uniform grid of `n` points on `[lo, hi]` with both ends included exactly.
pub fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid needs finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect())
}

/// Samples `f` on a uniform grid, refines the best grid point by golden
/// section and bisects every threshold crossing.
///
/// Grid evaluation runs on the rayon pool; the output does not depend on
/// how the work is partitioned.
pub fn scan<F>(f: F, lo: f64, hi: f64, n: usize, opts: &ScanOptions) -> Result<ScanResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let xs = grid(lo, hi, n)?;
    let samples: Vec<(f64, f64)> = xs.par_iter().map(|&x| (x, f(x))).collect();
    if let Some(&(x, v)) = samples.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite value {v} at x = {x}"
        )));
    }

    let mut best = 0;
    for (i, &(_, v)) in samples.iter().enumerate() {
        if opts.mode.better(v, samples[best].1) {
            best = i;
        }
    }
    let mut extremum = Extremum {
        x: samples[best].0,
        value: samples[best].1,
        refined: false,
    };
    if n >= 3 {
        let left = samples[best.saturating_sub(1)].0;
        let right = samples[(best + 1).min(n - 1)].0;
        let (x, v) = golden_extremum(&f, (left, right), opts.x_tol, opts.mode)?;
        if !opts.mode.better(extremum.value, v) {
            extremum = Extremum {
                x,
                value: v,
                refined: true,
            };
        }
    }

    let (crossings, touches) = match opts.threshold {
        Some(t) => locate_level(&f, &samples, t, opts.x_tol)?,
        None => (Vec::new(), Vec::new()),
    };
    Ok(ScanResult {
        samples,
        extremum,
        crossings,
        touches,
    })
}

fn locate_level<F>(
    f: &F,
    samples: &[(f64, f64)],
    level: f64,
    x_tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(f64) -> f64,
{
    let sign = |v: f64| {
        let g = v - level;
        if g > 0.0 {
            1
        } else if g < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut crossings = Vec::new();
    let mut touches = Vec::new();
    let mut i = 0;
    while i + 1 < samples.len() {
        let (x0, v0) = samples[i];
        let s0 = sign(v0);
        let s1 = sign(samples[i + 1].1);
        if s0 != 0 && s1 == -s0 {
            crossings.push(bisect(f, level, x0, samples[i + 1].0, x_tol));
            i += 1;
        } else if s0 != 0 && s1 == 0 {
            // run of exact hits; what lies beyond decides crossing vs touch
            let start = i + 1;
            let mut end = start;
            while end + 1 < samples.len() && sign(samples[end + 1].1) == 0 {
                end += 1;
            }
            let mid = 0.5 * (samples[start].0 + samples[end].0);
            match samples.get(end + 1).map(|s| sign(s.1)) {
                Some(s) if s == -s0 => crossings.push(mid),
                Some(_) => touches.push(mid),
                None => {}
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }

    // tangential approaches between grid points
    for w in samples.windows(3) {
        let g: Vec<f64> = w.iter().map(|s| s.1 - level).collect();
        let same_side = g.iter().all(|&v| v > 0.0) || g.iter().all(|&v| v < 0.0);
        if same_side && g[1].abs() < g[0].abs() && g[1].abs() <= g[2].abs() {
            let (x, gap) = golden_extremum(
                &|x| (f(x) - level).abs(),
                (w[0].0, w[2].0),
                x_tol,
                ExtremumMode::Min,
            )?;
            if gap < 1e-9 * (1.0 + level.abs()) {
                touches.push(x);
            }
        }
    }
    touches.sort_by(f64::total_cmp);
    Ok((crossings, touches))
}

fn bisect<F: Fn(f64) -> f64>(f: &F, level: f64, mut lo: f64, mut hi: f64, x_tol: f64) -> f64 {
    let lo_sign = f(lo) > level;
    while hi - lo > x_tol {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v == level {
            return mid;
        }
        if (v > level) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]` until the bracket is narrower than
/// `tol`. Returns `(x*, f(x*))`.
pub fn golden_extremum<F>(
    f: &F,
    bracket: (f64, f64),
    tol: f64,
    mode: ExtremumMode,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let (mut a, mut b) = bracket;
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "golden search needs lo < hi and tol > 0, got ({a}, {b}), {tol}"
        )));
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(v))
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > tol {
        if !mode.better(fd, fc) {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = eval(x)?;
    // the bracket ends themselves may beat the interior probe
    let mut best = (x, fx);
    for (xe, fe) in [(c, fc), (d, fd)] {
        if mode.better(fe, best.1) {
            best = (xe, fe);
        }
    }
    Ok(best)
}

/// 64-bit linear congruential generator with Knuth's MMIX constants.
/// Used for start points so runs are reproducible from one integer.
#[derive(Clone, Debug)]
pub struct StartSequence(u64);

impl StartSequence {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Random angles: polar in `[0, π]`, the rest in `[0, 2π)`.
    pub fn next_angles(&mut self) -> [f64; 6] {
        use std::f64::consts::{PI, TAU};
        let mut out = [0.0; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            let scale = if i % 3 == 0 { PI } else { TAU };
            *slot = scale * self.next_unit();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Optimum {
    /// Best angles `(ς₁, φ₁, θ₁, ς₂, φ₂, θ₂)` as found, not canonicalized.
    pub angles: [f64; 6],
    pub value: f64,
    /// Index of the start that produced the optimum.
    pub start: usize,
    pub starts: usize,
    pub seed: u64,
}

impl Optimum {
    pub fn settings(&self) -> ChshSettings {
        ChshSettings::from_angles(self.angles)
    }
}

/// Multi-start coordinate-wise golden-section maximization over the six
/// angles. Each start runs cycles over all coordinates; a cycle that gains
/// less than `tol` halves the search window, and the run ends once the
/// window is below `tol`. Starts run in parallel; ties go to the lowest
/// start index.
pub fn maximize_settings<F>(objective: F, starts: usize, tol: f64, seed: u64) -> Result<Optimum>
where
    F: Fn(&ChshSettings) -> f64 + Sync,
{
    if starts == 0 {
        return Err(Error::InvalidArgument(
            "at least one start is required".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut seq = StartSequence::new(seed);
    let initial: Vec<[f64; 6]> = (0..starts).map(|_| seq.next_angles()).collect();
    let runs: Vec<([f64; 6], f64)> = initial
        .par_iter()
        .map(|start| coordinate_ascent(&objective, *start, tol))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 > runs[best].1 {
            best = i;
        }
    }
    Ok(Optimum {
        angles: runs[best].0,
        value: runs[best].1,
        start: best,
        starts,
        seed,
    })
}

fn coordinate_ascent<F>(objective: &F, start: [f64; 6], tol: f64) -> Result<([f64; 6], f64)>
where
    F: Fn(&ChshSettings) -> f64,
{
    const MAX_CYCLES: usize = 10_000;
    let eval = |angles: &[f64; 6]| objective(&ChshSettings::from_angles(*angles));
    let mut x = start;
    let mut fx = eval(&x);
    if !fx.is_finite() {
        return Err(Error::NonFinite(fx));
    }
    let mut window = std::f64::consts::FRAC_PI_2;
    for _ in 0..MAX_CYCLES {
        let before = fx;
        for j in 0..6 {
            let line = |t: f64| {
                let mut y = x;
                y[j] = t;
                eval(&y)
            };
            let (t, ft) = golden_extremum(
                &line,
                (x[j] - window, x[j] + window),
                0.01 * tol,
                ExtremumMode::Max,
            )?;
            if ft > fx {
                x[j] = t;
                fx = ft;
            }
        }
        if fx - before < tol {
            if window < tol {
                break;
            }
            window *= 0.5;
        }
    }
    Ok((x, fx))
}

/// All `x` in `[lo, hi]` where the CHSH left-hand side crosses 2.
pub fn violation_boundaries(psi: f64, s: &ChshSettings, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let opts = ScanOptions {
        threshold: Some(CLASSICAL_BOUND),
        ..ScanOptions::default()
    };
    Ok(scan(|x| chsh_lhs(x, psi, s), lo, hi, DEFAULT_GRID, &opts)?.crossings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::correlation_nonrel_limit;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn figure4() -> ChshSettings {
        ChshSettings::from_angles([
            2.0 * FRAC_PI_3,
            1.5 * PI,
            2.0 * FRAC_PI_3,
            FRAC_PI_3,
            PI,
            FRAC_PI_3,
        ])
    }

    fn tsirelson_config() -> ChshSettings {
        ChshSettings::from_angles([FRAC_PI_2, 0.75 * PI, FRAC_PI_4, FRAC_PI_2, FRAC_PI_4, 0.0])
    }

    #[test]
    fn cm_examples() {
        assert_abs_diff_eq!(
            chsh_lhs_cm(&tsirelson_config()),
            TSIRELSON_BOUND,
            epsilon = 1e-12
        );
        let zero = ChshSettings::from_angles([0.0, 1.0, 2.0, 0.0, 0.5, 0.3]);
        assert_abs_diff_eq!(chsh_lhs_cm(&zero), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chsh_lhs(0.0, 0.4, &zero), 0.0, epsilon = 1e-15);
        // with moving fermions the cos ς momentum term survives and the
        // combination collapses to 2 C(θ₁)
        let c = correlation_planar(3.0, 0.4, 0.0, 1.0, 2.0);
        assert_abs_diff_eq!(chsh_lhs(3.0, 0.4, &zero), 2.0 * c.abs(), epsilon = 1e-14);
        let s = ChshSettings::from_angles([1.1, 0.2, 0.4, 0.7, 0.8, 0.4]);
        assert_abs_diff_eq!(chsh_lhs_cm(&s), 2.0 * 0.7f64.sin(), epsilon = 1e-12);
    }

    #[test]
    fn lhs_at_zero_momentum_uses_nonrel_correlations() {
        let s = ChshSettings::from_angles([0.3, 2.0, 1.0, 2.2, -0.7, 0.1]);
        let direct = chsh_combination(&s, |a, theta| {
            let (polar, azimuth) = a.angles();
            correlation_nonrel_limit(polar, azimuth, theta)
        });
        assert_abs_diff_eq!(chsh_lhs(0.0, 0.9, &s), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(chsh_lhs_cm(&s), direct, epsilon = 1e-12);
    }

    #[test]
    fn figure4_value() {
        assert_abs_diff_eq!(chsh_lhs(0.71, FRAC_PI_6, &figure4()), 2.598, epsilon = 5e-3);
    }

    #[test]
    fn settings_round_trip() {
        let angles = [0.4, 1.3, 0.2, 2.9, 5.5, -1.0];
        let back = ChshSettings::from_angles(angles).to_angles();
        for (u, v) in angles.iter().zip(back.iter()).take(5) {
            assert_abs_diff_eq!(
                u.rem_euclid(2.0 * PI),
                v.rem_euclid(2.0 * PI),
                epsilon = 1e-12
            );
        }
        assert_eq!(back[5], -1.0);
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = grid(0.0, 20.0, 512).unwrap();
        assert_eq!(g[0], 0.0);
        assert_eq!(g[511], 20.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(grid(1.0, 1.0, 5).is_err());
        assert!(grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn scan_sine() {
        let r = scan(f64::sin, 0.0, PI, 100, &ScanOptions::default()).unwrap();
        assert!(r.extremum.refined);
        assert_abs_diff_eq!(r.extremum.x, FRAC_PI_2, epsilon = 1e-6);
        assert_eq!(r.samples.len(), 100);
    }

    #[test]
    fn scan_constant_has_no_crossings() {
        let opts = ScanOptions {
            threshold: Some(0.5),
            ..ScanOptions::default()
        };
        let r = scan(|_| 1.0, 0.0, 1.0, 50, &opts).unwrap();
        assert!(r.crossings.is_empty() && r.touches.is_empty());
    }

    #[test]
    fn scan_two_points_no_refinement() {
        let r = scan(|x| x * x, 0.0, 1.0, 2, &ScanOptions::default()).unwrap();
        assert_eq!(r.samples, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert!(!r.extremum.refined);
        assert_eq!(r.extremum.x, 1.0);
    }

    #[test]
    fn scan_reports_touch_not_crossing() {
        let opts = ScanOptions {
            threshold: Some(0.0),
            mode: ExtremumMode::Min,
            ..ScanOptions::default()
        };
        let r = scan(|x| (x - 0.3).powi(2), 0.0, 1.0, 101, &opts).unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.touches.len(), 1);
        assert_abs_diff_eq!(r.touches[0], 0.3, epsilon = 1e-6);

        let r = scan(|x| x - 0.5, 0.0, 1.0, 11, &opts).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert_abs_diff_eq!(r.crossings[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn golden_quadratic() {
        let (x, v) = golden_extremum(
            &|x: f64| (x - 2.0).powi(2),
            (0.0, 5.0),
            1e-8,
            ExtremumMode::Min,
        )
        .unwrap();
        assert_abs_diff_eq!(x, 2.0, epsilon = 1e-7);
        assert!(v < 1e-14);
        let nan = golden_extremum(&|_: f64| f64::NAN, (0.0, 1.0), 1e-3, ExtremumMode::Max);
        assert!(matches!(nan, Err(Error::NonFinite(_))));
    }

    #[test]
    fn figure4_crossing() {
        let b = violation_boundaries(FRAC_PI_6, &figure4(), 0.0, 20.0).unwrap();
        assert_eq!(b.len(), 1);
        assert_abs_diff_eq!(b[0], 6.38, epsilon = 0.02);
    }

    #[test]
    fn start_sequence_is_reproducible() {
        let a: Vec<u64> = {
            let mut s = StartSequence::new(7);
            (0..4).map(|_| s.next_u64()).collect()
        };
        let mut s = StartSequence::new(7);
        assert_eq!(a, (0..4).map(|_| s.next_u64()).collect::<Vec<_>>());
        assert_eq!(StartSequence::new(0).next_u64(), 1442695040888963407);
        let angles = StartSequence::new(3).next_angles();
        assert!(angles[0] <= PI && angles[1] < 2.0 * PI);
    }

    #[test]
    fn optimizer_reaches_tsirelson_in_cm() {
        let opt = maximize_settings(chsh_lhs_cm, 8, 1e-10, 2024).unwrap();
        assert_abs_diff_eq!(opt.value, TSIRELSON_BOUND, epsilon = 1e-6);
        assert!(opt.value <= TSIRELSON_BOUND + 1e-12);
        let again = maximize_settings(chsh_lhs_cm, 8, 1e-10, 2024).unwrap();
        assert_eq!(opt, again);
    }
}
