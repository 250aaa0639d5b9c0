//! Parameter presets for the five reference curves (numbered 2 to 6).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use serde::Serialize;

use crate::chsh::{chsh_lhs, ChshSettings, ExtremumMode, CLASSICAL_BOUND};
use crate::correlation::correlation_planar;
use crate::{Error, Result};

/// A curve as a function of `x = (|p|/m)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    Correlation {
        psi: f64,
        polar: f64,
        azimuth: f64,
        theta: f64,
    },
    Chsh {
        psi: f64,
        angles: [f64; 6],
    },
}

impl Curve {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Curve::Correlation {
                psi,
                polar,
                azimuth,
                theta,
            } => correlation_planar(x, psi, polar, azimuth, theta),
            Curve::Chsh { psi, angles } => chsh_lhs(x, psi, &ChshSettings::from_angles(angles)),
        }
    }
}

/// Expected extremum and boundary values for the preset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceValues {
    pub extremum_x: Option<f64>,
    pub extremum_value: Option<f64>,
    pub crossings: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigurePreset {
    pub number: u8,
    pub curve: Curve,
    pub lo: f64,
    pub hi: f64,
    pub mode: ExtremumMode,
    pub threshold: Option<f64>,
    pub reference: ReferenceValues,
}

pub fn preset(number: u8) -> Result<FigurePreset> {
    let chsh = |psi, angles| Curve::Chsh { psi, angles };
    let reference = |x: Option<f64>, v: Option<f64>, c: &[f64]| ReferenceValues {
        extremum_x: x,
        extremum_value: v,
        crossings: c.to_vec(),
    };
    let p = match number {
        2 => FigurePreset {
            number,
            curve: Curve::Correlation {
                psi: FRAC_PI_3,
                polar: 2.0 * FRAC_PI_3,
                azimuth: 1.5 * PI,
                theta: FRAC_PI_4,
            },
            lo: 0.0,
            hi: 10.0,
            mode: ExtremumMode::Min,
            threshold: None,
            // -0.87, sometimes quoted as the minimum here, is the x = 0 value
            reference: reference(Some(1.0 / 3.0), None, &[]),
        },
        3 => FigurePreset {
            number,
            curve: Curve::Correlation {
                psi: FRAC_PI_3,
                polar: FRAC_PI_4,
                azimuth: FRAC_PI_4,
                theta: FRAC_PI_3,
            },
            lo: 0.0,
            hi: 10.0,
            mode: ExtremumMode::Max,
            threshold: None,
            reference: reference(Some(1.36), Some(0.5), &[]),
        },
        4 => FigurePreset {
            number,
            curve: chsh(
                FRAC_PI_6,
                [
                    2.0 * FRAC_PI_3,
                    1.5 * PI,
                    2.0 * FRAC_PI_3,
                    FRAC_PI_3,
                    PI,
                    FRAC_PI_3,
                ],
            ),
            lo: 0.0,
            hi: 20.0,
            mode: ExtremumMode::Max,
            threshold: Some(CLASSICAL_BOUND),
            reference: reference(Some(0.71), Some(2.60), &[6.38]),
        },
        5 => FigurePreset {
            number,
            curve: chsh(
                FRAC_PI_6,
                [
                    FRAC_PI_6,
                    FRAC_PI_2,
                    0.75 * PI,
                    FRAC_PI_3,
                    FRAC_PI_3,
                    FRAC_PI_2,
                ],
            ),
            lo: 0.0,
            hi: 20.0,
            mode: ExtremumMode::Max,
            threshold: Some(CLASSICAL_BOUND),
            reference: reference(Some(1.77), Some(2.28), &[0.21, 6.54]),
        },
        6 => FigurePreset {
            number,
            curve: chsh(
                2.0 * FRAC_PI_3,
                [FRAC_PI_2, 0.75 * PI, FRAC_PI_4, FRAC_PI_2, FRAC_PI_4, 0.0],
            ),
            lo: 0.0,
            hi: 20.0,
            mode: ExtremumMode::Max,
            threshold: Some(CLASSICAL_BOUND),
            reference: reference(Some(0.0), Some(2.0 * std::f64::consts::SQRT_2), &[]),
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "no preset for figure {other}; expected 2 to 6"
            )))
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_exist() {
        for n in 2..=6 {
            let p = preset(n).unwrap();
            assert!(p.lo < p.hi);
            assert!(p.curve.eval(0.5).is_finite());
        }
        assert!(preset(1).is_err());
        assert!(preset(7).is_err());
    }

    #[test]
    fn figure_six_starts_at_tsirelson() {
        let p = preset(6).unwrap();
        assert!((p.curve.eval(0.0) - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
