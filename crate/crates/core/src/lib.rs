//! Relativistic EPR correlations of a photon + spin-1/2 fermion pair.
//!
//! The pair is produced in the decay of a polarized spin-1/2 parent. Alice
//! measures the fermion spin projection on a direction `a`, Bob measures the
//! linear polarization of the photon at angle `theta`. The crate computes
//! their correlation function through independent routes (a gamma-matrix
//! trace and a closed vector form) and analyzes CHSH violation as a function
//! of the fermion momentum.
//!
//! Conventions: natural units, metric signature `(+, -, -, -)`, chiral
//! gamma matrices, angles in radians.

#![forbid(unsafe_code)]
// `!(a < b)` is used on purpose so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chsh;
pub mod cli;
pub mod correlation;
pub mod decay;
pub mod dirac;
pub mod error;
pub mod figures;
pub mod minkowski;
pub mod nonrel;
pub mod photon;
pub mod sampling;
pub mod selftest;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Complex64 = nalgebra::Complex<f64>;
