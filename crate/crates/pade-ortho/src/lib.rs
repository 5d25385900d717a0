//! Linear Pade-orthogonal approximants of orthogonal expansions.
//!
//! Given the Fourier coefficients of a function `F` with respect to an
//! orthonormal polynomial basis on a compact set `E`, the crate constructs
//! the rational approximants `[n/m]` whose defect `Q F - P` is orthogonal to
//! `p_0 .. p_{n+m}`, analyzes row sequences (fixed `m`, growing `n`), and
//! extracts singularity information: pole locations from denominator zeros,
//! radii of meromorphy from geometric convergence rates, and the rate
//! identity `delta = max_j |phi(lambda_j)| / rho_m`.
//!
//! Modules
//! - [`geometry`]: exterior conformal maps and level curves for the unit
//!   disk and real intervals.
//! - [`basis`]: orthonormal polynomials, quadrature, second-type functions.
//! - [`expansion`]: target-function models and their Fourier coefficients.
//! - [`approximant`]: the `[n/m]` construction.
//! - [`rowseq`]: pole tracking, rate fitting, and the convergence checks.
//! - [`experiment`]: config-driven sweeps with CSV/JSON reporting.

pub mod approximant;
pub mod basis;
pub mod error;
pub mod expansion;
pub mod experiment;
pub mod geometry;
mod quad;
mod roots;
pub mod rowseq;

pub use error::{Error, Result};
