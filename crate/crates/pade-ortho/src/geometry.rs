//! Exterior conformal maps for the supported compact sets.
//!
//! For a compact set `E` with connected complement, `phi` maps the exterior of
//! `E` conformally onto the exterior of the closed unit disk with `phi(z) ~
//! z / cap(E)` at infinity, and `psi` is its inverse. Two sets are supported:
//! the closed unit disk (where `phi` is the identity) and a real interval
//! `[a, b]` (where `phi` is the inverse Joukowski map after an affine
//! pullback). The modulus `|phi|` induces the level curves and canonical
//! domains used everywhere else in the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A supported compact set `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// The closed unit disk `{ |z| <= 1 }`.
    UnitDisk,
    /// A real interval `[a, b]` with `a < b`.
    Interval { a: f64, b: f64 },
}

impl Geometry {
    /// Builds an interval geometry, checking `a < b`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Validation(format!(
                "interval endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        Ok(Geometry::Interval { a, b })
    }

    /// Whether `z` lies in the set `E`.
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Geometry::UnitDisk => z.norm() <= 1.0,
            Geometry::Interval { a, b } => z.im == 0.0 && z.re >= a && z.re <= b,
        }
    }

    /// Logarithmic capacity of `E`: the limit of `z / phi(z)` at infinity.
    pub fn capacity(&self) -> f64 {
        match *self {
            Geometry::UnitDisk => 1.0,
            Geometry::Interval { a, b } => (b - a) / 4.0,
        }
    }

    /// Affine pullback of `z` onto the reference coordinate.
    ///
    /// Interval: `u = (2z - a - b) / (b - a)` maps `[a, b]` onto `[-1, 1]`.
    /// Disk: the identity.
    pub(crate) fn pullback(&self, z: Complex64) -> Complex64 {
        match *self {
            Geometry::UnitDisk => z,
            Geometry::Interval { a, b } => (2.0 * z - (a + b)) / (b - a),
        }
    }

    /// Inverse of [`Geometry::pullback`].
    pub(crate) fn pushforward(&self, u: Complex64) -> Complex64 {
        match *self {
            Geometry::UnitDisk => u,
            Geometry::Interval { a, b } => (u * (b - a) + (a + b)) / 2.0,
        }
    }

    /// The exterior conformal map evaluated at `z` outside `E`.
    ///
    /// On the interval the branch is `u + sqrt(u - 1) * sqrt(u + 1)` with
    /// principal square roots, which is continuous on the whole cut plane;
    /// the naive `sqrt(u^2 - 1)` picks the wrong sign left of the cut.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        if self.contains(z) {
            return Err(Error::Domain { z });
        }
        Ok(match *self {
            Geometry::UnitDisk => z,
            Geometry::Interval { .. } => {
                let u = self.pullback(z);
                u + (u - 1.0).sqrt() * (u + 1.0).sqrt()
            }
        })
    }

    /// Derivative `phi'(z)` for `z` outside `E`.
    pub fn phi_derivative(&self, z: Complex64) -> Result<Complex64> {
        if self.contains(z) {
            return Err(Error::Domain { z });
        }
        Ok(match *self {
            Geometry::UnitDisk => Complex64::new(1.0, 0.0),
            Geometry::Interval { a, b } => {
                let u = self.pullback(z);
                let s = (u - 1.0).sqrt() * (u + 1.0).sqrt();
                (u + s) / s * (2.0 / (b - a))
            }
        })
    }

    /// Inverse conformal map, defined for `|w| > 1`.
    pub fn psi(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() <= 1.0 {
            return Err(Error::Domain { z: w });
        }
        Ok(match *self {
            Geometry::UnitDisk => w,
            Geometry::Interval { .. } => self.pushforward((w + w.inv()) / 2.0),
        })
    }

    /// Level of `z`: `|phi(z)|` outside `E`, and exactly `1` on `E`.
    ///
    /// The constant `1` on `E` encodes the sup-norm convention used in the
    /// uniform convergence-rate comparisons.
    pub fn level_indicator(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            1.0
        } else {
            // Just checked z is outside E.
            self.phi(z).expect("z outside E").norm()
        }
    }
}
