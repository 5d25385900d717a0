//! Orthonormal polynomial bases for the supported measures.
//!
//! Each [`MeasureBasis`] pairs a geometry with a measure family and exposes
//! the orthonormal polynomials `p_k` (positive leading coefficient
//! `kappa_k`), Gauss-type quadrature against the measure, the second-type
//! functions `s_k(z) = ∫ conj(p_k(t)) / (z - t) dmu(t)`, and the banded
//! action of multiplication by `z^j` on expansion coefficients.
//!
//! Interval families are defined by their orthonormal three-term recurrence
//! `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}`, stored in closed form
//! and rescaled onto `[a, b]` by the affine pullback. On the unit circle the
//! basis is the monomials and everything has elementary closed forms.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::quad;

/// Supported measure families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Normalized arclength `d(theta) / 2pi` on the unit circle; `p_k = z^k`.
    CircleLebesgue,
    /// `dx / sqrt((b - x)(x - a))` on `[a, b]` (mass pi).
    ChebyshevFirstKind,
    /// Semicircle weight `sqrt((b - x)(x - a))` rescaled from `[-1, 1]` (mass pi/2).
    ChebyshevSecondKind,
    /// Lebesgue measure `dx` on `[a, b]`.
    Legendre,
}

impl Family {
    pub fn is_interval(&self) -> bool {
        !matches!(self, Family::CircleLebesgue)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::CircleLebesgue => "circle_lebesgue",
            Family::ChebyshevFirstKind => "chebyshev_first_kind",
            Family::ChebyshevSecondKind => "chebyshev_second_kind",
            Family::Legendre => "legendre",
        };
        f.write_str(name)
    }
}

/// Coordinates of a function in the `p_k` basis, `entries[k] = <F, p_k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    family: Family,
    entries: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(family: Family, entries: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = entries.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Validation(format!(
                "coefficient entry {bad} is not finite"
            )));
        }
        Ok(CoefficientVector { family, entries })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<Complex64> {
        self.entries.get(k).copied()
    }

    /// Entry at `k`, or a truncation error naming the missing index.
    pub fn try_get(&self, k: usize) -> Result<Complex64> {
        self.get(k).ok_or(Error::Truncation { needed: k, have: self.len() })
    }

    /// Plain-text form: one `n re im` line per index.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, v) in self.entries.iter().enumerate() {
            writeln!(out, "{n} {:e} {:e}", v.re, v.im).expect("string write");
        }
        out
    }

    /// Parses the `n re im` line format produced by [`Self::to_text`].
    pub fn from_text(family: Family, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>, what: &str| -> Result<f64> {
                tok.ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: bad {what}: {e}", lineno + 1)))
            };
            let idx = parse(parts.next(), "index")?;
            let re = parse(parts.next(), "real part")?;
            let im = parse(parts.next(), "imaginary part")?;
            if idx as usize != entries.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected index {}, found {idx}",
                    lineno + 1,
                    entries.len()
                )));
            }
            entries.push(Complex64::new(re, im));
        }
        CoefficientVector::new(family, entries)
    }
}

/// An orthonormal-polynomial engine for one (geometry, family) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureBasis {
    geometry: Geometry,
    family: Family,
}

impl MeasureBasis {
    pub fn new(geometry: Geometry, family: Family) -> Result<Self> {
        match (geometry, family) {
            (Geometry::UnitDisk, Family::CircleLebesgue) => {}
            (Geometry::Interval { .. }, f) if f.is_interval() => {}
            (g, f) => {
                return Err(Error::Validation(format!(
                    "family {f} is not defined on geometry {g:?}"
                )))
            }
        }
        Ok(MeasureBasis { geometry, family })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Total mass of the measure.
    pub fn mass(&self) -> f64 {
        match self.family {
            Family::CircleLebesgue => 1.0,
            Family::ChebyshevFirstKind => std::f64::consts::PI,
            Family::ChebyshevSecondKind => std::f64::consts::PI / 2.0,
            Family::Legendre => {
                let (_, beta) = self.affine();
                2.0 * beta
            }
        }
    }

    /// Affine map `x = alpha + beta t` from the reference interval.
    fn affine(&self) -> (f64, f64) {
        match self.geometry {
            Geometry::UnitDisk => (0.0, 1.0),
            Geometry::Interval { a, b } => ((a + b) / 2.0, (b - a) / 2.0),
        }
    }

    /// Recurrence coefficients `(a_k, b_k)` of `x p_k = b_{k+1} p_{k+1} +
    /// a_k p_k + b_k p_{k-1}`, in the `[a, b]` coordinate. `None` on the
    /// circle, where the basis is not generated by a real recurrence.
    pub fn recurrence(&self, k: usize) -> Option<(f64, f64)> {
        if !self.family.is_interval() {
            return None;
        }
        let (alpha, beta) = self.affine();
        let b_ref = match self.family {
            Family::CircleLebesgue => unreachable!(),
            Family::ChebyshevFirstKind => match k {
                0 => 0.0,
                1 => std::f64::consts::FRAC_1_SQRT_2,
                _ => 0.5,
            },
            Family::ChebyshevSecondKind => {
                if k == 0 {
                    0.0
                } else {
                    0.5
                }
            }
            Family::Legendre => {
                if k == 0 {
                    0.0
                } else {
                    let kf = k as f64;
                    kf / (4.0 * kf * kf - 1.0).sqrt()
                }
            }
        };
        Some((alpha, beta * b_ref))
    }

    fn recurrence_unchecked(&self, k: usize) -> (f64, f64) {
        self.recurrence(k).expect("interval family")
    }

    /// Value of the orthonormal polynomial `p_k` at `z`.
    pub fn eval_p(&self, k: usize, z: Complex64) -> Complex64 {
        match self.family {
            Family::CircleLebesgue => z.powu(k as u32),
            _ => *self
                .eval_p_all(k, z)
                .last()
                .expect("eval_p_all returns k + 1 values"),
        }
    }

    /// Values `p_0(z) .. p_k(z)` by forward recurrence (a single pass).
    pub fn eval_p_all(&self, k: usize, z: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(k + 1);
        match self.family {
            Family::CircleLebesgue => {
                let mut p = Complex64::new(1.0, 0.0);
                for _ in 0..=k {
                    out.push(p);
                    p *= z;
                }
            }
            _ => {
                let p0 = Complex64::new(1.0 / self.mass().sqrt(), 0.0);
                out.push(p0);
                if k == 0 {
                    return out;
                }
                let (a0, _) = self.recurrence_unchecked(0);
                let (_, b1) = self.recurrence_unchecked(1);
                let mut prev = p0;
                let mut cur = (z - a0) * p0 / b1;
                out.push(cur);
                for j in 1..k {
                    let (aj, bj) = self.recurrence_unchecked(j);
                    let (_, bj1) = self.recurrence_unchecked(j + 1);
                    let next = ((z - aj) * cur - bj * prev) / bj1;
                    prev = cur;
                    cur = next;
                    out.push(cur);
                }
            }
        }
        out
    }

    /// Leading coefficient `kappa_k > 0` of `p_k`.
    pub fn leading_coeff(&self, k: usize) -> f64 {
        match self.family {
            Family::CircleLebesgue => 1.0,
            _ => {
                let mut kappa = 1.0 / self.mass().sqrt();
                for j in 1..=k {
                    let (_, bj) = self.recurrence_unchecked(j);
                    kappa /= bj;
                }
                kappa
            }
        }
    }

    /// Second-type function `s_k(z)` for `z` outside `E`.
    ///
    /// On the circle `s_k(z) = z^(-k-1)`. On an interval, `s_k` is the
    /// minimal solution of the basis recurrence, so the defining integral is
    /// evaluated through the backward ratio recurrence anchored at the
    /// closed-form Stieltjes transform `s_0`; a forward pass (or quadrature)
    /// loses all relative accuracy once `s_k` falls under the roundoff floor
    /// of the integrand.
    pub fn second_type_fn(&self, k: usize, z: Complex64) -> Result<Complex64> {
        Ok(*self
            .second_type_all(k, z)?
            .last()
            .expect("second_type_all returns k + 1 values"))
    }

    /// Values `s_0(z) .. s_k(z)` in one pass.
    pub fn second_type_all(&self, k: usize, z: Complex64) -> Result<Vec<Complex64>> {
        if self.geometry.contains(z) {
            return Err(Error::Domain { z });
        }
        if self.family == Family::CircleLebesgue {
            let w = z.inv();
            let mut s = w;
            let mut out = Vec::with_capacity(k + 1);
            for _ in 0..=k {
                out.push(s);
                s *= w;
            }
            return Ok(out);
        }
        let s0 = self.stieltjes_s0(z);
        let mut out = Vec::with_capacity(k + 1);
        out.push(s0);
        if k == 0 {
            return Ok(out);
        }
        // Truncation error of the backward recurrence decays like
        // level^(-2 buffer); 23.03 / ln(level) targets 1e-20.
        let level = self.geometry.level_indicator(z);
        let buffer = (23.03 / level.ln()).ceil().clamp(30.0, 20_000.0) as usize;
        let start = k + buffer;
        let mut ratios = vec![Complex64::ZERO; k];
        let mut r = Complex64::ZERO;
        for j in (1..=start).rev() {
            let (aj, bj) = self.recurrence_unchecked(j);
            let (_, bj1) = self.recurrence_unchecked(j + 1);
            r = Complex64::new(bj, 0.0) / (z - aj - bj1 * r);
            if j - 1 < k {
                ratios[j - 1] = r;
            }
        }
        let mut s = s0;
        for ratio in ratios {
            s *= ratio;
            out.push(s);
        }
        Ok(out)
    }

    /// Closed-form Stieltjes transform `s_0(z) = p_0 ∫ dmu(t) / (z - t)`.
    fn stieltjes_s0(&self, z: Complex64) -> Complex64 {
        let (_, beta) = self.affine();
        let u = self.geometry.pullback(z);
        let root = (u - 1.0).sqrt() * (u + 1.0).sqrt();
        match self.family {
            Family::CircleLebesgue => z.inv(),
            Family::ChebyshevFirstKind => std::f64::consts::PI.sqrt() / (beta * root),
            Family::ChebyshevSecondKind => {
                (2.0 * std::f64::consts::PI).sqrt() * (u - root) / beta
            }
            Family::Legendre => {
                let Geometry::Interval { a, b } = self.geometry else {
                    unreachable!()
                };
                ((z - a) / (z - b)).ln() / (b - a).sqrt()
            }
        }
    }

    /// Coordinates of `z^j F` given the coordinates of `F`.
    ///
    /// Interval families apply the symmetric tridiagonal multiplication
    /// operator `j` times, losing one trailing index per application; the
    /// circle shifts indices up by `j`. Entry `k` of the result equals
    /// `<z^j F, p_k>` exactly for every produced index.
    pub fn apply_multiplication(
        &self,
        c: &CoefficientVector,
        j: usize,
    ) -> Result<CoefficientVector> {
        self.check_family(c)?;
        match self.family {
            Family::CircleLebesgue => {
                let mut entries = vec![Complex64::ZERO; c.len() + j];
                entries[j..].copy_from_slice(c.entries());
                Ok(CoefficientVector { family: self.family, entries })
            }
            _ => {
                let mut cur = c.entries.clone();
                for step in 0..j {
                    if cur.len() < 2 {
                        return Err(Error::Truncation {
                            needed: c.len() + (j - step),
                            have: c.len(),
                        });
                    }
                    let mut next = vec![Complex64::ZERO; cur.len() - 1];
                    for (k, slot) in next.iter_mut().enumerate() {
                        let (ak, bk) = self.recurrence_unchecked(k);
                        let (_, bk1) = self.recurrence_unchecked(k + 1);
                        let mut v = cur[k] * ak + cur[k + 1] * bk1;
                        if k > 0 {
                            v += cur[k - 1] * bk;
                        }
                        *slot = v;
                    }
                    cur = next;
                }
                Ok(CoefficientVector { family: self.family, entries: cur })
            }
        }
    }

    fn check_family(&self, c: &CoefficientVector) -> Result<()> {
        if c.family != self.family {
            return Err(Error::Validation(format!(
                "coefficient vector belongs to family {}, basis is {}",
                c.family, self.family
            )));
        }
        Ok(())
    }

    /// Inner product `<g, h> = ∫ g(t) conj(h(t)) dmu(t)` by node-doubling
    /// Gauss-type quadrature (trapezoid in the angle on the circle).
    ///
    /// Refinement stops when the change is below `1e-12` relative to the
    /// integrand's L1 mass; the node cap is `2^16`.
    pub fn quadrature_inner<G, H>(&self, g: G, h: H) -> Result<Complex64>
    where
        G: Fn(Complex64) -> Complex64,
        H: Fn(Complex64) -> Complex64,
    {
        const START: usize = 32;
        const CAP: usize = 1 << 16;
        const TOL: f64 = 1e-12;
        let mut nodes = START;
        let mut prev: Option<Complex64> = None;
        loop {
            let (val, l1) = self.fixed_quadrature(&g, &h, nodes);
            if let Some(p) = prev {
                let change = (val - p).norm();
                if change <= TOL * val.norm().max(l1) {
                    return Ok(val);
                }
                if nodes >= CAP {
                    return Err(Error::Convergence { max_nodes: CAP, last_change: change });
                }
            }
            prev = Some(val);
            nodes *= 2;
        }
    }

    /// One fixed-order evaluation; returns (integral, L1 mass of integrand).
    fn fixed_quadrature<G, H>(&self, g: &G, h: &H, n: usize) -> (Complex64, f64)
    where
        G: Fn(Complex64) -> Complex64,
        H: Fn(Complex64) -> Complex64,
    {
        let mut sum = Complex64::ZERO;
        let mut l1 = 0.0;
        match self.family {
            Family::CircleLebesgue => {
                for j in 0..n {
                    let theta = std::f64::consts::TAU * j as f64 / n as f64;
                    let zeta = Complex64::from_polar(1.0, theta);
                    let gv = g(zeta);
                    let hv = h(zeta);
                    sum += gv * hv.conj();
                    l1 += gv.norm() * hv.norm();
                }
                (sum / n as f64, l1 / n as f64)
            }
            _ => {
                let (alpha, beta) = self.affine();
                let scale = match self.family {
                    Family::Legendre => beta,
                    _ => 1.0,
                };
                let mut accumulate = |t: f64, w: f64| {
                    let x = Complex64::new(alpha + beta * t, 0.0);
                    let gv = g(x);
                    let hv = h(x);
                    sum += w * gv * hv.conj();
                    l1 += w * gv.norm() * hv.norm();
                };
                match self.family {
                    Family::ChebyshevFirstKind => {
                        let rule = quad::gauss_chebyshev_first(n);
                        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                            accumulate(t, w);
                        }
                    }
                    Family::ChebyshevSecondKind => {
                        let rule = quad::gauss_chebyshev_second(n);
                        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                            accumulate(t, w);
                        }
                    }
                    Family::Legendre => {
                        let rule = quad::gauss_legendre(n);
                        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                            accumulate(t, w);
                        }
                    }
                    Family::CircleLebesgue => unreachable!(),
                }
                (sum * scale, l1 * scale)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cheb1() -> MeasureBasis {
        MeasureBasis::new(Geometry::interval(-1.0, 1.0).unwrap(), Family::ChebyshevFirstKind)
            .unwrap()
    }

    fn legendre() -> MeasureBasis {
        MeasureBasis::new(Geometry::interval(-1.0, 1.0).unwrap(), Family::Legendre).unwrap()
    }

    fn circle() -> MeasureBasis {
        MeasureBasis::new(Geometry::UnitDisk, Family::CircleLebesgue).unwrap()
    }

    /// Fixed high-order Gauss-Chebyshev evaluation, the test-side oracle for
    /// integrals against the Chebyshev weight.
    fn cheb1_oracle<F: Fn(f64) -> Complex64>(f: F) -> Complex64 {
        let n = 4096;
        let mut sum = Complex64::ZERO;
        for j in 0..n {
            let t = ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            sum += f(t);
        }
        sum * std::f64::consts::PI / n as f64
    }

    #[test]
    fn constructor_rejects_mismatched_pairs() {
        assert!(MeasureBasis::new(Geometry::UnitDisk, Family::Legendre).is_err());
        let iv = Geometry::interval(-1.0, 1.0).unwrap();
        assert!(MeasureBasis::new(iv, Family::CircleLebesgue).is_err());
    }

    #[test]
    fn eval_p_examples() {
        let b = cheb1();
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        assert_relative_eq!(b.eval_p(0, c(0.3, 0.0)).re, inv_sqrt_pi, epsilon = 1e-14);
        // p_3(1) = sqrt(2/pi) * T_3(1), T_3(1) = 1.
        let sqrt_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
        assert_relative_eq!(b.eval_p(3, c(1.0, 0.0)).re, sqrt_2_over_pi, epsilon = 1e-13);
        assert_relative_eq!(circle().eval_p(5, c(2.0, 0.0)).re, 32.0, epsilon = 1e-13);
    }

    #[test]
    fn eval_p_matches_chebyshev_closed_form() {
        let b = cheb1();
        let sqrt_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
        for k in 1..20usize {
            for x in [-0.9f64, -0.4, 0.1, 0.7] {
                let t_k = (k as f64 * x.acos()).cos();
                assert_relative_eq!(
                    b.eval_p(k, c(x, 0.0)).re,
                    sqrt_2_over_pi * t_k,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn leading_coeff_examples() {
        assert_eq!(circle().leading_coeff(7), 1.0);
        let b = cheb1();
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        assert_relative_eq!(b.leading_coeff(0), inv_sqrt_pi, epsilon = 1e-15);
        // kappa_3 = sqrt(2/pi) * 2^2.
        let expected = (2.0 / std::f64::consts::PI).sqrt() * 4.0;
        assert_relative_eq!(b.leading_coeff(3), expected, epsilon = 1e-14);
    }

    #[test]
    fn leading_coeff_matches_growth_of_p() {
        for b in [cheb1(), legendre()] {
            let z = c(1e7, 0.0);
            for k in [1usize, 3, 6] {
                let ratio = b.eval_p(k, z).re / 1e7f64.powi(k as i32);
                assert_relative_eq!(ratio, b.leading_coeff(k), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn second_type_circle_closed_form() {
        let b = circle();
        assert_relative_eq!(b.second_type_fn(2, c(2.0, 0.0)).unwrap().re, 0.125, epsilon = 1e-15);
        let z = c(1.2, -0.9);
        let s = b.second_type_fn(4, z).unwrap();
        assert!((s - z.powu(5).inv()).norm() < 1e-15);
    }

    #[test]
    fn second_type_chebyshev_closed_form() {
        // s_n(z) = sqrt(2 pi) / (sqrt(z^2 - 1) phi(z)^n) for n >= 1 on [-1, 1].
        let b = cheb1();
        let z = c(2.0, 0.0);
        let root = 3f64.sqrt();
        let phi = 2.0 + root;
        for n in [1usize, 2, 5, 20, 60] {
            let expected = (2.0 * std::f64::consts::PI).sqrt() / (root * phi.powi(n as i32));
            let got = b.second_type_fn(n, z).unwrap();
            assert_relative_eq!(got.re, expected, max_relative = 1e-12);
            assert!(got.im.abs() <= expected * 1e-12);
        }
    }

    #[test]
    fn second_type_matches_quadrature_oracle() {
        let b = cheb1();
        let z = c(2.0, 0.0);
        for n in [0usize, 1, 5] {
            let oracle = cheb1_oracle(|t| {
                b.eval_p(n, c(t, 0.0)) / (z - t)
            });
            let got = b.second_type_fn(n, z).unwrap();
            assert!((got - oracle).norm() <= 1e-10 * oracle.norm().max(1e-3));
        }
        // Legendre against the module's own adaptive quadrature at modest n.
        let lb = legendre();
        for n in [0usize, 1, 4] {
            let oracle = lb
                .quadrature_inner(|x| (c(2.5, 0.0) - x).inv(), |x| lb.eval_p(n, x))
                .unwrap();
            let got = lb.second_type_fn(n, c(2.5, 0.0)).unwrap();
            assert!((got - oracle).norm() <= 1e-10 * oracle.norm());
        }
    }

    #[test]
    fn second_type_deep_values_match_independent_oracle() {
        // Reference digits from 80-digit adaptive quadrature of the defining
        // integral (computed outside this crate); the deep entries sit far
        // below anything a double-precision quadrature could certify.
        let b = legendre();
        let s30 = b.second_type_fn(30, c(2.5, 0.0)).unwrap();
        assert_relative_eq!(s30.re, 2.90615993326845e-21, max_relative = 1e-13);
        assert!(s30.im.abs() <= 1e-13 * s30.re.abs());
        let s80 = b.second_type_fn(80, c(0.4, 1.5)).unwrap();
        let expected = c(-5.323338795318739e-43, -3.02332908415683e-43);
        assert!((s80 - expected).norm() <= 1e-13 * expected.norm(), "{s80}");
        let s5 = b.second_type_fn(5, c(0.4, 1.5)).unwrap();
        let expected = c(-0.0006024902174950918, -0.002198848753527849);
        assert!((s5 - expected).norm() <= 1e-13 * expected.norm(), "{s5}");
    }

    #[test]
    fn second_type_complex_argument() {
        let b = cheb1();
        let z = c(0.4, 1.5);
        for n in [0usize, 2, 7] {
            let oracle = cheb1_oracle(|t| b.eval_p(n, c(t, 0.0)) / (z - t));
            let got = b.second_type_fn(n, z).unwrap();
            assert!((got - oracle).norm() <= 1e-10 * oracle.norm());
        }
    }

    #[test]
    fn second_type_rejects_points_in_e() {
        assert!(matches!(
            cheb1().second_type_fn(3, c(0.5, 0.0)),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            circle().second_type_fn(0, c(0.3, 0.2)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn apply_multiplication_shifts_on_circle() {
        let b = circle();
        let cvec = CoefficientVector::new(
            Family::CircleLebesgue,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        let shifted = b.apply_multiplication(&cvec, 1).unwrap();
        assert_eq!(shifted.entries(), &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn apply_multiplication_chebyshev_unit_vector() {
        // x p_0 = (1/sqrt 2) p_1 for Chebyshev on [-1, 1].
        let b = cheb1();
        let e0 = CoefficientVector::new(
            Family::ChebyshevFirstKind,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let out = b.apply_multiplication(&e0, 1).unwrap();
        assert_eq!(out.len(), 2);
        assert_relative_eq!(out.get(0).unwrap().re, 0.0);
        assert_relative_eq!(
            out.get(1).unwrap().re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn apply_multiplication_identity_and_truncation() {
        let b = cheb1();
        let cvec = CoefficientVector::new(
            Family::ChebyshevFirstKind,
            vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 1.0)],
        )
        .unwrap();
        assert_eq!(b.apply_multiplication(&cvec, 0).unwrap(), cvec);
        assert!(matches!(
            b.apply_multiplication(&cvec, 3),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn apply_multiplication_matches_quadrature() {
        for b in [cheb1(), legendre()] {
            let coeffs = vec![
                c(0.3, 0.0),
                c(-1.1, 0.4),
                c(0.7, 0.0),
                c(0.2, -0.6),
                c(-0.05, 0.0),
                c(0.4, 0.1),
            ];
            let cvec = CoefficientVector::new(b.family(), coeffs.clone()).unwrap();
            let f = |x: Complex64| -> Complex64 {
                let ps = b.eval_p_all(5, x);
                coeffs.iter().zip(&ps).map(|(ck, pk)| ck * pk).sum()
            };
            let out = b.apply_multiplication(&cvec, 2).unwrap();
            for k in 0..=3usize {
                let oracle = b.quadrature_inner(|x| x * x * f(x), |x| b.eval_p(k, x)).unwrap();
                let got = out.get(k).unwrap();
                assert!(
                    (got - oracle).norm() <= 1e-9 * oracle.norm().max(1.0),
                    "family {} entry {k}: {got} vs {oracle}",
                    b.family()
                );
            }
        }
    }

    #[test]
    fn quadrature_orthonormality() {
        let b = cheb1();
        assert_relative_eq!(
            b.quadrature_inner(|x| b.eval_p(3, x), |x| b.eval_p(3, x))
                .unwrap()
                .re,
            1.0,
            epsilon = 1e-10
        );
        let lb = legendre();
        let off = lb
            .quadrature_inner(|x| lb.eval_p(2, x), |x| lb.eval_p(5, x))
            .unwrap();
        assert!(off.norm() <= 1e-10);
    }

    #[test]
    fn quadrature_inner_cauchy_kernel_equals_second_type() {
        let b = cheb1();
        let got = b
            .quadrature_inner(|x| (c(2.0, 0.0) - x).inv(), |x| b.eval_p(1, x))
            .unwrap();
        let expected = b.second_type_fn(1, c(2.0, 0.0)).unwrap();
        assert!((got - expected).norm() <= 1e-10);
        // Pinned digits: sqrt(2 pi) / (sqrt 3 * (2 + sqrt 3)).
        assert_relative_eq!(got.re, 0.3877767436, epsilon = 1e-7);
    }

    #[test]
    fn orthonormality_grid_under_module_quadrature() {
        for b in [cheb1(), legendre(),
            MeasureBasis::new(Geometry::interval(-1.0, 1.0).unwrap(), Family::ChebyshevSecondKind)
                .unwrap()]
        {
            for i in (0..=40usize).step_by(8) {
                for j in (0..=40usize).step_by(8) {
                    let val = b
                        .quadrature_inner(|x| b.eval_p(i, x), |x| b.eval_p(j, x))
                        .unwrap();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (val.re - expected).abs() <= 1e-10 && val.im.abs() <= 1e-10,
                        "family {} <p_{i}, p_{j}> = {val}",
                        b.family()
                    );
                }
            }
        }
        // Monomials on the circle.
        let b = circle();
        for i in [0usize, 3, 11] {
            for j in [0usize, 3, 11] {
                let val = b
                    .quadrature_inner(|z| b.eval_p(i, z), |z| b.eval_p(j, z))
                    .unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((val.re - expected).abs() <= 1e-12 && val.im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        // Pole at distance 1e-9 from the support: the level is ~1 + 6e-5 and
        // the node cap is reached long before stabilization.
        let b = cheb1();
        let z = c(1.0 + 1e-9, 0.0);
        let err = b.quadrature_inner(|x| (z - x).inv(), |x| (z - x).inv());
        assert!(matches!(err, Err(Error::Convergence { .. })));
    }

    #[test]
    fn ratio_asymptotics_toward_inverse_phi() {
        let b = cheb1();
        let z = c(2.0, 0.0);
        let phi = 2.0 + 3f64.sqrt();
        for n in 30..45usize {
            let ratio = b.eval_p(n, z) / b.eval_p(n + 1, z);
            assert!(
                (ratio - 1.0 / phi).norm() <= 1e-6,
                "p ratio off at n = {n}: {ratio}"
            );
            let s_ratio =
                b.second_type_fn(n + 1, z).unwrap() / b.second_type_fn(n, z).unwrap();
            assert!(
                (s_ratio - 1.0 / phi).norm() <= 1e-6,
                "s ratio off at n = {n}: {s_ratio}"
            );
        }
        // The same limit at higher offsets: p_n / p_(n+l) -> phi^(-l).
        for l in [2usize, 3] {
            let ratio = b.eval_p(40, z) / b.eval_p(40 + l, z);
            assert!((ratio - (1.0 / phi).powi(l as i32)).norm() <= 1e-6);
        }
        // Legendre converges like 1/n; by n = 200 the ratio is within 2e-3.
        let lb = legendre();
        let ratio = lb.eval_p(200, z) / lb.eval_p(201, z);
        assert!((ratio - 1.0 / phi).norm() <= 2e-3);
    }

    #[test]
    fn root_asymptotics() {
        let b = cheb1();
        let phi = 2.0 + 3f64.sqrt();
        let val = b.eval_p(200, c(2.0, 0.0)).norm().powf(1.0 / 200.0);
        assert!((val - phi).abs() <= 0.01 * phi);
        // Mirror image for the second-type functions: |s_n|^(1/n) -> 1/phi.
        let s = b.second_type_fn(200, c(2.0, 0.0)).unwrap().norm().powf(1.0 / 200.0);
        assert!((s - 1.0 / phi).abs() <= 0.01 / phi);
    }

    #[test]
    fn product_p_s_approaches_log_derivative_of_phi() {
        let b = cheb1();
        let z = c(2.0, 0.0);
        let target = 1.0 / 3f64.sqrt();
        for n in 30..=60usize {
            let prod = b.eval_p(n, z) * b.second_type_fn(n, z).unwrap();
            assert!(
                (prod - target).norm() <= 1e-6,
                "p_n s_n off at n = {n}: {prod}"
            );
        }
        // Circle: p_n(z) s_n(z) = 1/z exactly by construction.
        let cb = circle();
        for n in [0usize, 3, 17] {
            for z in [c(2.0, 0.0), c(-1.5, 2.0)] {
                let prod = cb.eval_p(n, z) * cb.second_type_fn(n, z).unwrap();
                assert!((prod - z.inv()).norm() <= 1e-14 * z.inv().norm());
            }
        }
    }

    #[test]
    fn leading_coeff_ratios_approach_capacity() {
        let b = cheb1();
        for n in 1..40usize {
            let ratio = b.leading_coeff(n) / b.leading_coeff(n + 1);
            assert_eq!(ratio, 0.5, "chebyshev kappa ratio must be exactly 1/2 at n = {n}");
        }
        let lb = legendre();
        let ratio = lb.leading_coeff(200) / lb.leading_coeff(201);
        assert!((ratio - 0.5).abs() <= 1e-2);
    }

    #[test]
    fn coefficient_text_round_trip() {
        let cvec = CoefficientVector::new(
            Family::ChebyshevFirstKind,
            vec![c(1.0, -2.0), c(0.125, 3e-17), c(-4.75e10, 0.0)],
        )
        .unwrap();
        let text = cvec.to_text();
        let back = CoefficientVector::from_text(Family::ChebyshevFirstKind, &text).unwrap();
        assert_eq!(cvec, back);
        assert!(CoefficientVector::from_text(Family::Legendre, "0 1.0").is_err());
        assert!(CoefficientVector::from_text(Family::Legendre, "1 1.0 2.0").is_err());
    }

    proptest::proptest! {
        /// The text format round-trips arbitrary finite values bit-exactly.
        #[test]
        fn text_round_trip_is_lossless(values in proptest::collection::vec(
            (-1e300f64..1e300, -1e300f64..1e300), 0..40)
        ) {
            let entries: Vec<Complex64> = values.iter().map(|&(re, im)| c(re, im)).collect();
            let cvec = CoefficientVector::new(Family::Legendre, entries).unwrap();
            let back = CoefficientVector::from_text(Family::Legendre, &cvec.to_text()).unwrap();
            proptest::prop_assert_eq!(cvec, back);
        }
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(CoefficientVector::new(Family::Legendre, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CoefficientVector::new(Family::Legendre, vec![c(1.0, f64::INFINITY)]).is_err());
    }
}
