//! Target-function models and their expansion coefficients.
//!
//! A [`FunctionSpec`] declares a function by its pole set (locations, orders,
//! Laurent coefficients) plus an optional entire part, so every test target
//! carries its own ground truth: the singularity ladder, the radii `rho_m`,
//! and the true poles a row sequence should recover. [`fourier_coeffs`]
//! produces the coordinates `F_n = <F, p_n>` that everything downstream
//! consumes, and [`rho0_estimate`] recovers the holomorphy radius from the
//! coefficient decay.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{CoefficientVector, Family, MeasureBasis};
use crate::error::{Error, Result};
use crate::geometry::Geometry;

/// Step used when differentiating `s_n` with respect to the pole location for
/// higher-order poles.
const POLE_DERIVATIVE_STEP: f64 = 1e-6;

/// One pole: `coefficients[q-1]` multiplies `(z - location)^(-q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSpec {
    pub location: Complex64,
    pub order: usize,
    pub coefficients: Vec<Complex64>,
}

/// Entire component added on top of the pole part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntirePart {
    #[default]
    None,
    Exp,
    Polynomial(Vec<Complex64>),
}

/// Ground-truth bookkeeping for singularities the pole list cannot express
/// (e.g. a branch point); `level` overrides `|phi(location)|` when set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeclaredSingularity {
    pub location: Complex64,
    #[serde(default)]
    pub level: Option<f64>,
}

/// A declarative target function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(default)]
    pub poles: Vec<PoleSpec>,
    #[serde(default)]
    pub entire_part: EntirePart,
    #[serde(default)]
    pub declared_singularities: Vec<DeclaredSingularity>,
}

impl FunctionSpec {
    /// Checks pole structure against a geometry: locations outside `E`,
    /// orders matching the coefficient lists, leading Laurent coefficient
    /// nonzero (otherwise the declared order lies).
    pub fn validate(&self, geometry: &Geometry) -> Result<()> {
        for (i, pole) in self.poles.iter().enumerate() {
            if geometry.contains(pole.location) {
                return Err(Error::Validation(format!(
                    "pole {i} at {} lies in the set E",
                    pole.location
                )));
            }
            if pole.order == 0 || pole.coefficients.len() != pole.order {
                return Err(Error::Validation(format!(
                    "pole {i}: order {} does not match {} coefficients",
                    pole.order,
                    pole.coefficients.len()
                )));
            }
            if pole.coefficients[pole.order - 1].norm() == 0.0 {
                return Err(Error::Validation(format!(
                    "pole {i}: leading Laurent coefficient is zero"
                )));
            }
        }
        for (i, s) in self.declared_singularities.iter().enumerate() {
            if geometry.contains(s.location) && s.level.is_none() {
                return Err(Error::Validation(format!(
                    "declared singularity {i} lies in E and carries no level"
                )));
            }
        }
        Ok(())
    }

    /// Total pole multiplicity (sum of orders).
    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.order).sum()
    }

    /// Pointwise value; the caller keeps `z` away from the poles.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = Complex64::ZERO;
        for pole in &self.poles {
            let d = (z - pole.location).inv();
            let mut power = d;
            for &c in &pole.coefficients {
                v += c * power;
                power *= d;
            }
        }
        match &self.entire_part {
            EntirePart::None => {}
            EntirePart::Exp => v += z.exp(),
            EntirePart::Polynomial(coeffs) => {
                let mut acc = Complex64::ZERO;
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                v += acc;
            }
        }
        v
    }

    /// All singularities expanded by multiplicity and sorted by level
    /// `|phi|`, ties broken by location. Declared singularities count once.
    pub fn singularity_ladder(&self, geometry: &Geometry) -> Vec<(f64, Complex64)> {
        let mut ladder = Vec::new();
        for pole in &self.poles {
            let level = geometry.level_indicator(pole.location);
            for _ in 0..pole.order {
                ladder.push((level, pole.location));
            }
        }
        for s in &self.declared_singularities {
            let level = s.level.unwrap_or_else(|| geometry.level_indicator(s.location));
            ladder.push((level, s.location));
        }
        ladder.sort_by(|x, y| {
            x.0.total_cmp(&y.0)
                .then(x.1.re.total_cmp(&y.1.re))
                .then(x.1.im.total_cmp(&y.1.im))
        });
        ladder
    }

    /// Index of the largest canonical domain where `F` is meromorphic with at
    /// most `m` poles; `None` means the domain is the whole plane.
    pub fn rho_m(&self, geometry: &Geometry, m: usize) -> Option<f64> {
        self.singularity_ladder(geometry).get(m).map(|&(level, _)| level)
    }

    /// The poles (with multiplicity) lying strictly inside `D_rho_m`; these
    /// are the limits an `m`-row should recover when their count is `m`.
    pub fn poles_within_rho_m(&self, geometry: &Geometry, m: usize) -> Vec<Complex64> {
        let rho = self.rho_m(geometry, m);
        let mut out = Vec::new();
        for pole in &self.poles {
            let level = geometry.level_indicator(pole.location);
            if rho.is_none_or(|r| level < r) {
                for _ in 0..pole.order {
                    out.push(pole.location);
                }
            }
        }
        out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        out
    }
}

/// Fourier coefficients `F_0 .. F_{n_max}` of the declared function.
///
/// All pole contributions go through closed forms: geometric/binomial series
/// on the circle, second-type function values (and their location
/// derivatives, by central differences of step `1e-6`, for orders above one)
/// on intervals. Polynomial entire parts use the exact banded multiplication
/// operator; the exponential entire part falls back to adaptive quadrature.
pub fn fourier_coeffs(
    f: &FunctionSpec,
    basis: &MeasureBasis,
    n_max: usize,
) -> Result<CoefficientVector> {
    f.validate(&basis.geometry())?;
    let mut entries = vec![Complex64::ZERO; n_max + 1];
    match basis.family() {
        Family::CircleLebesgue => {
            for pole in &f.poles {
                add_circle_pole_series(&mut entries, pole);
            }
            match &f.entire_part {
                EntirePart::None => {}
                EntirePart::Exp => {
                    let mut factorial = 1.0;
                    for (k, e) in entries.iter_mut().enumerate() {
                        if k > 0 {
                            factorial *= k as f64;
                        }
                        *e += 1.0 / factorial;
                    }
                }
                EntirePart::Polynomial(coeffs) => {
                    for (k, &c) in coeffs.iter().enumerate() {
                        if k <= n_max {
                            entries[k] += c;
                        }
                    }
                }
            }
        }
        _ => {
            for pole in &f.poles {
                add_interval_pole_series(&mut entries, basis, pole)?;
            }
            match &f.entire_part {
                EntirePart::None => {}
                EntirePart::Exp => {
                    let mut contrib = vec![Complex64::ZERO; entries.len()];
                    for (k, e) in contrib.iter_mut().enumerate() {
                        *e = basis.quadrature_inner(|x| x.exp(), |x| basis.eval_p(k, x))?;
                    }
                    // Quadrature cannot certify values under its absolute
                    // error floor (observed up to ~2e-15 of the peak once
                    // the node count grows); below it the true coefficients
                    // (factorial decay) and the computed noise are
                    // indistinguishable, so the tail is reported as the
                    // zeros it really is.
                    let peak = contrib.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    for (e, v) in entries.iter_mut().zip(&contrib) {
                        if v.norm() > 1e-13 * peak {
                            *e += v;
                        }
                    }
                }
                EntirePart::Polynomial(coeffs) => {
                    add_interval_polynomial(&mut entries, basis, coeffs)?;
                }
            }
        }
    }
    CoefficientVector::new(basis.family(), entries)
}

/// Taylor coefficients of `sum_q c_q (z - lambda)^(-q)` around 0:
/// `(z - lambda)^(-q) = (-1)^q lambda^(-q) sum_k C(k+q-1, q-1) (z/lambda)^k`.
fn add_circle_pole_series(entries: &mut [Complex64], pole: &PoleSpec) {
    let lambda = pole.location;
    for (qi, &c) in pole.coefficients.iter().enumerate() {
        let q = qi + 1;
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        let mut lam_pow = lambda.powu(q as u32).inv();
        let mut binom = 1.0;
        for (k, e) in entries.iter_mut().enumerate() {
            if k > 0 {
                // C(k+q-1, q-1) updated incrementally.
                binom *= (k + q - 1) as f64 / k as f64;
                lam_pow /= lambda;
            }
            *e += c * sign * binom * lam_pow;
        }
    }
}

/// Interval contribution of one pole:
/// `<(x - lambda)^(-q), p_n> = -(1/(q-1)!) d^(q-1) s_n / d lambda^(q-1)`.
fn add_interval_pole_series(
    entries: &mut [Complex64],
    basis: &MeasureBasis,
    pole: &PoleSpec,
) -> Result<()> {
    let n_max = entries.len() - 1;
    let lambda = pole.location;
    for (qi, &c) in pole.coefficients.iter().enumerate() {
        let deriv_order = qi; // derivative order q - 1
        let mut factorial = 1.0;
        for i in 1..=deriv_order {
            factorial *= i as f64;
        }
        let values = second_type_derivative(basis, n_max, lambda, deriv_order)?;
        for (e, s) in entries.iter_mut().zip(&values) {
            *e -= c / factorial * s;
        }
    }
    Ok(())
}

/// Central-difference derivative of `n -> s_n(lambda)` with respect to the
/// pole location; `order = 0` is the plain value.
fn second_type_derivative(
    basis: &MeasureBasis,
    n_max: usize,
    lambda: Complex64,
    order: usize,
) -> Result<Vec<Complex64>> {
    if order == 0 {
        return basis.second_type_all(n_max, lambda);
    }
    let h = POLE_DERIVATIVE_STEP;
    let mut acc = vec![Complex64::ZERO; n_max + 1];
    let mut binom = 1.0;
    for i in 0..=order {
        if i > 0 {
            binom *= (order - i + 1) as f64 / i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let offset = order as f64 / 2.0 - i as f64;
        let vals = basis.second_type_all(n_max, lambda + offset * h)?;
        for (a, v) in acc.iter_mut().zip(&vals) {
            *a += sign * binom * v;
        }
    }
    let scale = h.powi(order as i32);
    for a in &mut acc {
        *a /= scale;
    }
    Ok(acc)
}

/// Exact coefficients of a polynomial entire part via the banded
/// multiplication operator: coords(x^j) = J^j (sqrt(mass) e_0).
fn add_interval_polynomial(
    entries: &mut [Complex64],
    basis: &MeasureBasis,
    coeffs: &[Complex64],
) -> Result<()> {
    let n_max = entries.len() - 1;
    let deg = coeffs.len().saturating_sub(1);
    // Seed long enough that deg applications still cover n_max entries.
    let len = n_max + deg + 1;
    let mut one = vec![Complex64::ZERO; len];
    one[0] = Complex64::new(basis.mass().sqrt(), 0.0);
    let mut power = CoefficientVector::new(basis.family(), one)?;
    for (j, &c) in coeffs.iter().enumerate() {
        if j > 0 {
            power = basis.apply_multiplication(&power, 1)?;
        }
        for (e, v) in entries.iter_mut().zip(power.entries()) {
            *e += c * v;
        }
    }
    Ok(())
}

/// Outcome of the holomorphy-radius estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rho0Estimate {
    Finite { rho: f64, residual: f64 },
    Entire,
}

/// Estimates `rho_0` as the reciprocal of the fitted exponential decay rate
/// of `|F_n|` over `window` (least squares on `log |F_n|` against `n`,
/// skipping exact zeros). Returns [`Rho0Estimate::Entire`] when the fitted
/// radius exceeds `1e6` or the coefficients terminate.
pub fn rho0_estimate(
    c: &CoefficientVector,
    window: std::ops::RangeInclusive<usize>,
) -> Result<Rho0Estimate> {
    let (lo, hi) = (*window.start(), *window.end());
    if hi >= c.len() || lo > hi {
        return Err(Error::Validation(format!(
            "window [{lo}, {hi}] outside coefficient range 0..{}",
            c.len()
        )));
    }
    let points: Vec<(f64, f64)> = (lo..=hi)
        .filter_map(|n| {
            let mag = c.get(n).unwrap().norm();
            // Skip exact zeros and underflowed dust.
            (mag > 1e-305).then(|| (n as f64, mag.ln()))
        })
        .collect();
    if points.len() < 5 {
        let last_nonzero = c.entries().iter().rposition(|v| v.norm() > 1e-305);
        // Terminated coefficient sequences (polynomials, the zero function)
        // are entire; anything else is too sparse to fit.
        return match last_nonzero {
            None => Ok(Rho0Estimate::Entire),
            Some(idx) if idx < hi => Ok(Rho0Estimate::Entire),
            _ => Err(Error::Degenerate { needed: 5, found: points.len() }),
        };
    }
    let (slope, residual) = least_squares_slope(&points);
    let rho = (-slope).exp();
    if rho > 1e6 {
        return Ok(Rho0Estimate::Entire);
    }
    Ok(Rho0Estimate::Finite { rho, residual })
}

/// Least-squares slope of `y` against `x` plus the RMS of the residuals.
pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    (slope, (rss / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simple_pole(location: Complex64, coeff: Complex64) -> PoleSpec {
        PoleSpec { location, order: 1, coefficients: vec![coeff] }
    }

    /// 1/(a - z) as a FunctionSpec: coefficient -1 on (z - a)^(-1).
    fn reciprocal(a: f64) -> FunctionSpec {
        FunctionSpec {
            poles: vec![simple_pole(c(a, 0.0), c(-1.0, 0.0))],
            entire_part: EntirePart::None,
            declared_singularities: vec![],
        }
    }

    fn cheb1() -> MeasureBasis {
        MeasureBasis::new(Geometry::interval(-1.0, 1.0).unwrap(), Family::ChebyshevFirstKind)
            .unwrap()
    }

    fn circle() -> MeasureBasis {
        MeasureBasis::new(Geometry::UnitDisk, Family::CircleLebesgue).unwrap()
    }

    #[test]
    fn circle_geometric_series() {
        // 1/(2 - z) = sum z^k / 2^(k+1).
        let coeffs = fourier_coeffs(&reciprocal(2.0), &circle(), 10).unwrap();
        assert_relative_eq!(coeffs.get(3).unwrap().re, 0.0625, epsilon = 1e-15);
        for k in 0..=10usize {
            assert_relative_eq!(
                coeffs.get(k).unwrap().re,
                0.5f64.powi(k as i32 + 1),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn circle_double_pole_series() {
        // 1/(2 - z)^2 = (z - 2)^(-2): F_k = (k + 1) / 2^(k+2).
        let f = FunctionSpec {
            poles: vec![PoleSpec {
                location: c(2.0, 0.0),
                order: 2,
                coefficients: vec![c(0.0, 0.0), c(1.0, 0.0)],
            }],
            entire_part: EntirePart::None,
            declared_singularities: vec![],
        };
        let coeffs = fourier_coeffs(&f, &circle(), 8).unwrap();
        for k in 0..=8usize {
            let expected = (k as f64 + 1.0) / 2f64.powi(k as i32 + 2);
            assert_relative_eq!(coeffs.get(k).unwrap().re, expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn chebyshev_coefficients_equal_second_type_values() {
        let b = cheb1();
        let coeffs = fourier_coeffs(&reciprocal(2.0), &b, 20).unwrap();
        // F_n = s_n(2): pinned digits for n = 1, module cross-checks elsewhere.
        assert_relative_eq!(coeffs.get(1).unwrap().re, 0.3877767436, epsilon = 1e-9);
        for n in [0usize, 3, 12, 20] {
            let expected = b.second_type_fn(n, c(2.0, 0.0)).unwrap();
            assert!((coeffs.get(n).unwrap() - expected).norm() <= 1e-14 * expected.norm());
        }
        // Quadrature oracle route.
        let oracle = b
            .quadrature_inner(|x| (c(2.0, 0.0) - x).inv(), |x| b.eval_p(4, x))
            .unwrap();
        assert!((coeffs.get(4).unwrap() - oracle).norm() <= 1e-10 * oracle.norm());
    }

    #[test]
    fn constant_function_projects_onto_p0() {
        let f = FunctionSpec {
            poles: vec![],
            entire_part: EntirePart::Polynomial(vec![c(1.0, 0.0)]),
            declared_singularities: vec![],
        };
        let coeffs = fourier_coeffs(&f, &cheb1(), 6).unwrap();
        assert_relative_eq!(
            coeffs.get(0).unwrap().re,
            std::f64::consts::PI.sqrt(),
            epsilon = 1e-12
        );
        for k in 1..=6usize {
            assert_eq!(coeffs.get(k).unwrap(), Complex64::ZERO);
        }
    }

    #[test]
    fn interval_double_pole_matches_quadrature() {
        let b = cheb1();
        let f = FunctionSpec {
            poles: vec![PoleSpec {
                location: c(2.0, 0.0),
                order: 2,
                coefficients: vec![c(0.5, 0.0), c(1.0, 0.0)],
            }],
            entire_part: EntirePart::None,
            declared_singularities: vec![],
        };
        let coeffs = fourier_coeffs(&f, &b, 6).unwrap();
        for n in [0usize, 1, 3, 6] {
            let oracle = b
                .quadrature_inner(|x| f.eval(x), |x| b.eval_p(n, x))
                .unwrap();
            assert!(
                (coeffs.get(n).unwrap() - oracle).norm() <= 1e-6 * oracle.norm(),
                "n = {n}: {} vs {oracle}",
                coeffs.get(n).unwrap()
            );
        }
    }

    #[test]
    fn exp_entire_part_matches_quadrature() {
        let b = cheb1();
        let f = FunctionSpec {
            poles: vec![],
            entire_part: EntirePart::Exp,
            declared_singularities: vec![],
        };
        let coeffs = fourier_coeffs(&f, &b, 5).unwrap();
        let oracle = b.quadrature_inner(|x| x.exp(), |x| b.eval_p(2, x)).unwrap();
        assert!((coeffs.get(2).unwrap() - oracle).norm() <= 1e-12);
        // Circle: Taylor coefficients 1/k!.
        let cc = fourier_coeffs(&f, &circle(), 6).unwrap();
        assert_relative_eq!(cc.get(4).unwrap().re, 1.0 / 24.0, epsilon = 1e-15);
    }

    #[test]
    fn linearity_of_coefficients() {
        let b = cheb1();
        let f = reciprocal(2.0);
        let g = reciprocal(3.0);
        let (alpha, beta) = (c(2.0, -1.0), c(0.5, 0.25));
        let combined = FunctionSpec {
            poles: vec![
                simple_pole(c(2.0, 0.0), alpha * c(-1.0, 0.0)),
                simple_pole(c(3.0, 0.0), beta * c(-1.0, 0.0)),
            ],
            entire_part: EntirePart::None,
            declared_singularities: vec![],
        };
        let cf = fourier_coeffs(&f, &b, 15).unwrap();
        let cg = fourier_coeffs(&g, &b, 15).unwrap();
        let cc = fourier_coeffs(&combined, &b, 15).unwrap();
        for n in 0..=15usize {
            let expected = alpha * cf.get(n).unwrap() + beta * cg.get(n).unwrap();
            assert!((cc.get(n).unwrap() - expected).norm() <= 1e-12 * expected.norm().max(1e-30));
        }
    }

    #[test]
    fn partial_sums_converge_inside_domain_of_holomorphy() {
        let b = cheb1();
        let f = reciprocal(2.0);
        let coeffs = fourier_coeffs(&f, &b, 60).unwrap();
        for i in 0..=36 {
            let x = -0.9 + 0.05 * i as f64;
            let ps = b.eval_p_all(60, c(x, 0.0));
            let sum: Complex64 = coeffs
                .entries()
                .iter()
                .zip(&ps)
                .map(|(ck, pk)| ck * pk)
                .sum();
            let exact = 1.0 / (2.0 - x);
            assert!(
                (sum.re - exact).abs() <= 1e-8,
                "partial sum off at x = {x}: {} vs {exact}",
                sum.re
            );
        }
    }

    #[test]
    fn pole_inside_e_rejected() {
        let err = fourier_coeffs(&reciprocal(0.5), &cheb1(), 5);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn rho0_exact_geometric() {
        let entries: Vec<Complex64> = (0..40).map(|n| c(0.5f64.powi(n), 0.0)).collect();
        let cvec = CoefficientVector::new(Family::CircleLebesgue, entries).unwrap();
        match rho0_estimate(&cvec, 5..=39).unwrap() {
            Rho0Estimate::Finite { rho, .. } => assert_relative_eq!(rho, 2.0, epsilon = 1e-12),
            Rho0Estimate::Entire => panic!("geometric sequence is not entire"),
        }
    }

    #[test]
    fn rho0_from_chebyshev_coefficients() {
        let b = cheb1();
        let coeffs = fourier_coeffs(&reciprocal(2.0), &b, 60).unwrap();
        let phi2 = 2.0 + 3f64.sqrt();
        match rho0_estimate(&coeffs, 20..=60).unwrap() {
            Rho0Estimate::Finite { rho, .. } => {
                assert!((rho - phi2).abs() <= 0.05 * phi2, "rho = {rho}");
            }
            Rho0Estimate::Entire => panic!("pole at 2 is not entire"),
        }
    }

    #[test]
    fn rho0_polynomial_is_entire() {
        let f = FunctionSpec {
            poles: vec![],
            entire_part: EntirePart::Polynomial(vec![c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]),
            declared_singularities: vec![],
        };
        let coeffs = fourier_coeffs(&f, &cheb1(), 40).unwrap();
        assert_eq!(rho0_estimate(&coeffs, 10..=40).unwrap(), Rho0Estimate::Entire);
    }

    #[test]
    fn rho0_scale_invariance() {
        let b = cheb1();
        let coeffs = fourier_coeffs(&reciprocal(2.0), &b, 50).unwrap();
        let scaled = CoefficientVector::new(
            b.family(),
            coeffs.entries().iter().map(|v| v * c(7.25, -3.0)).collect(),
        )
        .unwrap();
        let r1 = rho0_estimate(&coeffs, 10..=50).unwrap();
        let r2 = rho0_estimate(&scaled, 10..=50).unwrap();
        match (r1, r2) {
            (Rho0Estimate::Finite { rho: a, .. }, Rho0Estimate::Finite { rho: b, .. }) => {
                assert!((a - b).abs() <= 1e-12 * a)
            }
            _ => panic!("both estimates should be finite"),
        }
    }

    #[test]
    fn rho0_degenerate_when_window_too_sparse() {
        let mut entries = vec![Complex64::ZERO; 30];
        entries[2] = c(1.0, 0.0);
        entries[29] = c(0.5, 0.0);
        let cvec = CoefficientVector::new(Family::Legendre, entries).unwrap();
        assert!(matches!(
            rho0_estimate(&cvec, 0..=29),
            Err(Error::Degenerate { .. })
        ));
        let singleton = CoefficientVector::new(Family::Legendre, vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(rho0_estimate(&singleton, 0..=5), Err(Error::Validation(_))));
    }

    #[test]
    fn singularity_ladder_and_rho_m() {
        let g = Geometry::UnitDisk;
        let f = FunctionSpec {
            poles: vec![
                simple_pole(c(3.0, 0.0), c(-1.0, 0.0)),
                simple_pole(c(2.0, 0.0), c(-1.0, 0.0)),
            ],
            entire_part: EntirePart::None,
            declared_singularities: vec![],
        };
        assert_eq!(f.rho_m(&g, 0), Some(2.0));
        assert_eq!(f.rho_m(&g, 1), Some(3.0));
        assert_eq!(f.rho_m(&g, 2), None);
        assert_eq!(f.poles_within_rho_m(&g, 1), vec![c(2.0, 0.0)]);
        assert_eq!(f.poles_within_rho_m(&g, 2), vec![c(2.0, 0.0), c(3.0, 0.0)]);

        // Declared singularity caps the ladder without being a pole.
        let with_branch = FunctionSpec {
            declared_singularities: vec![DeclaredSingularity {
                location: c(4.0, 0.0),
                level: None,
            }],
            ..f.clone()
        };
        assert_eq!(with_branch.rho_m(&g, 2), Some(4.0));
        assert_eq!(with_branch.poles_within_rho_m(&g, 2).len(), 2);
    }

    #[test]
    fn eval_includes_entire_parts() {
        let f = FunctionSpec {
            poles: vec![simple_pole(c(2.0, 0.0), c(-1.0, 0.0))],
            entire_part: EntirePart::Polynomial(vec![c(1.0, 0.0), c(2.0, 0.0)]),
            declared_singularities: vec![],
        };
        let z = c(0.5, 0.0);
        let expected = 1.0 / (2.0 - 0.5) + 1.0 + 2.0 * 0.5;
        assert_relative_eq!(f.eval(z).re, expected, epsilon = 1e-14);
    }
}
