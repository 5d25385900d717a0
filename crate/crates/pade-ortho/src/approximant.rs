//! Construction of the `[n/m]` approximant from expansion coefficients.
//!
//! The denominator is the monic degree-`m` polynomial whose moments
//! `<z^j F, p_{n+i}>` (built from the coefficients through the banded
//! multiplication operator, never fresh quadrature) solve the orthogonality
//! conditions against `p_{n+1} .. p_{n+m}`; the numerator is the projection
//! of `Q F` onto `p_0 .. p_n`. Moment rows decay geometrically with `n`, so
//! every row is equilibrated by its max-abs entry before the solve to keep
//! the system scaled deep into a sweep.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{CoefficientVector, MeasureBasis};
use crate::error::{Error, Result};

/// Scaled determinants at or below this value flag a non-unique approximant.
pub const UNIQUENESS_THRESHOLD: f64 = 1e-10;

/// Relative floor on `|Q(z)|` below which evaluation reports a pole hit.
pub const POLE_EVAL_GUARD: f64 = 1e-14;

/// A monic polynomial in the power basis; `coeffs[i]` multiplies `z^i` and
/// the stored leading coefficient is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    /// Monic polynomial from the lower coefficients `q_0 .. q_{m-1}`.
    pub fn from_lower_coeffs(lower: Vec<Complex64>) -> Self {
        let mut coeffs = lower;
        coeffs.push(Complex64::new(1.0, 0.0));
        MonicPoly { coeffs }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        MonicPoly { coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        MonicPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All `degree + 1` coefficients, constant term first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficients below the leading one.
    pub fn lower_coeffs(&self) -> &[Complex64] {
        &self.coeffs[..self.coeffs.len() - 1]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Roots via balanced companion-matrix eigenvalues, sorted by
    /// (real, imaginary) lexicographic order.
    pub fn roots(&self) -> Vec<Complex64> {
        let mut roots = crate::roots::monic_roots(self.lower_coeffs());
        roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        roots
    }
}

/// One `(n, m)` solution.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub n: usize,
    pub m: usize,
    /// Monic denominator in the power basis.
    pub denominator: MonicPoly,
    /// Numerator coordinates in the `p_k` basis, indices `0 ..= n`.
    pub numerator: CoefficientVector,
    /// Row-equilibrated `|Delta_{n,m}|`.
    pub delta_scaled: f64,
    pub unique: bool,
}

/// Moment matrix: entry `(i-1, j) = <z^j F, p_{n+i}>` for `i = 1..m`,
/// `j = 0..=m`, computed from the coefficient stream.
pub fn moment_matrix(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    n: usize,
    m: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let mut rows = vec![Vec::with_capacity(m + 1); m];
    let mut power = c.clone();
    for j in 0..=m {
        if j > 0 {
            power = basis.apply_multiplication(&power, 1)?;
        }
        for i in 1..=m {
            let v = power.try_get(n + i)?;
            rows[i - 1].push(v);
        }
    }
    Ok(rows)
}

/// Row-equilibrated `|Delta_{n,m}|`: the determinant of the square moment
/// block (columns `0..m`) after dividing each row by its max-abs entry.
pub fn delta_determinant(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    n: usize,
    m: usize,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::Validation("delta determinant needs m >= 1".into()));
    }
    let rows = moment_matrix(basis, c, n, m)?;
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        let scale = row[..m].iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(0.0);
        }
        for j in 0..m {
            mat[(i, j)] = row[j] / scale;
        }
    }
    Ok(mat.lu().determinant().norm())
}

/// Solves for the monic denominator of `[n/m]`.
///
/// The equilibrated linear system `sum_j q_j <z^j F, p_{n+i}> =
/// -<z^m F, p_{n+i}>` is solved by LU; when it is numerically singular the
/// SVD least-norm solution is returned instead and the approximant is
/// flagged non-unique (the uniqueness flag itself comes from the scaled
/// determinant test).
pub fn solve_denominator(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    n: usize,
    m: usize,
) -> Result<(MonicPoly, bool, f64)> {
    if m == 0 {
        // Empty system; the empty determinant convention makes it unique.
        return Ok((MonicPoly::one(), true, 1.0));
    }
    let delta_scaled = delta_determinant(basis, c, n, m)?;
    let rows = moment_matrix(basis, c, n, m)?;
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    let mut rhs = DVector::<Complex64>::zeros(m);
    for (i, row) in rows.iter().enumerate() {
        let scale = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let scale = if scale == 0.0 { 1.0 } else { scale };
        for j in 0..m {
            mat[(i, j)] = row[j] / scale;
        }
        rhs[i] = -row[m] / scale;
    }
    let mut unique = delta_scaled > UNIQUENESS_THRESHOLD;
    let solution = match mat.clone().lu().solve(&rhs) {
        Some(x) if x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) && unique => x,
        _ => {
            // Singular or near-singular: least-norm solution, never a
            // fabricated unique one.
            unique = false;
            let svd = mat.svd(true, true);
            svd.solve(&rhs, UNIQUENESS_THRESHOLD)
                .map_err(|_| Error::SingularSystem { delta: delta_scaled })?
        }
    };
    let lower: Vec<Complex64> = solution.iter().copied().collect();
    Ok((MonicPoly::from_lower_coeffs(lower), unique, delta_scaled))
}

/// Coordinates of `Q F` over the indices every term can produce exactly:
/// `sum_k q_k J^k c`.
pub fn weighted_coefficients(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    q: &MonicPoly,
) -> Result<CoefficientVector> {
    let m = q.degree();
    let mut powers = Vec::with_capacity(m + 1);
    powers.push(c.clone());
    for k in 1..=m {
        let next = basis.apply_multiplication(&powers[k - 1], 1)?;
        powers.push(next);
    }
    let target = powers.iter().map(|p| p.len()).min().unwrap_or(0);
    let mut entries = vec![Complex64::ZERO; target];
    for (power, &qk) in powers.iter().zip(q.coeffs()) {
        for (e, v) in entries.iter_mut().zip(power.entries()) {
            *e += qk * v;
        }
    }
    CoefficientVector::new(basis.family(), entries)
}

/// Numerator coordinates: entry `j = <Q F, p_j>` for `j = 0..=n`.
pub fn build_numerator(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    n: usize,
    q: &MonicPoly,
) -> Result<CoefficientVector> {
    let weighted = weighted_coefficients(basis, c, q)?;
    if weighted.len() <= n {
        return Err(Error::Truncation { needed: n, have: weighted.len() });
    }
    CoefficientVector::new(basis.family(), weighted.entries()[..=n].to_vec())
}

/// Builds the full `[n/m]` approximant.
pub fn build(
    basis: &MeasureBasis,
    c: &CoefficientVector,
    n: usize,
    m: usize,
) -> Result<Approximant> {
    let (denominator, unique, delta_scaled) = solve_denominator(basis, c, n, m)?;
    let numerator = build_numerator(basis, c, n, &denominator)?;
    Ok(Approximant { n, m, denominator, numerator, delta_scaled, unique })
}

/// Pointwise value `P(z) / Q(z)`.
pub fn evaluate(a: &Approximant, basis: &MeasureBasis, z: Complex64) -> Result<Complex64> {
    let qv = a.denominator.eval(z);
    let coeff_scale = a
        .denominator
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if qv.norm() < POLE_EVAL_GUARD * coeff_scale {
        return Err(Error::Pole { z });
    }
    let ps = basis.eval_p_all(a.n, z);
    let pv: Complex64 = a
        .numerator
        .entries()
        .iter()
        .zip(&ps)
        .map(|(c, p)| c * p)
        .sum();
    Ok(pv / qv)
}
