//! Row-sequence analysis: pole tracking, geometric-rate fitting, and the
//! convergence/rate-identity checks for a fixed denominator degree `m`.
//!
//! The observable quantities of a row sweep are, per `n`: the approximant's
//! poles, the coefficient-norm distance of its denominator to the limit
//! polynomial, and the sup error over an evaluation grid. Fitting `log` of
//! these series against `n` gives geometric rates tied to the singularity
//! structure of the target: the denominator rate `delta` equals
//! `max_j |phi(lambda_j)| / rho_m`, the trajectory limits are the poles,
//! and `max_j |phi(lambda_j)|` recovers `rho_{m-1}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::approximant::{self, Approximant, MonicPoly};
use crate::basis::{CoefficientVector, MeasureBasis};
use crate::error::{Error, Result};
use crate::expansion::{self, FunctionSpec, Rho0Estimate};
use crate::geometry::Geometry;

/// Largest `m` for which the exhaustive trajectory assignment is allowed.
pub const MAX_TRACKED_POLES: usize = 8;

/// Norm values below this floor sit on the roundoff plateau and are dropped
/// from rate fits so the plateau cannot bias `delta` toward 1.
pub const FIT_FLOOR: f64 = 1e-13;

/// Minimum number of usable points for any rate fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Poles of a monic denominator: balanced companion-matrix eigenvalues in
/// (real, imaginary) lexicographic order.
pub fn poles_of(q: &MonicPoly) -> Vec<Complex64> {
    q.roots()
}

/// Max-abs difference between the coefficients of two power-basis
/// polynomials (shorter one padded with zeros).
pub fn coeff_norm_diff(qa: &[Complex64], qb: &[Complex64]) -> f64 {
    let len = qa.len().max(qb.len());
    (0..len)
        .map(|i| {
            let x = qa.get(i).copied().unwrap_or(Complex64::ZERO);
            let y = qb.get(i).copied().unwrap_or(Complex64::ZERO);
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

/// Matches consecutive pole lists into `m` trajectories by the
/// minimum-total-distance assignment (exhaustive over permutations).
///
/// The first list, sorted lexicographically, fixes the labels; every later
/// list is permuted to minimize the total distance to the previous matched
/// list, which makes the result invariant to the input order within each
/// per-`n` list.
pub fn track_poles(per_n: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let Some(first) = per_n.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    if m > MAX_TRACKED_POLES {
        return Err(Error::Size { got: m, max: MAX_TRACKED_POLES });
    }
    for (i, list) in per_n.iter().enumerate() {
        if list.len() != m {
            return Err(Error::Validation(format!(
                "pole list {i} has {} entries, expected {m}",
                list.len()
            )));
        }
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut anchor = first.clone();
    anchor.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let mut trajectories: Vec<Vec<Complex64>> = anchor.iter().map(|&p| vec![p]).collect();
    let mut previous = anchor;
    for list in &per_n[1..] {
        let perm = best_assignment(&previous, list);
        let matched: Vec<Complex64> = perm.iter().map(|&j| list[j]).collect();
        for (traj, &p) in trajectories.iter_mut().zip(&matched) {
            traj.push(p);
        }
        previous = matched;
    }
    Ok(trajectories)
}

/// Permutation `perm` minimizing `sum_i |prev[i] - next[perm[i]]|`.
fn best_assignment(prev: &[Complex64], next: &[Complex64]) -> Vec<usize> {
    let m = prev.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm: Vec<usize> = (0..m).collect();
    permute(&mut perm, 0, &mut |p| {
        let cost: f64 = p
            .iter()
            .enumerate()
            .map(|(i, &j)| (prev[i] - next[j]).norm())
            .sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, p.to_vec()));
        }
    });
    best.expect("m >= 1").1
}

fn permute<F: FnMut(&[usize])>(items: &mut [usize], k: usize, visit: &mut F) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// A fitted geometric rate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeometricFit {
    /// `exp(slope)` of the least-squares line through `log(series)` vs `n`.
    pub delta: f64,
    /// RMS of the log-scale fit residuals.
    pub residual: f64,
    /// Number of points that survived the filters.
    pub used: usize,
}

/// Fits `delta` from a per-`n` series of positive reals over `window`.
/// Entries that are non-finite, non-positive, or below [`FIT_FLOOR`] are
/// skipped.
pub fn fit_geometric_rate(
    series: &[(usize, f64)],
    window: std::ops::RangeInclusive<usize>,
) -> Result<GeometricFit> {
    let points: Vec<(f64, f64)> = series
        .iter()
        .filter(|(n, v)| window.contains(n) && v.is_finite() && *v > FIT_FLOOR)
        .map(|&(n, v)| (n as f64, v.ln()))
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Degenerate { needed: MIN_FIT_POINTS, found: points.len() });
    }
    let (slope, residual) = expansion::least_squares_slope(&points);
    Ok(GeometricFit { delta: slope.exp(), residual, used: points.len() })
}

/// Per-`n` sup errors of a family of approximants over a grid.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    /// `(n, sup |F - [n/m]| over the grid)`.
    pub sup_errors: Vec<(usize, f64)>,
    /// `(n, grid points skipped because they hit a denominator zero)`.
    pub skipped: Vec<(usize, usize)>,
}

/// Sup error of each approximant against `F` over `grid`; grid points that
/// trip the pole guard are skipped and counted.
pub fn error_curve(
    f: &FunctionSpec,
    approximants: &[Approximant],
    basis: &MeasureBasis,
    grid: &[Complex64],
) -> ErrorCurve {
    let mut sup_errors = Vec::with_capacity(approximants.len());
    let mut skipped = Vec::new();
    for a in approximants {
        let mut sup = 0.0f64;
        let mut misses = 0usize;
        for &z in grid {
            match approximant::evaluate(a, basis, z) {
                Ok(v) => sup = sup.max((f.eval(z) - v).norm()),
                Err(_) => misses += 1,
            }
        }
        sup_errors.push((a.n, sup));
        if misses > 0 {
            skipped.push((a.n, misses));
        }
    }
    ErrorCurve { sup_errors, skipped }
}

/// Ground truth for a row: the true poles inside `D_rho_m` and the radius
/// itself (`None` = meromorphic in the whole plane).
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub poles: Vec<Complex64>,
    pub rho_m: Option<f64>,
    pub rho_0: Option<f64>,
}

impl GroundTruth {
    pub fn from_function(f: &FunctionSpec, geometry: &Geometry, m: usize) -> Self {
        GroundTruth {
            poles: f.poles_within_rho_m(geometry, m),
            rho_m: f.rho_m(geometry, m),
            rho_0: f.rho_m(geometry, 0),
        }
    }

    /// `max_j |phi(lambda_j)|` over the true poles (1 if there are none).
    pub fn max_pole_level(&self, geometry: &Geometry) -> f64 {
        self.poles
            .iter()
            .map(|&p| geometry.level_indicator(p))
            .fold(1.0, f64::max)
    }

    /// The rate-identity prediction `max_j |phi(lambda_j)| / rho_m`
    /// (0 when `rho_m` is infinite).
    pub fn predicted_delta(&self, geometry: &Geometry) -> f64 {
        match self.rho_m {
            Some(rho) => self.max_pole_level(geometry) / rho,
            None => 0.0,
        }
    }
}

/// One row of the per-`n` table.
#[derive(Debug, Clone)]
pub struct RowRecord {
    pub n: usize,
    pub unique: bool,
    pub delta_scaled: f64,
    /// Lexicographically sorted poles; empty when the row failed.
    pub poles: Vec<Complex64>,
    /// `||Q_n - Q_limit||` in the max-abs coefficient norm.
    pub coeff_norm_dist: f64,
    pub sup_err: f64,
    pub nth_root_err: f64,
    pub grid_skipped: usize,
    /// Set when the row could not be computed at all.
    pub failed: bool,
}

/// Everything the analysis derives from one row sweep.
#[derive(Debug, Clone)]
pub struct RowSequenceReport {
    pub m: usize,
    pub records: Vec<RowRecord>,
    /// Trajectories over the unique rows only.
    pub trajectories: Vec<Vec<Complex64>>,
    /// Mean of the last five points of each trajectory.
    pub trajectory_limits: Vec<Complex64>,
    /// Rate fit of the coefficient-norm distances; `None` when it failed.
    pub denominator_fit: Option<GeometricFit>,
    /// Whether a geometric rate `delta < 1` was actually detected.
    pub convergence_detected: bool,
    /// Rate fit of the sup-error curve.
    pub error_fit: Option<GeometricFit>,
    /// `max_K |phi| / rho_m`: the uniform-convergence comparison quantity
    /// (with `max_K |phi| = 1` on grids inside `E`).
    pub error_rate_bound: Option<f64>,
    pub rho0: Option<Rho0Estimate>,
    /// `max_j |phi(trajectory limit_j)|`.
    pub rho_m_minus_1_est: Option<f64>,
    /// `rho_{m-1} estimate / fitted delta`.
    pub rho_m_est: Option<f64>,
    pub fit_window: (usize, usize),
    pub predicted_delta: Option<f64>,
}

/// Inputs to [`analyze`] that the sweep driver assembles.
pub struct AnalysisInput<'a> {
    pub m: usize,
    pub geometry: Geometry,
    pub records: Vec<RowRecord>,
    pub coefficients: &'a CoefficientVector,
    pub fit_window: (usize, usize),
    pub rho0_window: (usize, usize),
    pub truth: Option<&'a GroundTruth>,
    /// Max of `level_indicator` over the evaluation grid.
    pub grid_level: Option<f64>,
}

/// Assembles the report: trajectories over unique rows, rate fits over the
/// window, and the `rho` estimates.
pub fn analyze(input: AnalysisInput<'_>) -> Result<RowSequenceReport> {
    let AnalysisInput {
        m,
        geometry,
        records,
        coefficients,
        fit_window,
        rho0_window,
        truth,
        grid_level,
    } = input;
    let unique_rows: Vec<&RowRecord> = records
        .iter()
        .filter(|r| r.unique && !r.failed && r.poles.len() == m)
        .collect();
    let pole_lists: Vec<Vec<Complex64>> = unique_rows.iter().map(|r| r.poles.clone()).collect();
    let trajectories = track_poles(&pole_lists)?;
    let trajectory_limits: Vec<Complex64> = trajectories
        .iter()
        .map(|t| {
            let tail = &t[t.len().saturating_sub(5)..];
            tail.iter().sum::<Complex64>() / tail.len() as f64
        })
        .collect();

    let window = fit_window.0..=fit_window.1;
    let norm_series: Vec<(usize, f64)> =
        unique_rows.iter().map(|r| (r.n, r.coeff_norm_dist)).collect();
    let denominator_fit = fit_geometric_rate(&norm_series, window.clone()).ok();
    let convergence_detected = denominator_fit
        .as_ref()
        .map(|f| f.delta > 0.0 && f.delta < 0.999)
        .unwrap_or(false);

    let err_series: Vec<(usize, f64)> = records
        .iter()
        .filter(|r| !r.failed)
        .map(|r| (r.n, r.sup_err))
        .collect();
    let error_fit = fit_geometric_rate(&err_series, window).ok();

    let rho0 = expansion::rho0_estimate(coefficients, rho0_window.0..=rho0_window.1).ok();

    let rho_m_minus_1_est = (m > 0 && !trajectory_limits.is_empty()).then(|| {
        trajectory_limits
            .iter()
            .map(|&p| geometry.level_indicator(p))
            .fold(1.0, f64::max)
    });
    let rho_m_est = match (rho_m_minus_1_est, &denominator_fit) {
        (Some(level), Some(fit)) if convergence_detected => Some(level / fit.delta),
        _ => None,
    };

    let predicted_delta = truth.map(|t| t.predicted_delta(&geometry));
    let error_rate_bound = match (grid_level, truth.and_then(|t| t.rho_m)) {
        (Some(level), Some(rho)) => Some(level / rho),
        _ => None,
    };

    Ok(RowSequenceReport {
        m,
        records,
        trajectories,
        trajectory_limits,
        denominator_fit,
        convergence_detected,
        error_fit,
        error_rate_bound,
        rho0,
        rho_m_minus_1_est,
        rho_m_est,
        fit_window,
        predicted_delta,
    })
}

/// Outcome of one acceptance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Insufficient,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Tolerances for the rate-identity verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance on the rate identity and the `rho` comparisons.
    pub rate_rel: f64,
    /// Absolute tolerance on trajectory limits vs true poles.
    pub pole_abs: f64,
    /// Slack fraction in the lower bound `rho_m * delta >= max |phi|`.
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rate_rel: 0.05, pole_abs: 1e-4, bound_slack: 0.05 }
    }
}

/// The per-check verdicts; `None` marks a check that does not apply.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub rate_identity: Option<Verdict>,
    pub pole_limits: Option<Verdict>,
    pub rho_m_minus_1: Option<Verdict>,
    pub radius_bound: Option<Verdict>,
    pub rho0: Option<Verdict>,
    pub overall: Verdict,
}

impl VerdictRecord {
    fn combine(parts: &[Option<Verdict>]) -> Verdict {
        let mut overall = Verdict::Pass;
        for v in parts.iter().flatten() {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Insufficient => overall = Verdict::Insufficient,
                Verdict::Pass => {}
            }
        }
        overall
    }

    /// CI-friendly code: 0 pass, 2 fail, 3 insufficient.
    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::Insufficient => 3,
        }
    }
}

/// Checks the report against the declared ground truth:
/// (i) fitted `delta` vs `max |phi(lambda_j)| / rho_m`,
/// (ii) trajectory limits vs the true poles,
/// (iii) `rho_{m-1}` estimate vs `max |phi(lambda_j)|`,
/// (iv) the bound `rho_m * delta >= max |phi(lambda_j)|`,
/// plus the `rho_0` estimate. For `m = 0` only the `rho_0` check applies.
pub fn corollary1_check(
    report: &RowSequenceReport,
    truth: &GroundTruth,
    geometry: &Geometry,
    tol: &Tolerances,
) -> Result<VerdictRecord> {
    let rho0 = Some(check_rho0(report, truth, tol));
    if report.m == 0 {
        let overall = VerdictRecord::combine(&[rho0]);
        return Ok(VerdictRecord {
            rate_identity: None,
            pole_limits: None,
            rho_m_minus_1: None,
            radius_bound: None,
            rho0,
            overall,
        });
    }
    let fit = report
        .denominator_fit
        .as_ref()
        .ok_or_else(|| Error::InsufficientData("no denominator rate fit is available".into()))?;
    let predicted = truth.predicted_delta(geometry);

    let rate_identity = Some(if predicted > 0.0 {
        Verdict::of((fit.delta - predicted).abs() <= tol.rate_rel * predicted)
    } else {
        // Infinite rho_m: the distances must vanish faster than geometrically.
        Verdict::of(fit.delta <= tol.rate_rel)
    });

    let pole_limits = Some(if report.trajectory_limits.len() == truth.poles.len() {
        let perm = best_assignment(&report.trajectory_limits, &truth.poles);
        let worst = report
            .trajectory_limits
            .iter()
            .zip(perm.iter().map(|&j| truth.poles[j]))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Verdict::of(worst <= tol.pole_abs)
    } else {
        Verdict::Insufficient
    });

    let truth_level = truth.max_pole_level(geometry);
    let rho_m_minus_1 = Some(match report.rho_m_minus_1_est {
        Some(est) => Verdict::of((est - truth_level).abs() <= tol.rate_rel * truth_level),
        None => Verdict::Insufficient,
    });

    let radius_bound = Some(match truth.rho_m {
        Some(rho) => Verdict::of(rho * fit.delta >= truth_level * (1.0 - tol.bound_slack)),
        None => Verdict::Pass, // vacuous for rho_m = infinity
    });

    let parts = [rate_identity, pole_limits, rho_m_minus_1, radius_bound, rho0];
    Ok(VerdictRecord {
        rate_identity,
        pole_limits,
        rho_m_minus_1,
        radius_bound,
        rho0,
        overall: VerdictRecord::combine(&parts),
    })
}

fn check_rho0(report: &RowSequenceReport, truth: &GroundTruth, tol: &Tolerances) -> Verdict {
    match (report.rho0, truth.rho_0) {
        (Some(Rho0Estimate::Finite { rho, .. }), Some(expected)) => {
            Verdict::of((rho - expected).abs() <= tol.rate_rel * expected)
        }
        (Some(Rho0Estimate::Entire), None) => Verdict::Pass,
        (Some(_), _) => Verdict::Fail,
        (None, _) => Verdict::Insufficient,
    }
}
