//! Config-driven experiments: a declarative JSON config selects the
//! geometry, measure, target function, and row parameters; the runner sweeps
//! `n`, analyzes the row sequence, and emits a CSV table plus a JSON summary
//! whose bytes are identical across runs on one platform.
//!
//! Per-`n` rows are independent, so the sweep fans out with rayon when the
//! `parallel` feature is enabled (the default); the sequential path is kept
//! callable either way and the two produce identical records.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approximant::{self, MonicPoly};
use crate::basis::{CoefficientVector, Family, MeasureBasis};
use crate::error::{Error, Result};
use crate::expansion::{self, FunctionSpec, Rho0Estimate};
use crate::geometry::Geometry;
use crate::rowseq::{
    self, AnalysisInput, GroundTruth, RowRecord, RowSequenceReport, Tolerances, Verdict,
    VerdictRecord,
};

/// Inclusive sweep over `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NRange {
    pub start: usize,
    pub stop: usize,
    #[serde(default = "default_step")]
    pub step: usize,
}

fn default_step() -> usize {
    1
}

impl NRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step.max(1)).collect()
    }
}

/// Inclusive index window for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub start: usize,
    pub stop: usize,
}

/// The evaluation set `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// Equally spaced points on the segment `[from, to]`.
    Segment { from: Complex64, to: Complex64, points: usize },
    /// Equally spaced points on the circle `center + radius e^(i theta)`.
    Ring {
        #[serde(default)]
        center: Complex64,
        radius: f64,
        points: usize,
    },
}

impl GridSpec {
    pub fn points(&self) -> Vec<Complex64> {
        match *self {
            GridSpec::Segment { from, to, points } => {
                let n = points.max(1);
                (0..n)
                    .map(|i| {
                        let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                        from + (to - from) * t
                    })
                    .collect()
            }
            GridSpec::Ring { center, radius, points } => {
                let n = points.max(1);
                (0..n)
                    .map(|i| {
                        let theta = std::f64::consts::TAU * i as f64 / n as f64;
                        center + Complex64::from_polar(radius, theta)
                    })
                    .collect()
            }
        }
    }
}

/// Where the expansion coefficients come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSource {
    /// Computed from the declared function (the usual mode, with ground
    /// truth available for the verdicts).
    Function(FunctionSpec),
    /// Loaded from an `n re im` text file; no ground truth, so the analysis
    /// reports estimates only.
    CoefficientsFile(String),
}

/// One experiment: all inputs needed to reproduce a row-sequence report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: Geometry,
    pub family: Family,
    #[serde(flatten)]
    pub source: CoefficientSource,
    pub m: usize,
    pub n_range: NRange,
    pub grid: GridSpec,
    #[serde(default)]
    pub fit_window: Option<Window>,
    #[serde(default)]
    pub rho0_window: Option<Window>,
    /// Coefficient truncation order `N`; defaults to `stop + 2m + 2`.
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    /// Parses and validates a JSON config.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The coefficient truncation order in effect.
    pub fn truncation_order(&self) -> usize {
        self.truncation.unwrap_or(self.n_range.stop + 2 * self.m + 2)
    }

    /// Cross-field validation; every reported problem names the failing part.
    pub fn validate(&self) -> Result<()> {
        if let Geometry::Interval { a, b } = self.geometry {
            Geometry::interval(a, b)?;
        }
        MeasureBasis::new(self.geometry, self.family)?;
        if self.n_range.start > self.n_range.stop {
            return Err(Error::Validation(format!(
                "empty n range: start {} > stop {}",
                self.n_range.start, self.n_range.stop
            )));
        }
        if self.n_range.step == 0 {
            return Err(Error::Validation("n range step must be positive".into()));
        }
        if self.m > rowseq::MAX_TRACKED_POLES {
            return Err(Error::Size { got: self.m, max: rowseq::MAX_TRACKED_POLES });
        }
        let n_cap = self.truncation_order();
        if n_cap < self.n_range.stop + 2 * self.m {
            return Err(Error::Validation(format!(
                "truncation {} cannot cover n stop {} plus the multiplication bandwidth {}",
                n_cap,
                self.n_range.stop,
                2 * self.m
            )));
        }
        if let Some(w) = self.fit_window {
            if w.start > w.stop {
                return Err(Error::Validation("fit_window start exceeds stop".into()));
            }
        }
        if let Some(w) = self.rho0_window {
            if w.start > w.stop || w.stop > n_cap {
                return Err(Error::Validation(format!(
                    "rho0_window [{}, {}] outside coefficient range 0..={n_cap}",
                    w.start, w.stop
                )));
            }
        }
        let grid = self.grid.points();
        if grid.is_empty() {
            return Err(Error::Validation("evaluation grid is empty".into()));
        }
        if let GridSpec::Ring { radius, .. } = self.grid {
            if radius <= 0.0 {
                return Err(Error::Validation("ring radius must be positive".into()));
            }
        }
        if let CoefficientSource::Function(f) = &self.source {
            f.validate(&self.geometry)?;
            for (i, pole) in f.poles.iter().enumerate() {
                if grid.iter().any(|&z| (z - pole.location).norm() < 1e-9) {
                    return Err(Error::Validation(format!(
                        "evaluation grid touches pole {i} at {}",
                        pole.location
                    )));
                }
            }
            // K must sit inside the domain of meromorphy of the row.
            if let Some(rho_m) = f.rho_m(&self.geometry, self.m) {
                let level = grid_level(&self.geometry, &grid);
                if level >= rho_m {
                    return Err(Error::Validation(format!(
                        "grid level {level} reaches rho_m = {rho_m}; K must lie inside D_rho_m"
                    )));
                }
            }
        }
        Ok(())
    }

    fn fit_window_resolved(&self) -> (usize, usize) {
        match self.fit_window {
            Some(w) => (w.start, w.stop),
            None => {
                let span = self.n_range.stop - self.n_range.start;
                (self.n_range.start + span / 4, self.n_range.stop)
            }
        }
    }

    fn rho0_window_resolved(&self, len: usize) -> (usize, usize) {
        match self.rho0_window {
            Some(w) => (w.start, w.stop.min(len.saturating_sub(1))),
            None => (len / 2, len.saturating_sub(1)),
        }
    }
}

fn grid_level(geometry: &Geometry, grid: &[Complex64]) -> f64 {
    grid.iter().map(|&z| geometry.level_indicator(z)).fold(1.0, f64::max)
}

/// A validated experiment with its coefficients materialized.
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub basis: MeasureBasis,
    pub coefficients: CoefficientVector,
    pub function: Option<FunctionSpec>,
    pub truth: Option<GroundTruth>,
    /// Monic polynomial with the true poles as roots, when their count is m.
    pub q_limit: Option<MonicPoly>,
    pub grid: Vec<Complex64>,
    pub ns: Vec<usize>,
}

impl PreparedExperiment {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let basis = MeasureBasis::new(config.geometry, config.family)?;
        let n_cap = config.truncation_order();
        let (coefficients, function) = match &config.source {
            CoefficientSource::Function(f) => {
                (expansion::fourier_coeffs(f, &basis, n_cap)?, Some(f.clone()))
            }
            CoefficientSource::CoefficientsFile(path) => {
                let text = std::fs::read_to_string(Path::new(path))?;
                let c = CoefficientVector::from_text(config.family, &text)?;
                if c.len() <= config.n_range.stop + 2 * config.m {
                    return Err(Error::Truncation {
                        needed: config.n_range.stop + 2 * config.m,
                        have: c.len(),
                    });
                }
                (c, None)
            }
        };
        let truth = function
            .as_ref()
            .map(|f| GroundTruth::from_function(f, &config.geometry, config.m));
        let q_limit = truth.as_ref().and_then(|t| {
            (t.poles.len() == config.m && config.m > 0)
                .then(|| MonicPoly::from_roots(&t.poles))
        });
        Ok(PreparedExperiment {
            basis,
            coefficients,
            function,
            truth,
            q_limit,
            grid: config.grid.points(),
            ns: config.n_range.values(),
            config: config.clone(),
        })
    }

    /// Computes one row; failures become flagged records, never aborts.
    pub fn compute_row(&self, n: usize) -> RowRecord {
        let m = self.config.m;
        match approximant::build(&self.basis, &self.coefficients, n, m) {
            Ok(a) => {
                let poles = a.denominator.roots();
                let coeff_norm_dist = self
                    .q_limit
                    .as_ref()
                    .map(|ql| rowseq::coeff_norm_diff(a.denominator.coeffs(), ql.coeffs()))
                    .unwrap_or(f64::NAN);
                let (sup_err, skipped) = match &self.function {
                    Some(f) => {
                        let mut sup = 0.0f64;
                        let mut misses = 0usize;
                        for &z in &self.grid {
                            match approximant::evaluate(&a, &self.basis, z) {
                                Ok(v) => sup = sup.max((f.eval(z) - v).norm()),
                                Err(_) => misses += 1,
                            }
                        }
                        (sup, misses)
                    }
                    None => (f64::NAN, 0),
                };
                let nth_root_err = if n > 0 { sup_err.powf(1.0 / n as f64) } else { f64::NAN };
                RowRecord {
                    n,
                    unique: a.unique,
                    delta_scaled: a.delta_scaled,
                    poles,
                    coeff_norm_dist,
                    sup_err,
                    nth_root_err,
                    grid_skipped: skipped,
                    failed: false,
                }
            }
            Err(_) => RowRecord {
                n,
                unique: false,
                delta_scaled: f64::NAN,
                poles: Vec::new(),
                coeff_norm_dist: f64::NAN,
                sup_err: f64::NAN,
                nth_root_err: f64::NAN,
                grid_skipped: 0,
                failed: true,
            },
        }
    }

    /// Sequential sweep; always available.
    pub fn sweep_sequential(&self) -> Vec<RowRecord> {
        self.ns.iter().map(|&n| self.compute_row(n)).collect()
    }

    /// Parallel sweep; records come back merged in `n` order, identical to
    /// the sequential path.
    #[cfg(feature = "parallel")]
    pub fn sweep_parallel(&self) -> Vec<RowRecord> {
        use rayon::prelude::*;
        self.ns.par_iter().map(|&n| self.compute_row(n)).collect()
    }

    pub fn sweep(&self) -> Vec<RowRecord> {
        #[cfg(feature = "parallel")]
        {
            self.sweep_parallel()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.sweep_sequential()
        }
    }

    /// Full analysis of a finished sweep.
    pub fn analyze(&self, mut records: Vec<RowRecord>) -> Result<RowSequenceReport> {
        let m = self.config.m;
        // Without declared ground truth the limit polynomial is estimated
        // from the trajectories and the distances filled in afterwards.
        if self.q_limit.is_none() && m > 0 {
            let pole_lists: Vec<Vec<Complex64>> = records
                .iter()
                .filter(|r| r.unique && !r.failed && r.poles.len() == m)
                .map(|r| r.poles.clone())
                .collect();
            if !pole_lists.is_empty() {
                let trajectories = rowseq::track_poles(&pole_lists)?;
                let limits: Vec<Complex64> = trajectories
                    .iter()
                    .map(|t| {
                        let tail = &t[t.len().saturating_sub(5)..];
                        tail.iter().sum::<Complex64>() / tail.len() as f64
                    })
                    .collect();
                let q_est = MonicPoly::from_roots(&limits);
                for r in &mut records {
                    if r.unique && !r.failed && r.poles.len() == m {
                        let qn = MonicPoly::from_roots(&r.poles);
                        r.coeff_norm_dist = rowseq::coeff_norm_diff(qn.coeffs(), q_est.coeffs());
                    }
                }
            }
        }
        rowseq::analyze(AnalysisInput {
            m,
            geometry: self.config.geometry,
            records,
            coefficients: &self.coefficients,
            fit_window: self.config.fit_window_resolved(),
            rho0_window: self.config.rho0_window_resolved(self.coefficients.len()),
            truth: self.truth.as_ref(),
            grid_level: Some(grid_level(&self.config.geometry, &self.grid)),
        })
    }
}

/// The complete output of one run.
pub struct ReportBundle {
    pub csv: String,
    pub summary: Summary,
    pub metadata: String,
    pub report: RowSequenceReport,
    pub verdicts: VerdictRecord,
}

/// Summary record mirrored into `summary.json`.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub m: usize,
    pub n_start: usize,
    pub n_stop: usize,
    pub rows_total: usize,
    pub rows_unique: usize,
    pub fitted_delta: Option<f64>,
    pub fit_residual: Option<f64>,
    pub fit_points_used: Option<usize>,
    pub convergence_detected: bool,
    pub predicted_delta: Option<f64>,
    pub rho0_estimate: Option<Rho0Estimate>,
    pub rho0_true: Option<f64>,
    pub rho_m_minus_1_estimate: Option<f64>,
    pub rho_m_estimate: Option<f64>,
    pub rho_m_true: Option<f64>,
    /// Set when the target is meromorphic in the whole plane.
    pub rho_m_infinite: bool,
    pub trajectory_limits: Vec<Complex64>,
    pub true_poles: Vec<Complex64>,
    pub error_rate: Option<f64>,
    pub error_rate_bound: Option<f64>,
    pub grid_points_skipped: usize,
    pub fit_window: Window,
    pub verdicts: VerdictRecord,
}

/// Runs the whole pipeline for a validated config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ReportBundle> {
    let started = Instant::now();
    let prepared = PreparedExperiment::from_config(config)?;
    let records = prepared.sweep();
    let report = prepared.analyze(records)?;
    let verdicts = match &prepared.truth {
        Some(truth) => {
            match rowseq::corollary1_check(
                &report,
                truth,
                &config.geometry,
                &config.tolerances,
            ) {
                Ok(v) => v,
                Err(Error::InsufficientData(_)) => insufficient_verdicts(),
                Err(e) => return Err(e),
            }
        }
        None => insufficient_verdicts(),
    };
    let csv = render_csv(&report);
    let summary = build_summary(&prepared, &report, &verdicts);
    let metadata = format!(
        "tool: pade-ortho {}\nrows: {}\nelapsed_ms: {}\nconfig: {}\n",
        env!("CARGO_PKG_VERSION"),
        report.records.len(),
        started.elapsed().as_millis(),
        serde_json::to_string(config).expect("config serializes"),
    );
    Ok(ReportBundle { csv, summary, metadata, report, verdicts })
}

fn insufficient_verdicts() -> VerdictRecord {
    VerdictRecord {
        rate_identity: None,
        pole_limits: None,
        rho_m_minus_1: None,
        radius_bound: None,
        rho0: None,
        overall: Verdict::Insufficient,
    }
}

fn build_summary(
    prepared: &PreparedExperiment,
    report: &RowSequenceReport,
    verdicts: &VerdictRecord,
) -> Summary {
    Summary {
        m: report.m,
        n_start: prepared.config.n_range.start,
        n_stop: prepared.config.n_range.stop,
        rows_total: report.records.len(),
        rows_unique: report.records.iter().filter(|r| r.unique).count(),
        fitted_delta: report.denominator_fit.as_ref().map(|f| f.delta),
        fit_residual: report.denominator_fit.as_ref().map(|f| f.residual),
        fit_points_used: report.denominator_fit.as_ref().map(|f| f.used),
        convergence_detected: report.convergence_detected,
        predicted_delta: report.predicted_delta,
        rho0_estimate: report.rho0,
        rho0_true: prepared.truth.as_ref().and_then(|t| t.rho_0),
        rho_m_minus_1_estimate: report.rho_m_minus_1_est,
        rho_m_estimate: report.rho_m_est,
        rho_m_true: prepared.truth.as_ref().and_then(|t| t.rho_m),
        rho_m_infinite: prepared
            .truth
            .as_ref()
            .map(|t| t.rho_m.is_none())
            .unwrap_or(false),
        trajectory_limits: report.trajectory_limits.clone(),
        true_poles: prepared
            .truth
            .as_ref()
            .map(|t| t.poles.clone())
            .unwrap_or_default(),
        error_rate: report.error_fit.as_ref().map(|f| f.delta),
        error_rate_bound: report.error_rate_bound,
        grid_points_skipped: report.records.iter().map(|r| r.grid_skipped).sum(),
        fit_window: Window { start: report.fit_window.0, stop: report.fit_window.1 },
        verdicts: verdicts.clone(),
    }
}

/// Lossless float formatting for the CSV (shortest round-trip digits).
fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:e}")
    }
}

/// Fixed-column CSV: `n, unique, delta_scaled, pole_j_re, pole_j_im
/// (j = 1..m), coeff_norm_dist, sup_err_K, nth_root_err`.
pub fn render_csv(report: &RowSequenceReport) -> String {
    let mut out = String::new();
    out.push_str("n,unique,delta_scaled");
    for j in 1..=report.m {
        out.push_str(&format!(",pole_{j}_re,pole_{j}_im"));
    }
    out.push_str(",coeff_norm_dist,sup_err_K,nth_root_err\n");
    for r in &report.records {
        out.push_str(&format!("{},{},{}", r.n, r.unique, fmt_float(r.delta_scaled)));
        for j in 0..report.m {
            match r.poles.get(j) {
                Some(p) => out.push_str(&format!(",{},{}", fmt_float(p.re), fmt_float(p.im))),
                None => out.push_str(",NaN,NaN"),
            }
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            fmt_float(r.coeff_norm_dist),
            fmt_float(r.sup_err),
            fmt_float(r.nth_root_err)
        ));
    }
    out
}

/// Writes `report.csv`, `summary.json`, and `metadata.txt` under `out_dir`.
pub fn emit(bundle: &ReportBundle, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("report.csv"), &bundle.csv)?;
    let mut summary = serde_json::to_string_pretty(&bundle.summary).expect("summary serializes");
    summary.push('\n');
    std::fs::write(out_dir.join("summary.json"), summary)?;
    std::fs::write(out_dir.join("metadata.txt"), &bundle.metadata)?;
    Ok(())
}
