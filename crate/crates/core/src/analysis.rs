//! Post-processing: existence-time bounds, flow-distance functionals,
//! blow-up extrapolation and the concentration study over smoothed kernels.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datum::Datum;
use crate::diagnostics::DiagnosticsRecord;
use crate::fields::{GridSpec, lq_norm};
use crate::kernels::{make_smoothed_kernel, Kernel, KernelError};
use crate::lagrangian::{deposit, seed_from_datum, LagrangianError, LagrangianRun};
use crate::velocity::{divergence_constants, make_identity_velocity, BoundPath, VelocityError, VelocityModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("initial norm must be positive, got {0}")]
    NonPositiveNorm(f64),
    #[error("runs were not seeded identically")]
    MismatchedSeeding,
    #[error("no blow-up within the horizon: max density never exceeded {threshold}")]
    NoBlowupWithinHorizon { threshold: f64 },
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(f64),
    #[error("smoothing index n = {0} is below 18")]
    NTooSmall(u32),
    #[error(transparent)]
    Velocity(#[from] VelocityError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExistenceBound {
    pub q: f64,
    pub u0_norm: f64,
    pub k1: f64,
    pub k2: f64,
    /// time up to which `‖u(t)‖_{L^q} ≤ 2‖u0‖_{L^q}`
    pub t_q: f64,
    /// lower bound on the maximal existence time
    pub t_star_lower: f64,
}

/// `T_q = ln 2 / (K1 + 2 K2 ‖u0‖)` and `Σ_{j≥1} ln 2 / (K1 + 2^j K2 ‖u0‖)`.
pub fn existence_bound(v: &VelocityModel, k: &Kernel, u0_norm: f64, q: f64) -> Result<ExistenceBound, AnalysisError> {
    if !(u0_norm > 0.0) {
        return Err(AnalysisError::NonPositiveNorm(u0_norm));
    }
    let (k1, k2) = divergence_constants(v, k, BoundPath::for_solution_exponent(q))?;
    let ln2 = std::f64::consts::LN_2;
    let t_q = ln2 / (k1 + 2.0 * k2 * u0_norm);
    let t_star_lower = if k2 * u0_norm == 0.0 {
        f64::INFINITY
    } else if k1 == 0.0 {
        ln2 / (k2 * u0_norm)
    } else {
        let mut sum = 0.0;
        let mut pow = 2.0;
        loop {
            let inc = ln2 / (k1 + pow * k2 * u0_norm);
            sum += inc;
            if inc < 1e-12 {
                break;
            }
            pow *= 2.0;
        }
        sum
    };
    Ok(ExistenceBound {
        q,
        u0_norm,
        k1,
        k2,
        t_q,
        t_star_lower,
    })
}

/// Weight radius of `χ_R(x) = exp(-|x|/R)`; `Infinite` gives `χ ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn weight(&self, x_norm: f64) -> f64 {
        match self {
            Radius::Finite(r) => (-x_norm / r).exp(),
            Radius::Infinite => 1.0,
        }
    }
}

/// `Σ_i χ_R(x_i^0) |u0_i| |X_1,i − X_2,i| · cell volume`.
pub fn qr_value(flow1: &LagrangianRun, flow2: &LagrangianRun, radius: Radius) -> Result<f64, AnalysisError> {
    let (a, b) = (flow1.ensemble(), flow2.ensemble());
    if a.len() != b.len() || a.dim() != b.dim() || a.seeds() != b.seeds() || a.initial_values() != b.initial_values() {
        return Err(AnalysisError::MismatchedSeeding);
    }
    let d = a.dim();
    let mut q = 0.0;
    for i in 0..a.len() {
        let seed = &a.seeds()[i * d..(i + 1) * d];
        let x_norm = seed.iter().map(|s| s * s).sum::<f64>().sqrt();
        let (p1, p2) = (a.position(i), b.position(i));
        let dist = p1.iter().zip(p2).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        q += radius.weight(x_norm) * a.initial_values()[i].abs() * dist * a.cell_volumes()[i];
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrFunctional {
    pub radius: Radius,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Advances both flows through `times` (ascending) and evaluates `Q_R` for every radius.
pub fn qr_functional(
    flow1: &mut LagrangianRun,
    flow2: &mut LagrangianRun,
    radii: &[Radius],
    times: &[f64],
) -> Result<Vec<QrFunctional>, AnalysisError> {
    qr_value(flow1, flow2, Radius::Infinite)?;
    let mut out: Vec<QrFunctional> = radii
        .iter()
        .map(|&radius| QrFunctional {
            radius,
            times: Vec::new(),
            values: Vec::new(),
        })
        .collect();
    for &t in times {
        flow1.advance_to(t)?;
        flow2.advance_to(t)?;
        for f in out.iter_mut() {
            f.times.push(t);
            f.values.push(qr_value(flow1, flow2, f.radius)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupEstimate {
    pub threshold: f64,
    /// first recorded time with `max u > threshold`
    pub first_exceedance: f64,
    /// zero of the least-squares line through `1 / max u`
    pub extrapolated: f64,
    pub points_used: usize,
}

/// Fits `1/max u ≈ a + b t` over the last decade of growth and returns `-a/b`.
///
/// Assumes the `c/(T - t)` growth of the exact blow-up profile.
pub fn detect_blowup(history: &[DiagnosticsRecord], threshold: f64) -> Result<BlowupEstimate, AnalysisError> {
    let finite: Vec<&DiagnosticsRecord> = history.iter().filter(|r| r.max_u.is_finite() && r.max_u > 0.0).collect();
    let none = AnalysisError::NoBlowupWithinHorizon { threshold };
    let first = history.iter().find(|r| r.max_u > threshold).ok_or(none.clone())?;
    let last = finite.last().ok_or(none.clone())?;
    let floor = last.max_u / 10.0;
    let pts: Vec<(f64, f64)> = finite
        .iter()
        .filter(|r| r.max_u >= floor)
        .map(|r| (r.t, 1.0 / r.max_u))
        .collect();
    if pts.len() < 2 {
        return Err(none);
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(none);
    }
    let intercept = my - slope * mt;
    Ok(BlowupEstimate {
        threshold,
        first_exceedance: first.t,
        extrapolated: -intercept / slope,
        points_used: pts.len(),
    })
}

/// Snapshots violating `left velocity ≥ α·mass − tol` or `right velocity ≤ α·mass + tol`.
pub fn velocity_window_bracket(history: &[DiagnosticsRecord], alpha: f64, tol: f64) -> usize {
    history
        .iter()
        .filter(|r| r.left_velocity < alpha * r.mass - tol || r.right_velocity > alpha * r.mass + tol)
        .count()
}

/// `true` if `max u ≤ 2 ‖u0‖_∞ (1 + slack)` on every record with `t ≤ t_q`.
pub fn norm_doubling_holds(history: &[DiagnosticsRecord], u0_sup: f64, t_q: f64, slack: f64) -> bool {
    history
        .iter()
        .filter(|r| r.t <= t_q)
        .all(|r| r.max_u <= 2.0 * u0_sup * (1.0 + slack))
}

/// Predicted Dirac position `αt + (1 − α)/2` (for `t ≥ 1/2`).
pub fn predicted_line(alpha: f64, t: f64) -> f64 {
    alpha * t + 0.5 * (1.0 - alpha)
}

/// Resolution and check settings for one concentration run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub particles: usize,
    pub dt: f64,
    pub t_end: f64,
    /// snapshot cadence in steps
    pub snapshot_every: u64,
    /// deposition grid for the maximum-principle checks
    pub deposit: GridSpec,
    /// latest time at which the maximum principle is checked
    pub max_principle_until: f64,
    /// relative slack on `2/(1 − 2t)`
    pub max_principle_slack: f64,
    pub velocity_tol: f64,
    pub window_tol: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            particles: 4000,
            dt: 1e-4,
            t_end: 1.0,
            snapshot_every: 100,
            deposit: GridSpec {
                x_min: -0.5,
                x_max: 2.0,
                cells: 250,
            },
            max_principle_until: 0.45,
            max_principle_slack: 0.05,
            velocity_tol: 1e-9,
            window_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudySample {
    pub t: f64,
    pub mass: f64,
    pub max_u: f64,
    pub centroid: f64,
    pub spread: f64,
    pub predicted: f64,
    pub centroid_error: f64,
}

/// Counts of failed pointwise checks over the snapshots of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StudyChecks {
    pub snapshots_checked: usize,
    pub negative_density: usize,
    pub density_above_bound: usize,
    /// largest `max u / (2/(1 − 2t))` seen
    pub max_density_ratio: f64,
    pub velocity_out_of_range: usize,
    pub min_velocity: f64,
    pub max_velocity: f64,
    pub support_width_violations: usize,
    pub max_support_width: f64,
    pub window_violations: usize,
}

impl StudyChecks {
    pub fn all_pass(&self) -> bool {
        self.negative_density == 0
            && self.density_above_bound == 0
            && self.velocity_out_of_range == 0
            && self.support_width_violations == 0
            && self.window_violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub alpha: f64,
    pub n: u32,
    pub r: f64,
    pub samples: Vec<StudySample>,
    pub final_centroid_error: f64,
    pub final_spread: f64,
    pub extrapolated_blowup: Option<f64>,
    pub checks: StudyChecks,
    #[serde(skip)]
    pub history: Vec<DiagnosticsRecord>,
}

/// Density threshold handed to [`detect_blowup`] in studies.
pub const STUDY_BLOWUP_THRESHOLD: f64 = 20.0;

/// One counterexample run with `η^α_n` on the blow-up datum.
pub fn concentration_run(alpha: f64, n: u32, config: &StudyConfig) -> Result<ConcentrationReport, AnalysisError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(AnalysisError::BadAlpha(alpha));
    }
    if n < 18 {
        return Err(AnalysisError::NTooSmall(n));
    }
    let smoothed = make_smoothed_kernel(alpha, n)?;
    let r = smoothed.r;
    let datum = Datum::blowup();
    let domain = [(config.deposit.x_min, config.deposit.x_max)];
    let ens = seed_from_datum(&datum, config.particles, &domain)?;
    let seed_h = ens.cell_volumes()[0];
    let mut run = LagrangianRun::new(ens, smoothed.into_kernel(), make_identity_velocity(), config.dt)?;
    let mut checks = StudyChecks {
        min_velocity: f64::INFINITY,
        max_velocity: f64::NEG_INFINITY,
        ..Default::default()
    };
    let mut samples = Vec::new();
    let total_steps = (config.t_end / config.dt).round() as u64;
    let every = config.snapshot_every.max(1);
    let mut step = 0u64;
    loop {
        if step % every == 0 || step == total_steps {
            let rec = run.record_diagnostics()?;
            let predicted = predicted_line(alpha, rec.t);
            samples.push(StudySample {
                t: rec.t,
                mass: rec.mass,
                max_u: rec.max_u,
                centroid: rec.centroid,
                spread: rec.spread,
                predicted,
                centroid_error: (rec.centroid - predicted).abs(),
            });
            checks.snapshots_checked += 1;
            checks.min_velocity = checks.min_velocity.min(rec.min_velocity);
            checks.max_velocity = checks.max_velocity.max(rec.max_velocity);
            if rec.min_velocity < -config.velocity_tol || rec.max_velocity > 1.0 + config.velocity_tol {
                checks.velocity_out_of_range += 1;
            }
            // particles stay ordered, so the extreme seeds are the extreme particles
            let width = rec.support_right - rec.support_left;
            checks.max_support_width = checks.max_support_width.max(width);
            if width > 0.75 + 2.0 * seed_h {
                checks.support_width_violations += 1;
            }
            if rec.left_velocity < alpha * rec.mass - config.window_tol
                || rec.right_velocity > alpha * rec.mass + config.window_tol
            {
                checks.window_violations += 1;
            }
            if rec.t <= config.max_principle_until + 1e-12 {
                let g = deposit(&run, config.deposit)?;
                let bound = 2.0 / (1.0 - 2.0 * rec.t);
                let umax = lq_norm(&g, f64::INFINITY);
                let umin = g.values().iter().copied().fold(f64::INFINITY, f64::min);
                checks.max_density_ratio = checks.max_density_ratio.max(umax / bound);
                if umin < -1e-12 {
                    checks.negative_density += 1;
                }
                if umax > bound * (1.0 + config.max_principle_slack) {
                    checks.density_above_bound += 1;
                }
            }
        }
        if step == total_steps {
            break;
        }
        run.step()?;
        step += 1;
    }
    let last = *samples.last().expect("at least one snapshot");
    let history = run.history().to_vec();
    Ok(ConcentrationReport {
        alpha,
        n,
        r,
        final_centroid_error: last.centroid_error,
        final_spread: last.spread,
        extrapolated_blowup: detect_blowup(&history, STUDY_BLOWUP_THRESHOLD).ok().map(|b| b.extrapolated),
        samples,
        checks,
        history,
    })
}

/// Runs every `n` for a fixed `α`; failures are kept per point.
pub fn concentration_study(
    alpha: f64,
    n_values: &[u32],
    config: &StudyConfig,
) -> Vec<(u32, Result<ConcentrationReport, AnalysisError>)> {
    let grid: Vec<(f64, u32)> = n_values.iter().map(|&n| (alpha, n)).collect();
    run_grid(&grid, config)
        .into_iter()
        .map(|((_, n), r)| (n, r))
        .collect()
}

/// Runs an arbitrary `(α, n)` grid, in parallel when the `parallel` feature is on.
/// Results come back in input order.
pub fn run_grid(
    points: &[(f64, u32)],
    config: &StudyConfig,
) -> Vec<((f64, u32), Result<ConcentrationReport, AnalysisError>)> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|&(a, n)| ((a, n), concentration_run(a, n, config)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points
            .iter()
            .map(|&(a, n)| ((a, n), concentration_run(a, n, config)))
            .collect()
    }
}

/// Study output: one entry per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub points: Vec<StudyPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyPoint {
    pub summary: StudySummary,
    pub samples: Vec<StudySample>,
    pub checks: Option<StudyChecks>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub alpha: f64,
    pub n: u32,
    pub r: Option<f64>,
    pub final_centroid_error: Option<f64>,
    pub final_spread: Option<f64>,
    pub extrapolated_blowup: Option<f64>,
}

impl StudyReport {
    pub fn from_results(results: &[((f64, u32), Result<ConcentrationReport, AnalysisError>)]) -> Self {
        let points = results
            .iter()
            .map(|((alpha, n), res)| match res {
                Ok(rep) => StudyPoint {
                    summary: StudySummary {
                        alpha: *alpha,
                        n: *n,
                        r: Some(rep.r),
                        final_centroid_error: Some(rep.final_centroid_error),
                        final_spread: Some(rep.final_spread),
                        extrapolated_blowup: rep.extrapolated_blowup,
                    },
                    samples: rep.samples.clone(),
                    checks: Some(rep.checks),
                    error: None,
                },
                Err(e) => StudyPoint {
                    summary: StudySummary {
                        alpha: *alpha,
                        n: *n,
                        r: None,
                        final_centroid_error: None,
                        final_spread: None,
                        extrapolated_blowup: None,
                    },
                    samples: Vec::new(),
                    checks: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        Self { points }
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }

    /// Flat CSV: one row per (point, sample).
    pub fn to_csv(&self) -> String {
        use crate::fields::fmt17;
        let mut s = String::from("alpha,n,t,mass,max_u,centroid,spread,predicted,centroid_error\n");
        for p in &self.points {
            for q in &p.samples {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    fmt17(p.summary.alpha),
                    p.summary.n,
                    fmt17(q.t),
                    fmt17(q.mass),
                    fmt17(q.max_u),
                    fmt17(q.centroid),
                    fmt17(q.spread),
                    fmt17(q.predicted),
                    fmt17(q.centroid_error)
                ));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_step_kernel;

    fn record(t: f64, max_u: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            mass: 1.0,
            l1_norm: 1.0,
            l2_norm: 1.0,
            max_u,
            min_u: 0.0,
            min_velocity: 0.0,
            max_velocity: 1.0,
            left_velocity: 1.0,
            right_velocity: 0.0,
            lipschitz_bound: 1.0,
            support_left: 0.0,
            support_right: 0.5,
            centroid: 0.25,
            spread: 0.1,
            dt_halvings: 0,
        }
    }

    #[test]
    fn existence_bound_for_blowup() {
        let b = existence_bound(&make_identity_velocity(), &make_step_kernel(), 2.0, f64::INFINITY).unwrap();
        assert_eq!((b.k1, b.k2), (0.0, 2.0));
        assert!((b.t_q - std::f64::consts::LN_2 / 8.0).abs() < 1e-15);
        assert!((b.t_star_lower - std::f64::consts::LN_2 / 4.0).abs() < 1e-15);
        assert!(b.t_q <= 0.5 && b.t_star_lower <= 0.5);
    }

    #[test]
    fn existence_bound_is_monotone_in_norm() {
        let v = make_identity_velocity();
        let k = make_step_kernel();
        let mut prev = f64::INFINITY;
        for norm in [0.5, 1.0, 2.0, 10.0, 1e3] {
            let b = existence_bound(&v, &k, norm, f64::INFINITY).unwrap();
            assert!(b.t_q < prev);
            prev = b.t_q;
        }
        assert!(existence_bound(&v, &k, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn series_matches_direct_sum_when_k1_positive() {
        let v = VelocityModel::custom("xi_plus_x", 1, 1.0, std::sync::Arc::new(|_, x: &[f64], xi, out: &mut [f64]| out[0] = xi + 0.5 * x[0]));
        let b = existence_bound(&v, &make_step_kernel(), 1.0, f64::INFINITY).unwrap();
        let direct: f64 = (1..200).map(|j| std::f64::consts::LN_2 / (b.k1 + 2f64.powi(j) * b.k2)).sum();
        assert!((b.t_star_lower - direct).abs() < 1e-11);
    }

    #[test]
    fn blowup_fit_on_exact_values() {
        let hist: Vec<_> = [0.1, 0.2, 0.3].iter().map(|&t| record(t, 2.0 / (1.0 - 2.0 * t))).collect();
        let est = detect_blowup(&hist, 2.0).unwrap();
        assert!((est.extrapolated - 0.5).abs() < 1e-12);
        assert_eq!(est.first_exceedance, 0.1);
    }

    #[test]
    fn no_blowup_for_flat_history() {
        let hist: Vec<_> = (0..10).map(|i| record(i as f64 * 0.1, 0.0)).collect();
        assert!(matches!(detect_blowup(&hist, 1.0), Err(AnalysisError::NoBlowupWithinHorizon { .. })));
    }

    #[test]
    fn qr_vanishes_for_identical_flows_and_grows_with_radius() {
        let mk = |n| {
            let k = make_smoothed_kernel(0.5, n).unwrap().into_kernel();
            let ens = seed_from_datum(&Datum::blowup(), 200, &[(-1.0, 2.0)]).unwrap();
            LagrangianRun::new(ens, k, make_identity_velocity(), 1e-3).unwrap()
        };
        let (mut a, mut b) = (mk(36), mk(36));
        let radii = [Radius::Finite(1.0), Radius::Finite(2.0), Radius::Infinite];
        for f in qr_functional(&mut a, &mut b, &radii, &[0.1, 0.2]).unwrap() {
            assert!(f.values.iter().all(|&v| v == 0.0));
        }
        let (mut a, mut b) = (mk(36), mk(72));
        let fs = qr_functional(&mut a, &mut b, &radii, &[0.1, 0.2]).unwrap();
        for i in 0..2 {
            assert!(fs[0].values[i] <= fs[1].values[i] && fs[1].values[i] <= fs[2].values[i]);
            assert!(fs[2].values[i] > 0.0);
        }
    }

    #[test]
    fn qr_rejects_mismatched_seeding() {
        let ens1 = seed_from_datum(&Datum::blowup(), 200, &[(-1.0, 2.0)]).unwrap();
        let ens2 = seed_from_datum(&Datum::blowup(), 100, &[(-1.0, 2.0)]).unwrap();
        let a = LagrangianRun::new(ens1, make_step_kernel(), make_identity_velocity(), 1e-3).unwrap();
        let b = LagrangianRun::new(ens2, make_step_kernel(), make_identity_velocity(), 1e-3).unwrap();
        assert_eq!(qr_value(&a, &b, Radius::Infinite), Err(AnalysisError::MismatchedSeeding));
    }

    #[test]
    fn window_bracket_counts_violations() {
        let mut hist = vec![record(0.0, 2.0), record(0.1, 2.0)];
        assert_eq!(velocity_window_bracket(&hist, 0.5, 1e-6), 0);
        hist[1].left_velocity = 0.4;
        assert_eq!(velocity_window_bracket(&hist, 0.5, 1e-6), 1);
    }

    #[test]
    fn predicted_line_meets_at_half() {
        for a in [0.0, 0.3, 1.0] {
            assert!((predicted_line(a, 0.5) - 0.5).abs() < 1e-15);
        }
        assert_eq!(predicted_line(1.0, 1.0), 1.0);
        assert_eq!(predicted_line(0.0, 0.9), 0.5);
    }

    #[test]
    fn small_concentration_run() {
        let cfg = StudyConfig {
            particles: 400,
            dt: 1e-3,
            snapshot_every: 50,
            ..Default::default()
        };
        let rep = concentration_run(1.0 / 3.0, 18, &cfg).unwrap();
        assert!((rep.r - 1.0).abs() < 1e-15);
        assert!(rep.checks.all_pass(), "{:?}", rep.checks);
        assert!(rep.samples.iter().all(|s| (s.mass - 1.0).abs() < 1e-12));
        assert!(matches!(concentration_run(0.5, 10, &cfg), Err(AnalysisError::NTooSmall(10))));
    }
}
