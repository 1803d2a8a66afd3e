//! First-order upwind finite-volume solver in one dimension.
//!
//! Face velocities `b_{j+1/2} = V(t, x_{j+1/2}, (u ∗ η)(x_{j+1/2}))` are frozen
//! over a step; the time step is halved whenever `Δt·max|b|/h` exceeds the
//! configured CFL number.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datum::Datum;
use crate::diagnostics::{centroid_and_spread, DiagnosticsRecord};
use crate::fields::{convolve_grid, lq_norm, FieldError, GridField, GridSpec};
use crate::kernels::Kernel;
use crate::lagrangian::{deposit, LagrangianError, LagrangianRun};
use crate::velocity::VelocityModel;

/// Cells with `|u| ≤ SUPPORT_TOL · max|u|` count as empty for the boundary check.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EulerianError {
    #[error("CFL number must lie in (0, 1], got {0}")]
    BadCfl(f64),
    #[error("grid solver needs one-dimensional kernel and velocity")]
    NotOneDimensional,
    #[error("solution support reached the domain boundary at t = {t}; enlarge the domain")]
    DomainTooSmall { t: f64 },
    #[error("non-finite cell value at t = {t}")]
    NonFinite { t: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone)]
pub struct EulerianRun {
    field: GridField,
    t: f64,
    dt: f64,
    velocity: VelocityModel,
    kernel: Kernel,
    cfl: f64,
    halvings: u64,
    steps: u64,
    history: Vec<DiagnosticsRecord>,
    datum_label: String,
    faces: Vec<f64>,
    face_velocity: Vec<f64>,
}

impl EulerianRun {
    /// Starts from an explicit field. The initial step is `cfl·h / max|b(0)|`.
    pub fn new(field: GridField, kernel: Kernel, velocity: VelocityModel, cfl: f64) -> Result<Self, EulerianError> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(EulerianError::BadCfl(cfl));
        }
        if kernel.dim() != 1 || velocity.dim() != 1 {
            return Err(EulerianError::NotOneDimensional);
        }
        let spec = *field.spec();
        let faces: Vec<f64> = (0..=spec.cells).map(|f| spec.left_edge(f)).collect();
        let mut run = Self {
            field,
            t: 0.0,
            dt: 0.0,
            velocity,
            kernel,
            cfl,
            halvings: 0,
            steps: 0,
            history: Vec::new(),
            datum_label: "explicit".into(),
            face_velocity: vec![0.0; faces.len()],
            faces,
        };
        run.update_face_velocities()?;
        let vmax = run.max_face_speed();
        run.dt = if vmax > 0.0 { cfl * spec.h() / vmax } else { cfl * spec.h() };
        Ok(run)
    }

    /// Projects `u0` exactly onto `spec` and starts a run.
    pub fn from_datum(u0: &Datum, spec: GridSpec, kernel: Kernel, velocity: VelocityModel, cfl: f64) -> Result<Self, EulerianError> {
        if u0.dim() != 1 {
            return Err(EulerianError::NotOneDimensional);
        }
        let mut run = Self::new(u0.to_grid(spec), kernel, velocity, cfl)?;
        run.datum_label = format!("{:?}", u0.pieces());
        Ok(run)
    }

    /// Overrides the base time step (still subject to halving).
    pub fn with_dt(mut self, dt: f64) -> Self {
        assert!(dt > 0.0, "time step must be positive");
        self.dt = dt;
        self
    }

    pub fn field(&self) -> &GridField {
        &self.field
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn halvings(&self) -> u64 {
        self.halvings
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn velocity(&self) -> &VelocityModel {
        &self.velocity
    }

    pub fn history(&self) -> &[DiagnosticsRecord] {
        &self.history
    }

    /// Face positions `x_{j-1/2}`, `j = 0..=M`.
    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    /// Face velocities for the current state.
    pub fn face_velocities(&self) -> &[f64] {
        &self.face_velocity
    }

    pub fn fingerprint(&self) -> String {
        format!("{}|{}|{}", self.kernel.label(), self.velocity.label(), self.datum_label)
    }

    fn update_face_velocities(&mut self) -> Result<(), EulerianError> {
        let conv = convolve_grid(&self.field, &self.kernel, &self.faces)?;
        for ((b, &x), xi) in self.face_velocity.iter_mut().zip(&self.faces).zip(&conv.values) {
            *b = self.velocity.eval1(self.t, x, *xi);
        }
        Ok(())
    }

    fn max_face_speed(&self) -> f64 {
        self.face_velocity.iter().fold(0.0, |m, b| m.max(b.abs()))
    }

    fn check_domain(&self) -> Result<(), EulerianError> {
        let umax = lq_norm(&self.field, f64::INFINITY);
        if umax == 0.0 {
            return Ok(());
        }
        if let Some((first, last)) = self.field.support_cells(SUPPORT_TOL * umax) {
            if first == 0 || last + 1 == self.field.spec().cells {
                return Err(EulerianError::DomainTooSmall { t: self.t });
            }
        }
        Ok(())
    }

    /// One upwind step of length `min(Δt, limit - t)`.
    pub fn step_until(&mut self, limit: f64) -> Result<(), EulerianError> {
        self.check_domain()?;
        self.update_face_velocities()?;
        let h = self.field.h();
        let vmax = self.max_face_speed();
        while self.dt * vmax / h > self.cfl {
            self.dt *= 0.5;
            self.halvings += 1;
        }
        let dt = self.dt.min(limit - self.t);
        if dt <= 0.0 {
            return Ok(());
        }
        let lam = dt / h;
        let u = self.field.values_mut();
        let m = u.len();
        // nothing enters through the left boundary face
        let b0 = self.face_velocity[0];
        let mut left = if b0 >= 0.0 { 0.0 } else { b0 * u[0] };
        for j in 0..m {
            // flux at face j+1 reads u[j] (old) or u[j+1] (not yet updated)
            let b = self.face_velocity[j + 1];
            let right = if b >= 0.0 {
                b * u[j]
            } else if j + 1 == m {
                0.0
            } else {
                b * u[j + 1]
            };
            u[j] -= lam * (right - left);
            left = right;
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(EulerianError::NonFinite { t: self.t + dt });
        }
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    /// Steps until `t = target` exactly (the last step is shortened).
    pub fn advance_to(&mut self, target: f64) -> Result<(), EulerianError> {
        while self.t < target {
            let before = self.t;
            self.step_until(target)?;
            if self.t == before {
                break;
            }
            if target - self.t < 1e-14 * target.abs().max(1.0) {
                self.t = target;
            }
        }
        Ok(())
    }

    /// Computes and stores a diagnostics record for the current state.
    pub fn record_diagnostics(&mut self) -> Result<DiagnosticsRecord, EulerianError> {
        self.update_face_velocities()?;
        let spec = *self.field.spec();
        let h = spec.h();
        let vals = self.field.values();
        let umax = lq_norm(&self.field, f64::INFINITY);
        let (first, last) = self
            .field
            .support_cells(SUPPORT_TOL * umax)
            .unwrap_or((0, spec.cells - 1));
        let (centroid, spread) = centroid_and_spread(&spec.centers(), &vals.iter().map(|u| u * h).collect::<Vec<_>>());
        let bv = &self.face_velocity;
        let slope = bv.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max);
        let rec = DiagnosticsRecord {
            t: self.t,
            mass: self.field.mass(),
            l1_norm: lq_norm(&self.field, 1.0),
            l2_norm: lq_norm(&self.field, 2.0),
            max_u: umax,
            min_u: vals.iter().copied().fold(f64::INFINITY, f64::min),
            min_velocity: bv.iter().copied().fold(f64::INFINITY, f64::min),
            max_velocity: bv.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            left_velocity: bv[first],
            right_velocity: bv[last + 1],
            lipschitz_bound: slope,
            support_left: spec.left_edge(first),
            support_right: spec.left_edge(last + 1),
            centroid,
            spread,
            dt_halvings: self.halvings,
        };
        self.history.push(rec);
        Ok(rec)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrossValidationError {
    #[error("runs describe different scenarios: {0} vs {1}")]
    FingerprintMismatch(String, String),
    #[error("runs are at different times: {lagrangian} vs {eulerian} (requested {requested})")]
    TimeMismatch { lagrangian: f64, eulerian: f64, requested: f64 },
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub t: f64,
    /// on the grid solver's own cells
    pub l1_distance: f64,
    /// on cells `COARSE_FACTOR` times wider, which damps nearest-cell counting noise
    pub coarse_l1_distance: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

pub const COARSE_FACTOR: usize = 4;

/// L1 distance between the deposited particle field and the grid field at time `t`.
pub fn cross_validate(
    lag: &LagrangianRun,
    eul: &EulerianRun,
    t: f64,
    tolerance: f64,
) -> Result<CrossValidationReport, CrossValidationError> {
    if lag.fingerprint() != eul.fingerprint() {
        return Err(CrossValidationError::FingerprintMismatch(lag.fingerprint(), eul.fingerprint()));
    }
    if (lag.t() - t).abs() > 0.5 * lag.dt() || (eul.t() - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(CrossValidationError::TimeMismatch {
            lagrangian: lag.t(),
            eulerian: eul.t(),
            requested: t,
        });
    }
    let deposited = deposit(lag, *eul.field().spec())?;
    let l1_distance = deposited.l1_distance(eul.field());
    let coarse_l1_distance = deposited
        .coarsen(COARSE_FACTOR)
        .zip(eul.field().coarsen(COARSE_FACTOR))
        .map(|(a, b)| a.l1_distance(&b));
    Ok(CrossValidationReport {
        t,
        l1_distance,
        coarse_l1_distance,
        tolerance,
        pass: l1_distance <= tolerance,
    })
}
