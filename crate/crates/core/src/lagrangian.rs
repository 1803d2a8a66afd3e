//! Particle solver along characteristics.
//!
//! The datum is pushed forward by the flow of `dX/dt = b(t, X)`, where the
//! velocity at every particle is computed self-consistently from the current
//! particle measure `Σ_j w_j δ_{X_j}`. Weights never change, so total mass is
//! conserved exactly. Densities are recovered either from the local particle
//! spacing (1D) or from the accumulated divergence along each characteristic.

use std::io::{self, Write};

use thiserror::Error;

use crate::datum::Datum;
use crate::diagnostics::{centroid_and_spread, DiagnosticsRecord};
use crate::fields::{fmt17, FieldError, GridField, GridSpec, SortedParticles};
use crate::kernels::{kernel_norms, Kernel, KernelError};
use crate::velocity::VelocityModel;

/// Spacing ratio below which adjacent particles count as coincident.
pub const CONCENTRATION_RATIO: f64 = 1e-12;

/// Largest allowed `Δt × (Lipschitz bound)`.
pub const CFL_LIMIT: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LagrangianError {
    #[error("need at least 2 particles, got {0}")]
    TooFewParticles(usize),
    #[error("initial datum has empty support")]
    EmptySupport,
    #[error("initial datum is not contained in the domain")]
    DatumOutsideDomain,
    #[error("step condition violated at t = {t}: dt = {dt} times Lipschitz bound {bound} exceeds {CFL_LIMIT}")]
    CflViolated { t: f64, dt: f64, bound: f64 },
    #[error("blow-up suspected at t = {t}: non-finite particle position")]
    BlowUpSuspected { t: f64 },
    #[error("particles concentrate at t = {t} near x = {x}: adjacent spacing collapsed")]
    Concentration { t: f64, x: f64 },
    #[error("particle at x = {x} lies outside the deposition grid")]
    ParticleOutsideGrid { x: f64 },
    #[error("operation needs a one-dimensional ensemble")]
    NotOneDimensional,
    #[error("kernel dimension {kernel} does not match ensemble dimension {ensemble}")]
    DimensionMismatch { kernel: usize, ensemble: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The Lagrangian state: positions, weights and the values carried along characteristics.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    dim: usize,
    positions: Vec<f64>,
    seeds: Vec<f64>,
    weights: Vec<f64>,
    u0: Vec<f64>,
    cell_volume: Vec<f64>,
    div_integral: Vec<f64>,
    /// contiguous-support group of each particle (1D spacing densities)
    group: Vec<u32>,
    datum_label: String,
}

impl ParticleEnsemble {
    /// Builds an ensemble from explicit particles; `positions` is `P × d`, row-major.
    pub fn from_parts(dim: usize, positions: Vec<f64>, weights: Vec<f64>, u0: Vec<f64>, cell_volume: Vec<f64>) -> Self {
        let p = weights.len();
        assert_eq!(positions.len(), p * dim);
        assert_eq!(u0.len(), p);
        assert_eq!(cell_volume.len(), p);
        Self {
            dim,
            seeds: positions.clone(),
            positions,
            weights,
            u0,
            cell_volume,
            div_integral: vec![0.0; p],
            group: vec![0; p],
            datum_label: "explicit".into(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn seeds(&self) -> &[f64] {
        &self.seeds
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn initial_values(&self) -> &[f64] {
        &self.u0
    }

    pub fn cell_volumes(&self) -> &[f64] {
        &self.cell_volume
    }

    pub fn divergence_integrals(&self) -> &[f64] {
        &self.div_integral
    }

    pub fn datum_label(&self) -> &str {
        &self.datum_label
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Particle `i`'s position (slice of length `d`).
    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    /// `true` if 1D positions are non-decreasing in seed order.
    pub fn is_ordered(&self) -> bool {
        self.dim == 1 && self.positions.windows(2).all(|w| w[0] <= w[1])
    }

    fn adjacent(&self, i: usize) -> bool {
        self.group[i] == self.group[i + 1]
    }
}

/// Seeds particles at the cell centers of a uniform partition of `supp u0`.
///
/// In 1D each nonzero interval receives `round(P · len / total_len)` cells
/// (at least one); in `d > 1` each box is split into cubes of side `(|supp|/P)^{1/d}`.
pub fn seed_from_datum(u0: &Datum, particles: usize, domain: &[(f64, f64)]) -> Result<ParticleEnsemble, LagrangianError> {
    if particles < 2 {
        return Err(LagrangianError::TooFewParticles(particles));
    }
    let dim = u0.dim();
    let pieces: Vec<_> = u0.pieces().iter().filter(|p| p.value != 0.0).collect();
    if pieces.is_empty() {
        return Err(LagrangianError::EmptySupport);
    }
    if domain.len() != dim {
        return Err(LagrangianError::DatumOutsideDomain);
    }
    for p in &pieces {
        for i in 0..dim {
            if p.lo[i] < domain[i].0 || p.hi[i] > domain[i].1 {
                return Err(LagrangianError::DatumOutsideDomain);
            }
        }
    }
    let total: f64 = pieces.iter().map(|p| p.volume()).sum();
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    let mut values = Vec::new();
    let mut volumes = Vec::new();
    let mut group = Vec::new();
    if dim == 1 {
        let mut g = 0u32;
        let mut prev_end = f64::NAN;
        for p in &pieces {
            let (a, b) = (p.lo[0], p.hi[0]);
            if !prev_end.is_nan() && a != prev_end {
                g += 1;
            }
            prev_end = b;
            let n = ((particles as f64 * (b - a) / total).round() as usize).max(1);
            let h = (b - a) / n as f64;
            for i in 0..n {
                positions.push(a + (i as f64 + 0.5) * h);
                weights.push(p.value * h);
                values.push(p.value);
                volumes.push(h);
                group.push(g);
            }
        }
    } else {
        let side = (total / particles as f64).powf(1.0 / dim as f64);
        for (g, p) in pieces.iter().enumerate() {
            let counts: Vec<usize> = (0..dim)
                .map(|i| (((p.hi[i] - p.lo[i]) / side).round() as usize).max(1))
                .collect();
            let widths: Vec<f64> = (0..dim).map(|i| (p.hi[i] - p.lo[i]) / counts[i] as f64).collect();
            let vol: f64 = widths.iter().product();
            let total_cells: usize = counts.iter().product();
            for flat in 0..total_cells {
                let mut rem = flat;
                for i in 0..dim {
                    let k = rem % counts[i];
                    rem /= counts[i];
                    positions.push(p.lo[i] + (k as f64 + 0.5) * widths[i]);
                }
                weights.push(p.value * vol);
                values.push(p.value);
                volumes.push(vol);
                group.push(g as u32);
            }
        }
    }
    let p = weights.len();
    Ok(ParticleEnsemble {
        dim,
        seeds: positions.clone(),
        positions,
        weights,
        u0: values,
        cell_volume: volumes,
        div_integral: vec![0.0; p],
        group,
        datum_label: format!("{:?}", u0.pieces()),
    })
}

/// Local Jacobians `∂X/∂x` from the particle spacing, in seed order (1D).
fn spacing_jacobians(ens: &ParticleEnsemble, pos: &[f64], out: &mut Vec<f64>) {
    let p = ens.len();
    out.clear();
    out.resize(p, 1.0);
    let seeds = &ens.seeds;
    for i in 0..p {
        let left = i > 0 && ens.adjacent(i - 1);
        let right = i + 1 < p && ens.adjacent(i);
        out[i] = match (left, right) {
            (true, true) => (pos[i + 1] - pos[i - 1]) / (seeds[i + 1] - seeds[i - 1]),
            (false, true) => (pos[i + 1] - pos[i]) / (seeds[i + 1] - seeds[i]),
            (true, false) => (pos[i] - pos[i - 1]) / (seeds[i] - seeds[i - 1]),
            (false, false) => 1.0,
        };
    }
}

/// A fixed-step RK4 run of the particle scheme.
#[derive(Debug, Clone)]
pub struct LagrangianRun {
    ensemble: ParticleEnsemble,
    steps: u64,
    dt: f64,
    velocity: VelocityModel,
    kernel: Kernel,
    kernel_tv: f64,
    jumps: Vec<(f64, f64)>,
    history: Vec<DiagnosticsRecord>,
    scratch: Scratch,
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    sorted: SortedParticles,
    base: Vec<f64>,
    stage: Vec<f64>,
    k: [Vec<f64>; 4],
    dk: [Vec<f64>; 4],
    conv: Vec<f64>,
    grad: Vec<f64>,
    jac: Vec<f64>,
    dens: Vec<f64>,
}

impl LagrangianRun {
    pub fn new(ensemble: ParticleEnsemble, kernel: Kernel, velocity: VelocityModel, dt: f64) -> Result<Self, LagrangianError> {
        if kernel.dim() != ensemble.dim() || velocity.dim() != ensemble.dim() {
            return Err(LagrangianError::DimensionMismatch {
                kernel: kernel.dim(),
                ensemble: ensemble.dim(),
            });
        }
        assert!(dt > 0.0, "time step must be positive");
        let kernel_tv = kernel_norms(&kernel, 1.0)?.total_variation;
        let jumps = if kernel.dim() == 1 { kernel.jumps() } else { Vec::new() };
        Ok(Self {
            ensemble,
            steps: 0,
            dt,
            velocity,
            kernel,
            kernel_tv,
            jumps,
            history: Vec::new(),
            scratch: Scratch::default(),
        })
    }

    pub fn ensemble(&self) -> &ParticleEnsemble {
        &self.ensemble
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn velocity(&self) -> &VelocityModel {
        &self.velocity
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn t(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn history(&self) -> &[DiagnosticsRecord] {
        &self.history
    }

    /// Identifies kernel, velocity law and datum for cross-solver comparisons.
    pub fn fingerprint(&self) -> String {
        format!("{}|{}|{}", self.kernel.label(), self.velocity.label(), self.ensemble.datum_label)
    }

    /// Velocities `b(t, X_i)` (and optionally `div b(t, X_i)`) for positions `pos`.
    fn eval_field(
        &mut self,
        t: f64,
        pos_from: PosSource,
        slot: usize,
        with_div: bool,
    ) -> Result<(), LagrangianError> {
        let ens = &self.ensemble;
        let p = ens.len();
        let d = ens.dim;
        let sc = &mut self.scratch;
        let pos: &[f64] = match pos_from {
            PosSource::Current => &ens.positions,
            PosSource::Stage => &sc.stage,
        };
        sc.k[slot].resize(p * d, 0.0);
        sc.dk[slot].resize(p, 0.0);
        if d == 1 {
            sc.sorted.rebuild(pos, &ens.weights);
            sc.conv.resize(p, 0.0);
            sc.grad.resize(p, 0.0);
            let sorted_pos = sc.sorted.positions().to_vec();
            sc.sorted
                .convolve_into(&self.kernel, &sorted_pos, &mut sc.conv, if with_div { Some(&mut sc.grad) } else { None })?;
            let need_density = with_div && !self.jumps.is_empty();
            if need_density {
                spacing_jacobians(ens, pos, &mut sc.jac);
                sc.dens.clear();
                sc.dens.extend(ens.u0.iter().zip(&sc.jac).map(|(u, j)| u / j));
            }
            let order = sc.sorted.order();
            let mut dxi = [0.0];
            for (slot_idx, &i) in order.iter().enumerate() {
                let x = pos[i];
                let xi = sc.conv[slot_idx];
                sc.k[slot][i] = self.velocity.eval1(t, x, xi);
                if with_div {
                    let dx = self.velocity.partials(t, &[x], xi, &mut dxi);
                    let mut g = sc.grad[slot_idx];
                    if need_density {
                        for &(beta, height) in &self.jumps {
                            g += height * density_at(ens, pos, &sc.sorted, &sc.dens, x - beta);
                        }
                    }
                    sc.dk[slot][i] = dx + dxi[0] * g;
                }
            }
        } else {
            let mut z = vec![0.0; d];
            let mut gk = vec![0.0; d];
            let mut out = vec![0.0; d];
            let mut dxi = vec![0.0; d];
            let radius = self.kernel.support_radius();
            for i in 0..p {
                let xi_pos = &pos[i * d..(i + 1) * d];
                let mut conv = 0.0;
                let mut grad = vec![0.0; d];
                for j in 0..p {
                    let xj = &pos[j * d..(j + 1) * d];
                    let mut r2 = 0.0;
                    for a in 0..d {
                        z[a] = xi_pos[a] - xj[a];
                        r2 += z[a] * z[a];
                    }
                    if r2.sqrt() > radius {
                        continue;
                    }
                    conv += ens.weights[j] * self.kernel.eval(&z);
                    if with_div {
                        self.kernel.gradient(&z, &mut gk);
                        for a in 0..d {
                            grad[a] += ens.weights[j] * gk[a];
                        }
                    }
                }
                self.velocity.eval(t, xi_pos, conv, &mut out);
                sc.k[slot][i * d..(i + 1) * d].copy_from_slice(&out);
                if with_div {
                    let dx = self.velocity.partials(t, xi_pos, conv, &mut dxi);
                    sc.dk[slot][i] = dx + dxi.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        Ok(())
    }

    /// Maximum density estimate: spacing form in 1D, accumulator form otherwise.
    fn max_density(&mut self) -> f64 {
        if self.ensemble.dim == 1 {
            spacing_jacobians(&self.ensemble, &self.ensemble.positions, &mut self.scratch.jac);
            self.ensemble
                .u0
                .iter()
                .zip(&self.scratch.jac)
                .map(|(u, j)| if *j > 0.0 { (u / j).abs() } else { f64::INFINITY })
                .fold(0.0, f64::max)
        } else {
            accumulator_densities(&self.ensemble).into_iter().fold(0.0, |m, v| m.max(v.abs()))
        }
    }

    /// Lipschitz bound of the particle transport field: the smaller of
    /// `L + L·Lip(η)·Σ|w|` (Lipschitz kernels) and `L + L·|Dη|·‖u‖_∞`.
    pub fn lipschitz_bound(&mut self) -> f64 {
        let l = self.velocity.lipschitz();
        let abs_mass: f64 = self.ensemble.weights.iter().map(|w| w.abs()).sum();
        let by_lip = self.kernel.lipschitz().map(|lip| l + l * lip * abs_mass);
        match by_lip {
            Some(b) => b,
            None => l + l * self.kernel_tv * self.max_density(),
        }
    }

    /// Advances one RK4 step; stage velocities use stage positions.
    pub fn step(&mut self) -> Result<(), LagrangianError> {
        let t = self.t();
        let dt = self.dt;
        let bound = self.lipschitz_bound();
        if dt * bound > CFL_LIMIT {
            return Err(LagrangianError::CflViolated { t, dt, bound });
        }
        let track_div = true;
        let n = self.ensemble.positions.len();
        self.scratch.base.clear();
        self.scratch.base.extend_from_slice(&self.ensemble.positions);
        self.scratch.stage.resize(n, 0.0);

        self.eval_field(t, PosSource::Current, 0, track_div)?;
        for (slot, (frac, tt)) in [(0.5, t + 0.5 * dt), (0.5, t + 0.5 * dt), (1.0, t + dt)].into_iter().enumerate() {
            let sc = &mut self.scratch;
            for i in 0..n {
                sc.stage[i] = sc.base[i] + frac * dt * sc.k[slot][i];
            }
            self.eval_field(tt, PosSource::Stage, slot + 1, track_div)?;
        }
        let sc = &self.scratch;
        let ens = &mut self.ensemble;
        for i in 0..n {
            ens.positions[i] = sc.base[i] + dt / 6.0 * (sc.k[0][i] + 2.0 * sc.k[1][i] + 2.0 * sc.k[2][i] + sc.k[3][i]);
        }
        for i in 0..ens.len() {
            ens.div_integral[i] += dt / 6.0 * (sc.dk[0][i] + 2.0 * sc.dk[1][i] + 2.0 * sc.dk[2][i] + sc.dk[3][i]);
        }
        self.steps += 1;
        if ens.positions.iter().any(|x| !x.is_finite()) {
            return Err(LagrangianError::BlowUpSuspected { t: self.t() });
        }
        Ok(())
    }

    /// Steps until `t ≥ target` (to within half a step).
    pub fn advance_to(&mut self, target: f64) -> Result<(), LagrangianError> {
        while self.t() < target - 0.5 * self.dt {
            self.step()?;
        }
        Ok(())
    }

    /// Particle velocities `b(t, X_i)` at the current state, in ensemble order.
    pub fn velocities(&mut self) -> Result<Vec<f64>, LagrangianError> {
        let t = self.t();
        self.eval_field(t, PosSource::Current, 0, false)?;
        Ok(self.scratch.k[0].clone())
    }

    /// Computes and stores a diagnostics record for the current state.
    pub fn record_diagnostics(&mut self) -> Result<DiagnosticsRecord, LagrangianError> {
        let vel = self.velocities()?;
        let bound = self.lipschitz_bound();
        let ens = &self.ensemble;
        let d = ens.dim;
        let t = self.t();
        let mass = ens.total_mass();
        let l1: f64 = ens.weights.iter().map(|w| w.abs()).sum();
        let dens: Vec<f64> = if d == 1 {
            let mut jac = Vec::new();
            spacing_jacobians(ens, &ens.positions, &mut jac);
            ens.u0
                .iter()
                .zip(&jac)
                .map(|(u, j)| if *j > CONCENTRATION_RATIO { u / j } else { f64::INFINITY * u.signum() })
                .collect()
        } else {
            accumulator_densities(ens)
        };
        let max_u = dens.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min_u = dens.iter().copied().fold(f64::INFINITY, f64::min);
        let l2 = ens
            .weights
            .iter()
            .zip(&dens)
            .map(|(w, u)| w.abs() * u.abs())
            .sum::<f64>()
            .sqrt();
        let xs: Vec<f64> = (0..ens.len()).map(|i| ens.positions[i * d]).collect();
        let (centroid, spread) = if d == 1 {
            centroid_and_spread(&xs, &ens.weights)
        } else {
            let mut c = 0.0;
            let mut var = 0.0;
            for a in 0..d {
                let xa: Vec<f64> = (0..ens.len()).map(|i| ens.positions[i * d + a]).collect();
                let (ca, sa) = centroid_and_spread(&xa, &ens.weights);
                if a == 0 {
                    c = ca;
                }
                var += sa * sa;
            }
            (c, var.sqrt())
        };
        let (mut lo_i, mut hi_i) = (0, 0);
        for i in 0..ens.len() {
            if xs[i] < xs[lo_i] {
                lo_i = i;
            }
            if xs[i] > xs[hi_i] {
                hi_i = i;
            }
        }
        let vx: Vec<f64> = (0..ens.len()).map(|i| vel[i * d]).collect();
        let rec = DiagnosticsRecord {
            t,
            mass,
            l1_norm: l1,
            l2_norm: l2,
            max_u,
            min_u,
            min_velocity: vx.iter().copied().fold(f64::INFINITY, f64::min),
            max_velocity: vx.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            left_velocity: vx[lo_i],
            right_velocity: vx[hi_i],
            lipschitz_bound: bound,
            support_left: xs[lo_i],
            support_right: xs[hi_i],
            centroid,
            spread,
            dt_halvings: 0,
        };
        self.history.push(rec);
        Ok(rec)
    }
}

#[derive(Clone, Copy)]
enum PosSource {
    Current,
    Stage,
}

/// Density at an arbitrary point from spacing densities: the particle's own
/// value on an exact hit, linear interpolation between seed-adjacent
/// neighbours, zero outside the particle cloud.
fn density_at(ens: &ParticleEnsemble, pos: &[f64], sorted: &SortedParticles, dens: &[f64], z: f64) -> f64 {
    let xs = sorted.positions();
    let order = sorted.order();
    let idx = xs.partition_point(|&x| x < z);
    if idx < xs.len() && xs[idx] == z {
        return dens[order[idx]];
    }
    if idx == 0 || idx == xs.len() {
        return 0.0;
    }
    let (l, r) = (order[idx - 1], order[idx]);
    if r != l + 1 || !ens.adjacent(l) {
        return 0.0;
    }
    let s = (z - pos[l]) / (pos[r] - pos[l]);
    dens[l] + s * (dens[r] - dens[l])
}

/// `u0_i · exp(-∫_0^t div b(s, X_i(s)) ds)`.
pub fn accumulator_densities(ens: &ParticleEnsemble) -> Vec<f64> {
    ens.u0.iter().zip(&ens.div_integral).map(|(u, a)| u * (-a).exp()).collect()
}

/// Per-particle `(position, u)` from the spacing form `u_i = u0_i · (initial spacing / current spacing)`.
pub fn solution_values(run: &LagrangianRun) -> Result<Vec<(f64, f64)>, LagrangianError> {
    let ens = &run.ensemble;
    if ens.dim != 1 {
        return Err(LagrangianError::NotOneDimensional);
    }
    let mut jac = Vec::new();
    spacing_jacobians(ens, &ens.positions, &mut jac);
    let mut out = Vec::with_capacity(ens.len());
    for (i, j) in jac.iter().enumerate() {
        if *j <= CONCENTRATION_RATIO {
            return Err(LagrangianError::Concentration {
                t: run.t(),
                x: ens.positions[i],
            });
        }
        out.push((ens.positions[i], ens.u0[i] / j));
    }
    Ok(out)
}

/// Per-particle `(position, u)` from the divergence accumulator (first coordinate in `d > 1`).
pub fn accumulator_values(run: &LagrangianRun) -> Vec<(f64, f64)> {
    let ens = &run.ensemble;
    accumulator_densities(ens)
        .into_iter()
        .enumerate()
        .map(|(i, u)| (ens.positions[i * ens.dim], u))
        .collect()
}

/// Deposits particle weights onto a grid (nearest-cell); cell value = weight / h.
pub fn deposit(run: &LagrangianRun, spec: GridSpec) -> Result<GridField, LagrangianError> {
    deposit_ensemble(&run.ensemble, spec)
}

pub fn deposit_ensemble(ens: &ParticleEnsemble, spec: GridSpec) -> Result<GridField, LagrangianError> {
    if ens.dim != 1 {
        return Err(LagrangianError::NotOneDimensional);
    }
    let mut acc = vec![0.0; spec.cells];
    for (x, w) in ens.positions.iter().zip(&ens.weights) {
        let j = spec.cell_of(*x).ok_or(LagrangianError::ParticleOutsideGrid { x: *x })?;
        acc[j] += w;
    }
    let h = spec.h();
    acc.iter_mut().for_each(|v| *v /= h);
    Ok(GridField::from_values(spec, acc))
}

/// Appends trajectory rows `t,particle_id,x,weight,u_value` (spacing-form density in 1D).
pub fn write_trajectory_rows<W: Write>(run: &LagrangianRun, mut w: W) -> io::Result<()> {
    let ens = &run.ensemble;
    let t = run.t();
    let dens: Vec<f64> = if ens.dim == 1 {
        let mut jac = Vec::new();
        spacing_jacobians(ens, &ens.positions, &mut jac);
        ens.u0
            .iter()
            .zip(&jac)
            .map(|(u, j)| if *j > CONCENTRATION_RATIO { u / j } else { f64::INFINITY })
            .collect()
    } else {
        accumulator_densities(ens)
    };
    for i in 0..ens.len() {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt17(t),
            i,
            fmt17(ens.positions[i * ens.dim]),
            fmt17(ens.weights[i]),
            fmt17(dens[i])
        )?;
    }
    Ok(())
}

pub const TRAJECTORY_HEADER: &str = "t,particle_id,x,weight,u_value";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::DatumPiece;
    use crate::kernels::{make_smoothed_kernel, make_step_kernel, Radial};
    use crate::velocity::{make_constant_velocity, make_identity_velocity, VelocityModel};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn blowup_run(p: usize, dt: f64) -> LagrangianRun {
        let ens = seed_from_datum(&Datum::blowup(), p, &[(-1.0, 2.0)]).unwrap();
        LagrangianRun::new(ens, make_step_kernel(), make_identity_velocity(), dt).unwrap()
    }

    #[test]
    fn seeding_blowup_datum() {
        let ens = seed_from_datum(&Datum::blowup(), 100, &[(-1.0, 2.0)]).unwrap();
        assert_eq!(ens.len(), 100);
        assert!(ens.positions().iter().all(|&x| x > 0.0 && x < 0.5));
        assert!(ens.weights().iter().all(|&w| (w - 0.01).abs() < 1e-15));
        assert_abs_diff_eq!(ens.total_mass(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn seeding_unit_interval_midpoints() {
        let d = Datum::new(vec![DatumPiece::interval(0.0, 1.0, 1.0)]).unwrap();
        let ens = seed_from_datum(&d, 4, &[(0.0, 1.0)]).unwrap();
        assert_eq!(ens.positions(), &[0.125, 0.375, 0.625, 0.875]);
        assert_eq!(ens.weights(), &[0.25; 4]);
    }

    #[test]
    fn seeding_errors() {
        let zero = Datum::new(vec![DatumPiece::interval(0.0, 1.0, 0.0)]).unwrap();
        assert_eq!(seed_from_datum(&zero, 10, &[(0.0, 1.0)]), Err(LagrangianError::EmptySupport));
        assert_eq!(
            seed_from_datum(&Datum::blowup(), 1, &[(0.0, 1.0)]),
            Err(LagrangianError::TooFewParticles(1))
        );
        assert_eq!(
            seed_from_datum(&Datum::blowup(), 10, &[(0.1, 1.0)]),
            Err(LagrangianError::DatumOutsideDomain)
        );
    }

    #[test]
    fn single_particle_moves_at_plateau_speed() {
        let alpha = 0.3;
        let k = make_smoothed_kernel(alpha, 18).unwrap().into_kernel();
        let ens = ParticleEnsemble::from_parts(1, vec![0.2], vec![1.0], vec![1.0], vec![1.0]);
        let mut run = LagrangianRun::new(ens, k, make_identity_velocity(), 1e-3).unwrap();
        assert_abs_diff_eq!(run.velocities().unwrap()[0], alpha, epsilon = 1e-15);
        run.step().unwrap();
        assert_abs_diff_eq!(run.ensemble().positions()[0], 0.2 + alpha * 1e-3, epsilon = 1e-15);
    }

    #[test]
    fn zero_weights_do_not_move() {
        let k = make_smoothed_kernel(0.5, 18).unwrap().into_kernel();
        let ens = ParticleEnsemble::from_parts(1, vec![0.0, 0.1, 0.2], vec![0.0; 3], vec![0.0; 3], vec![0.1; 3]);
        let mut run = LagrangianRun::new(ens.clone(), k, make_identity_velocity(), 1e-2).unwrap();
        for _ in 0..10 {
            run.step().unwrap();
        }
        assert_eq!(run.ensemble().positions(), ens.positions());
    }

    #[test]
    fn blowup_initial_velocities() {
        let mut run = blowup_run(1000, 1e-3);
        let v = run.velocities().unwrap();
        // leftmost sees almost all the mass, rightmost sees none of it
        assert!((v[0] - 1.0).abs() < 2e-3);
        assert!(v[999].abs() < 2e-3);
    }

    #[test]
    fn blowup_density_at_t04() {
        let mut run = blowup_run(1000, 1e-3);
        run.advance_to(0.4).unwrap();
        let vals = solution_values(&run).unwrap();
        let (x, u) = vals[500];
        assert!(x > 0.4 && x < 0.5);
        assert!((u - 10.0).abs() < 0.1, "{u}");
        // accumulator form agrees
        let acc = accumulator_values(&run);
        assert!((acc[500].1 - u).abs() / u < 0.1, "{} vs {u}", acc[500].1);
    }

    #[test]
    fn zero_velocity_keeps_values() {
        let ens = seed_from_datum(&Datum::blowup(), 50, &[(-1.0, 2.0)]).unwrap();
        let mut run = LagrangianRun::new(ens, make_step_kernel(), make_constant_velocity(0.0), 1e-2).unwrap();
        run.advance_to(0.3).unwrap();
        for (_, u) in solution_values(&run).unwrap() {
            assert_eq!(u, 2.0);
        }
    }

    #[test]
    fn compression_doubles_density() {
        let d = Datum::new(vec![DatumPiece::interval(0.0, 1.0, 1.0)]).unwrap();
        let mut ens = seed_from_datum(&d, 10, &[(0.0, 1.0)]).unwrap();
        for x in ens.positions.iter_mut() {
            *x *= 0.5;
        }
        let run = LagrangianRun::new(ens, make_step_kernel(), make_identity_velocity(), 1e-3).unwrap();
        for (_, u) in solution_values(&run).unwrap() {
            assert_abs_diff_eq!(u, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coincident_particles_report_concentration() {
        let ens = ParticleEnsemble::from_parts(1, vec![0.5, 0.5, 0.5], vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]);
        let mut ens = ens;
        ens.seeds = vec![0.0, 1.0, 2.0];
        let run = LagrangianRun::new(ens, make_step_kernel(), make_identity_velocity(), 1e-3).unwrap();
        assert!(matches!(solution_values(&run), Err(LagrangianError::Concentration { .. })));
    }

    #[test]
    fn deposit_single_particle() {
        let ens = ParticleEnsemble::from_parts(1, vec![0.25], vec![1.0], vec![1.0], vec![1.0]);
        let run = LagrangianRun::new(ens, make_step_kernel(), make_identity_velocity(), 1e-3).unwrap();
        let g = deposit(&run, GridSpec::new(0.0, 1.0, 10).unwrap()).unwrap();
        for (j, v) in g.values().iter().enumerate() {
            if j == 2 {
                assert_abs_diff_eq!(*v, 10.0, epsilon = 1e-12);
            } else {
                assert_eq!(*v, 0.0);
            }
        }
        assert!(matches!(
            deposit(&run, GridSpec::new(0.5, 1.0, 10).unwrap()),
            Err(LagrangianError::ParticleOutsideGrid { .. })
        ));
    }

    #[test]
    fn deposit_recovers_blowup_datum() {
        let run = blowup_run(1000, 1e-3);
        let spec = GridSpec::new(-0.5, 1.5, 400).unwrap();
        let g = deposit(&run, spec).unwrap();
        let exact = Datum::blowup().to_grid(spec);
        assert!(g.l1_distance(&exact) < 1e-12);
    }

    #[test]
    fn cfl_violation_is_reported() {
        let mut run = blowup_run(100, 0.2);
        assert!(matches!(run.step(), Err(LagrangianError::CflViolated { .. })));
    }

    #[test]
    fn mass_is_conserved_and_order_preserved() {
        let k = make_smoothed_kernel(0.5, 18).unwrap().into_kernel();
        let ens = seed_from_datum(&Datum::blowup(), 200, &[(-1.0, 2.0)]).unwrap();
        let m0 = ens.total_mass();
        let mut run = LagrangianRun::new(ens, k, make_identity_velocity(), 1e-3).unwrap();
        for _ in 0..300 {
            run.step().unwrap();
            assert!(run.ensemble().is_ordered());
        }
        assert!((run.ensemble().total_mass() - m0).abs() <= 1e-13 * m0);
    }

    #[test]
    fn two_dimensional_radial_run() {
        let k = Kernel::radial(
            2,
            Radial {
                name: "bump".into(),
                phi: Arc::new(|r: f64| (1.0 - r * r).max(0.0)),
                dphi: Arc::new(|r: f64| -2.0 * r),
                radius: Some(1.0),
            },
        );
        let datum = Datum::new(vec![DatumPiece {
            lo: vec![0.0, 0.0],
            hi: vec![0.5, 0.5],
            value: 1.0,
        }])
        .unwrap();
        let ens = seed_from_datum(&datum, 100, &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(ens.len(), 100);
        let v = VelocityModel::affine(vec![0.0, 0.0], vec![1.0, 0.5]);
        let mut run = LagrangianRun::new(ens, k, v, 1e-2).unwrap();
        let m0 = run.ensemble().total_mass();
        run.advance_to(0.2).unwrap();
        let rec = run.record_diagnostics().unwrap();
        assert!((rec.mass - m0).abs() < 1e-14);
        assert!(rec.centroid > 0.25);
        assert!(rec.max_u.is_finite());
    }
}
