//! Uniform-grid fields in one dimension and the convolution engine `u ∗ η`.
//!
//! Both convolution paths integrate exactly: the grid path integrates the
//! piecewise-linear kernel against the piecewise-constant field through
//! cumulative zeroth and first moments, the particle path sums `w_j η(x - x_j)`
//! through prefix sums over the sorted particles.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{Kernel, Profile};
use crate::quad;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("kernel {0} has unbounded support; convolution needs a finite support radius")]
    InfiniteSupport(String),
    #[error("grid needs at least two cells and x_min < x_max (got {cells} cells on [{x_min}, {x_max}])")]
    BadGrid { x_min: f64, x_max: f64, cells: usize },
    #[error("convolution on the grid path requires a one-dimensional kernel")]
    NotOneDimensional,
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] quad::QuadError),
}

/// Geometry of a uniform 1D grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, cells: usize) -> Result<Self, FieldError> {
        if cells < 2 || !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(FieldError::BadGrid { x_min, x_max, cells });
        }
        Ok(Self { x_min, x_max, cells })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn center(&self, j: usize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.h()
    }

    pub fn left_edge(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }

    /// Index of the cell containing `x` (`x_max` itself belongs to the last cell).
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.x_min && x <= self.x_max) {
            return None;
        }
        let j = ((x - self.x_min) / self.h()).floor() as usize;
        Some(j.min(self.cells - 1))
    }
}

/// Cell averages of `u(t, ·)` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            values: vec![0.0; spec.cells],
            spec,
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), spec.cells, "value count must match cell count");
        Self { spec, values }
    }

    /// Samples a function at cell centers.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..spec.cells).map(|j| f(spec.center(j))).collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn h(&self) -> f64 {
        self.spec.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// `h · Σ u_j`
    pub fn mass(&self) -> f64 {
        self.h() * self.values.iter().sum::<f64>()
    }

    pub fn centroid(&self) -> f64 {
        let m = self.mass();
        self.h()
            * self
                .values
                .iter()
                .enumerate()
                .map(|(j, u)| u * self.spec.center(j))
                .sum::<f64>()
            / m
    }

    pub fn lq_norm(&self, q: f64) -> f64 {
        lq_norm(self, q)
    }

    /// `h · Σ |u_j - v_j|`; grids must match.
    pub fn l1_distance(&self, other: &GridField) -> f64 {
        assert_eq!(self.spec, other.spec, "grids must match");
        self.h()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
    }

    /// Averages groups of `factor` cells; `None` unless `factor` divides the cell count.
    pub fn coarsen(&self, factor: usize) -> Option<GridField> {
        if factor == 0 || self.spec.cells % factor != 0 || self.spec.cells / factor < 2 {
            return None;
        }
        let spec = GridSpec::new(self.spec.x_min, self.spec.x_max, self.spec.cells / factor).ok()?;
        let values = self
            .values
            .chunks(factor)
            .map(|c| c.iter().sum::<f64>() / factor as f64)
            .collect();
        Some(GridField { spec, values })
    }

    /// `(first, last)` cells where `|u_j| > tol`.
    pub fn support_cells(&self, tol: f64) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|u| u.abs() > tol)?;
        let last = self.values.iter().rposition(|u| u.abs() > tol)?;
        Some((first, last))
    }

    /// Writes the `x,u` snapshot CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,u")?;
        for (j, u) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", fmt17(self.spec.center(j)), fmt17(*u))?;
        }
        Ok(())
    }
}

/// 17-significant-digit decimal formatting used for every numeric CSV column.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `(h Σ |u_j|^q)^{1/q}`, or `max |u_j|` for `q = ∞`.
pub fn lq_norm(u: &GridField, q: f64) -> f64 {
    if q.is_infinite() {
        return u.values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    if q == 1.0 {
        return u.h() * u.values.iter().map(|v| v.abs()).sum::<f64>();
    }
    (u.h() * u.values.iter().map(|v| v.abs().powf(q)).sum::<f64>()).powf(1.0 / q)
}

/// Values of `u ∗ η` at a list of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionResult {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

fn finite_support(k: &Kernel) -> Result<(f64, f64), FieldError> {
    if k.dim() != 1 {
        return Err(FieldError::NotOneDimensional);
    }
    k.support_interval()
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .ok_or_else(|| FieldError::InfiniteSupport(k.label().to_string()))
}

/// Cumulative moments `∫_{x_min}^z u` and `∫_{x_min}^z (s - c) u(s) ds` of a piecewise-constant field.
struct GridMoments<'a> {
    field: &'a GridField,
    shift: f64,
    m0: Vec<f64>,
    m1: Vec<f64>,
}

impl<'a> GridMoments<'a> {
    fn new(field: &'a GridField) -> Self {
        let spec = field.spec;
        let h = spec.h();
        let shift = 0.5 * (spec.x_min + spec.x_max);
        let mut m0 = Vec::with_capacity(spec.cells + 1);
        let mut m1 = Vec::with_capacity(spec.cells + 1);
        m0.push(0.0);
        m1.push(0.0);
        let (mut a0, mut a1) = (0.0, 0.0);
        for (j, &u) in field.values.iter().enumerate() {
            a0 += u * h;
            a1 += u * h * (spec.center(j) - shift);
            m0.push(a0);
            m1.push(a1);
        }
        Self { field, shift, m0, m1 }
    }

    /// `(∫_{-∞}^z u, ∫_{-∞}^z (s - shift) u(s) ds)`
    fn at(&self, z: f64) -> (f64, f64) {
        let spec = &self.field.spec;
        if z <= spec.x_min {
            return (0.0, 0.0);
        }
        if z >= spec.x_max {
            return (self.m0[spec.cells], self.m1[spec.cells]);
        }
        let j = (((z - spec.x_min) / spec.h()).floor() as usize).min(spec.cells - 1);
        let left = spec.left_edge(j);
        let u = self.field.values[j];
        let dz = z - left;
        let (l, r) = (left - self.shift, z - self.shift);
        (self.m0[j] + u * dz, self.m1[j] + u * dz * 0.5 * (l + r))
    }
}

/// `∫ u(x - y) η(y) dy` at each point, integrated exactly cell by cell.
/// Field values outside the grid are zero.
pub fn convolve_grid(u: &GridField, k: &Kernel, points: &[f64]) -> Result<ConvolutionResult, FieldError> {
    let (a, b) = finite_support(k)?;
    let values = match k.profile() {
        Profile::PiecewiseLinear(pl) => {
            let mom = GridMoments::new(u);
            let segs: Vec<(f64, f64, f64, f64)> = pl
                .segments()
                .iter()
                .map(|s| {
                    let (ca, cb) = s.affine();
                    (s.start, s.end, ca, cb)
                })
                .collect();
            points
                .iter()
                .map(|&x| {
                    let xs = x - mom.shift;
                    segs.iter()
                        .map(|&(s, e, ca, cb)| {
                            // z = x - y ranges over [x - e, x - s]
                            let (p0, p1) = mom.at(x - s);
                            let (q0, q1) = mom.at(x - e);
                            (ca + cb * xs) * (p0 - q0) - cb * (p1 - q1)
                        })
                        .sum()
                })
                .collect()
        }
        profile => {
            let spec = *u.spec();
            let h = spec.h();
            let mut out = Vec::with_capacity(points.len());
            for &x in points {
                let (lo, hi) = (x - b, x - a);
                let mut acc = 0.0;
                let j0 = ((lo - spec.x_min) / h).floor().max(0.0) as usize;
                let j1 = (((hi - spec.x_min) / h).ceil().max(0.0) as usize).min(spec.cells);
                for j in j0..j1 {
                    let uj = u.values[j];
                    if uj == 0.0 {
                        continue;
                    }
                    let zl = spec.left_edge(j).max(lo);
                    let zr = (spec.left_edge(j) + h).min(hi);
                    if zr <= zl {
                        continue;
                    }
                    // ∫_{zl}^{zr} η(x - z) dz = ∫_{x - zr}^{x - zl} η(y) dy
                    let piece = match profile {
                        Profile::ClosedForm(cf) if cf.antiderivative.is_some() => {
                            let big_f = cf.antiderivative.as_ref().expect("checked");
                            big_f(x - zl) - big_f(x - zr)
                        }
                        _ => quad::simpson(&|y| k.eval1(y), x - zr, x - zl, 1e-12)?,
                    };
                    acc += uj * piece;
                }
                out.push(acc);
            }
            out
        }
    };
    Ok(ConvolutionResult {
        points: points.to_vec(),
        values,
    })
}

/// Particles sorted by position with prefix sums of `w` and `w·(x - shift)`.
///
/// Reused across solver stages to avoid reallocating.
#[derive(Debug, Clone, Default)]
pub struct SortedParticles {
    order: Vec<usize>,
    xs: Vec<f64>,
    ws: Vec<f64>,
    cum_w: Vec<f64>,
    cum_wx: Vec<f64>,
    shift: f64,
}

impl SortedParticles {
    pub fn new(positions: &[f64], weights: &[f64]) -> Self {
        let mut s = Self::default();
        s.rebuild(positions, weights);
        s
    }

    pub fn rebuild(&mut self, positions: &[f64], weights: &[f64]) {
        assert_eq!(positions.len(), weights.len());
        let p = positions.len();
        self.order.clear();
        self.order.extend(0..p);
        if !positions.windows(2).all(|w| w[0] <= w[1]) {
            self.order.sort_by(|&i, &j| positions[i].total_cmp(&positions[j]));
        }
        self.xs.clear();
        self.ws.clear();
        self.xs.extend(self.order.iter().map(|&i| positions[i]));
        self.ws.extend(self.order.iter().map(|&i| weights[i]));
        self.shift = if p > 0 { self.xs[p / 2] } else { 0.0 };
        self.cum_w.clear();
        self.cum_wx.clear();
        self.cum_w.push(0.0);
        self.cum_wx.push(0.0);
        let (mut a, mut b) = (0.0, 0.0);
        for (x, w) in self.xs.iter().zip(&self.ws) {
            a += w;
            b += w * (x - self.shift);
            self.cum_w.push(a);
            self.cum_wx.push(b);
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Sorted positions.
    pub fn positions(&self) -> &[f64] {
        &self.xs
    }

    /// Permutation mapping sorted slot → original index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    fn count_le(&self, v: f64) -> usize {
        self.xs.partition_point(|&x| x <= v)
    }

    /// Evaluates `Σ w_j η(x - x_j)` and, when `grad` is given, the sum of
    /// `w_j η'(x - x_j)` over the absolutely continuous part of `η`.
    pub fn convolve_into(
        &self,
        k: &Kernel,
        points: &[f64],
        values: &mut [f64],
        mut grad: Option<&mut [f64]>,
    ) -> Result<(), FieldError> {
        let (a, b) = finite_support(k)?;
        assert_eq!(points.len(), values.len());
        if self.is_empty() {
            values.iter_mut().for_each(|v| *v = 0.0);
            if let Some(g) = grad.as_deref_mut() {
                g.iter_mut().for_each(|v| *v = 0.0);
            }
            return Ok(());
        }
        match k.profile() {
            Profile::PiecewiseLinear(pl) => {
                let segs = pl.segments();
                // boundaries in segment order: start_k, end_k
                let mut bounds: Vec<f64> = segs.iter().flat_map(|s| [s.start, s.end]).collect();
                bounds.sort_by(f64::total_cmp);
                bounds.dedup();
                let bidx = |v: f64| bounds.partition_point(|&b| b < v);
                let seg_bounds: Vec<(usize, usize, f64, f64)> = segs
                    .iter()
                    .map(|s| {
                        let (ca, cb) = s.affine();
                        (bidx(s.start), bidx(s.end), ca, cb)
                    })
                    .collect();
                let sorted = points.windows(2).all(|w| w[0] <= w[1]);
                let mut cursors = vec![0usize; bounds.len()];
                let mut counts = vec![0usize; bounds.len()];
                for (qi, &x) in points.iter().enumerate() {
                    for (bi, &beta) in bounds.iter().enumerate() {
                        let v = x - beta;
                        counts[bi] = if sorted {
                            let c = &mut cursors[bi];
                            while *c < self.xs.len() && self.xs[*c] <= v {
                                *c += 1;
                            }
                            *c
                        } else {
                            self.count_le(v)
                        };
                    }
                    let xs = x - self.shift;
                    let mut val = 0.0;
                    let mut g = 0.0;
                    for &(si, ei, ca, cb) in &seg_bounds {
                        // particles with x - x_j in [start, end): x_j in (x - end, x - start]
                        let hi = counts[si];
                        let lo = counts[ei];
                        if hi <= lo {
                            continue;
                        }
                        let w = self.cum_w[hi] - self.cum_w[lo];
                        let wx = self.cum_wx[hi] - self.cum_wx[lo];
                        val += (ca + cb * xs) * w - cb * wx;
                        g += cb * w;
                    }
                    values[qi] = val;
                    if let Some(gr) = grad.as_deref_mut() {
                        gr[qi] = g;
                    }
                }
            }
            _ => {
                for (qi, &x) in points.iter().enumerate() {
                    // x - x_j in [a, b]  ⇔  x_j in [x - b, x - a]
                    let lo = self.xs.partition_point(|&xj| xj < x - b);
                    let hi = self.count_le(x - a);
                    let mut val = 0.0;
                    let mut g = 0.0;
                    for j in lo..hi {
                        let z = x - self.xs[j];
                        val += self.ws[j] * k.eval1(z);
                        g += self.ws[j] * k.deriv1(z);
                    }
                    values[qi] = val;
                    if let Some(gr) = grad.as_deref_mut() {
                        gr[qi] = g;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Σ_i w_i η(x - x_i)` at each point (one-dimensional particles).
pub fn convolve_particles(
    positions: &[f64],
    weights: &[f64],
    k: &Kernel,
    points: &[f64],
) -> Result<ConvolutionResult, FieldError> {
    let sp = SortedParticles::new(positions, weights);
    let mut values = vec![0.0; points.len()];
    sp.convolve_into(k, points, &mut values, None)?;
    Ok(ConvolutionResult {
        points: points.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_closed_form, make_smoothed_kernel, make_step_kernel};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn blowup_datum(cells: usize) -> GridField {
        let spec = GridSpec::new(-1.0, 1.0, cells).unwrap();
        GridField::from_fn(spec, |x| if x > 0.0 && x < 0.5 { 2.0 } else { 0.0 })
    }

    #[test]
    fn grid_convolution_of_blowup_datum() {
        let u = blowup_datum(400);
        let k = make_step_kernel();
        let r = convolve_grid(&u, &k, &[0.0, 0.25]).unwrap();
        assert_abs_diff_eq!(r.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.values[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn coarsening_preserves_mass() {
        let u = blowup_datum(400);
        let c = u.coarsen(4).unwrap();
        assert_eq!(c.spec().cells, 100);
        assert_abs_diff_eq!(c.mass(), u.mass(), epsilon = 1e-14);
        assert!(u.coarsen(3).is_none());
    }

    #[test]
    fn constant_field_is_reproduced() {
        let spec = GridSpec::new(-5.0, 5.0, 1000).unwrap();
        let u = GridField::from_fn(spec, |_| 3.0);
        for k in [
            make_step_kernel(),
            make_smoothed_kernel(0.3, 18).unwrap().into_kernel(),
            make_closed_form("parabolic", 0.7).unwrap(),
        ] {
            let r = convolve_grid(&u, &k, &[0.0, 0.123]).unwrap();
            for v in r.values {
                assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn unbounded_kernel_is_rejected() {
        let u = blowup_datum(10);
        let k = make_closed_form("exponential", 1.0).unwrap();
        assert!(matches!(convolve_grid(&u, &k, &[0.0]), Err(FieldError::InfiniteSupport(_))));
    }

    #[test]
    fn lq_norms_of_blowup_datum() {
        let u = blowup_datum(400);
        assert_abs_diff_eq!(lq_norm(&u, 1.0), 1.0, epsilon = 1e-14);
        assert_eq!(lq_norm(&u, f64::INFINITY), 2.0);
        assert_abs_diff_eq!(lq_norm(&u, 2.0), 2.0f64.sqrt(), epsilon = 1e-14);
        let z = GridField::zeros(*u.spec());
        for q in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(lq_norm(&z, q), 0.0);
        }
    }

    #[test]
    fn particle_convolution_examples() {
        let k = make_smoothed_kernel(0.4, 18).unwrap();
        let r = convolve_particles(&[0.0], &[1.0], k.kernel(), &[0.0]).unwrap();
        assert_abs_diff_eq!(r.values[0], 0.4, epsilon = 1e-15);

        let r = convolve_particles(&[], &[], k.kernel(), &[0.0, 1.0]).unwrap();
        assert_eq!(r.values, vec![0.0, 0.0]);

        let r = convolve_particles(&[-0.25, 0.25], &[0.5, 0.5], &make_step_kernel(), &[-0.5]).unwrap();
        assert_abs_diff_eq!(r.values[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn particle_sum_respects_jump_convention() {
        // particle exactly at x and exactly at x + 1
        let k = make_step_kernel();
        let r = convolve_particles(&[0.0, 1.0], &[1.0, 10.0], &k, &[0.0]).unwrap();
        // η(0) = 0, η(-1) = 1
        assert_eq!(r.values[0], 10.0);
    }

    #[test]
    fn particle_sum_matches_direct_sum() {
        let k = make_smoothed_kernel(0.7, 20).unwrap();
        let xs: Vec<f64> = (0..300).map(|i| ((i * 7919) % 300) as f64 / 300.0 * 0.6).collect();
        let ws: Vec<f64> = (0..300).map(|i| 1.0 + (i % 5) as f64 * 0.1).collect();
        let pts: Vec<f64> = (0..97).map(|i| -0.3 + i as f64 * 0.013).collect();
        let fast = convolve_particles(&xs, &ws, k.kernel(), &pts).unwrap();
        let mut shuffled = pts.clone();
        shuffled.reverse();
        let fast_unsorted = convolve_particles(&xs, &ws, k.kernel(), &shuffled).unwrap();
        for (i, &x) in pts.iter().enumerate() {
            let direct: f64 = xs.iter().zip(&ws).map(|(xj, w)| w * k.eval(x - xj)).sum();
            assert_abs_diff_eq!(fast.values[i], direct, epsilon = 1e-12);
            assert_abs_diff_eq!(fast_unsorted.values[pts.len() - 1 - i], direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn particle_grid_consistency() {
        let spec = GridSpec::new(-2.0, 2.0, 800).unwrap();
        let u = GridField::from_fn(spec, |x| if x.abs() < 0.6 { 1.0 + x } else { 0.0 });
        let k = make_step_kernel();
        let h = spec.h();
        let xs = spec.centers();
        let ws: Vec<f64> = u.values().iter().map(|v| v * h).collect();
        let pts: Vec<f64> = (0..50).map(|i| -1.5 + i as f64 * 0.06 + 0.001).collect();
        let g = convolve_grid(&u, &k, &pts).unwrap();
        let p = convolve_particles(&xs, &ws, &k, &pts).unwrap();
        let tol = 2.0 * h * lq_norm(&u, f64::INFINITY) * 2.0;
        for (a, b) in g.values.iter().zip(&p.values) {
            assert!((a - b).abs() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn performance_contract_particles() {
        let k = make_smoothed_kernel(0.5, 36).unwrap();
        let n = 10_000;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64 * 0.5).collect();
        let ws = vec![1.0 / n as f64; n];
        let pts: Vec<f64> = (0..n).map(|i| -0.5 + i as f64 / n as f64 * 1.5).collect();
        let start = std::time::Instant::now();
        let r = convolve_particles(&xs, &ws, k.kernel(), &pts).unwrap();
        assert!(start.elapsed().as_secs_f64() < 1.0);
        assert!(r.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn csv_snapshot_format() {
        let spec = GridSpec::new(0.0, 1.0, 2).unwrap();
        let u = GridField::from_values(spec, vec![1.0, 0.5]);
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "x,u\n2.5000000000000000e-1,1.0000000000000000e0\n7.5000000000000000e-1,5.0000000000000000e-1\n"
        );
    }

    proptest! {
        #[test]
        fn convolution_is_linear(
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            seed in 0u64..1000,
        ) {
            let spec = GridSpec::new(-2.0, 2.0, 64).unwrap();
            let f = |s: u64, j: usize| (((s + 1) * 2654435761 + j as u64 * 40503) % 1000) as f64 / 1000.0;
            let u = GridField::from_values(spec, (0..64).map(|j| f(seed, j)).collect());
            let v = GridField::from_values(spec, (0..64).map(|j| f(seed + 17, j)).collect());
            let w = GridField::from_values(spec, u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect());
            let k = make_smoothed_kernel(0.25, 9).unwrap().into_kernel();
            let pts: Vec<f64> = (0..20).map(|i| -1.0 + 0.1 * i as f64).collect();
            let cu = convolve_grid(&u, &k, &pts).unwrap();
            let cv = convolve_grid(&v, &k, &pts).unwrap();
            let cw = convolve_grid(&w, &k, &pts).unwrap();
            for i in 0..pts.len() {
                let expect = a * cu.values[i] + b * cv.values[i];
                prop_assert!((cw.values[i] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
            }
        }

        #[test]
        fn convolution_maximum_principle(seed in 0u64..1000, alpha in 0.0f64..=1.0) {
            let spec = GridSpec::new(-2.0, 2.0, 128).unwrap();
            let bound = 3.0;
            let u = GridField::from_values(
                spec,
                (0..128).map(|j| bound * ((((seed + 3) * 7919 + j as u64 * 104729) % 997) as f64 / 996.0)).collect(),
            );
            let k = make_smoothed_kernel(alpha, 18).unwrap().into_kernel();
            let pts: Vec<f64> = (0..40).map(|i| -1.9 + 0.095 * i as f64).collect();
            let c = convolve_grid(&u, &k, &pts).unwrap();
            for v in c.values {
                prop_assert!(v >= -1e-12 && v <= bound * (1.0 + 1e-12));
            }
        }

        #[test]
        fn translation_equivariance(shift in 1usize..20) {
            let spec = GridSpec::new(-4.0, 4.0, 400).unwrap();
            let h = spec.h();
            let base = |x: f64| if x > -1.0 && x < 0.3 { 1.0 + 0.5 * x } else { 0.0 };
            let u = GridField::from_fn(spec, base);
            let v = GridField::from_fn(spec, |x| base(x - shift as f64 * h));
            let k = make_step_kernel();
            let pts: Vec<f64> = (0..30).map(|i| -2.0 + 0.1 * i as f64).collect();
            let shifted: Vec<f64> = pts.iter().map(|x| x + shift as f64 * h).collect();
            let cu = convolve_grid(&u, &k, &pts).unwrap();
            let cv = convolve_grid(&v, &k, &shifted).unwrap();
            for (a, b) in cu.values.iter().zip(&cv.values) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
