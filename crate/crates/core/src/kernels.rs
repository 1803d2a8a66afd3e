//! Convolution kernels.
//!
//! Three profile families are supported:
//!
//! * [`PiecewiseLinear`] profiles in one dimension, possibly with jumps. The
//!   step kernel `1_{]-1,0[}` and the smoothed family `η^α_n` live here, and
//!   all their norms are integrated exactly segment by segment.
//! * [`ClosedForm`] one-dimensional profiles given by a function, its
//!   derivative and (optionally) an antiderivative.
//! * [`Radial`] profiles `η(x) = φ(|x|)` in any dimension.
//!
//! Kernels are scalar valued (`N = 1`). At a jump the kernel evaluates to its
//! right limit; see [`JumpConvention`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{self, QuadError};

/// Relative tolerance for quadrature of non-polynomial kernels.
pub const QUAD_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("n = {n} is too small: breakpoints of the smoothed kernel are not ordered (need r - 2/n > 0, r = {r})")]
    NTooSmall { n: u32, r: f64 },
    #[error("invalid segment list: {0}")]
    InvalidSegments(String),
    #[error("kernel has a non-integrable tail: {0}")]
    NonIntegrableTail(String),
    #[error("kernel has jumps, so its gradient is not in L^p; use the BV path")]
    NotSobolev,
    #[error("exponent p must be in [1, inf], got {0}")]
    BadExponent(f64),
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("radii must be positive and increasing")]
    BadRadii,
}

/// Regularity class of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regularity {
    Smooth,
    Sobolev { p: f64 },
    Bv,
}

/// Value assigned at a discontinuity point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpConvention {
    /// `η(x_jump) = lim_{y↓x_jump} η(y)`, so `1_{]-1,0[}(-1) = 1` and `1_{]-1,0[}(0) = 0`.
    RightLimit,
}

/// A linear piece on the half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    /// value at `start`
    pub left: f64,
    /// limit of the value as `x ↑ end`
    pub right: f64,
}

impl Segment {
    pub fn new(start: f64, end: f64, left: f64, right: f64) -> Self {
        Self { start, end, left, right }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn slope(&self) -> f64 {
        (self.right - self.left) / (self.end - self.start)
    }

    /// Coefficients `(a, b)` with `η(y) = a + b·y` on this segment.
    pub fn affine(&self) -> (f64, f64) {
        let b = self.slope();
        (self.left - b * self.start, b)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.start) / (self.end - self.start);
        self.left + (self.right - self.left) * s
    }

    /// `∫ |η|^p` over the segment, exact for a linear function.
    fn abs_pow_integral(&self, p: f64) -> f64 {
        let (v0, v1, len) = (self.left, self.right, self.len());
        if v0 * v1 < 0.0 {
            // split at the root
            let root = len * v0.abs() / (v0.abs() + v1.abs());
            let a = Segment::new(0.0, root, v0, 0.0);
            let b = Segment::new(root, len, 0.0, v1);
            return a.abs_pow_integral(p) + b.abs_pow_integral(p);
        }
        let (a0, a1) = (v0.abs(), v1.abs());
        if (a1 - a0).abs() <= 1e-15 * a0.max(a1) {
            return len * a0.powf(p);
        }
        len * (a1.powf(p + 1.0) - a0.powf(p + 1.0)) / ((p + 1.0) * (a1 - a0))
    }
}

/// A compactly supported, one-dimensional piecewise-linear profile (zero outside its segments).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    segments: Vec<Segment>,
}

impl PiecewiseLinear {
    pub fn new(segments: Vec<Segment>) -> Result<Self, KernelError> {
        for s in &segments {
            if !(s.start < s.end) || !s.left.is_finite() || !s.right.is_finite() {
                return Err(KernelError::InvalidSegments(format!("{s:?}")));
            }
        }
        for w in segments.windows(2) {
            if w[1].start < w[0].end {
                return Err(KernelError::InvalidSegments(
                    "segments must be sorted and non-overlapping".into(),
                ));
            }
        }
        Ok(Self { segments })
    }

    pub fn zero() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Support interval `[lo, hi]`, or `None` for the zero profile.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.segments.first()?.start, self.segments.last()?.end))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.start <= x);
        if idx == 0 {
            return 0.0;
        }
        let s = &self.segments[idx - 1];
        if x < s.end {
            s.eval(x)
        } else {
            0.0
        }
    }

    /// Jumps as `(position, right value - left value)`, including jumps to and from zero.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut prev_end = f64::NEG_INFINITY;
        let mut prev_val = 0.0;
        for s in &self.segments {
            if s.start == prev_end {
                let j = s.left - prev_val;
                if j != 0.0 {
                    out.push((s.start, j));
                }
            } else {
                if prev_val != 0.0 {
                    out.push((prev_end, -prev_val));
                }
                if s.left != 0.0 {
                    out.push((s.start, s.left));
                }
            }
            prev_end = s.end;
            prev_val = s.right;
        }
        if prev_val != 0.0 {
            out.push((prev_end, -prev_val));
        }
        out
    }

    pub fn integral(&self) -> f64 {
        self.segments.iter().map(|s| 0.5 * (s.left + s.right) * s.len()).sum()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self
                .segments
                .iter()
                .map(|s| s.left.abs().max(s.right.abs()))
                .fold(0.0, f64::max);
        }
        let sum: f64 = self.segments.iter().map(|s| s.abs_pow_integral(p)).sum();
        sum.powf(1.0 / p)
    }

    /// Total variation: absolutely continuous part plus jump heights.
    pub fn total_variation(&self) -> f64 {
        let ac: f64 = self.segments.iter().map(|s| (s.right - s.left).abs()).sum();
        let jumps: f64 = self.jumps().iter().map(|(_, j)| j.abs()).sum();
        ac + jumps
    }

    /// `‖η'‖_{L^p}` of the a.c. derivative, `None` if the profile has jumps.
    pub fn gradient_lp(&self, p: f64) -> Option<f64> {
        if !self.jumps().is_empty() {
            return None;
        }
        if p.is_infinite() {
            return Some(self.segments.iter().map(|s| s.slope().abs()).fold(0.0, f64::max));
        }
        let sum: f64 = self.segments.iter().map(|s| s.slope().abs().powf(p) * s.len()).sum();
        Some(sum.powf(1.0 / p))
    }

    /// `∫ |self - other|`, exact (both profiles are linear between the merged breakpoints).
    pub fn l1_distance(&self, other: &PiecewiseLinear) -> f64 {
        let mut pts: Vec<f64> = self
            .segments
            .iter()
            .chain(other.segments.iter())
            .flat_map(|s| [s.start, s.end])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut total = 0.0;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            // one-sided limits inside (a, b)
            let lim = |pl: &PiecewiseLinear, x: f64, from_right: bool| -> f64 {
                let eps = (b - a) * 1e-9;
                let probe = if from_right { x + eps } else { x - eps };
                let idx = pl.segments.partition_point(|s| s.start <= probe);
                if idx == 0 {
                    return 0.0;
                }
                let s = &pl.segments[idx - 1];
                if probe < s.end {
                    s.eval(x)
                } else {
                    0.0
                }
            };
            let d0 = lim(self, a, true) - lim(other, a, true);
            let d1 = lim(self, b, false) - lim(other, b, false);
            total += Segment::new(a, b, d0, d1).abs_pow_integral(1.0);
        }
        total
    }

    /// Largest slope magnitude, `None` if the profile has jumps.
    pub fn lipschitz(&self) -> Option<f64> {
        self.gradient_lp(f64::INFINITY)
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A continuous closed-form profile in one dimension.
#[derive(Clone)]
pub struct ClosedForm {
    pub name: String,
    pub f: ScalarFn,
    pub df: ScalarFn,
    pub antiderivative: Option<ScalarFn>,
    /// `None` means unbounded support.
    pub support: Option<(f64, f64)>,
    /// points where `f` is not smooth (quadrature splits there)
    pub kinks: Vec<f64>,
    pub lipschitz: Option<f64>,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForm")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish()
    }
}

/// `η(x) = φ(|x|)` in `dim` dimensions, supported in `|x| ≤ radius` when the radius is finite.
#[derive(Clone)]
pub struct Radial {
    pub name: String,
    pub phi: ScalarFn,
    pub dphi: ScalarFn,
    pub radius: Option<f64>,
}

impl fmt::Debug for Radial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Radial")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Profile {
    PiecewiseLinear(PiecewiseLinear),
    ClosedForm(ClosedForm),
    Radial(Radial),
}

/// A scalar convolution kernel on `R^d` with its metadata.
#[derive(Debug, Clone)]
pub struct Kernel {
    label: String,
    dim: usize,
    profile: Profile,
    regularity: Regularity,
    jump_convention: JumpConvention,
}

/// Norms of a kernel at a given exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelNorms {
    pub p: f64,
    pub l1: f64,
    pub lp: f64,
    /// `|Dη|(R^d)`
    pub total_variation: f64,
    /// `‖∇η‖_{L^p}`, absent when the kernel has jumps
    pub gradient_lp: Option<f64>,
}

impl Kernel {
    pub fn piecewise_linear(label: impl Into<String>, pl: PiecewiseLinear) -> Self {
        let regularity = if pl.jumps().is_empty() {
            Regularity::Sobolev { p: f64::INFINITY }
        } else {
            Regularity::Bv
        };
        Self {
            label: label.into(),
            dim: 1,
            profile: Profile::PiecewiseLinear(pl),
            regularity,
            jump_convention: JumpConvention::RightLimit,
        }
    }

    pub fn closed_form(cf: ClosedForm) -> Self {
        Self {
            label: cf.name.clone(),
            dim: 1,
            profile: Profile::ClosedForm(cf),
            regularity: Regularity::Smooth,
            jump_convention: JumpConvention::RightLimit,
        }
    }

    pub fn radial(dim: usize, r: Radial) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let regularity = match r.radius {
            Some(rad) if (r.phi)(rad) != 0.0 => Regularity::Bv,
            _ => Regularity::Smooth,
        };
        Self {
            label: format!("{}-{}d", r.name, dim),
            dim,
            profile: Profile::Radial(r),
            regularity,
            jump_convention: JumpConvention::RightLimit,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Codomain dimension `N`; kernels here are scalar.
    pub fn codim(&self) -> usize {
        1
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn jump_convention(&self) -> JumpConvention {
        self.jump_convention
    }

    pub fn as_piecewise_linear(&self) -> Option<&PiecewiseLinear> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => Some(pl),
            _ => None,
        }
    }

    /// Radius of the smallest centered ball containing the support (`∞` if unbounded).
    pub fn support_radius(&self) -> f64 {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => pl.support().map_or(0.0, |(a, b)| a.abs().max(b.abs())),
            Profile::ClosedForm(cf) => cf.support.map_or(f64::INFINITY, |(a, b)| a.abs().max(b.abs())),
            Profile::Radial(r) => r.radius.unwrap_or(f64::INFINITY),
        }
    }

    /// One-dimensional support interval, `None` if unbounded. Only meaningful for `d = 1`.
    pub fn support_interval(&self) -> Option<(f64, f64)> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => Some(pl.support().unwrap_or((0.0, 0.0))),
            Profile::ClosedForm(cf) => cf.support,
            Profile::Radial(r) => r.radius.map(|rad| (-rad, rad)),
        }
    }

    /// Evaluates `η(x)` for `d = 1`.
    pub fn eval1(&self, x: f64) -> f64 {
        debug_assert_eq!(self.dim, 1);
        match &self.profile {
            Profile::PiecewiseLinear(pl) => pl.eval(x),
            Profile::ClosedForm(cf) => match cf.support {
                Some((a, b)) if x < a || x >= b => 0.0,
                _ => (cf.f)(x),
            },
            Profile::Radial(r) => radial_eval(r, x.abs()),
        }
    }

    /// Derivative of the absolutely continuous part for `d = 1`.
    pub fn deriv1(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => {
                let idx = pl.segments.partition_point(|s| s.start <= x);
                if idx == 0 {
                    return 0.0;
                }
                let s = &pl.segments[idx - 1];
                if x < s.end {
                    s.slope()
                } else {
                    0.0
                }
            }
            Profile::ClosedForm(cf) => match cf.support {
                Some((a, b)) if x < a || x >= b => 0.0,
                _ => (cf.df)(x),
            },
            Profile::Radial(r) => {
                let ax = x.abs();
                if r.radius.is_some_and(|rad| ax >= rad) {
                    0.0
                } else {
                    x.signum() * (r.dphi)(ax)
                }
            }
        }
    }

    /// Evaluates `η(x)` for any dimension.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.profile {
            Profile::Radial(r) => radial_eval(r, norm(x)),
            _ => self.eval1(x[0]),
        }
    }

    /// Gradient of the absolutely continuous part, written into `out`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        match &self.profile {
            Profile::Radial(r) => {
                let rr = norm(x);
                let inside = !r.radius.is_some_and(|rad| rr >= rad);
                if rr == 0.0 || !inside {
                    out.iter_mut().for_each(|o| *o = 0.0);
                    return;
                }
                let g = (r.dphi)(rr) / rr;
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = g * xi;
                }
            }
            _ => out[0] = self.deriv1(x[0]),
        }
    }

    /// Jump points and heights of a 1D kernel (empty for continuous kernels).
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => pl.jumps(),
            Profile::Radial(r) if self.dim == 1 => match r.radius {
                Some(rad) => {
                    let v = (r.phi)(rad);
                    if v != 0.0 {
                        vec![(-rad, v), (rad, -v)]
                    } else {
                        vec![]
                    }
                }
                None => vec![],
            },
            _ => vec![],
        }
    }

    /// Lipschitz constant of `η` (`None` if it jumps or is unknown).
    pub fn lipschitz(&self) -> Option<f64> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => pl.lipschitz(),
            Profile::ClosedForm(cf) => cf.lipschitz,
            Profile::Radial(_) => None,
        }
    }

    /// `∫ η`.
    pub fn integral(&self) -> Result<f64, KernelError> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => Ok(pl.integral()),
            _ => self.integrate_abs_pow(1.0, false),
        }
    }

    fn integrate_abs_pow(&self, p: f64, absolute: bool) -> Result<f64, KernelError> {
        let g = move |v: f64| if absolute { v.abs().powf(p) } else { v };
        match &self.profile {
            Profile::PiecewiseLinear(pl) => Ok(if absolute {
                pl.lp_norm(p).powf(p)
            } else {
                pl.integral()
            }),
            Profile::ClosedForm(cf) => {
                let f = |x: f64| g((cf.f)(x));
                integrate_line(&f, cf.support, &cf.kinks)
            }
            Profile::Radial(r) => {
                let area = sphere_area(self.dim);
                let d = self.dim as i32;
                let f = |s: f64| g((r.phi)(s)) * s.powi(d - 1);
                let half = match r.radius {
                    Some(rad) => quad::simpson(&f, 0.0, rad, QUAD_REL_TOL)?,
                    None => radial_half_line(&f)?,
                };
                Ok(area * half)
            }
        }
    }

    fn lp_norm(&self, p: f64) -> Result<f64, KernelError> {
        if p.is_infinite() {
            return Ok(match &self.profile {
                Profile::PiecewiseLinear(pl) => pl.lp_norm(p),
                Profile::ClosedForm(cf) => sample_sup(|x| (cf.f)(x).abs(), cf.support, &cf.kinks),
                Profile::Radial(r) => sample_sup(|x| (r.phi)(x.abs()).abs(), r.radius.map(|a| (0.0, a)), &[0.0]),
            });
        }
        Ok(self.integrate_abs_pow(p, true)?.powf(1.0 / p))
    }

    fn gradient_norm(&self, p: f64) -> Result<(f64, Option<f64>), KernelError> {
        match &self.profile {
            Profile::PiecewiseLinear(pl) => Ok((pl.total_variation(), pl.gradient_lp(p))),
            Profile::ClosedForm(cf) => {
                let abs_df = |x: f64| (cf.df)(x).abs();
                let tv = integrate_line(&abs_df, cf.support, &cf.kinks)?;
                let glp = if p.is_infinite() {
                    sample_sup(abs_df, cf.support, &cf.kinks)
                } else {
                    let f = |x: f64| (cf.df)(x).abs().powf(p);
                    integrate_line(&f, cf.support, &cf.kinks)?.powf(1.0 / p)
                };
                Ok((tv, Some(glp)))
            }
            Profile::Radial(r) => {
                let area = sphere_area(self.dim);
                let d = self.dim as i32;
                let edge_jump = r.radius.map_or(0.0, |rad| (r.phi)(rad).abs() * area * rad.powi(d - 1));
                let fa = |s: f64| (r.dphi)(s).abs() * s.powi(d - 1);
                let ac = match r.radius {
                    Some(rad) => quad::simpson(&fa, 0.0, rad, QUAD_REL_TOL)?,
                    None => radial_half_line(&fa)?,
                } * area;
                let glp = if edge_jump > 0.0 {
                    None
                } else if p.is_infinite() {
                    Some(sample_sup(|x| (r.dphi)(x.abs()).abs(), r.radius.map(|a| (0.0, a)), &[0.0]))
                } else {
                    let fp = |s: f64| (r.dphi)(s).abs().powf(p) * s.powi(d - 1);
                    let v = match r.radius {
                        Some(rad) => quad::simpson(&fp, 0.0, rad, QUAD_REL_TOL)?,
                        None => radial_half_line(&fp)?,
                    };
                    Some((area * v).powf(1.0 / p))
                };
                Ok((ac + edge_jump, glp))
            }
        }
    }

    /// `∫_{|x| > R} |η|^p`, zero beyond a finite support.
    pub fn tail_integral(&self, radius: f64, p: f64) -> Result<f64, KernelError> {
        if radius >= self.support_radius() {
            return Ok(0.0);
        }
        match &self.profile {
            Profile::PiecewiseLinear(pl) => {
                let clipped: Vec<Segment> = pl
                    .segments
                    .iter()
                    .flat_map(|s| clip_outside(s, radius))
                    .collect();
                Ok(clipped.iter().map(|s| s.abs_pow_integral(p)).sum())
            }
            Profile::ClosedForm(cf) => {
                let f = |x: f64| (cf.f)(x).abs().powf(p);
                let (lo, hi) = cf.support.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
                let mut total = 0.0;
                if hi > radius {
                    total += if hi.is_finite() {
                        quad::simpson_split(&f, radius, hi, &cf.kinks, QUAD_REL_TOL)?
                    } else {
                        quad::tail_integral(&f, radius, QUAD_REL_TOL)
                            .map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?
                    };
                }
                if lo < -radius {
                    let g = |x: f64| f(-x);
                    total += if lo.is_finite() {
                        quad::simpson(&g, radius, -lo, QUAD_REL_TOL)?
                    } else {
                        quad::tail_integral(&g, radius, QUAD_REL_TOL)
                            .map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?
                    };
                }
                Ok(total)
            }
            Profile::Radial(r) => {
                let area = sphere_area(self.dim);
                let d = self.dim as i32;
                let f = |s: f64| (r.phi)(s).abs().powf(p) * s.powi(d - 1);
                let v = match r.radius {
                    Some(rad) => quad::simpson(&f, radius, rad, QUAD_REL_TOL)?,
                    None => quad::tail_integral(&f, radius, QUAD_REL_TOL)
                        .map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?,
                };
                Ok(area * v)
            }
        }
    }
}

fn clip_outside(s: &Segment, radius: f64) -> Vec<Segment> {
    let mut out = Vec::new();
    if s.start < -radius {
        let end = s.end.min(-radius);
        out.push(Segment::new(s.start, end, s.left, s.eval(end)));
    }
    if s.end > radius {
        let start = s.start.max(radius);
        out.push(Segment::new(start, s.end, s.eval(start), s.right));
    }
    out
}

fn radial_eval(r: &Radial, rr: f64) -> f64 {
    match r.radius {
        Some(rad) if rr >= rad => 0.0,
        _ => (r.phi)(rr),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Surface area of the unit sphere in `R^d` (2 for d = 1).
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        d => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

fn integrate_line<F: Fn(f64) -> f64>(f: &F, support: Option<(f64, f64)>, kinks: &[f64]) -> Result<f64, KernelError> {
    match support {
        Some((a, b)) => Ok(quad::simpson_split(f, a, b, kinks, QUAD_REL_TOL)?),
        None => {
            // core on [-c, c] covering the kinks, tails outside
            let c = kinks.iter().fold(1.0f64, |m, k| m.max(k.abs() + 1.0));
            let core = quad::simpson_split(f, -c, c, kinks, QUAD_REL_TOL)?;
            let right = quad::tail_integral(f, c, QUAD_REL_TOL)
                .map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?;
            let g = |x: f64| f(-x);
            let left = quad::tail_integral(&g, c, QUAD_REL_TOL)
                .map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?;
            Ok(core + left + right)
        }
    }
}

fn radial_half_line<F: Fn(f64) -> f64>(f: &F) -> Result<f64, KernelError> {
    let core = quad::simpson(f, 0.0, 1.0, QUAD_REL_TOL)?;
    let tail = quad::tail_integral(f, 1.0, QUAD_REL_TOL).map_err(|e| KernelError::NonIntegrableTail(e.to_string()))?;
    Ok(core + tail)
}

fn sample_sup<F: Fn(f64) -> f64>(f: F, support: Option<(f64, f64)>, kinks: &[f64]) -> f64 {
    let (a, b) = support.unwrap_or((-50.0, 50.0));
    let n = 20_000;
    let mut m = kinks.iter().map(|&k| f(k)).fold(0.0f64, f64::max);
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let x = if i == n { b - (b - a) * 1e-12 } else { x };
        m = m.max(f(x));
    }
    m
}

/// Computes the norms of `k` at exponent `p ∈ [1, ∞]`.
pub fn kernel_norms(k: &Kernel, p: f64) -> Result<KernelNorms, KernelError> {
    if !(p >= 1.0) {
        return Err(KernelError::BadExponent(p));
    }
    let l1 = k.lp_norm(1.0)?;
    let lp = k.lp_norm(p)?;
    let (total_variation, gradient_lp) = k.gradient_norm(p)?;
    Ok(KernelNorms {
        p,
        l1,
        lp,
        total_variation,
        gradient_lp,
    })
}

/// The BV kernel `1_{]-1,0[}`.
pub fn make_step_kernel() -> Kernel {
    let pl = PiecewiseLinear::new(vec![Segment::new(-1.0, 0.0, 1.0, 1.0)]).expect("valid step");
    Kernel::piecewise_linear("step", pl)
}

/// The zero kernel.
pub fn make_zero_kernel() -> Kernel {
    Kernel::piecewise_linear("zero", PiecewiseLinear::zero())
}

/// The smoothed step kernel `η^α_n`: a seven-piece piecewise-linear profile that
/// ramps up on `[-r-1/n, -r]`, equals 1 until `-2/n`, drops to the plateau value
/// `α` on `[-1/n, 1/n]` and returns to zero at `2/n`.
#[derive(Debug, Clone)]
pub struct SmoothedStepKernel {
    pub alpha: f64,
    pub n: u32,
    /// offset fixing unit mass
    pub r: f64,
    kernel: Kernel,
}

impl SmoothedStepKernel {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn into_kernel(self) -> Kernel {
        self.kernel
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.kernel.eval1(x)
    }
}

/// Mass-normalizing offset: `r = 1 + (1 - 3α)/n`.
pub fn smoothed_offset(alpha: f64, n: u32) -> f64 {
    1.0 + (1.0 - 3.0 * alpha) / n as f64
}

pub fn make_smoothed_kernel(alpha: f64, n: u32) -> Result<SmoothedStepKernel, KernelError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(KernelError::AlphaOutOfRange(alpha));
    }
    let r = smoothed_offset(alpha, n);
    let nf = n as f64;
    if n < 3 || r - 2.0 / nf <= 0.0 {
        return Err(KernelError::NTooSmall { n, r });
    }
    let inv = 1.0 / nf;
    let segments = vec![
        Segment::new(-r - inv, -r, 0.0, 1.0),
        Segment::new(-r, -2.0 * inv, 1.0, 1.0),
        Segment::new(-2.0 * inv, -inv, 1.0, alpha),
        Segment::new(-inv, inv, alpha, alpha),
        Segment::new(inv, 2.0 * inv, alpha, 0.0),
    ];
    let pl = PiecewiseLinear::new(segments)?;
    let kernel = Kernel::piecewise_linear(format!("smoothed_step(alpha={alpha},n={n})"), pl);
    Ok(SmoothedStepKernel { alpha, n, r, kernel })
}

/// Named closed-form kernels available from scenario configs.
pub fn make_closed_form(shape: &str, scale: f64) -> Option<Kernel> {
    let s = scale;
    let cf = match shape {
        // triangular hat of unit mass on [-s, s]
        "hat" => {
            let pl = PiecewiseLinear::new(vec![
                Segment::new(-s, 0.0, 0.0, 1.0 / s),
                Segment::new(0.0, s, 1.0 / s, 0.0),
            ])
            .ok()?;
            return Some(Kernel::piecewise_linear(format!("hat(scale={s})"), pl));
        }
        "parabolic" => ClosedForm {
            name: format!("parabolic(scale={s})"),
            f: Arc::new(move |x| 0.75 / s * (1.0 - (x / s).powi(2)).max(0.0)),
            df: Arc::new(move |x| if x.abs() < s { -1.5 * x / (s * s * s) } else { 0.0 }),
            antiderivative: Some(Arc::new(move |x| {
                let y = (x / s).clamp(-1.0, 1.0);
                0.75 * (y - y * y * y / 3.0)
            })),
            support: Some((-s, s)),
            kinks: vec![],
            lipschitz: Some(1.5 / (s * s)),
        },
        "exponential" => ClosedForm {
            name: format!("exponential(scale={s})"),
            f: Arc::new(move |x| (-x.abs() / s).exp() / (2.0 * s)),
            df: Arc::new(move |x| -x.signum() * (-x.abs() / s).exp() / (2.0 * s * s)),
            antiderivative: None,
            support: None,
            kinks: vec![0.0],
            lipschitz: Some(1.0 / (2.0 * s * s)),
        },
        "cauchy" => ClosedForm {
            name: format!("cauchy(scale={s})"),
            f: Arc::new(move |x| 1.0 / (PI * s * (1.0 + (x / s).powi(2)))),
            df: Arc::new(move |x| {
                let y = x / s;
                -2.0 * y / (PI * s * s * (1.0 + y * y).powi(2))
            }),
            antiderivative: None,
            support: None,
            kinks: vec![],
            lipschitz: Some(3.0 * 3f64.sqrt() / (8.0 * PI * s * s)),
        },
        _ => return None,
    };
    Some(Kernel::closed_form(cf))
}

/// Decay verdict for the tail conditions on `R^d ∫_{|x|>R} |η|` (or its `L^p` analogue).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayVerdict {
    /// compact support: the sequence is exactly zero at the largest radius
    Pass,
    /// strictly decreasing samples; a finite sample cannot certify the limit
    InconclusiveDecaying,
    /// samples do not decrease
    NonDecaying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub p: f64,
    pub radii: Vec<f64>,
    /// `R^d · (∫_{|x|>R} |η|^p)^{1/p}`
    pub weighted_tails: Vec<f64>,
    pub verdict: DecayVerdict,
}

pub fn check_decay_condition(k: &Kernel, p: f64, radii: &[f64]) -> Result<DecayReport, KernelError> {
    const TOL: f64 = 1e-14;
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(KernelError::BadRadii);
    }
    let d = k.dim() as i32;
    let mut tails = Vec::with_capacity(radii.len());
    for &r in radii {
        let t = k.tail_integral(r, p)?;
        tails.push(r.powi(d) * t.powf(1.0 / p));
    }
    let last = *tails.last().unwrap_or(&0.0);
    let verdict = if k.support_radius().is_finite() && last <= TOL {
        DecayVerdict::Pass
    } else if tails.windows(2).all(|w| w[1] < w[0]) {
        DecayVerdict::InconclusiveDecaying
    } else {
        DecayVerdict::NonDecaying
    };
    Ok(DecayReport {
        p,
        radii: radii.to_vec(),
        weighted_tails: tails,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn step_kernel_values_and_jump_convention() {
        let k = make_step_kernel();
        assert_eq!(k.eval1(-0.5), 1.0);
        assert_eq!(k.eval1(0.5), 0.0);
        assert_eq!(k.eval1(-1.0), 1.0);
        assert_eq!(k.eval1(0.0), 0.0);
        assert_eq!(k.eval1(-1.0 - 1e-12), 0.0);
        assert_eq!(k.regularity(), Regularity::Bv);
        assert_eq!(k.jump_convention(), JumpConvention::RightLimit);
        assert_eq!(k.jumps(), vec![(-1.0, 1.0), (0.0, -1.0)]);
    }

    #[test]
    fn step_kernel_norms() {
        let n = kernel_norms(&make_step_kernel(), 1.0).unwrap();
        assert_eq!(n.l1, 1.0);
        assert_eq!(n.total_variation, 2.0);
        assert_eq!(n.gradient_lp, None);
    }

    #[test]
    fn step_kernel_tv_matches_sampled_variation() {
        let k = make_step_kernel();
        let m = 200_001;
        let xs: Vec<f64> = (0..m).map(|i| -2.0 + 4.0 * i as f64 / (m - 1) as f64).collect();
        let tv: f64 = xs.windows(2).map(|w| (k.eval1(w[1]) - k.eval1(w[0])).abs()).sum();
        assert_eq!(tv, 2.0);
    }

    #[test]
    fn zero_kernel_norms_vanish() {
        let n = kernel_norms(&make_zero_kernel(), 2.0).unwrap();
        assert_eq!((n.l1, n.lp, n.total_variation), (0.0, 0.0, 0.0));
    }

    #[test]
    fn smoothed_kernel_offsets() {
        assert_abs_diff_eq!(make_smoothed_kernel(1.0 / 3.0, 25).unwrap().r, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(make_smoothed_kernel(0.0, 18).unwrap().r, 19.0 / 18.0, epsilon = 1e-15);
        let k = make_smoothed_kernel(1.0, 18).unwrap();
        assert_abs_diff_eq!(k.r, 8.0 / 9.0, epsilon = 1e-15);
        assert!(k.r >= 0.75);
    }

    #[test]
    fn smoothed_kernel_plateau_is_alpha() {
        for &a in &[0.0, 0.3, 0.5, 1.0] {
            let k = make_smoothed_kernel(a, 18).unwrap();
            assert_eq!(k.eval(0.0), a);
        }
    }

    #[test]
    fn smoothed_kernel_rejects_bad_parameters() {
        assert!(matches!(make_smoothed_kernel(1.5, 18), Err(KernelError::AlphaOutOfRange(_))));
        assert!(matches!(make_smoothed_kernel(-0.1, 18), Err(KernelError::AlphaOutOfRange(_))));
        assert!(matches!(make_smoothed_kernel(0.5, 2), Err(KernelError::NTooSmall { .. })));
        // alpha = 1 needs n > 4 before -r < -2/n
        assert!(matches!(make_smoothed_kernel(1.0, 4), Err(KernelError::NTooSmall { .. })));
        assert!(make_smoothed_kernel(1.0, 5).is_ok());
    }

    #[test]
    fn smoothed_kernel_is_continuous() {
        let k = make_smoothed_kernel(0.4, 18).unwrap();
        assert!(k.kernel().jumps().is_empty());
        assert!((k.kernel().lipschitz().unwrap() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn decay_report_for_step_kernel_passes() {
        let rep = check_decay_condition(&make_step_kernel(), 1.0, &[2.0]).unwrap();
        assert_eq!(rep.weighted_tails, vec![0.0]);
        assert_eq!(rep.verdict, DecayVerdict::Pass);
    }

    #[test]
    fn decay_report_exponential_is_decaying() {
        // exp(-|x|) unnormalized: tail beyond R is 2 e^{-R}, weighted R · 2e^{-R}
        let k = Kernel::closed_form(ClosedForm {
            name: "exp".into(),
            f: Arc::new(|x: f64| (-x.abs()).exp()),
            df: Arc::new(|x: f64| -x.signum() * (-x.abs()).exp()),
            antiderivative: None,
            support: None,
            kinks: vec![0.0],
            lipschitz: Some(1.0),
        });
        let radii = [5.0, 10.0, 20.0];
        let rep = check_decay_condition(&k, 1.0, &radii).unwrap();
        for (r, v) in radii.iter().zip(&rep.weighted_tails) {
            let exact = r * 2.0 * (-r).exp();
            assert!((v - exact).abs() <= 1e-8 * exact, "{v} vs {exact}");
        }
        assert_eq!(rep.verdict, DecayVerdict::InconclusiveDecaying);
    }

    #[test]
    fn decay_report_cauchy_does_not_decay() {
        let k = Kernel::closed_form(ClosedForm {
            name: "cauchy-raw".into(),
            f: Arc::new(|x: f64| 1.0 / (1.0 + x * x)),
            df: Arc::new(|x: f64| -2.0 * x / (1.0 + x * x).powi(2)),
            antiderivative: None,
            support: None,
            kinks: vec![],
            lipschitz: None,
        });
        let radii = [5.0, 10.0, 20.0, 40.0];
        let rep = check_decay_condition(&k, 1.0, &radii).unwrap();
        // R · 2 (π/2 - atan R) → 2
        for (r, v) in radii.iter().zip(&rep.weighted_tails) {
            let exact = r * 2.0 * (std::f64::consts::FRAC_PI_2 - r.atan());
            assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
        }
        assert_eq!(rep.verdict, DecayVerdict::NonDecaying);
    }

    #[test]
    fn non_integrable_tail_is_reported() {
        let k = Kernel::closed_form(ClosedForm {
            name: "harmonic".into(),
            f: Arc::new(|x: f64| 1.0 / (1.0 + x.abs())),
            df: Arc::new(|x: f64| -x.signum() / (1.0 + x.abs()).powi(2)),
            antiderivative: None,
            support: None,
            kinks: vec![0.0],
            lipschitz: None,
        });
        assert!(matches!(kernel_norms(&k, 1.0), Err(KernelError::NonIntegrableTail(_))));
    }

    #[test]
    fn closed_form_kernels_have_unit_mass() {
        for shape in ["hat", "parabolic", "exponential", "cauchy"] {
            let k = make_closed_form(shape, 0.5).unwrap();
            let n = kernel_norms(&k, 2.0).unwrap();
            assert!((n.l1 - 1.0).abs() < 1e-8, "{shape}: {}", n.l1);
        }
    }

    #[test]
    fn radial_kernel_mass_in_two_dimensions() {
        // φ(r) = (1 - r²)_+ has ∫ = 2π ∫_0^1 (1 - r²) r dr = π/2
        let k = Kernel::radial(
            2,
            Radial {
                name: "bump".into(),
                phi: Arc::new(|r: f64| (1.0 - r * r).max(0.0)),
                dphi: Arc::new(|r: f64| -2.0 * r),
                radius: Some(1.0),
            },
        );
        let n = kernel_norms(&k, 1.0).unwrap();
        assert!((n.l1 - PI / 2.0).abs() < 1e-10);
        // |∇η| = 2r, ∫ = 2π ∫ 2r² dr = 4π/3
        assert!((n.total_variation - 4.0 * PI / 3.0).abs() < 1e-10);
        assert_eq!(k.eval(&[0.0, 0.0]), 1.0);
        assert_eq!(k.eval(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn sphere_areas() {
        assert_abs_diff_eq!(sphere_area(3), 4.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(sphere_area(4), 2.0 * PI * PI, epsilon = 1e-13);
    }

    #[test]
    fn pl_lp_norm_with_sign_change() {
        // η = x on [-1, 1): ∫|x|² = 2/3
        let pl = PiecewiseLinear::new(vec![Segment::new(-1.0, 1.0, -1.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(pl.lp_norm(2.0), (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(pl.lp_norm(1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn evaluation_is_pure() {
        let k = make_smoothed_kernel(0.37, 36).unwrap();
        for i in 0..1000 {
            let x = -1.2 + 1.3 * i as f64 / 999.0;
            assert_eq!(k.eval(x).to_bits(), k.eval(x).to_bits());
        }
    }
}
