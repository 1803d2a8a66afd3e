//! Velocity laws `V(t, x, ξ)`, the assembled transport field `b = V(t, x, u ∗ η)`
//! and the Lipschitz / divergence bounds that control it.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::ConvolutionResult;
use crate::kernels::{kernel_norms, Kernel, KernelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VelocityError {
    #[error("no convolution value was assembled at x = {0}")]
    MissingPoint(f64),
    #[error("kernel {kernel} has no finite ‖∇η‖_{{L^{p}}}; it only supports the BV bound")]
    RegularityMismatch { kernel: String, p: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Which kernel norm drives the bound: total variation (BV, paired with `‖u‖_∞`)
/// or `‖∇η‖_{L^p}` (Sobolev, paired with `‖u‖_{L^q}`, `1/p + 1/q = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundPath {
    Bv,
    Sobolev { p: f64 },
}

impl BoundPath {
    /// Path matching the norm exponent `q` of the solution.
    pub fn for_solution_exponent(q: f64) -> Self {
        if q.is_infinite() {
            BoundPath::Bv
        } else {
            BoundPath::Sobolev { p: conjugate(q) }
        }
    }
}

/// `q / (q - 1)`, with the conventions `1 ↔ ∞`.
pub fn conjugate(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    }
}

pub type VelocityFn = Arc<dyn Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub enum VelocityKind {
    /// `V = base + ξ · direction`
    Affine { base: Vec<f64>, direction: Vec<f64> },
    /// arbitrary Lipschitz law, derivatives by central differences
    Custom { name: String, f: VelocityFn },
}

impl fmt::Debug for VelocityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VelocityKind::Affine { base, direction } => f
                .debug_struct("Affine")
                .field("base", base)
                .field("direction", direction)
                .finish(),
            VelocityKind::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

/// A Lipschitz velocity law `V : R_+ × R^d × R → R^d`.
#[derive(Debug, Clone)]
pub struct VelocityModel {
    dim: usize,
    lipschitz: f64,
    kind: VelocityKind,
}

impl VelocityModel {
    pub fn affine(base: Vec<f64>, direction: Vec<f64>) -> Self {
        assert_eq!(base.len(), direction.len());
        let lipschitz = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        Self {
            dim: base.len(),
            lipschitz,
            kind: VelocityKind::Affine { base, direction },
        }
    }

    pub fn custom(name: impl Into<String>, dim: usize, lipschitz: f64, f: VelocityFn) -> Self {
        Self {
            dim,
            lipschitz,
            kind: VelocityKind::Custom { name: name.into(), f },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn kind(&self) -> &VelocityKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            VelocityKind::Affine { base, direction } => format!("affine(base={base:?},direction={direction:?})"),
            VelocityKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, t: f64, x: &[f64], xi: f64, out: &mut [f64]) {
        match &self.kind {
            VelocityKind::Affine { base, direction } => {
                for ((o, b), d) in out.iter_mut().zip(base).zip(direction) {
                    *o = b + xi * d;
                }
            }
            VelocityKind::Custom { f, .. } => f(t, x, xi, out),
        }
    }

    /// `V(t, x, ξ)` for `d = 1`.
    pub fn eval1(&self, t: f64, x: f64, xi: f64) -> f64 {
        match &self.kind {
            VelocityKind::Affine { base, direction } => base[0] + xi * direction[0],
            VelocityKind::Custom { f, .. } => {
                let mut out = [0.0];
                f(t, &[x], xi, &mut out);
                out[0]
            }
        }
    }

    /// `(Σ_i ∂_{x_i} V^i, ∂_ξ V)` at a point; `dxi` has length `d`.
    pub fn partials(&self, t: f64, x: &[f64], xi: f64, dxi: &mut [f64]) -> f64 {
        match &self.kind {
            VelocityKind::Affine { direction, .. } => {
                dxi.copy_from_slice(direction);
                0.0
            }
            VelocityKind::Custom { f, .. } => {
                let d = self.dim;
                let eps = 1e-6;
                let mut plus = vec![0.0; d];
                let mut minus = vec![0.0; d];
                f(t, x, xi + eps, &mut plus);
                f(t, x, xi - eps, &mut minus);
                for i in 0..d {
                    dxi[i] = (plus[i] - minus[i]) / (2.0 * eps);
                }
                let mut y = x.to_vec();
                let mut div = 0.0;
                for i in 0..d {
                    y[i] = x[i] + eps;
                    f(t, &y, xi, &mut plus);
                    y[i] = x[i] - eps;
                    f(t, &y, xi, &mut minus);
                    y[i] = x[i];
                    div += (plus[i] - minus[i]) / (2.0 * eps);
                }
                div
            }
        }
    }

    /// Closed-form `(sup Σ_i |∂_{x_i} V^i|, sup |∇_ξ V|_∞)` when available.
    fn closed_form_partials(&self) -> Option<(f64, f64)> {
        match &self.kind {
            VelocityKind::Affine { direction, .. } => {
                Some((0.0, direction.iter().fold(0.0, |m, d| m.max(d.abs()))))
            }
            VelocityKind::Custom { .. } => None,
        }
    }
}

/// `V(t, x, ξ) = ξ` in one dimension, `L = 1`.
pub fn make_identity_velocity() -> VelocityModel {
    VelocityModel::affine(vec![0.0], vec![1.0])
}

/// Pedestrian form `V(t, x, ξ) = V_d + ξ` with a constant desired velocity.
pub fn make_affine_desired_velocity(desired: f64) -> VelocityModel {
    VelocityModel::affine(vec![desired], vec![1.0])
}

/// `V ≡ c`, independent of the nonlocal term.
pub fn make_constant_velocity(c: f64) -> VelocityModel {
    VelocityModel::affine(vec![c], vec![0.0])
}

/// `b(t, ·)` sampled at the convolution points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportField {
    pub t: f64,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl TransportField {
    /// `b(t, x)`; `x` must be one of the assembled points.
    pub fn at(&self, x: f64) -> Result<f64, VelocityError> {
        self.points
            .iter()
            .position(|&p| p == x)
            .map(|i| self.values[i])
            .ok_or(VelocityError::MissingPoint(x))
    }

    /// Largest `|b(x_{i+1}) - b(x_i)| / |x_{i+1} - x_i|` over adjacent points.
    pub fn max_slope(&self) -> f64 {
        self.points
            .windows(2)
            .zip(self.values.windows(2))
            .filter(|(p, _)| p[1] != p[0])
            .map(|(p, v)| ((v[1] - v[0]) / (p[1] - p[0])).abs())
            .fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `b(t, x) = V(t, x, conv(x))` at each convolution point (`d = 1`).
pub fn assemble_field(v: &VelocityModel, conv: &ConvolutionResult, t: f64) -> TransportField {
    let values = conv
        .points
        .iter()
        .zip(&conv.values)
        .map(|(&x, &xi)| v.eval1(t, x, xi))
        .collect();
    TransportField {
        t,
        points: conv.points.clone(),
        values,
    }
}

/// Kernel norm used by the bounds: `|Dη|(R^d)` on the BV path, `‖∇η‖_{L^p}` on the Sobolev path.
pub fn kernel_bound_norm(k: &Kernel, path: BoundPath) -> Result<f64, VelocityError> {
    match path {
        BoundPath::Bv => Ok(kernel_norms(k, 1.0)?.total_variation),
        BoundPath::Sobolev { p } => kernel_norms(k, p)?.gradient_lp.ok_or(VelocityError::RegularityMismatch {
            kernel: k.label().to_string(),
            p,
        }),
    }
}

/// `L + L · (|Dη| or ‖∇η‖_{L^p}) · ‖u‖`.
pub fn lipschitz_bound(v: &VelocityModel, k: &Kernel, u_norm: f64, path: BoundPath) -> Result<f64, VelocityError> {
    let l = v.lipschitz();
    Ok(l + l * kernel_bound_norm(k, path)? * u_norm)
}

/// Constants `(K1, K2)` with `‖div b‖_∞ ≤ K1 + K2 ‖u‖`.
///
/// With closed-form partials: `K1 = sup Σ|∂_{x_i} V^i|`, `K2 = d·N·sup|∇_ξ V|·norm`;
/// otherwise `K1 = d·L`, `K2 = d·N·L·norm`.
pub fn divergence_constants(v: &VelocityModel, k: &Kernel, path: BoundPath) -> Result<(f64, f64), VelocityError> {
    let d = v.dim() as f64;
    let n = k.codim() as f64;
    let norm = kernel_bound_norm(k, path)?;
    Ok(match v.closed_form_partials() {
        Some((dx, dxi)) => (dx, d * n * dxi * norm),
        None => (d * v.lipschitz(), d * n * v.lipschitz() * norm),
    })
}

/// `K1 + K2 · ‖u‖`.
pub fn divergence_bound(constants: (f64, f64), u_norm: f64) -> f64 {
    constants.0 + constants.1 * u_norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{convolve_grid, GridField, GridSpec};
    use crate::kernels::{make_smoothed_kernel, make_step_kernel};
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_velocity() {
        let v = make_identity_velocity();
        assert_eq!(v.eval1(0.3, 7.0, 0.4), 0.4);
        assert_eq!(v.eval1(0.3, 7.0, 0.0), 0.0);
        assert_eq!(v.lipschitz(), 1.0);
        let mut dxi = [0.0];
        assert_eq!(v.partials(0.0, &[1.0], 0.5, &mut dxi), 0.0);
        assert_eq!(dxi, [1.0]);
    }

    #[test]
    fn identity_lipschitz_spot_check() {
        // deterministic pseudo-random pairs
        let v = make_identity_velocity();
        let mut s: u64 = 12345;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 * 10.0 - 5.0
        };
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let (t1, x1, z1, t2, x2, z2) = (next(), next(), next(), next(), next(), next());
            let num = (v.eval1(t1, x1, z1) - v.eval1(t2, x2, z2)).abs();
            let den = (t1 - t2).abs() + (x1 - x2).abs() + (z1 - z2).abs();
            worst = worst.max(num / den);
        }
        assert!(worst <= 1.0);
    }

    #[test]
    fn assemble_identity_on_constant_conv() {
        let conv = ConvolutionResult {
            points: vec![0.0, 0.5, 1.0],
            values: vec![1.0, 1.0, 1.0],
        };
        let b = assemble_field(&make_identity_velocity(), &conv, 0.0);
        assert_eq!(b.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(b.at(0.5).unwrap(), 1.0);
        assert!(matches!(b.at(0.25), Err(VelocityError::MissingPoint(_))));
    }

    #[test]
    fn assemble_on_blowup_datum() {
        let spec = GridSpec::new(-1.0, 1.0, 400).unwrap();
        let u = GridField::from_fn(spec, |x| if x > 0.0 && x < 0.5 { 2.0 } else { 0.0 });
        let conv = convolve_grid(&u, &make_step_kernel(), &[0.0]).unwrap();
        let b = assemble_field(&make_identity_velocity(), &conv, 0.0);
        assert_abs_diff_eq!(b.at(0.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pedestrian_form() {
        let v = make_affine_desired_velocity(0.5);
        let conv = ConvolutionResult {
            points: vec![0.0],
            values: vec![0.25],
        };
        assert_eq!(assemble_field(&v, &conv, 0.0).values[0], 0.75);
    }

    #[test]
    fn lipschitz_bounds() {
        let v = make_identity_velocity();
        let step = make_step_kernel();
        assert_eq!(lipschitz_bound(&v, &step, 2.0, BoundPath::Bv).unwrap(), 5.0);
        assert_eq!(lipschitz_bound(&v, &step, 0.0, BoundPath::Bv).unwrap(), 1.0);
        let smooth = make_smoothed_kernel(0.5, 18).unwrap();
        assert_abs_diff_eq!(
            lipschitz_bound(&v, smooth.kernel(), 10.0, BoundPath::Bv).unwrap(),
            21.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            lipschitz_bound(&v, &step, 1.0, BoundPath::Sobolev { p: 2.0 }),
            Err(VelocityError::RegularityMismatch { .. })
        ));
    }

    #[test]
    fn divergence_constants_conventions() {
        let step = make_step_kernel();
        let c = divergence_constants(&make_identity_velocity(), &step, BoundPath::Bv).unwrap();
        assert_eq!(c, (0.0, 2.0));
        assert_eq!(divergence_bound(c, 2.0), 4.0);
        assert_eq!(divergence_bound(c, 0.0), 0.0);

        let generic = VelocityModel::custom("tanh", 1, 1.0, Arc::new(|_t, _x, xi, out| out[0] = xi.tanh()));
        let c = divergence_constants(&generic, &step, BoundPath::Bv).unwrap();
        assert_eq!(c, (1.0, 2.0));
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(conjugate(2.0), 2.0);
        assert_eq!(conjugate(1.0), f64::INFINITY);
        assert_eq!(conjugate(f64::INFINITY), 1.0);
        assert_eq!(BoundPath::for_solution_exponent(f64::INFINITY), BoundPath::Bv);
    }
}
