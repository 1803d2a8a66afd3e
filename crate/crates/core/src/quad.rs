//! Adaptive Simpson quadrature with tail handling for kernels on unbounded supports.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand is not integrable on the unbounded tail (increments stalled near {increment:.3e} at radius {radius:.3e})")]
    NonIntegrableTail { radius: f64, increment: f64 },
    #[error("integrand produced a non-finite value at x = {0}")]
    NonFinite(f64),
}

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson on `[a, b]` to relative tolerance `rel_tol`
/// (with an absolute floor so integrands that vanish on the interval terminate).
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = eval(f, a)?;
    let fb = eval(f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // crude magnitude estimate for the absolute floor
    let scale = {
        let mut s = 0.0;
        let k = 16;
        for i in 0..=k {
            let x = a + (b - a) * i as f64 / k as f64;
            s += eval(f, x)?.abs();
        }
        s * (b - a).abs() / (k + 1) as f64
    };
    let tol = (rel_tol * scale).max(1e-300);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadError::NonFinite(x))
    }
}

/// Integrates over `[a, b]` split at the given interior breakpoints.
pub fn simpson_split<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<f64, QuadError> {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    for w in pts.windows(2) {
        sum += simpson(f, w[0], w[1], rel_tol)?;
    }
    Ok(sum)
}

/// `∫_start^∞ f`, computed by doubling shells `[R, 2R]` until the increments
/// become negligible. Stalled increments signal a non-integrable tail.
pub fn tail_integral<F: Fn(f64) -> f64>(f: &F, start: f64, rel_tol: f64) -> Result<f64, QuadError> {
    let mut lo = start;
    let mut width = start.abs().max(1.0);
    let mut total = 0.0;
    let mut stalled = 0;
    let mut prev_inc = f64::INFINITY;
    for _ in 0..200 {
        let hi = lo + width;
        let inc = simpson(f, lo, hi, rel_tol)?;
        total += inc;
        if inc.abs() <= rel_tol * total.abs() || (total == 0.0 && inc == 0.0 && lo > start + 64.0) {
            return Ok(total);
        }
        // geometric shrinkage of shells is required for convergence
        if inc.abs() > 0.9 * prev_inc.abs() {
            stalled += 1;
            if stalled >= 6 {
                return Err(QuadError::NonIntegrableTail {
                    radius: hi,
                    increment: inc.abs(),
                });
            }
        } else {
            stalled = 0;
        }
        prev_inc = inc;
        lo = hi;
        width *= 2.0;
    }
    Err(QuadError::NonIntegrableTail {
        radius: lo,
        increment: prev_inc.abs(),
    })
}
