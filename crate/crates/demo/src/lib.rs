//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every function returns a flat `Float64Array`, or throws a string on bad input.

use nonlocal_core::analysis::{concentration_run, StudyConfig};
use nonlocal_core::datum::Datum;
use nonlocal_core::kernels::{make_smoothed_kernel, make_step_kernel};
use nonlocal_core::lagrangian::{seed_from_datum, solution_values, LagrangianRun};
use nonlocal_core::velocity::make_identity_velocity;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Samples the smoothed step kernel on `[-1.5, 0.5]` as interleaved `(x, η(x))` pairs.
#[wasm_bindgen(js_name = kernelProfile)]
pub fn kernel_profile_js(alpha: f64, n: u32, samples: usize) -> Result<Vec<f64>, JsValue> {
    js(kernel_profile(alpha, n, samples))
}

pub fn kernel_profile(alpha: f64, n: u32, samples: usize) -> Result<Vec<f64>, String> {
    let k = make_smoothed_kernel(alpha, n).map_err(err)?;
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let x = -1.5 + 2.0 * i as f64 / (samples - 1) as f64;
        out.push(x);
        out.push(k.eval(x));
    }
    Ok(out)
}

/// Particle solution of the blow-up problem at time `t`.
///
/// Returns interleaved `(x, u_particle, u_exact)` triples, one per particle.
#[wasm_bindgen(js_name = blowupProfile)]
pub fn blowup_profile_js(t: f64, particles: usize) -> Result<Vec<f64>, JsValue> {
    js(blowup_profile(t, particles))
}

pub fn blowup_profile(t: f64, particles: usize) -> Result<Vec<f64>, String> {
    if !(0.0..0.5).contains(&t) {
        return Err(err(format!("t = {t} must lie in [0, 0.5)")));
    }
    let u0 = Datum::blowup();
    let ens = seed_from_datum(&u0, particles, &[(-0.5, 1.5)]).map_err(err)?;
    let dt = (0.5 - t).min(0.1) / 100.0;
    let mut run = LagrangianRun::new(ens, make_step_kernel(), make_identity_velocity(), dt)
        .map_err(err)?;
    while run.t() + 0.5 * dt < t {
        run.step().map_err(err)?;
    }
    let values = solution_values(&run).map_err(err)?;
    let t = run.t();
    let mut out = Vec::with_capacity(3 * values.len());
    for (x, u) in values {
        let exact = if (t..=0.5).contains(&x) { 2.0 / (1.0 - 2.0 * t) } else { 0.0 };
        out.extend([x, u, exact]);
    }
    Ok(out)
}

/// Centroid and spread of the particle solution for the smoothed kernel, started from the blow-up datum.
///
/// Returns interleaved `(t, centroid, spread, predicted)` rows up to `t_end`.
#[wasm_bindgen(js_name = centroidTrajectory)]
pub fn centroid_trajectory_js(alpha: f64, n: u32, particles: usize, t_end: f64) -> Result<Vec<f64>, JsValue> {
    js(centroid_trajectory(alpha, n, particles, t_end))
}

pub fn centroid_trajectory(alpha: f64, n: u32, particles: usize, t_end: f64) -> Result<Vec<f64>, String> {
    let config = StudyConfig {
        particles,
        dt: 1e-3,
        t_end,
        snapshot_every: 10,
        ..StudyConfig::default()
    };
    let report = concentration_run(alpha, n, &config).map_err(err)?;
    Ok(report.samples.iter().flat_map(|s| [s.t, s.centroid, s.spread, s.predicted]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_profile_has_plateau() {
        let p = kernel_profile(0.5, 18, 201).unwrap();
        assert_eq!(p.len(), 402);
        let mid = p.chunks(2).find(|c| (c[0] + 0.5).abs() < 1e-9).unwrap();
        assert!((mid[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blowup_profile_tracks_exact_plateau() {
        let p = blowup_profile(0.2, 2000).unwrap();
        let inside: Vec<_> = p.chunks(3).filter(|c| c[0] > 0.21 && c[0] < 0.49).collect();
        assert!(!inside.is_empty());
        for c in inside {
            assert!((c[1] - c[2]).abs() < 1e-6 * c[2], "{c:?}");
        }
    }

    #[test]
    fn slider_ranges_run() {
        for alpha in [0.0, 0.5, 1.0] {
            for n in [18, 120] {
                centroid_trajectory(alpha, n, 800, 1.0).unwrap();
            }
        }
        blowup_profile(0.45, 4000).unwrap();
        blowup_profile(0.0, 100).unwrap();
        assert!(blowup_profile(0.5, 100).is_err());
        assert!(kernel_profile(1.5, 18, 10).is_err());
    }

    #[test]
    fn centroid_trajectory_follows_predicted_line() {
        let rows = centroid_trajectory(0.5, 18, 400, 0.5).unwrap();
        let last = rows.chunks(4).last().unwrap();
        assert!((last[1] - last[3]).abs() < 1e-9);
    }
}
