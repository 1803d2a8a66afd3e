//! The three commands and their artifact layout.
//!
//! ```text
//! <out>/snapshots/lagrangian_0000.csv   x,u (deposited)
//! <out>/snapshots/eulerian_0000.csv     x,u
//! <out>/trajectories.csv                t,particle_id,x,weight,u_value
//! <out>/diagnostics.csv                 solver + one record per snapshot
//! <out>/summary.json
//! <out>/study.json, study.csv, points/alpha_<a>_n_<n>/{diagnostics.csv,summary.json}
//! ```

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use serde_json::{json, Value};

use nonlocal_core::analysis::{detect_blowup, existence_bound, run_grid, StudyReport};
use nonlocal_core::diagnostics::{DiagnosticsRecord, CSV_HEADER};
use nonlocal_core::eulerian::{cross_validate, EulerianRun};
use nonlocal_core::fields::GridField;
use nonlocal_core::lagrangian::{deposit, seed_from_datum, write_trajectory_rows, LagrangianRun, TRAJECTORY_HEADER};
use nonlocal_core::scenario::{ScenarioConfig, BUILTIN_SCENARIOS};

/// Tolerance reported with the cross-validation block of `summary.json`.
const CROSS_VALIDATION_TOL: f64 = 0.05;

#[derive(Debug)]
pub enum CliError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config: {e:#}"),
            CliError::Runtime(e) => write!(f, "run aborted: {e:#}"),
            CliError::Io(e) => write!(f, "i/o: {e:#}"),
        }
    }
}

fn io<T, E: Into<anyhow::Error>>(r: Result<T, E>, what: impl FnOnce() -> String) -> Result<T, CliError> {
    r.map_err(|e| CliError::Io(e.into().context(what())))
}

fn runtime<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Runtime(e.into()))
}

fn load(config: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let path = Path::new(config);
    let base = if path.exists() {
        ScenarioConfig::from_file(path)
    } else if BUILTIN_SCENARIOS.contains(&config) {
        ScenarioConfig::builtin(config)
    } else {
        return Err(CliError::Config(anyhow!(
            "`{config}` is neither a file nor a built-in scenario ({})",
            BUILTIN_SCENARIOS.join(", ")
        )));
    };
    base.and_then(|c| c.with_overrides(overrides))
        .map_err(|e| CliError::Config(e.into()))
}

fn out_dir(cfg: &ScenarioConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        io(fs::create_dir_all(parent), || format!("creating {}", parent.display()))?;
    }
    Ok(BufWriter::new(io(File::create(path), || format!("creating {}", path.display()))?))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    io(writeln!(w, "{text}"), || format!("writing {}", path.display()))?;
    io(w.flush(), || format!("writing {}", path.display()))
}

fn write_field(path: &Path, field: &GridField) -> Result<(), CliError> {
    let mut w = create(path)?;
    io(field.write_csv(&mut w), || format!("writing {}", path.display()))?;
    io(w.flush(), || format!("writing {}", path.display()))
}

fn config_json(cfg: &ScenarioConfig) -> Value {
    let flat = cfg.to_flat();
    let map: serde_json::Map<String, Value> = flat
        .into_iter()
        .map(|(k, v)| (k, serde_json::to_value(v).expect("toml values serialize")))
        .collect();
    Value::Object(map)
}

fn record_json(r: &DiagnosticsRecord) -> Value {
    serde_json::to_value(r).expect("records serialize")
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn write_diagnostics(path: &Path, rows: &[(&str, &[DiagnosticsRecord])]) -> Result<(), CliError> {
    let mut w = create(path)?;
    let what = || format!("writing {}", path.display());
    io(writeln!(w, "solver,{CSV_HEADER}"), what)?;
    for (solver, records) in rows {
        for r in *records {
            io(writeln!(w, "{solver},{}", r.csv_row()), what)?;
        }
    }
    io(w.flush(), what)
}

pub fn simulate(config: &str, overrides: &[String], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load(config, overrides)?;
    let dir = out_dir(&cfg, out);
    let datum = cfg.datum().map_err(|e| CliError::Config(e.into()))?;
    let kernel = cfg.kernel().map_err(|e| CliError::Config(e.into()))?;
    let velocity = cfg.velocity();
    let snapshot_dt = cfg.snapshot_every as f64 * cfg.dt;
    let mut summary = serde_json::Map::new();
    summary.insert("scenario".into(), json!(cfg.name));
    summary.insert("config".into(), config_json(&cfg));

    let u0_sup = datum.lq_norm(f64::INFINITY);
    if u0_sup > 0.0 {
        if let Ok(b) = existence_bound(&velocity, &kernel, u0_sup, f64::INFINITY) {
            summary.insert(
                "existence_bound".into(),
                json!({
                    "q": "inf",
                    "u0_norm": b.u0_norm,
                    "k1": b.k1,
                    "k2": b.k2,
                    "t_q": b.t_q,
                    "t_star_lower": finite_or_null(b.t_star_lower),
                }),
            );
        }
    }

    let mut eulerian: Option<EulerianRun> = None;
    // grid states at snapshot times, compared against the particles later
    let mut grid_states: Vec<EulerianRun> = Vec::new();
    if cfg.solver.eulerian() {
        let spec = cfg.grid_spec().map_err(|e| CliError::Config(e.into()))?;
        let mut run = runtime(EulerianRun::from_datum(&datum, spec, kernel.clone(), velocity.clone(), cfg.cfl))?;
        let t_stop = cfg.t_end.min(cfg.eulerian_t_max);
        let mut k = 0u64;
        loop {
            let t = (k as f64 * snapshot_dt).min(t_stop);
            runtime(run.advance_to(t))?;
            runtime(run.record_diagnostics())?;
            write_field(&dir.join("snapshots").join(format!("eulerian_{k:04}.csv")), run.field())?;
            if cfg.solver.lagrangian() {
                grid_states.push(run.clone());
            }
            if t >= t_stop {
                break;
            }
            k += 1;
        }
        let last = *run.history().last().expect("recorded");
        summary.insert(
            "eulerian".into(),
            json!({
                "final_t": run.t(),
                "steps": run.steps(),
                "dt_halvings": run.halvings(),
                "cells": cfg.cells,
                "cfl": cfg.cfl,
                "final": record_json(&last),
            }),
        );
        eulerian = Some(run);
    }

    let mut lagrangian: Option<LagrangianRun> = None;
    if cfg.solver.lagrangian() {
        let deposit_spec = cfg.deposit_spec().map_err(|e| CliError::Config(e.into()))?;
        let ens = runtime(seed_from_datum(&datum, cfg.particles, &[cfg.domain]))?;
        let mut run = runtime(LagrangianRun::new(ens, kernel.clone(), velocity.clone(), cfg.dt))?;
        let total = (cfg.t_end / cfg.dt).round() as u64;
        let mut cross = Vec::new();
        let mut next_state = grid_states.iter().peekable();
        let traj_path = dir.join("trajectories.csv");
        let mut traj = create(&traj_path)?;
        let what = || format!("writing {}", traj_path.display());
        io(writeln!(traj, "{TRAJECTORY_HEADER}"), what)?;
        let mut snap = 0u64;
        for step in 0..=total {
            if step % cfg.snapshot_every == 0 || step == total {
                runtime(run.record_diagnostics())?;
                let field = runtime(deposit(&run, deposit_spec))?;
                write_field(&dir.join("snapshots").join(format!("lagrangian_{snap:04}.csv")), &field)?;
                io(write_trajectory_rows(&run, &mut traj), what)?;
                snap += 1;
            }
            while let Some(eul) = next_state.next_if(|e| (e.t() / cfg.dt).round() as u64 == step) {
                let rep = runtime(cross_validate(&run, eul, eul.t(), CROSS_VALIDATION_TOL))?;
                cross.push(serde_json::to_value(rep).expect("serializes"));
            }
            if step < total {
                runtime(run.step())?;
            }
        }
        io(traj.flush(), what)?;
        if !cross.is_empty() {
            summary.insert("cross_validation".into(), Value::Array(cross));
        }
        let last = *run.history().last().expect("recorded");
        let blowup = detect_blowup(run.history(), 10.0 * u0_sup).ok();
        summary.insert(
            "lagrangian".into(),
            json!({
                "final_t": run.t(),
                "steps": run.steps(),
                "particles": run.ensemble().len(),
                "initial_mass": run.history()[0].mass,
                "final": record_json(&last),
                "final_max_u": finite_or_null(last.max_u),
                "centroid_series": run.history().iter().map(|r| json!([r.t, r.centroid])).collect::<Vec<_>>(),
            }),
        );
        summary.insert(
            "extrapolated_blowup".into(),
            blowup.map_or(Value::Null, |b| json!(b.extrapolated)),
        );
        summary.insert(
            "blowup_first_exceedance".into(),
            blowup.map_or(Value::Null, |b| json!(b.first_exceedance)),
        );
        lagrangian = Some(run);
    }

    let mut rows: Vec<(&str, &[DiagnosticsRecord])> = Vec::new();
    if let Some(l) = &lagrangian {
        rows.push(("lagrangian", l.history()));
    }
    if let Some(e) = &eulerian {
        rows.push(("eulerian", e.history()));
    }
    write_diagnostics(&dir.join("diagnostics.csv"), &rows)?;
    write_json(&dir.join("summary.json"), &Value::Object(summary))?;
    println!("[simulate] {} -> {}", cfg.name, dir.display());
    Ok(())
}

pub fn study(config: &str, overrides: &[String], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load(config, overrides)?;
    let grid = cfg
        .study_grid()
        .ok_or_else(|| CliError::Config(anyhow!("scenario `{}` has no study.alphas / study.n", cfg.name)))?;
    let study_cfg = cfg.study_config().map_err(|e| CliError::Config(e.into()))?;
    let dir = out_dir(&cfg, out);
    println!("[study] {} grid points", grid.len());
    let results = run_grid(&grid, &study_cfg);
    for ((alpha, n), res) in &results {
        let point_dir = dir.join("points").join(format!("alpha_{alpha}_n_{n}"));
        match res {
            Ok(rep) => {
                write_diagnostics(&point_dir.join("diagnostics.csv"), &[("lagrangian", &rep.history)])?;
                write_json(
                    &point_dir.join("summary.json"),
                    &json!({
                        "alpha": alpha,
                        "n": n,
                        "r": rep.r,
                        "final_centroid_error": rep.final_centroid_error,
                        "final_spread": rep.final_spread,
                        "extrapolated_blowup": rep.extrapolated_blowup,
                        "checks": rep.checks,
                    }),
                )?;
            }
            Err(e) => write_json(&point_dir.join("summary.json"), &json!({ "alpha": alpha, "n": n, "error": e.to_string() }))?,
        }
    }
    let report = StudyReport::from_results(&results);
    write_json(&dir.join("study.json"), &serde_json::to_value(&report).expect("serializes"))?;
    let csv_path = dir.join("study.csv");
    let mut w = create(&csv_path)?;
    io(w.write_all(report.to_csv().as_bytes()), || format!("writing {}", csv_path.display()))?;
    io(w.flush(), || format!("writing {}", csv_path.display()))?;
    let failures = report.failures();
    println!("[study] wrote {} ({failures} failed points)", dir.display());
    if failures > 0 {
        let msgs: Vec<String> = report.points.iter().filter_map(|p| p.error.clone()).collect();
        return Err(CliError::Runtime(
            anyhow!("{failures} study point(s) failed").context(msgs.join("; ")),
        ));
    }
    Ok(())
}

pub fn bounds(config: &str, overrides: &[String], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load(config, overrides)?;
    let datum = cfg.datum().map_err(|e| CliError::Config(e.into()))?;
    let kernel = cfg.kernel().map_err(|e| CliError::Config(e.into()))?;
    let velocity = cfg.velocity();
    let mut entries = Vec::new();
    for q in [1.0, 2.0, f64::INFINITY] {
        let norm = datum.lq_norm(q);
        let label = if q.is_infinite() { "inf".to_string() } else { format!("{q}") };
        match existence_bound(&velocity, &kernel, norm, q) {
            Ok(b) => entries.push(json!({
                "q": label,
                "u0_norm": b.u0_norm,
                "k1": b.k1,
                "k2": b.k2,
                "t_q": b.t_q,
                "t_star_lower": finite_or_null(b.t_star_lower),
            })),
            Err(e) => entries.push(json!({ "q": label, "error": e.to_string() })),
        }
    }
    let value = json!({ "scenario": cfg.name, "bounds": entries });
    println!("{}", serde_json::to_string_pretty(&value).expect("serializes"));
    if let Some(dir) = out {
        write_json(&dir.join("bounds.json"), &value)?;
    }
    Ok(())
}
