//! Time-step convergence study on the manufactured problem.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use slvp_core::diagnostics::{l2_relative_error, l2_relative_error_field};
use slvp_core::integrators::step_count;
use slvp_core::scenarios::manufactured_exact;
use slvp_core::{advance, ScenarioKind, SchemeKind};

use crate::config::RunConfig;
use crate::error::{AppError, AppResult};
use crate::run::prepare;

pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const CONVERGENCE_HEADER: &str = "scheme,dt,err_f,rate_f,err_e,rate_e";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub scheme: SchemeKind,
    pub dt: f64,
    pub err_f: f64,
    /// `log₂(e_prev / e)`; empty for the first Δt of a scheme.
    pub rate_f: Option<f64>,
    pub err_e: f64,
    pub rate_e: Option<f64>,
}

/// Parses `0.04,0.02,...`.
pub fn parse_ladder(list: &str) -> AppResult<Vec<f64>> {
    let dts: Vec<f64> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| AppError::Config(format!("--dts: bad time step '{s}'"))))
        .collect::<AppResult<_>>()?;
    if dts.is_empty() {
        return Err(AppError::Config("--dts: empty ladder".into()));
    }
    Ok(dts)
}

/// Relative L² errors of f and E at `cfg.t_end` for one manufactured run.
pub fn manufactured_errors(cfg: &RunConfig) -> AppResult<(f64, f64)> {
    let mut prepared = prepare(cfg)?;
    advance(&mut prepared.state, cfg.scheme, &prepared.source, cfg.t_end, |_, _| {})?;
    let state = &prepared.state;
    let (exact_f, exact_e) = manufactured_exact(cfg.t_end, state.current().grid().clone())?;
    let err_f = l2_relative_error(state.current(), &exact_f)?;
    let err_e = l2_relative_error_field(&state.efield().nodal, &exact_e, state.current().grid().xgrid())?;
    Ok((err_f, err_e))
}

/// Runs every `scheme × dt` combination of `base` (one thread per scheme) and attaches
/// the observed rates.
pub fn run_convergence_study(base: &RunConfig, dts: &[f64], schemes: &[SchemeKind]) -> AppResult<Vec<ConvergenceRow>> {
    if !matches!(base.scenario.kind, ScenarioKind::Manufactured) {
        return Err(AppError::Config("convergence studies need scenario.kind = manufactured".into()));
    }
    if dts.windows(2).any(|w| !(w[1] < w[0])) || !dts.iter().all(|&dt| dt > 0.0 && dt.is_finite()) {
        return Err(AppError::Config(format!("the Δt ladder must be positive and strictly decreasing: {dts:?}")));
    }
    for &dt in dts {
        step_count(base.t_end, dt).map_err(|_| {
            AppError::Config(format!("T = {} is not an integer multiple of dt = {dt}", base.t_end))
        })?;
    }

    let results: Vec<AppResult<Vec<(f64, f64)>>> = thread::scope(|s| {
        let handles: Vec<_> = schemes
            .iter()
            .map(|&scheme| {
                s.spawn(move || {
                    dts.iter()
                        .map(|&dt| {
                            let cfg = RunConfig {
                                scheme,
                                dt,
                                ..base.clone()
                            };
                            manufactured_errors(&cfg)
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(AppError::Numerical("worker thread panicked".into()))))
            .collect()
    });

    let mut rows = Vec::with_capacity(schemes.len() * dts.len());
    for (&scheme, errs) in schemes.iter().zip(results) {
        let errs = errs?;
        for (i, (&dt, &(err_f, err_e))) in dts.iter().zip(&errs).enumerate() {
            let rate = |prev: f64, cur: f64| (prev / cur).log2();
            rows.push(ConvergenceRow {
                scheme,
                dt,
                err_f,
                rate_f: (i > 0).then(|| rate(errs[i - 1].0, err_f)),
                err_e,
                rate_e: (i > 0).then(|| rate(errs[i - 1].1, err_e)),
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log e` against `log Δt`.
pub fn fitted_rate(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    crate::analysis::linear_fit(&xs, &ys).slope
}

pub fn format_table(rows: &[ConvergenceRow]) -> String {
    let opt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:?},{:.16e},{},{:.16e},{}",
            r.scheme,
            r.dt,
            r.err_f,
            opt(r.rate_f),
            r.err_e,
            opt(r.rate_e)
        );
    }
    out
}

pub fn write_table(rows: &[ConvergenceRow], dir: &Path) -> AppResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let path = dir.join(CONVERGENCE_FILE);
    fs::write(&path, format_table(rows)).map_err(|e| AppError::io(&path, e))?;
    Ok(path)
}
