//! Driving a single simulation and writing its output files.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::info;
use slvp_core::diagnostics::record;
use slvp_core::scenarios::{init_field, manufactured_exact, manufactured_source};
use slvp_core::{advance, Distribution, Neutrality, Record, ScenarioKind, SolverOptions, Source, Startup, State};

use crate::config::{RunConfig, StartMode};
use crate::error::{AppError, AppResult};
use crate::snapshot::{snapshot_name, Snapshot};

pub const DIAGNOSTICS_HEADER: &str = "t,Q,P,energy,first_mode_a1,first_mode_abs,cfl_ok";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
/// Same columns as [`DIAGNOSTICS_FILE`], for the initial data only.
pub const INITIAL_DIAGNOSTICS_FILE: &str = "diagnostics_initial.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

/// A ready-to-advance state plus the levels it already contains.
pub struct Prepared {
    pub state: State,
    pub source: Source,
    /// `(k, record, field)` for every level up to the current one, oldest first.
    /// Exact start-ups provide several; otherwise only `k = 0`.
    pub levels: Vec<(usize, Record, Distribution)>,
}

pub fn solver_options(cfg: &RunConfig) -> SolverOptions<f64> {
    SolverOptions {
        taylor_order: cfg.taylor_order,
        startup: match cfg.startup.for_scheme(cfg.scheme) {
            Some(StartMode::Lower) => Startup::LowerOrder,
            _ => Startup::OneStep2,
        },
        strict_cfl: cfg.strict_cfl,
        neutrality: if cfg.neutrality_fix {
            Neutrality::Project
        } else {
            Neutrality::default()
        },
    }
}

/// Builds the initial state for `cfg`, including the exact history levels when asked for.
pub fn prepare(cfg: &RunConfig) -> AppResult<Prepared> {
    let grid = Arc::new(cfg.scenario.domain.grid(cfg.nx, cfg.nv)?);
    let manufactured = matches!(cfg.scenario.kind, ScenarioKind::Manufactured);
    let source = if manufactured { manufactured_source() } else { Source::none() };
    let options = solver_options(cfg);
    let depth = cfg.scheme.history_depth();

    if depth > 0 && cfg.startup.for_scheme(cfg.scheme) == Some(StartMode::Exact) {
        if !manufactured {
            return Err(AppError::Config("exact start-up needs the manufactured scenario".into()));
        }
        if cfg.steps() < depth {
            return Err(AppError::Config(format!(
                "{} with exact start-up needs at least {depth} steps",
                cfg.scheme
            )));
        }
        let mut fields = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            fields.push(manufactured_exact(j as f64 * cfg.dt, grid.clone())?.0);
        }
        let state = State::from_levels(fields.clone(), depth as f64 * cfg.dt, cfg.dt, options)?;
        let efields: Vec<_> = state.history().map(|(_, e)| e.clone()).collect();
        let mut levels = Vec::with_capacity(depth + 1);
        for (j, field) in fields.into_iter().enumerate() {
            // history is most recent first
            let efield = if j == depth { state.efield() } else { &efields[depth - 1 - j] };
            levels.push((j, record(j as f64 * cfg.dt, &field, efield, true), field));
        }
        return Ok(Prepared { state, source, levels });
    }

    let field = match &cfg.initial_snapshot {
        Some(path) => Snapshot::read(path)?.to_field(grid)?,
        None => init_field(&cfg.scenario, grid)?,
    };
    let state = State::new(field.clone(), cfg.dt, options)?;
    let levels = vec![(0, state.diagnostics(), field)];
    Ok(Prepared { state, source, levels })
}

/// One diagnostics row, floats with 17 significant digits.
pub fn format_record(r: &Record) -> String {
    format!(
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
        r.t,
        r.particles,
        r.momentum,
        r.energy,
        r.first_mode_a1,
        r.first_mode_abs,
        u8::from(r.cfl_ok)
    )
}

pub fn parse_record(line: &str) -> Option<Record> {
    let cols: Vec<&str> = line.trim().split(',').collect();
    if cols.len() != 7 {
        return None;
    }
    let num = |i: usize| cols[i].parse::<f64>().ok();
    Some(Record {
        t: num(0)?,
        particles: num(1)?,
        momentum: num(2)?,
        energy: num(3)?,
        first_mode_a1: num(4)?,
        first_mode_abs: num(5)?,
        cfl_ok: match cols[6] {
            "1" => true,
            "0" => false,
            _ => return None,
        },
    })
}

/// Reads a diagnostics file written by [`run_simulation`].
pub fn read_diagnostics(path: &Path) -> AppResult<Vec<Record>> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| AppError::io(path, e))?;
        if i == 0 {
            if line != DIAGNOSTICS_HEADER {
                return Err(AppError::Io(format!("{}: unexpected header '{line}'", path.display())));
            }
            continue;
        }
        rows.push(parse_record(&line).ok_or_else(|| AppError::Io(format!("{}:{}: bad row", path.display(), i + 1)))?);
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub steps: usize,
    pub initial: Record,
    pub last: Record,
    pub snapshots: Vec<PathBuf>,
}

struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    fn snapshot(&mut self, field: &Distribution, k: usize, t: f64) -> AppResult<()> {
        let path = self.dir.join(snapshot_name(k));
        Snapshot::from_field(field, t).write(&path)?;
        self.written.push(path);
        Ok(())
    }
}

fn create(path: &Path) -> AppResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| AppError::io(path, e))?))
}

/// Runs `cfg` to completion, writing the manifest, diagnostics and snapshots into
/// `cfg.output_dir`. Invalid or non-finite initial data fails before anything is written.
pub fn run_simulation(cfg: &RunConfig) -> AppResult<RunSummary> {
    let Prepared {
        mut state,
        source,
        levels,
    } = prepare(cfg)?;
    let total = cfg.steps();
    let snaps = cfg.snapshot_steps();

    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
    let manifest = dir.join(MANIFEST_FILE);
    fs::write(&manifest, cfg.to_manifest()).map_err(|e| AppError::io(&manifest, e))?;

    let initial = levels[0].1;
    let init_path = dir.join(INITIAL_DIAGNOSTICS_FILE);
    fs::write(&init_path, format!("{DIAGNOSTICS_HEADER}\n{}\n", format_record(&initial)))
        .map_err(|e| AppError::io(&init_path, e))?;

    let diag_path = dir.join(DIAGNOSTICS_FILE);
    let mut diag = create(&diag_path)?;
    let io_fail = |e: std::io::Error| AppError::io(&diag_path, e);
    writeln!(diag, "{DIAGNOSTICS_HEADER}").map_err(io_fail)?;

    let mut out = Output { dir, written: Vec::new() };
    let mut last = initial;
    for (k, rec, field) in &levels {
        if *k > 0 {
            writeln!(diag, "{}", format_record(rec)).map_err(io_fail)?;
            last = *rec;
        }
        if snaps.contains(k) {
            out.snapshot(field, *k, rec.t)?;
        }
    }

    // step index of the state's own k = 0
    let k0 = levels.last().map_or(0, |l| l.0);
    let mut targets: Vec<usize> = snaps.iter().copied().filter(|&k| k > k0).collect();
    if targets.last() != Some(&total) {
        targets.push(total);
    }
    for target in targets {
        if target <= k0 + state.k() {
            continue;
        }
        let mut write_err = None;
        let t_end = target as f64 * cfg.dt;
        let result = advance(&mut state, cfg.scheme, &source, t_end, |_, rec| {
            if write_err.is_none() {
                if let Err(e) = writeln!(diag, "{}", format_record(rec)) {
                    write_err = Some(e);
                }
            }
            last = *rec;
        });
        if let Err(e) = result {
            let _ = diag.flush();
            return Err(e.into());
        }
        if let Some(e) = write_err {
            return Err(io_fail(e));
        }
        if snaps.contains(&target) {
            out.snapshot(state.current(), target, state.t())?;
        }
    }
    diag.flush().map_err(io_fail)?;
    info!("{} steps written to {}", total, diag_path.display());

    Ok(RunSummary {
        output_dir: out.dir,
        steps: total,
        initial,
        last,
        snapshots: out.written,
    })
}
