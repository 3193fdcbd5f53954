//! Flat `key = value` run configuration.
//!
//! ```text
//! # two-stream reference run
//! scenario.kind = two_stream
//! grid.N = 32
//! grid.M = 128
//! time.scheme = onestep2
//! time.dt = 0.01
//! time.T = 30
//! ```
//!
//! `#` starts a comment. Overrides use the same keys as `--key=value` and win over the
//! file; [`OUTPUT_DIR_ENV`] sits between the two for `output.dir`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use slvp_core::integrators::step_count;
use slvp_core::{Domain, Scenario, ScenarioKind, SchemeKind};

use crate::error::{AppError, AppResult};

/// Environment variable overriding `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "SLVP_OUTPUT_DIR";

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("scenario.kind", "manufactured | two_stream | landau"),
    ("scenario.alpha", "two-stream beam width α"),
    ("scenario.beta", "two-stream beam separation β"),
    ("scenario.epsilon", "two-stream perturbation ε"),
    ("scenario.gamma", "Landau perturbation γ"),
    ("scenario.kappa", "perturbation wavenumber κ"),
    ("domain.x_min", "left end of the x period"),
    ("domain.x_max", "right end of the x period"),
    ("domain.v_min", "left end of the v period"),
    ("domain.v_max", "right end of the v period"),
    ("grid.N", "x nodes"),
    ("grid.M", "v nodes"),
    ("time.scheme", "euler1 | bdf2 | bdf3 | onestep2"),
    ("time.dt", "time step"),
    ("time.T", "final time (an integer number of steps)"),
    ("time.startup", "multistep start-up for bdf2 and bdf3: onestep2 | lower | exact"),
    ("time.startup.bdf2", "start-up of bdf2 only"),
    ("time.startup.bdf3", "start-up of bdf3 only"),
    ("solver.taylor_order", "Taylor truncation order, or auto"),
    ("solver.strict_cfl", "abort on CFL violations"),
    ("solver.neutrality_fix", "project out a non-neutral mean instead of failing"),
    ("output.dir", "output directory"),
    ("output.snapshots", "comma-separated snapshot times"),
    ("initial.snapshot", "read the initial distribution from a snapshot file"),
];

const ALIASES: &[(&str, &str)] = &[
    ("N", "grid.N"),
    ("M", "grid.M"),
    ("dt", "time.dt"),
    ("T", "time.T"),
    ("scheme", "time.scheme"),
    ("scenario", "scenario.kind"),
];

/// How the history of a multistep scheme is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartMode {
    /// One-step second-order steps.
    #[default]
    OneStep2,
    /// A first-order step, then BDF2.
    Lower,
    /// Exact solution levels (manufactured problem only).
    Exact,
}

impl StartMode {
    pub fn name(self) -> &'static str {
        match self {
            StartMode::OneStep2 => "onestep2",
            StartMode::Lower => "lower",
            StartMode::Exact => "exact",
        }
    }
}

impl FromStr for StartMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "onestep2" => Ok(StartMode::OneStep2),
            "lower" | "lower_order" => Ok(StartMode::Lower),
            "exact" => Ok(StartMode::Exact),
            _ => Err(format!("unknown start-up '{s}' (expected onestep2, lower or exact)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StartupPlan {
    pub bdf2: StartMode,
    pub bdf3: StartMode,
}

impl StartupPlan {
    pub fn uniform(mode: StartMode) -> Self {
        Self { bdf2: mode, bdf3: mode }
    }

    /// Start-up used by `scheme`; one-step schemes never need one.
    pub fn for_scheme(&self, scheme: SchemeKind) -> Option<StartMode> {
        match scheme {
            SchemeKind::Bdf2 => Some(self.bdf2),
            SchemeKind::Bdf3 => Some(self.bdf3),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub scheme: SchemeKind,
    pub nx: usize,
    pub nv: usize,
    pub dt: f64,
    pub t_end: f64,
    pub taylor_order: Option<usize>,
    pub startup: StartupPlan,
    pub output_dir: PathBuf,
    pub snapshot_times: Vec<f64>,
    pub strict_cfl: bool,
    pub neutrality_fix: bool,
    /// Initial data read from a snapshot instead of the scenario formula; its time
    /// stamp is ignored and the run starts at t = 0.
    pub initial_snapshot: Option<PathBuf>,
}

impl RunConfig {
    pub fn steps(&self) -> usize {
        step_count(self.t_end, self.dt).unwrap_or(0)
    }

    /// Step index of every snapshot time, sorted and deduplicated.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self
            .snapshot_times
            .iter()
            .map(|&t| if t == 0.0 { 0 } else { step_count(t, self.dt).unwrap_or(0) })
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn effective_taylor_order(&self) -> usize {
        self.taylor_order.unwrap_or(self.scheme.default_taylor_order())
    }

    /// Resolved configuration in the input format, every numerics knob included.
    /// Parsing it back yields the same configuration.
    pub fn to_manifest(&self) -> String {
        let mut out = format!(
            "# slvp {} (slvp-core {})\n# steps = {}\n",
            env!("CARGO_PKG_VERSION"),
            slvp_core::VERSION,
            self.steps()
        );
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("scenario.kind", self.scenario.kind.name().into());
        match self.scenario.kind {
            ScenarioKind::Manufactured => {}
            ScenarioKind::TwoStream { alpha, beta, epsilon, kappa } => {
                put("scenario.alpha", format!("{alpha:?}"));
                put("scenario.beta", format!("{beta:?}"));
                put("scenario.epsilon", format!("{epsilon:?}"));
                put("scenario.kappa", format!("{kappa:?}"));
            }
            ScenarioKind::Landau { gamma, kappa } => {
                put("scenario.gamma", format!("{gamma:?}"));
                put("scenario.kappa", format!("{kappa:?}"));
            }
        }
        let d = self.scenario.domain;
        put("domain.x_min", format!("{:?}", d.x_min));
        put("domain.x_max", format!("{:?}", d.x_max));
        put("domain.v_min", format!("{:?}", d.v_min));
        put("domain.v_max", format!("{:?}", d.v_max));
        put("grid.N", self.nx.to_string());
        put("grid.M", self.nv.to_string());
        put("time.scheme", self.scheme.name().into());
        put("time.dt", format!("{:?}", self.dt));
        put("time.T", format!("{:?}", self.t_end));
        put("time.startup.bdf2", self.startup.bdf2.name().into());
        put("time.startup.bdf3", self.startup.bdf3.name().into());
        put("solver.taylor_order", self.effective_taylor_order().to_string());
        put("solver.strict_cfl", self.strict_cfl.to_string());
        put("solver.neutrality_fix", self.neutrality_fix.to_string());
        put("output.dir", self.output_dir.display().to_string());
        let snaps: Vec<String> = self.snapshot_times.iter().map(|t| format!("{t:?}")).collect();
        put("output.snapshots", snaps.join(","));
        if let Some(p) = &self.initial_snapshot {
            put("initial.snapshot", p.display().to_string());
        }
        out
    }
}

/// Where a value came from, for error messages.
#[derive(Debug, Clone, PartialEq)]
enum Origin {
    Line { source: String, line: usize },
    Flag(String),
    Env,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line { source, line } => write!(f, "{source}:{line}"),
            Origin::Flag(flag) => write!(f, "flag '{flag}'"),
            Origin::Env => write!(f, "${OUTPUT_DIR_ENV}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: Origin,
}

fn canonical_key(key: &str) -> Option<&'static str> {
    if let Some(&(_, k)) = ALIASES.iter().find(|(a, _)| *a == key) {
        return Some(k);
    }
    KEYS.iter().map(|(k, _)| *k).find(|k| *k == key)
}

fn config_err(origin: &Origin, msg: impl fmt::Display) -> AppError {
    AppError::Config(format!("{origin}: {msg}"))
}

type Entries = BTreeMap<&'static str, Entry>;

fn parse_text(text: &str, source: &str, into: &mut Entries) -> AppResult<()> {
    let mut seen: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let origin = Origin::Line {
            source: source.to_string(),
            line: i + 1,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(&origin, format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let canon = canonical_key(key).ok_or_else(|| config_err(&origin, format!("unknown key '{key}'")))?;
        if let Some(first) = seen.insert(canon, i + 1) {
            return Err(config_err(&origin, format!("'{canon}' already set on line {first}")));
        }
        into.insert(
            canon,
            Entry {
                value: value.trim().to_string(),
                origin,
            },
        );
    }
    Ok(())
}

fn parse_flag(flag: &str, into: &mut Entries) -> AppResult<()> {
    let origin = Origin::Flag(flag.to_string());
    let body = flag.strip_prefix("--").unwrap_or(flag);
    let (key, value) = body
        .split_once('=')
        .ok_or_else(|| config_err(&origin, "overrides take the form --key=value"))?;
    let canon = canonical_key(key.trim()).ok_or_else(|| config_err(&origin, format!("unknown key '{key}'")))?;
    into.insert(
        canon,
        Entry {
            value: value.trim().to_string(),
            origin,
        },
    );
    Ok(())
}

/// Reads `path` and applies `overrides`; `output.dir` may be replaced by [`OUTPUT_DIR_ENV`].
pub fn parse_config(path: &Path, overrides: &[String]) -> AppResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
    let env_dir = std::env::var(OUTPUT_DIR_ENV).ok().filter(|s| !s.is_empty());
    parse_sources(&text, &path.display().to_string(), overrides, env_dir.as_deref())
}

/// Precedence, lowest first: defaults, file, `env_dir` (output directory only), flags.
pub fn parse_sources(text: &str, source: &str, overrides: &[String], env_dir: Option<&str>) -> AppResult<RunConfig> {
    let mut entries = Entries::new();
    parse_text(text, source, &mut entries)?;
    if let Some(dir) = env_dir {
        entries.insert(
            "output.dir",
            Entry {
                value: dir.to_string(),
                origin: Origin::Env,
            },
        );
    }
    for flag in overrides {
        parse_flag(flag, &mut entries)?;
    }
    resolve(&entries)
}

fn get<'a>(entries: &'a Entries, key: &str) -> Option<&'a Entry> {
    entries.get(key)
}

fn parse_value<V: FromStr>(entry: &Entry, key: &str, what: &str) -> AppResult<V> {
    entry
        .value
        .parse()
        .map_err(|_| config_err(&entry.origin, format!("{key} must be {what}, got '{}'", entry.value)))
}

fn real(entries: &Entries, key: &str) -> AppResult<Option<f64>> {
    let Some(e) = get(entries, key) else { return Ok(None) };
    let v: f64 = parse_value(e, key, "a real number")?;
    if !v.is_finite() {
        return Err(config_err(&e.origin, format!("{key} must be finite")));
    }
    Ok(Some(v))
}

fn required<V>(key: &str, v: Option<V>) -> AppResult<V> {
    v.ok_or_else(|| AppError::Config(format!("missing required key '{key}'")))
}

fn boolean(entries: &Entries, key: &str) -> AppResult<bool> {
    let Some(e) = get(entries, key) else { return Ok(false) };
    match e.value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(config_err(&e.origin, format!("{key} must be true or false, got '{}'", e.value))),
    }
}

fn positive(entries: &Entries, key: &str) -> AppResult<f64> {
    let v = required(key, real(entries, key)?)?;
    if v <= 0.0 {
        return Err(config_err(&entries[key].origin, format!("{key} must be positive, got {v}")));
    }
    Ok(v)
}

fn node_count(entries: &Entries, key: &str) -> AppResult<usize> {
    let e = required(key, get(entries, key))?;
    let n: usize = parse_value(e, key, "a positive integer")?;
    if n < 4 || n % 2 != 0 {
        return Err(config_err(&e.origin, format!("{key} must be even and at least 4, got {n}")));
    }
    if !n.is_power_of_two() {
        warn!("{}: {key} = {n} is not a power of two", e.origin);
    }
    Ok(n)
}

fn scenario(entries: &Entries) -> AppResult<Scenario> {
    let kind_entry = required("scenario.kind", get(entries, "scenario.kind"))?;
    let mut cfg = match kind_entry.value.to_ascii_lowercase().as_str() {
        "manufactured" => Scenario::manufactured(),
        "two_stream" | "two-stream" | "twostream" => Scenario::two_stream(),
        "landau" => Scenario::landau(0.01),
        other => {
            return Err(config_err(
                &kind_entry.origin,
                format!("unknown scenario '{other}' (expected manufactured, two_stream or landau)"),
            ))
        }
    };
    let allowed: &[&str] = match cfg.kind {
        ScenarioKind::Manufactured => &[],
        ScenarioKind::TwoStream { .. } => &["scenario.alpha", "scenario.beta", "scenario.epsilon", "scenario.kappa"],
        ScenarioKind::Landau { .. } => &["scenario.gamma", "scenario.kappa"],
    };
    for key in ["scenario.alpha", "scenario.beta", "scenario.epsilon", "scenario.gamma", "scenario.kappa"] {
        if let Some(e) = get(entries, key) {
            if !allowed.contains(&key) {
                return Err(config_err(
                    &e.origin,
                    format!("{key} does not apply to the {} scenario", cfg.kind.name()),
                ));
            }
        }
    }
    match &mut cfg.kind {
        ScenarioKind::Manufactured => {}
        ScenarioKind::TwoStream { alpha, beta, epsilon, kappa } => {
            *alpha = real(entries, "scenario.alpha")?.unwrap_or(*alpha);
            *beta = real(entries, "scenario.beta")?.unwrap_or(*beta);
            *epsilon = real(entries, "scenario.epsilon")?.unwrap_or(*epsilon);
            *kappa = real(entries, "scenario.kappa")?.unwrap_or(*kappa);
        }
        ScenarioKind::Landau { gamma, kappa } => {
            *gamma = real(entries, "scenario.gamma")?.unwrap_or(*gamma);
            *kappa = real(entries, "scenario.kappa")?.unwrap_or(*kappa);
        }
    }
    let d = cfg.domain;
    cfg.domain = Domain::new(
        real(entries, "domain.x_min")?.unwrap_or(d.x_min),
        real(entries, "domain.x_max")?.unwrap_or(d.x_max),
        real(entries, "domain.v_min")?.unwrap_or(d.v_min),
        real(entries, "domain.v_max")?.unwrap_or(d.v_max),
    );
    cfg.validate().map_err(|e| config_err(&kind_entry.origin, e))?;
    Ok(cfg)
}

fn start_mode(entries: &Entries, key: &str) -> AppResult<Option<(StartMode, Origin)>> {
    let Some(e) = get(entries, key) else { return Ok(None) };
    let mode = e.value.parse::<StartMode>().map_err(|msg| config_err(&e.origin, msg))?;
    Ok(Some((mode, e.origin.clone())))
}

fn resolve(entries: &Entries) -> AppResult<RunConfig> {
    let scenario = scenario(entries)?;
    let nx = node_count(entries, "grid.N")?;
    let nv = node_count(entries, "grid.M")?;

    let scheme_entry = required("time.scheme", get(entries, "time.scheme"))?;
    let scheme = scheme_entry
        .value
        .parse::<SchemeKind>()
        .map_err(|e| config_err(&scheme_entry.origin, e))?;

    let dt = positive(entries, "time.dt")?;
    let t_end = positive(entries, "time.T")?;
    if step_count(t_end, dt).is_err() {
        return Err(config_err(
            &entries["time.T"].origin,
            format!(
                "time.T = {t_end} is not an integer multiple of time.dt = {dt} ({} steps)",
                t_end / dt
            ),
        ));
    }

    let generic = start_mode(entries, "time.startup")?;
    let mut startup = StartupPlan::default();
    let mut exact_origin = None;
    for (key, slot) in [("time.startup.bdf2", &mut startup.bdf2), ("time.startup.bdf3", &mut startup.bdf3)] {
        if let Some((mode, origin)) = start_mode(entries, key)?.or_else(|| generic.clone()) {
            *slot = mode;
            if mode == StartMode::Exact {
                exact_origin = Some(origin);
            }
        }
    }

    let taylor_order = match get(entries, "solver.taylor_order") {
        None => None,
        Some(e) if e.value.eq_ignore_ascii_case("auto") => None,
        Some(e) => {
            let order: usize = parse_value(e, "solver.taylor_order", "a positive integer or auto")?;
            if order == 0 {
                return Err(config_err(&e.origin, "solver.taylor_order must be at least 1"));
            }
            Some(order)
        }
    };

    let snapshot_times = match get(entries, "output.snapshots") {
        None => Vec::new(),
        Some(e) => {
            let mut times = Vec::new();
            for item in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let t: f64 = item
                    .parse()
                    .map_err(|_| config_err(&e.origin, format!("bad snapshot time '{item}'")))?;
                let on_grid = t == 0.0 || step_count(t, dt).is_ok();
                if !(0.0..=t_end).contains(&t) || !on_grid {
                    return Err(config_err(
                        &e.origin,
                        format!("snapshot time {t} is not a step time in [0, {t_end}] for dt = {dt}"),
                    ));
                }
                times.push(t);
            }
            times
        }
    };

    let initial_snapshot = get(entries, "initial.snapshot").map(|e| PathBuf::from(&e.value));
    if let Some(origin) = &exact_origin {
        if !matches!(scenario.kind, ScenarioKind::Manufactured) {
            return Err(config_err(origin, "exact start-up needs the manufactured scenario"));
        }
        if initial_snapshot.is_some() {
            return Err(config_err(origin, "exact start-up cannot be combined with initial.snapshot"));
        }
    }

    Ok(RunConfig {
        scenario,
        scheme,
        nx,
        nv,
        dt,
        t_end,
        taylor_order,
        startup,
        output_dir: PathBuf::from(get(entries, "output.dir").map_or("out", |e| e.value.as_str())),
        snapshot_times,
        strict_cfl: boolean(entries, "solver.strict_cfl")?,
        neutrality_fix: boolean(entries, "solver.neutrality_fix")?,
        initial_snapshot,
    })
}
