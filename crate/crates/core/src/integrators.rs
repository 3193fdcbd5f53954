//! Time marching: first-order one-step, explicit BDF2/BDF3 and the one-step
//! second-order characteristic scheme.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use log::warn;

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::field::{charge_density, field_time_derivative, solve_field_with, ElectricFieldState, Neutrality};
use crate::phase_space::{apply_v, apply_x, combine_phi, taylor_shifted_eval, DisplacementField, DistributionField};
use crate::scalar::Real;

/// Scalar function of `(t, x, v)`.
pub type ScalarFn<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Euler1,
    Bdf2,
    Bdf3,
    OneStep2,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [SchemeKind::Euler1, SchemeKind::Bdf2, SchemeKind::Bdf3, SchemeKind::OneStep2];

    /// Previous levels needed before a regular step can be taken.
    pub fn history_depth(self) -> usize {
        match self {
            SchemeKind::Euler1 | SchemeKind::OneStep2 => 0,
            SchemeKind::Bdf2 => 1,
            SchemeKind::Bdf3 => 2,
        }
    }

    /// Truncation order of the characteristic Taylor expansion.
    pub fn default_taylor_order(self) -> usize {
        match self {
            SchemeKind::OneStep2 => 2,
            _ => 1,
        }
    }

    /// Nominal order of accuracy in time.
    pub fn order(self) -> usize {
        match self {
            SchemeKind::Euler1 => 1,
            SchemeKind::Bdf2 | SchemeKind::OneStep2 => 2,
            SchemeKind::Bdf3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Euler1 => "euler1",
            SchemeKind::Bdf2 => "bdf2",
            SchemeKind::Bdf3 => "bdf3",
            SchemeKind::OneStep2 => "onestep2",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euler1" | "euler" => Ok(SchemeKind::Euler1),
            "bdf2" => Ok(SchemeKind::Bdf2),
            "bdf3" => Ok(SchemeKind::Bdf3),
            "onestep2" => Ok(SchemeKind::OneStep2),
            other => Err(Error::InvalidParameter(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Right-hand side `g` of the forced Vlasov equation and its x-primitive `G`.
#[derive(Clone, Default)]
pub struct SourceTerm<T> {
    pub g: Option<ScalarFn<T>>,
    /// `G` with `∂G/∂x = g`; needed by the one-step second-order scheme.
    pub primitive: Option<ScalarFn<T>>,
}

impl<T> fmt::Debug for SourceTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceTerm")
            .field("g", &self.g.is_some())
            .field("primitive", &self.primitive.is_some())
            .finish()
    }
}

impl<T: Real> SourceTerm<T> {
    pub fn none() -> Self {
        Self { g: None, primitive: None }
    }

    pub fn new(g: ScalarFn<T>, primitive: Option<ScalarFn<T>>) -> Self {
        Self { g: Some(g), primitive }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.g.is_none()
    }

    fn sample(&self, field: &DistributionField<T>, t: T) -> Option<Vec<T>> {
        let g = self.g.as_ref()?;
        let grid = field.grid();
        let mut out = Vec::with_capacity(grid.len());
        for &x in grid.xgrid().nodes() {
            for &v in grid.vgrid().nodes() {
                out.push(g(t, x, v));
            }
        }
        Some(out)
    }
}

/// How the missing levels of a multistep scheme are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Startup {
    /// One-step second-order steps of the same Δt.
    #[default]
    OneStep2,
    /// The BDF ladder: a first-order step with the source at `t^(k+1)`, then BDF2.
    LowerOrder,
}

impl FromStr for Startup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "onestep2" => Ok(Startup::OneStep2),
            "lower" | "lower_order" => Ok(Startup::LowerOrder),
            other => Err(Error::InvalidParameter(format!("unknown start-up '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions<T> {
    /// Overrides the scheme's Taylor truncation order.
    pub taylor_order: Option<usize>,
    pub startup: Startup,
    /// Turn CFL violations into errors instead of warnings.
    pub strict_cfl: bool,
    pub neutrality: Neutrality<T>,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            taylor_order: None,
            startup: Startup::default(),
            strict_cfl: false,
            neutrality: Neutrality::default(),
        }
    }
}

#[derive(Debug, Clone)]
struct Level<T: Real> {
    field: DistributionField<T>,
    efield: ElectricFieldState<T>,
    phi: Option<Vec<T>>,
}

impl<T: Real> Level<T> {
    fn phi(&mut self) -> Result<&[T]> {
        if self.phi.is_none() {
            self.phi = Some(transport(&self.field, &self.efield.nodal));
        }
        Ok(self.phi.as_deref().unwrap_or_default())
    }
}

/// Solution `(f^(k), E^(k))` at `t^k` plus the previous levels kept for multistep schemes.
#[derive(Debug, Clone)]
pub struct TimeState<T: Real> {
    t0: T,
    k: usize,
    dt: T,
    current: Level<T>,
    history: VecDeque<Level<T>>,
    last_cfl_ok: bool,
    drift_reported: bool,
    pub options: SolverOptions<T>,
}

/// Per-step report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<T> {
    pub cfl_bound: T,
    pub cfl_ok: bool,
}

const MAX_HISTORY: usize = 2;

impl<T: Real> TimeState<T> {
    pub fn new(field: DistributionField<T>, dt: T, options: SolverOptions<T>) -> Result<Self> {
        Self::starting_at(field, T::zero(), dt, options)
    }

    pub fn starting_at(field: DistributionField<T>, t0: T, dt: T, options: SolverOptions<T>) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        if !field.is_finite() {
            return Err(Error::NonFinite { step: 0 });
        }
        let efield = solve_for(&field, options.neutrality)?;
        Ok(Self {
            t0,
            k: 0,
            dt,
            current: Level { field, efield, phi: None },
            history: VecDeque::with_capacity(MAX_HISTORY + 1),
            last_cfl_ok: true,
            drift_reported: false,
            options,
        })
    }

    /// State whose current level is the last of `levels`, the earlier entries filling the
    /// multistep history (oldest first, spaced by `dt`). `t0` is the time of the last level.
    pub fn from_levels(levels: Vec<DistributionField<T>>, t0: T, dt: T, options: SolverOptions<T>) -> Result<Self> {
        let mut levels = levels.into_iter().rev();
        let current = levels
            .next()
            .ok_or_else(|| Error::InvalidParameter("at least one level is required".into()))?;
        let mut state = Self::starting_at(current, t0, dt, options)?;
        for field in levels.take(MAX_HISTORY) {
            if !field.grid().same_as(state.current().grid()) {
                return Err(Error::InvalidParameter("history levels live on different grids".into()));
            }
            if !field.is_finite() {
                return Err(Error::NonFinite { step: 0 });
            }
            let efield = solve_for(&field, state.options.neutrality)?;
            state.history.push_back(Level { field, efield, phi: None });
        }
        Ok(state)
    }

    /// Current time `t0 + k Δt`.
    pub fn t(&self) -> T {
        self.t0 + T::from_count(self.k) * self.dt
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn current(&self) -> &DistributionField<T> {
        &self.current.field
    }

    pub fn efield(&self) -> &ElectricFieldState<T> {
        &self.current.efield
    }

    pub fn history_depth(&self) -> usize {
        self.history.len()
    }

    /// Previous levels, most recent first.
    pub fn history(&self) -> impl Iterator<Item = (&DistributionField<T>, &ElectricFieldState<T>)> {
        self.history.iter().map(|l| (&l.field, &l.efield))
    }

    /// Whether the most recent step satisfied the CFL bound.
    pub fn cfl_ok(&self) -> bool {
        self.last_cfl_ok
    }

    pub fn diagnostics(&self) -> DiagnosticsRecord<T> {
        diagnostics::record(self.t(), self.current(), self.efield(), self.last_cfl_ok)
    }

    fn taylor_order(&self, scheme: SchemeKind) -> usize {
        self.options.taylor_order.unwrap_or(scheme.default_taylor_order())
    }

    fn check_cfl(&mut self) -> Result<StepOutcome<T>> {
        let bound = cfl_max_dt(self);
        let ok = self.dt <= bound;
        if !ok {
            if self.options.strict_cfl {
                return Err(Error::CflViolation {
                    step: self.k,
                    dt: self.dt.as_f64(),
                    bound: bound.as_f64(),
                });
            }
            warn!("step {}: dt = {} exceeds the CFL bound {}", self.k, self.dt, bound);
        }
        self.last_cfl_ok = ok;
        Ok(StepOutcome { cfl_bound: bound, cfl_ok: ok })
    }

    fn require_history(&self, needed: usize) -> Result<()> {
        if self.history.len() < needed {
            return Err(Error::InsufficientHistory {
                needed,
                available: self.history.len(),
            });
        }
        Ok(())
    }

    /// Installs `values` as level `k + 1`, re-solving the field and rotating history.
    fn commit(&mut self, values: Vec<T>) -> Result<()> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: self.k + 1 });
        }
        let field = self.current.field.with_values(values)?;
        // The neutrality policy guards the initial data. Later levels may drift by the
        // scheme's mass defect, which is reported once and otherwise ignored.
        let rho = charge_density(&field);
        if let Neutrality::Strict(tol) = self.options.neutrality {
            let drift = (rho.mean() - T::one()).abs();
            if drift > tol && !self.drift_reported {
                warn!("step {}: mean density drifted by {:e} (tolerance {:e})", self.k + 1, drift, tol);
                self.drift_reported = true;
            }
        }
        let efield = solve_field_with(&rho, field.grid().xgrid(), Neutrality::Project)?;
        let previous = std::mem::replace(&mut self.current, Level { field, efield, phi: None });
        self.history.push_front(previous);
        self.history.truncate(MAX_HISTORY);
        self.k += 1;
        Ok(())
    }

    /// Value of `f^(k-lag)` at the foot reached by going `(lag + 1) Δt` back along the
    /// first-order characteristics from each node, `lag = 0` being the current level.
    fn first_order_foot(&mut self, lag: usize, order: usize) -> Result<Vec<T>> {
        let dt = self.dt;
        let level = if lag == 0 { &mut self.current } else { &mut self.history[lag - 1] };
        let tau = dt * T::from_count(lag + 1);
        if order == 1 {
            level.phi()?;
            let phi = level.phi.as_deref().unwrap_or_default();
            let c = level.field.values();
            return Ok(c.iter().zip(phi).map(|(&c, &p)| c + tau * p).collect());
        }
        let disp = first_order_displacement(&level.field, &level.efield.nodal, tau);
        taylor_shifted_eval(&level.field, &disp, order)
    }
}

fn solve_for<T: Real>(field: &DistributionField<T>, neutrality: Neutrality<T>) -> Result<ElectricFieldState<T>> {
    solve_field_with(&charge_density(field), field.grid().xgrid(), neutrality)
}

fn transport<T: Real>(field: &DistributionField<T>, e: &[T]) -> Vec<T> {
    let grid = field.grid();
    let fx = apply_x(&grid.dx(1), field.values(), grid.nv());
    let fv = apply_v(&grid.dv(1), field.values(), grid.nx());
    combine_phi(grid, &fx, &fv, e)
}

/// `𝓘 = v τ`, `𝓙 = -E τ`.
fn first_order_displacement<T: Real>(field: &DistributionField<T>, e: &[T], tau: T) -> DisplacementField<T> {
    let grid = field.grid();
    let vs = grid.vgrid().nodes();
    let mut disp = DisplacementField::zeros(grid.len());
    for (n, &en) in e.iter().enumerate() {
        for (m, &v) in vs.iter().enumerate() {
            let k = n * vs.len() + m;
            disp.dxs[k] = v * tau;
            disp.dvs[k] = -en * tau;
        }
    }
    disp
}

/// Largest stable step `2π (N max|v| 2π/L_x + M max|E| 2π/L_v)⁻¹`; `+∞` without transport.
pub fn cfl_max_dt<T: Real>(state: &TimeState<T>) -> T {
    let grid = state.current().grid();
    let vmax = grid.vgrid().nodes().iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let emax = state.efield().max_abs();
    let rate = T::from_count(grid.nx()) * vmax * grid.xgrid().wavenumber()
        + T::from_count(grid.nv()) * emax * grid.vgrid().wavenumber();
    if rate == T::zero() {
        T::infinity()
    } else {
        T::two_pi() / rate
    }
}

/// `c^(k+1) = f^(k)(x̃, ṽ) + Δt g(t^k)`, with the foot value `c + ΔtΦ` at order 1.
pub fn step_euler<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    let outcome = state.check_cfl()?;
    let order = state.taylor_order(SchemeKind::Euler1);
    let mut next = state.first_order_foot(0, order)?;
    if let Some(g) = src.sample(state.current(), state.t()) {
        let dt = state.dt;
        next.iter_mut().zip(g).for_each(|(c, g)| *c = *c + dt * g);
    }
    state.commit(next)?;
    Ok(outcome)
}

/// Explicit two-step BDF:
/// `c^(k+1) = 4/3 (c^k + ΔtΦ^k) - 1/3 (c^(k-1) + 2ΔtΦ^(k-1)) + 2/3 Δt g(t^(k+1))`.
pub fn step_bdf2<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    state.require_history(1)?;
    let outcome = state.check_cfl()?;
    let order = state.taylor_order(SchemeKind::Bdf2);
    let f0 = state.first_order_foot(0, order)?;
    let f1 = state.first_order_foot(1, order)?;
    let (a0, a1) = (T::lit(4.0) / T::lit(3.0), T::lit(1.0) / T::lit(3.0));
    let mut next: Vec<T> = f0.iter().zip(&f1).map(|(&x, &y)| a0 * x - a1 * y).collect();
    add_source(state, src, T::lit(2.0) / T::lit(3.0), &mut next);
    state.commit(next)?;
    Ok(outcome)
}

/// Explicit three-step BDF with weights 18/11, -9/11, 2/11 and source weight 6/11.
pub fn step_bdf3<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    state.require_history(2)?;
    let outcome = state.check_cfl()?;
    let order = state.taylor_order(SchemeKind::Bdf3);
    let f0 = state.first_order_foot(0, order)?;
    let f1 = state.first_order_foot(1, order)?;
    let f2 = state.first_order_foot(2, order)?;
    let eleven = T::lit(11.0);
    let (a0, a1, a2) = (T::lit(18.0) / eleven, T::lit(9.0) / eleven, T::lit(2.0) / eleven);
    let mut next: Vec<T> = f0
        .iter()
        .zip(&f1)
        .zip(&f2)
        .map(|((&x, &y), &z)| a0 * x - a1 * y + a2 * z)
        .collect();
    add_source(state, src, T::lit(6.0) / eleven, &mut next);
    state.commit(next)?;
    Ok(outcome)
}

/// `c^(k+1) = c^k + ΔtΦ^k + Δt g(t^(k+1))`, the first member of the BDF family.
pub fn step_bdf1<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    let outcome = state.check_cfl()?;
    let order = state.taylor_order(SchemeKind::Euler1);
    let mut next = state.first_order_foot(0, order)?;
    add_source(state, src, T::one(), &mut next);
    state.commit(next)?;
    Ok(outcome)
}

fn add_source<T: Real>(state: &TimeState<T>, src: &SourceTerm<T>, weight: T, next: &mut [T]) {
    let t_next = state.t() + state.dt;
    if let Some(g) = src.sample(state.current(), t_next) {
        let w = weight * state.dt;
        next.iter_mut().zip(g).for_each(|(c, g)| *c = *c + w * g);
    }
}

/// One-step second-order scheme: second-order characteristic feet
/// `𝓘 = vΔt + ½EΔt²`, `𝓙 = -EΔt - ½(∂E/∂t - v ∂E/∂x)Δt²`, a Taylor evaluation of
/// order 2, and a trapezoidal source increment along the characteristic.
pub fn step_onestep2<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    let order = state.taylor_order(SchemeKind::OneStep2);
    onestep2(state, src, order)
}

fn onestep2<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>, order: usize) -> Result<StepOutcome<T>> {
    if src.g.is_some() && src.primitive.is_none() {
        return Err(Error::MissingPrimitive);
    }
    let outcome = state.check_cfl()?;
    let t = state.t();
    let dt = state.dt;
    let half = T::lit(0.5);

    let ddt = field_time_derivative(state.current(), src.primitive.as_deref().map(|g| g as &dyn Fn(T, T, T) -> T), t);
    let level = &mut state.current;
    let ddx = match &level.efield.ddx {
        Some(d) => d.clone(),
        None => charge_density(&level.field).values.iter().map(|&r| T::one() - r).collect(),
    };
    level.efield.ddt = Some(ddt.clone());

    let grid = level.field.grid().clone();
    let vs = grid.vgrid().nodes();
    let e = &level.efield.nodal;
    let mut disp = DisplacementField::zeros(grid.len());
    for n in 0..grid.nx() {
        for (m, &v) in vs.iter().enumerate() {
            let k = n * vs.len() + m;
            disp.dxs[k] = v * dt + half * e[n] * dt * dt;
            disp.dvs[k] = -e[n] * dt - half * (ddt[n] - v * ddx[n]) * dt * dt;
        }
    }
    let mut next = taylor_shifted_eval(&level.field, &disp, order)?;

    if let Some(g) = &src.g {
        let t_next = t + dt;
        let xs = grid.xgrid().nodes();
        for (n, &x) in xs.iter().enumerate() {
            for (m, &v) in vs.iter().enumerate() {
                let k = n * vs.len() + m;
                let foot = g(t, x - disp.dxs[k], v - disp.dvs[k]);
                let here = g(t_next, x, v);
                next[k] = next[k] + half * dt * (foot + here);
            }
        }
    }
    state.commit(next)?;
    Ok(outcome)
}

/// Takes one step of `scheme`; BDF schemes need their history filled first.
pub fn step<T: Real>(state: &mut TimeState<T>, scheme: SchemeKind, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    match scheme {
        SchemeKind::Euler1 => step_euler(state, src),
        SchemeKind::Bdf2 => step_bdf2(state, src),
        SchemeKind::Bdf3 => step_bdf3(state, src),
        SchemeKind::OneStep2 => step_onestep2(state, src),
    }
}

/// Fills the history needed by `scheme` according to `state.options.startup`.
pub fn bootstrap_history<T: Real>(state: &mut TimeState<T>, scheme: SchemeKind, src: &SourceTerm<T>) -> Result<usize> {
    let mut taken = 0;
    while state.history_depth() < scheme.history_depth() {
        bootstrap_step(state, src)?;
        taken += 1;
    }
    Ok(taken)
}

fn bootstrap_step<T: Real>(state: &mut TimeState<T>, src: &SourceTerm<T>) -> Result<StepOutcome<T>> {
    match (state.options.startup, state.history_depth()) {
        (Startup::OneStep2, _) => onestep2(state, src, SchemeKind::OneStep2.default_taylor_order()),
        (Startup::LowerOrder, 0) => step_bdf1(state, src),
        (Startup::LowerOrder, _) => step_bdf2(state, src),
    }
}

/// Number of steps `K` with `K Δt = span`, or an error when `span/Δt` is not an integer.
pub fn step_count<T: Real>(span: T, dt: T) -> Result<usize> {
    let ratio = span / dt;
    let k = ratio.round();
    let tol = T::lit(4.0) * T::epsilon() * k.max(T::one());
    if !(span > T::zero()) || (ratio - k).abs() > tol {
        return Err(Error::NonIntegerSteps {
            t_end: span.as_f64(),
            dt: dt.as_f64(),
        });
    }
    Ok(k.to_usize().unwrap_or(0))
}

/// Runs `scheme` from the current time to `t_end`, calling `observer` after every step.
///
/// Missing multistep history is produced on the fly (see [`Startup`]); start-up steps
/// are reported to the observer like any other step.
pub fn advance<T, F>(
    state: &mut TimeState<T>,
    scheme: SchemeKind,
    src: &SourceTerm<T>,
    t_end: T,
    mut observer: F,
) -> Result<()>
where
    T: Real,
    F: FnMut(&TimeState<T>, &DiagnosticsRecord<T>),
{
    let steps = step_count(t_end - state.t(), state.dt)?;
    for _ in 0..steps {
        if state.history_depth() < scheme.history_depth() {
            bootstrap_step(state, src)?;
        } else {
            step(state, scheme, src)?;
        }
        let rec = state.diagnostics();
        observer(state, &rec);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::PhaseGrid;
    use std::f64::consts::PI;

    fn maxwellian_state(dt: f64) -> TimeState<f64> {
        let g = Arc::new(PhaseGrid::from_bounds(16, 0.0, 4.0 * PI, 32, -8.0, 8.0).unwrap());
        let f = DistributionField::from_fn(g, |_, v| (-v * v / 2.0).exp() / (2.0 * PI).sqrt());
        TimeState::new(f, dt, SolverOptions::default()).unwrap()
    }

    #[test]
    fn uniform_maxwellian_is_a_fixed_point() {
        for scheme in SchemeKind::ALL {
            let mut s = maxwellian_state(0.01);
            let start = s.current().values().to_vec();
            advance(&mut s, scheme, &SourceTerm::none(), 0.05, |_, _| {}).unwrap();
            let drift = s
                .current()
                .values()
                .iter()
                .zip(&start)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(drift < 1e-14, "{scheme}: {drift}");
        }
    }

    #[test]
    fn cfl_bound_arithmetic() {
        let g = Arc::new(PhaseGrid::from_bounds(32, 0.0, 2.0 * PI, 32, -PI, PI).unwrap());
        let f = DistributionField::from_fn(g, |_, v| (-4.0 * v * v).exp() * 2.0 / PI.sqrt());
        let s = TimeState::new(f, 0.01, SolverOptions::default()).unwrap();
        assert!((cfl_max_dt(&s) - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn bdf_needs_history() {
        let mut s = maxwellian_state(0.01);
        assert_eq!(
            step_bdf2(&mut s, &SourceTerm::none()),
            Err(Error::InsufficientHistory { needed: 1, available: 0 })
        );
        assert_eq!(
            step_bdf3(&mut s, &SourceTerm::none()),
            Err(Error::InsufficientHistory { needed: 2, available: 0 })
        );
    }

    #[test]
    fn bootstrap_depths() {
        let mut s = maxwellian_state(0.01);
        assert_eq!(bootstrap_history(&mut s, SchemeKind::Euler1, &SourceTerm::none()).unwrap(), 0);
        assert_eq!(s.k(), 0);
        assert_eq!(bootstrap_history(&mut s, SchemeKind::Bdf2, &SourceTerm::none()).unwrap(), 1);
        assert_eq!(s.history_depth(), 1);
        assert_eq!(bootstrap_history(&mut s, SchemeKind::Bdf3, &SourceTerm::none()).unwrap(), 1);
        assert_eq!(s.history_depth(), 2);
    }

    #[test]
    fn observer_called_once_per_step() {
        let mut s = maxwellian_state(0.01);
        let mut calls = 0;
        advance(&mut s, SchemeKind::Bdf3, &SourceTerm::none(), 0.1, |_, _| calls += 1).unwrap();
        assert_eq!(calls, 10);
        assert_eq!(s.k(), 10);
        assert!((s.t() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_fractional_step_count() {
        assert_eq!(step_count(1.0, 0.01).unwrap(), 100);
        assert_eq!(step_count(30.0, 0.01).unwrap(), 3000);
        assert!(step_count(1.0, 0.013).is_err());
        assert!(step_count(1.0, 0.001325).is_err());
        assert_eq!(step_count(1.0, 0.00125).unwrap(), 800);
    }

    #[test]
    fn missing_primitive() {
        let mut s = maxwellian_state(0.01);
        let src = SourceTerm::new(Arc::new(|_, _, _| 0.0), None);
        assert_eq!(step_onestep2(&mut s, &src), Err(Error::MissingPrimitive));
    }

    #[test]
    fn strict_cfl_aborts() {
        let mut s = maxwellian_state(1.0);
        s.options.strict_cfl = true;
        assert!(matches!(step_euler(&mut s, &SourceTerm::none()), Err(Error::CflViolation { .. })));
        let mut lax = maxwellian_state(1.0);
        let out = step_euler(&mut lax, &SourceTerm::none()).unwrap();
        assert!(!out.cfl_ok);
        assert!(!lax.diagnostics().cfl_ok);
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeKind::ALL {
            assert_eq!(s.name().parse::<SchemeKind>().unwrap(), s);
        }
        assert!("rk4".parse::<SchemeKind>().is_err());
    }
}
