//! Benchmark problems: a manufactured solution with a source, the two-stream
//! instability and Landau damping.

use std::sync::Arc;

use log::info;

use crate::error::{Error, Result};
use crate::integrators::SourceTerm;
use crate::phase_space::{DistributionField, PhaseGrid};
use crate::scalar::Real;

/// Rectangle `[x_min, x_max) × [v_min, v_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub x_min: T,
    pub x_max: T,
    pub v_min: T,
    pub v_max: T,
}

impl<T: Real> Domain<T> {
    pub fn new(x_min: T, x_max: T, v_min: T, v_max: T) -> Self {
        Self { x_min, x_max, v_min, v_max }
    }

    pub fn lx(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn lv(&self) -> T {
        self.v_max - self.v_min
    }

    pub fn grid(&self, nx: usize, nv: usize) -> Result<PhaseGrid<T>> {
        PhaseGrid::from_bounds(nx, self.x_min, self.x_max, nv, self.v_min, self.v_max)
    }

    /// Whether `grid` spans this domain, up to round-off.
    pub fn matches(&self, grid: &PhaseGrid<T>) -> bool {
        let close = |a: T, b: T, scale: T| (a - b).abs() <= T::lit(1e-12) * scale.abs().max(T::one());
        let (x, v) = (grid.xgrid(), grid.vgrid());
        close(x.origin(), self.x_min, self.lx())
            && close(x.end(), self.x_max, self.lx())
            && close(v.origin(), self.v_min, self.lv())
            && close(v.end(), self.v_max, self.lv())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKind<T> {
    /// `f = (2/√π)(1 - cos(2x - 2πt)) e^{-4v²}`, `E = ½ sin(2x - 2πt)`, driven by a source.
    Manufactured,
    TwoStream { alpha: T, beta: T, epsilon: T, kappa: T },
    Landau { gamma: T, kappa: T },
}

impl<T> ScenarioKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Manufactured => "manufactured",
            ScenarioKind::TwoStream { .. } => "two_stream",
            ScenarioKind::Landau { .. } => "landau",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig<T> {
    pub kind: ScenarioKind<T>,
    pub domain: Domain<T>,
}

impl<T: Real> ScenarioConfig<T> {
    /// `[0, 2π] × [-π, π]`.
    pub fn manufactured() -> Self {
        let pi = T::PI();
        Self {
            kind: ScenarioKind::Manufactured,
            domain: Domain::new(T::zero(), T::two_pi(), -pi, pi),
        }
    }

    /// α = 1/√8, β = 1, ε = 1e-3, κ = 0.5 on `[0, 4π] × [-5, 5]`.
    pub fn two_stream() -> Self {
        Self {
            kind: ScenarioKind::TwoStream {
                alpha: T::one() / T::lit(8.0).sqrt(),
                beta: T::one(),
                epsilon: T::lit(1e-3),
                kappa: T::lit(0.5),
            },
            domain: Domain::new(T::zero(), T::lit(4.0) * T::PI(), T::lit(-5.0), T::lit(5.0)),
        }
    }

    /// `[0, 4π] × [-10, 10]` with κ = 0.5.
    pub fn landau(gamma: T) -> Self {
        Self {
            kind: ScenarioKind::Landau { gamma, kappa: T::lit(0.5) },
            domain: Domain::new(T::zero(), T::lit(4.0) * T::PI(), T::lit(-10.0), T::lit(10.0)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.domain;
        for (name, lo, hi) in [("x", d.x_min, d.x_max), ("v", d.v_min, d.v_max)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::Scenario(format!("empty or invalid {name} interval [{lo}, {hi}]")));
            }
        }
        let check_kappa = |kappa: T| -> Result<()> {
            let turns = kappa * d.lx() / T::two_pi();
            if !(kappa > T::zero()) || (turns - turns.round()).abs() > T::lit(1e-9) * turns.max(T::one()) {
                return Err(Error::Scenario(format!(
                    "κ L_x / 2π = {turns} must be a positive integer (κ = {kappa}, L_x = {})",
                    d.lx()
                )));
            }
            Ok(())
        };
        match self.kind {
            ScenarioKind::Manufactured => {
                let reference = Self::manufactured().domain;
                let close = |a: T, b: T| (a - b).abs() <= T::lit(1e-9);
                if !(close(d.x_min, reference.x_min)
                    && close(d.x_max, reference.x_max)
                    && close(d.v_min, reference.v_min)
                    && close(d.v_max, reference.v_max))
                {
                    return Err(Error::Scenario("the manufactured problem lives on [0, 2π] × [-π, π]".into()));
                }
                Ok(())
            }
            ScenarioKind::TwoStream { alpha, beta, epsilon, kappa } => {
                if !(alpha > T::zero()) {
                    return Err(Error::Scenario(format!("α must be positive, got {alpha}")));
                }
                if !beta.is_finite() || !(epsilon >= T::zero()) {
                    return Err(Error::Scenario(format!("invalid β = {beta} or ε = {epsilon}")));
                }
                check_kappa(kappa)
            }
            ScenarioKind::Landau { gamma, kappa } => {
                if !(gamma >= T::zero()) {
                    return Err(Error::Scenario(format!("γ must be non-negative, got {gamma}")));
                }
                check_kappa(kappa)
            }
        }
    }
}

/// Nodal samples of the scenario's initial distribution.
pub fn init_field<T: Real>(cfg: &ScenarioConfig<T>, grid: Arc<PhaseGrid<T>>) -> Result<DistributionField<T>> {
    cfg.validate()?;
    if !cfg.domain.matches(&grid) {
        return Err(Error::Scenario(format!(
            "grid [{}, {}) × [{}, {}) does not match the scenario domain {:?}",
            grid.xgrid().origin(),
            grid.xgrid().end(),
            grid.vgrid().origin(),
            grid.vgrid().end(),
            cfg.domain
        )));
    }
    let field = match cfg.kind {
        ScenarioKind::Manufactured => DistributionField::from_fn(grid, |x, v| exact_f(T::zero(), x, v)),
        ScenarioKind::TwoStream { alpha, beta, epsilon, kappa } => {
            let width = alpha * T::lit(2.0).sqrt();
            let norm = T::one() / (T::lit(2.0) * alpha * T::two_pi().sqrt());
            DistributionField::from_fn(grid, |x, v| {
                let a = (v - beta) / width;
                let b = (v + beta) / width;
                norm * ((-a * a).exp() + (-b * b).exp()) * (T::one() + epsilon * (kappa * x).cos())
            })
        }
        ScenarioKind::Landau { gamma, kappa } => {
            let norm = T::one() / T::two_pi().sqrt();
            DistributionField::from_fn(grid, |x, v| {
                norm * (T::one() + gamma * (kappa * x).cos()) * (-v * v / T::lit(2.0)).exp()
            })
        }
    };
    info!(
        "{}: max |f| on the velocity boundary = {:e}",
        cfg.kind.name(),
        boundary_magnitude(&field)
    );
    Ok(field)
}

/// Largest |f| on the first velocity node row, where periodic wrapping meets.
pub fn boundary_magnitude<T: Real>(field: &DistributionField<T>) -> T {
    let nv = field.grid().nv();
    field
        .values()
        .chunks(nv)
        .fold(T::zero(), |m, row| m.max(row[0].abs()))
}

fn phase<T: Real>(t: T, x: T) -> T {
    T::lit(2.0) * x - T::two_pi() * t
}

fn amplitude<T: Real>(v: T) -> T {
    T::lit(2.0) / T::PI().sqrt() * (T::lit(-4.0) * v * v).exp()
}

fn exact_f<T: Real>(t: T, x: T, v: T) -> T {
    amplitude(v) * (T::one() - phase(t, x).cos())
}

fn exact_e<T: Real>(t: T, x: T) -> T {
    T::lit(0.5) * phase(t, x).sin()
}

/// Exact manufactured `f(t)` at the nodes and `E(t)` at the x-nodes.
pub fn manufactured_exact<T: Real>(t: T, grid: Arc<PhaseGrid<T>>) -> Result<(DistributionField<T>, Vec<T>)> {
    if !ScenarioConfig::manufactured().domain.matches(&grid) {
        return Err(Error::Scenario("the manufactured problem lives on [0, 2π] × [-π, π]".into()));
    }
    let e = grid.xgrid().nodes().iter().map(|&x| exact_e(t, x)).collect();
    Ok((DistributionField::from_fn(grid, |x, v| exact_f(t, x, v)), e))
}

/// `g = f_t + v f_x - E f_v` for the manufactured pair, with its x-primitive
///
/// ```text
/// g = A(v) sin φ (-2π + 6v - 4v cos φ)
/// G = A(v) (π cos φ - 3v cos φ + ½ v cos 2φ)
/// ```
///
/// where `A(v) = (2/√π) e^{-4v²}` and `φ = 2x - 2πt`.
pub fn manufactured_source<T: Real>() -> SourceTerm<T> {
    SourceTerm::new(Arc::new(manufactured_g::<T>), Some(Arc::new(manufactured_g_primitive::<T>)))
}

fn manufactured_g<T: Real>(t: T, x: T, v: T) -> T {
    let p = phase(t, x);
    amplitude(v) * p.sin() * (-T::two_pi() + T::lit(6.0) * v - T::lit(4.0) * v * p.cos())
}

fn manufactured_g_primitive<T: Real>(t: T, x: T, v: T) -> T {
    let p = phase(t, x);
    let c = p.cos();
    amplitude(v) * (T::PI() * c - T::lit(3.0) * v * c + T::lit(0.5) * v * (T::lit(2.0) * p).cos())
}
