//! Semi-Lagrangian Fourier spectral-collocation solver for the 1D-1V
//! Vlasov–Poisson system
//!
//! ```text
//! ∂f/∂t + v ∂f/∂x - E ∂f/∂v = g,    ∂E/∂x = 1 - ∫ f dv
//! ```
//!
//! on a doubly periodic phase space. The distribution is stored at the nodes of a
//! tensor Fourier grid and advanced by following characteristics backwards, with the
//! displaced values obtained from a Taylor expansion built out of spectral
//! derivative matrices.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for `f32` and
//! `f64`); the [`f64`-based aliases](Grid) cover the common case.

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod integrators;
pub mod phase_space;
pub mod scalar;
pub mod scenarios;
pub mod spectral;

pub use diagnostics::{DiagnosticsRecord, FirstMode};
pub use error::{Error, Result};
pub use field::{ChargeDensity, ElectricFieldState, Neutrality};
pub use integrators::{advance, SchemeKind, SolverOptions, SourceTerm, Startup, StepOutcome, TimeState};
pub use phase_space::{DisplacementField, DistributionField, PhaseGrid};
pub use scalar::Real;
pub use scenarios::{Domain, ScenarioConfig, ScenarioKind};
pub use spectral::{DerivativeMatrix, FourierModes, NodeGrid};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Grid = NodeGrid<f64>;
pub type Phase = PhaseGrid<f64>;
pub type Distribution = DistributionField<f64>;
pub type Field = ElectricFieldState<f64>;
pub type State = TimeState<f64>;
pub type Source = SourceTerm<f64>;
pub type Scenario = ScenarioConfig<f64>;
pub type Record = DiagnosticsRecord<f64>;

pub type Grid32 = NodeGrid<f32>;
pub type Phase32 = PhaseGrid<f32>;
pub type Distribution32 = DistributionField<f32>;
pub type State32 = TimeState<f32>;
