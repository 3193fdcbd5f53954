//! Periodic Fourier-Lagrange collocation on equispaced nodes.
//!
//! Everything here works on a physical interval `[origin, origin + L)` through the
//! affine map `θ = 2π (x - origin) / L`; derivative matrices carry the `(2π/L)^s`
//! scaling.

mod basis;
mod derivative;
mod grid;
mod modes;

pub use basis::{basis_value, quadrature, SINGULARITY_EPS};
pub(crate) use basis::basis_row;
pub use derivative::{apply_derivative, derivative_matrix, DerivativeMatrix, DENSE_LIMIT};
pub(crate) use derivative::dot;
pub use grid::{make_grid, NodeGrid};
pub use modes::{analyze_modes, synthesize_modes, FourierModes};
