//! Charge density, periodic Poisson/Gauss solve and the field derivatives used by
//! the second-order characteristics.

use crate::error::{Error, Result};
use crate::phase_space::DistributionField;
use crate::scalar::Real;
use crate::spectral::{analyze_modes, synthesize_modes, FourierModes, NodeGrid};

/// Default bound on `|mean(ρ) - 1|` accepted by [`solve_field`].
pub const NEUTRALITY_TOL: f64 = 1e-8;

/// Electron density `ρ(x_n)` at the x nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity<T> {
    pub values: Vec<T>,
}

impl<T: Real> ChargeDensity<T> {
    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_count(self.values.len())
    }
}

/// Electric field at the x nodes together with its Fourier modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectricFieldState<T> {
    pub nodal: Vec<T>,
    pub modes: FourierModes<T>,
    /// `∂E/∂x = 1 - ρ` at the nodes.
    pub ddx: Option<Vec<T>>,
    /// `∂E/∂t` at the nodes, filled by schemes that need it.
    pub ddt: Option<Vec<T>>,
}

impl<T: Real> ElectricFieldState<T> {
    pub fn zero(count: usize) -> Self {
        Self {
            nodal: vec![T::zero(); count],
            modes: FourierModes::zeros(count),
            ddx: Some(vec![T::zero(); count]),
            ddt: None,
        }
    }

    pub fn max_abs(&self) -> T {
        self.nodal.iter().fold(T::zero(), |m, e| m.max(e.abs()))
    }
}

/// What to do when the density does not integrate to the ion background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Neutrality<T> {
    /// Fail when `|mean(ρ) - 1|` exceeds the tolerance.
    Strict(T),
    /// Drop the mean of `ρ - 1` silently.
    Project,
}

impl<T: Real> Default for Neutrality<T> {
    fn default() -> Self {
        Neutrality::Strict(T::lit(NEUTRALITY_TOL))
    }
}

/// `ρ_n = (L_v/M) Σ_j c_nj`.
pub fn charge_density<T: Real>(field: &DistributionField<T>) -> ChargeDensity<T> {
    let grid = field.grid();
    let hv = grid.vgrid().spacing();
    let values = (0..grid.nx())
        .map(|n| hv * field.row(n).iter().copied().sum::<T>())
        .collect();
    ChargeDensity { values }
}

/// Solves `∂E/∂x = 1 - ρ` with zero-mean `E` under the default neutrality tolerance.
pub fn solve_field<T: Real>(rho: &ChargeDensity<T>, xgrid: &NodeGrid<T>) -> Result<ElectricFieldState<T>> {
    solve_field_with(rho, xgrid, Neutrality::default())
}

pub fn solve_field_with<T: Real>(
    rho: &ChargeDensity<T>,
    xgrid: &NodeGrid<T>,
    neutrality: Neutrality<T>,
) -> Result<ElectricFieldState<T>> {
    xgrid.check_len(rho.values.len())?;
    if let Neutrality::Strict(tol) = neutrality {
        let mean = rho.mean();
        if !((mean - T::one()).abs() <= tol) {
            return Err(Error::Neutrality {
                mean: mean.as_f64(),
                tolerance: tol.as_f64(),
            });
        }
    }
    let perturbation: Vec<T> = rho.values.iter().map(|&r| r - T::one()).collect();
    let rho_modes = analyze_modes(xgrid, &perturbation)?;
    let half = xgrid.count() / 2;
    let k1 = xgrid.wavenumber();
    let mut modes = FourierModes::zeros(xgrid.count());
    // the Nyquist pair stays zero: its sine is invisible on the grid
    for n in 1..half {
        let kappa = k1 * T::from_count(n);
        modes.cos_coeffs[n - 1] = rho_modes.sin_coeffs[n - 1] / kappa;
        modes.sin_coeffs[n - 1] = -rho_modes.cos_coeffs[n - 1] / kappa;
    }
    let nodal = synthesize_modes(&modes, xgrid)?;
    let ddx = rho.values.iter().map(|&r| T::one() - r).collect();
    Ok(ElectricFieldState {
        nodal,
        modes,
        ddx: Some(ddx),
        ddt: None,
    })
}

/// Ampère relation `∂E/∂t(x_n) = (L_v/M) Σ_j [v_j c_nj - G(t, x_n, v_j)]`, with the
/// integration constant fixed to zero. Without a primitive `G` the source part drops out.
pub fn field_time_derivative<T: Real>(
    field: &DistributionField<T>,
    source_primitive: Option<&dyn Fn(T, T, T) -> T>,
    t: T,
) -> Vec<T> {
    let grid = field.grid();
    let hv = grid.vgrid().spacing();
    let vs = grid.vgrid().nodes();
    grid.xgrid()
        .nodes()
        .iter()
        .enumerate()
        .map(|(n, &x)| {
            let row = field.row(n);
            let mut acc = T::zero();
            for (&c, &v) in row.iter().zip(vs) {
                acc = acc + v * c;
                if let Some(g) = source_primitive {
                    acc = acc - g(t, x, v);
                }
            }
            hv * acc
        })
        .collect()
}
