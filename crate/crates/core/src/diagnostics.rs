//! Discrete invariants, field-mode tracking and relative error norms.

use crate::error::{Error, Result};
use crate::field::ElectricFieldState;
use crate::phase_space::DistributionField;
use crate::scalar::Real;
use crate::spectral::NodeGrid;

/// One row of the per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    /// Discrete particle number Q.
    pub particles: T,
    /// Discrete momentum P.
    pub momentum: T,
    /// Kinetic plus field energy.
    pub energy: T,
    /// Lowest charge-mode amplitude `|â₁|`, see [`first_mode_amplitude`].
    pub first_mode_a1: T,
    /// Magnitude of the first Fourier mode of E.
    pub first_mode_abs: T,
    pub cfl_ok: bool,
}

impl<T: Real> DiagnosticsRecord<T> {
    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.particles,
            self.momentum,
            self.energy,
            self.first_mode_a1,
            self.first_mode_abs,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// First-mode amplitudes of a field solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstMode<T> {
    /// `|â₁|`: cosine coefficient of the lowest charge perturbation mode. Since
    /// `∂E/∂x = 1 - ρ`, it equals `κ₁` times the lowest sine amplitude of E.
    pub a1: T,
    /// `sqrt(a² + b²)` of the lowest mode of E itself.
    pub abs: T,
}

/// `Q = (L_x/N)(L_v/M) Σ c_nm`.
pub fn total_particles<T: Real>(field: &DistributionField<T>) -> T {
    field.grid().cell_area() * field.values().iter().copied().sum::<T>()
}

/// `P = (L_x/N)(L_v/M) Σ v_m c_nm`.
pub fn total_momentum<T: Real>(field: &DistributionField<T>) -> T {
    let grid = field.grid();
    let vs = grid.vgrid().nodes();
    let mut acc = T::zero();
    for n in 0..grid.nx() {
        for (&c, &v) in field.row(n).iter().zip(vs) {
            acc = acc + v * c;
        }
    }
    grid.cell_area() * acc
}

/// `½ [(L_x/N)(L_v/M) Σ v_m² c_nm + (L_x/N) Σ E(x_n)²]`.
pub fn total_energy<T: Real>(field: &DistributionField<T>, efield: &ElectricFieldState<T>) -> T {
    let grid = field.grid();
    let vs = grid.vgrid().nodes();
    let mut kinetic = T::zero();
    for n in 0..grid.nx() {
        for (&c, &v) in field.row(n).iter().zip(vs) {
            kinetic = kinetic + v * v * c;
        }
    }
    let potential: T = efield.nodal.iter().map(|&e| e * e).sum();
    T::lit(0.5) * (grid.cell_area() * kinetic + grid.xgrid().spacing() * potential)
}

pub fn first_mode_amplitude<T: Real>(efield: &ElectricFieldState<T>, xgrid: &NodeGrid<T>) -> FirstMode<T> {
    let a = efield.modes.cos_coeffs.first().copied().unwrap_or_else(T::zero);
    let b = efield.modes.sin_coeffs.first().copied().unwrap_or_else(T::zero);
    FirstMode {
        a1: xgrid.wavenumber() * b.abs(),
        abs: a.hypot(b),
    }
}

/// Relative discrete L² distance `‖a - b‖ / ‖b‖` over phase space.
pub fn l2_relative_error<T: Real>(a: &DistributionField<T>, b: &DistributionField<T>) -> Result<T> {
    if !a.grid().same_as(b.grid()) {
        return Err(Error::InvalidParameter("fields live on different grids".into()));
    }
    relative_l2(a.values(), b.values())
}

/// Relative discrete L² distance of two nodal arrays on the x grid.
pub fn l2_relative_error_field<T: Real>(a: &[T], b: &[T], xgrid: &NodeGrid<T>) -> Result<T> {
    xgrid.check_len(a.len())?;
    xgrid.check_len(b.len())?;
    relative_l2(a, b)
}

// equal quadrature weights cancel in the ratio
fn relative_l2<T: Real>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: b.len(),
            got: a.len(),
        });
    }
    let num: T = a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum();
    let den: T = b.iter().map(|&y| y * y).sum();
    if den == T::zero() {
        return Err(Error::ZeroNorm);
    }
    Ok((num / den).sqrt())
}

/// Collects every diagnostic for a state.
pub fn record<T: Real>(
    t: T,
    field: &DistributionField<T>,
    efield: &ElectricFieldState<T>,
    cfl_ok: bool,
) -> DiagnosticsRecord<T> {
    let mode = first_mode_amplitude(efield, field.grid().xgrid());
    DiagnosticsRecord {
        t,
        particles: total_particles(field),
        momentum: total_momentum(field),
        energy: total_energy(field, efield),
        first_mode_a1: mode.a1,
        first_mode_abs: mode.abs,
        cfl_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{charge_density, solve_field};
    use crate::phase_space::PhaseGrid;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn maxwellian_grid() -> Arc<PhaseGrid<f64>> {
        Arc::new(PhaseGrid::from_bounds(16, 0.0, 4.0 * PI, 64, -10.0, 10.0).unwrap())
    }

    #[test]
    fn empty_state() {
        let g = maxwellian_grid();
        let f = DistributionField::zeros(g.clone());
        let e = ElectricFieldState::zero(16);
        assert_eq!(total_particles(&f), 0.0);
        assert_eq!(total_momentum(&f), 0.0);
        assert_eq!(total_energy(&f, &e), 0.0);
        let m = first_mode_amplitude(&e, g.xgrid());
        assert_eq!((m.a1, m.abs), (0.0, 0.0));
    }

    #[test]
    fn maxwellian_moments() {
        let g = maxwellian_grid();
        let f = DistributionField::from_fn(g.clone(), |_, v| (-v * v / 2.0).exp() / (2.0 * PI).sqrt());
        let e = ElectricFieldState::zero(16);
        assert!((total_particles(&f) - 4.0 * PI).abs() < 1e-10);
        assert!(total_momentum(&f).abs() < 1e-12);
        assert!((total_energy(&f, &e) - 2.0 * PI).abs() < 1e-10);

        let shifted = DistributionField::from_fn(g, |_, v| (-(v - 1.0).powi(2) / 2.0).exp() / (2.0 * PI).sqrt());
        assert!((total_momentum(&shifted) - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn landau_first_mode() {
        let x = make_grid(32, 0.0, 4.0 * PI).unwrap();
        let g = Arc::new(PhaseGrid::new(x.clone(), make_grid(64, -10.0, 20.0).unwrap()));
        let f = DistributionField::from_fn(g, |x, v| {
            (1.0 + 0.01 * (0.5 * x).cos()) * (-v * v / 2.0).exp() / (2.0 * PI).sqrt()
        });
        let e = solve_field(&charge_density(&f), &x).unwrap();
        let m = first_mode_amplitude(&e, &x);
        assert!((m.abs - 0.02).abs() < 1e-12);
        assert!((m.a1 - 0.01).abs() < 1e-12);
    }

    #[test]
    fn error_norms() {
        let g = maxwellian_grid();
        let b = DistributionField::from_fn(g.clone(), |x, v| 1.0 + x.sin() * v.cos());
        assert_eq!(l2_relative_error(&b, &b).unwrap(), 0.0);
        let a = b.with_values(b.values().iter().map(|v| 1.01 * v).collect()).unwrap();
        assert!((l2_relative_error(&a, &b).unwrap() - 0.01).abs() < 1e-12);
        let z = DistributionField::zeros(g);
        assert_eq!(l2_relative_error(&b, &z), Err(Error::ZeroNorm));

        let x = make_grid(4, 0.0, 1.0).unwrap();
        assert_eq!(l2_relative_error_field(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0], &x).unwrap(), 0.0);
        assert!(l2_relative_error_field(&[1.0; 3], &[1.0; 4], &x).is_err());
    }

    #[test]
    fn grid_mismatch() {
        let a = DistributionField::from_fn(maxwellian_grid(), |_, _| 1.0);
        let other = Arc::new(PhaseGrid::from_bounds(16, 0.0, 1.0, 64, -10.0, 10.0).unwrap());
        let b = DistributionField::from_fn(other, |_, _| 1.0);
        assert!(l2_relative_error(&a, &b).is_err());
    }
}
