use super::grid::NodeGrid;
use crate::error::Result;
use crate::scalar::Real;

/// Distance (in reference radians) below which the cardinal function takes its limit value.
pub const SINGULARITY_EPS: f64 = 1e-12;

/// Value at `x` of the `i`-th periodic cardinal (Fourier-Lagrange) basis function.
///
/// For even `N` this is `(1/N) sin(N d/2) cot(d/2)` with `d = θ - θ_i`; for odd `N`
/// the cotangent becomes a cosecant. Evaluation is periodic in `x`.
pub fn basis_value<T: Real>(grid: &NodeGrid<T>, i: usize, x: T) -> T {
    let n = grid.count();
    let nn = T::from_count(n);
    // offset from node i in node units, wrapped to [-N/2, N/2)
    let mut u = grid.node_coordinate(x) - T::from_count(i);
    let half = nn / T::lit(2.0);
    if u >= half {
        u = u - nn;
    } else if u < -half {
        u = u + nn;
    }
    let nearest = u.round();
    let eps = T::lit(SINGULARITY_EPS) * nn / T::two_pi();
    if (u - nearest).abs() < eps {
        return if nearest == T::zero() { T::one() } else { T::zero() };
    }
    let pi = T::PI();
    let numer = (pi * u).sin();
    let half_angle = pi * u / nn;
    if n % 2 == 0 {
        numer / (nn * half_angle.tan())
    } else {
        numer / (nn * half_angle.sin())
    }
}

/// Values of every basis function at `x`, written into `out`.
pub(crate) fn basis_row<T: Real>(grid: &NodeGrid<T>, x: T, out: &mut [T]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = basis_value(grid, i, x);
    }
}

/// Equal-weight periodic quadrature `(L/N) Σ values[i]`.
pub fn quadrature<T: Real>(grid: &NodeGrid<T>, values: &[T]) -> Result<T> {
    grid.check_len(values.len())?;
    Ok(grid.spacing() * values.iter().copied().sum::<T>())
}
