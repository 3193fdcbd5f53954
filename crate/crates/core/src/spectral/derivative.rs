use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::grid::NodeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Above this size `apply` switches from the dense product to the FFT route.
pub const DENSE_LIMIT: usize = 256;

/// Dense `s`-th order spectral differentiation matrix, in physical units.
///
/// `entry(n, i)` is the `s`-th derivative of the `i`-th cardinal basis
/// function evaluated at node `n`.
#[derive(Clone)]
pub struct DerivativeMatrix<T: Real> {
    size: usize,
    order: usize,
    entries: Vec<T>,
    fft: Option<FftRoute<T>>,
}

#[derive(Clone)]
struct FftRoute<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    multipliers: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for DerivativeMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivativeMatrix")
            .field("size", &self.size)
            .field("order", &self.order)
            .field("fft", &self.fft.is_some())
            .finish()
    }
}

impl<T: Real> DerivativeMatrix<T> {
    pub fn new(grid: &NodeGrid<T>, order: usize) -> Self {
        let n = grid.count();
        let reference: Vec<T> = match order {
            0 => identity(n),
            1 => first_order_closed_form(n),
            2 => second_order_closed_form(n),
            _ => circulant(&trig_sum_generator(n, order)),
        };
        let scale = grid.wavenumber().powi(order as i32);
        let entries = reference.into_iter().map(|e| e * scale).collect();
        let fft = (n > DENSE_LIMIT && order > 0).then(|| FftRoute::new(n, order, grid.wavenumber()));
        Self {
            size: n,
            order,
            entries,
            fft,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> T {
        self.entries[row * self.size + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }

    /// Nodal values of the `s`-th derivative of the interpolant of `values`.
    pub fn apply(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                got: values.len(),
            });
        }
        if let Some(route) = &self.fft {
            return Ok(route.apply(values));
        }
        Ok(self.apply_dense(values))
    }

    pub fn apply_dense(&self, values: &[T]) -> Vec<T> {
        (0..self.size)
            .map(|n| dot(self.row(n), values))
            .collect()
    }
}

/// Builds the order-`s` derivative matrix for `grid`.
pub fn derivative_matrix<T: Real>(grid: &NodeGrid<T>, order: usize) -> DerivativeMatrix<T> {
    DerivativeMatrix::new(grid, order)
}

/// `result[n] = Σ_i D[n][i] values[i]`.
pub fn apply_derivative<T: Real>(d: &DerivativeMatrix<T>, values: &[T]) -> Result<Vec<T>> {
    d.apply(values)
}

#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + *x * *y;
    }
    acc
}

fn identity<T: Real>(n: usize) -> Vec<T> {
    let mut e = vec![T::zero(); n * n];
    for i in 0..n {
        e[i * n + i] = T::one();
    }
    e
}

fn sign<T: Real>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn first_order_closed_form<T: Real>(n: usize) -> Vec<T> {
    let nn = T::from_count(n);
    let half = T::lit(0.5);
    let mut e = vec![T::zero(); n * n];
    for row in 0..n {
        for col in row + 1..n {
            let k = row as i64 - col as i64;
            let arg = T::PI() * T::lit(k as f64) / nn;
            let v = if n % 2 == 0 {
                half * sign::<T>(k) / arg.tan()
            } else {
                half * sign::<T>(k) / arg.sin()
            };
            e[row * n + col] = v;
            e[col * n + row] = -v;
        }
    }
    e
}

fn second_order_closed_form<T: Real>(n: usize) -> Vec<T> {
    let nn = T::from_count(n);
    let half = T::lit(0.5);
    let diag = if n % 2 == 0 {
        -nn * nn / T::lit(12.0) - T::one() / T::lit(6.0)
    } else {
        -(nn * nn - T::one()) / T::lit(12.0)
    };
    let mut e = vec![T::zero(); n * n];
    for row in 0..n {
        e[row * n + row] = diag;
        for col in row + 1..n {
            let k = row as i64 - col as i64;
            let arg = T::PI() * T::lit(k as f64) / nn;
            let s = arg.sin();
            let v = if n % 2 == 0 {
                -half * sign::<T>(k) / (s * s)
            } else {
                -half * sign::<T>(k) * arg.cos() / (s * s)
            };
            e[row * n + col] = v;
            e[col * n + row] = v;
        }
    }
    e
}

/// First column `g[k] = B_0^{(s)}(θ_k)` of the reference-coordinate matrix,
/// obtained by differentiating the cardinal function mode by mode.
/// Odd derivatives drop the Nyquist cosine (its odd derivatives vanish at nodes).
pub(crate) fn trig_sum_generator<T: Real>(n: usize, order: usize) -> Vec<T> {
    let nn = T::from_count(n);
    let top = (n + 1) / 2 - 1;
    let cos_table: Vec<T> = (0..n)
        .map(|j| (T::two_pi() * T::from_count(j) / nn).cos())
        .collect();
    let sin_table: Vec<T> = (0..n)
        .map(|j| (T::two_pi() * T::from_count(j) / nn).sin())
        .collect();
    let even = order % 2 == 0;
    // i^s for even s is (-1)^{s/2}; for odd s the pair (ij)^s e^{ijθ} + c.c. is 2 i^{s+1} j^s sin
    let phase: T = if even {
        sign(order as i64 / 2)
    } else {
        sign((order as i64 + 1) / 2)
    };
    (0..n)
        .map(|k| {
            let mut acc = T::zero();
            for j in 1..=top {
                let w = T::from_count(j).powi(order as i32);
                let idx = (j * k) % n;
                acc = acc + w * if even { cos_table[idx] } else { sin_table[idx] };
            }
            let mut g = T::lit(2.0) * phase * acc;
            if order == 0 {
                g = g + T::one();
            }
            if even && n % 2 == 0 {
                let nyq = (nn / T::lit(2.0)).powi(order as i32);
                g = g + phase * nyq * sign(k as i64);
            }
            g / nn
        })
        .collect()
}

fn circulant<T: Real>(g: &[T]) -> Vec<T> {
    let n = g.len();
    let mut e = vec![T::zero(); n * n];
    for row in 0..n {
        for col in 0..n {
            e[row * n + col] = g[(row + n - col) % n];
        }
    }
    e
}

impl<T: Real> FftRoute<T> {
    fn new(n: usize, order: usize, wavenumber: T) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let nn = T::from_count(n);
        let i_pow = |s: usize| match s % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
        let multipliers = (0..n)
            .map(|k| {
                let freq = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                if n % 2 == 0 && k == n / 2 && order % 2 == 1 {
                    return Complex::new(T::zero(), T::zero());
                }
                let mag = (T::lit(freq.abs()) * wavenumber).powi(order as i32);
                let sgn = if freq < 0.0 && order % 2 == 1 { -T::one() } else { T::one() };
                i_pow(order) * (mag * sgn / nn)
            })
            .collect();
        Self {
            forward,
            inverse,
            multipliers,
        }
    }

    fn apply(&self, values: &[T]) -> Vec<T> {
        let mut buf: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        for (b, m) in buf.iter_mut().zip(&self.multipliers) {
            *b = *b * *m;
        }
        self.inverse.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}
