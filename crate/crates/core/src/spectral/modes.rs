use num_complex::Complex;
use rustfft::FftPlanner;

use super::grid::NodeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real discrete Fourier coefficients of nodal data on an even grid.
///
/// `cos_coeffs[n - 1]` and `sin_coeffs[n - 1]` hold the amplitudes of
/// `cos(nθ)` and `sin(nθ)` for `n = 1..=N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierModes<T> {
    pub mean: T,
    pub cos_coeffs: Vec<T>,
    pub sin_coeffs: Vec<T>,
}

impl<T: Real> FourierModes<T> {
    pub fn zeros(count: usize) -> Self {
        Self {
            mean: T::zero(),
            cos_coeffs: vec![T::zero(); count / 2],
            sin_coeffs: vec![T::zero(); count / 2],
        }
    }

    /// Number of coefficient pairs, `N/2`.
    pub fn len(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos_coeffs.is_empty()
    }
}

/// Discrete Fourier coefficients `mean = (1/N) Σ f_l`,
/// `â_n = (2/N) Σ f_l cos(2πnl/N)`, `b̂_n = (2/N) Σ f_l sin(2πnl/N)`.
///
/// Uses an FFT for power-of-two counts and direct sums otherwise.
pub fn analyze_modes<T: Real>(grid: &NodeGrid<T>, values: &[T]) -> Result<FourierModes<T>> {
    let n = grid.count();
    if n % 2 != 0 {
        return Err(Error::OddCount(n));
    }
    grid.check_len(values.len())?;
    let nn = T::from_count(n);
    let two_over_n = T::lit(2.0) / nn;
    let half = n / 2;
    let mut modes = FourierModes::zeros(n);

    if grid.is_power_of_two() {
        let fft = FftPlanner::new().plan_fft_forward(n);
        let mut buf: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft.process(&mut buf);
        modes.mean = buf[0].re / nn;
        for k in 1..=half {
            // X_k = Σ f_l e^{-2πikl/N} = Σ f_l cos - i Σ f_l sin
            modes.cos_coeffs[k - 1] = two_over_n * buf[k].re;
            modes.sin_coeffs[k - 1] = -two_over_n * buf[k].im;
        }
        modes.sin_coeffs[half - 1] = T::zero();
    } else {
        let (cos_t, sin_t) = tables::<T>(n);
        modes.mean = values.iter().copied().sum::<T>() / nn;
        for k in 1..=half {
            let mut a = T::zero();
            let mut b = T::zero();
            for (l, &f) in values.iter().enumerate() {
                let idx = (k * l) % n;
                a = a + f * cos_t[idx];
                b = b + f * sin_t[idx];
            }
            modes.cos_coeffs[k - 1] = two_over_n * a;
            modes.sin_coeffs[k - 1] = two_over_n * b;
        }
    }
    Ok(modes)
}

/// Nodal values of `mean + Σ_n [â_n cos(nθ) + b̂_n sin(nθ)]`.
///
/// The Nyquist cosine enters with weight 1/2, matching the `2/N` normalisation
/// of [`analyze_modes`], so analysis followed by synthesis is the identity.
pub fn synthesize_modes<T: Real>(modes: &FourierModes<T>, grid: &NodeGrid<T>) -> Result<Vec<T>> {
    let n = grid.count();
    if n % 2 != 0 {
        return Err(Error::OddCount(n));
    }
    if modes.cos_coeffs.len() != n / 2 || modes.sin_coeffs.len() != n / 2 {
        return Err(Error::SizeMismatch {
            expected: n / 2,
            got: modes.cos_coeffs.len().min(modes.sin_coeffs.len()),
        });
    }
    let half = n / 2;
    let (cos_t, sin_t) = tables::<T>(n);
    let out = (0..n)
        .map(|l| {
            let mut acc = modes.mean;
            for k in 1..half {
                let idx = (k * l) % n;
                acc = acc + modes.cos_coeffs[k - 1] * cos_t[idx] + modes.sin_coeffs[k - 1] * sin_t[idx];
            }
            let nyq = if l % 2 == 0 { T::one() } else { -T::one() };
            acc + T::lit(0.5) * modes.cos_coeffs[half - 1] * nyq
        })
        .collect();
    Ok(out)
}

fn tables<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let nn = T::from_count(n);
    (0..n)
        .map(|j| {
            let a = T::two_pi() * T::from_count(j) / nn;
            (a.cos(), a.sin())
        })
        .unzip()
}
