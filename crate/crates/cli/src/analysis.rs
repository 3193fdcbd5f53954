//! Post-processing of first-mode time series: growth/plateau and damping/recurrence.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

impl LinearFit {
    pub fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares `y ≈ a + b x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    }
}

/// Strict interior local maxima `(t, y)`.
pub fn local_maxima(ts: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])
        .map(|i| (ts[i], ys[i]))
        .collect()
}

/// Growth-then-saturation summary of an instability amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthPlateau {
    /// Fit of `ln A` over the growth window.
    pub growth: LinearFit,
    pub growth_window: (f64, f64),
    /// First time the amplitude reaches 95% of its maximum.
    pub plateau_start: f64,
    pub saturation: f64,
    /// Relative change of the mean amplitude between the two halves of the plateau.
    pub plateau_drift: f64,
    /// Smallest plateau amplitude over the maximum.
    pub plateau_floor: f64,
}

/// The seed level is the largest amplitude on `t ≤ seed_until`; growth runs from the first
/// exceedance of three times the seed to the first exceedance of half the maximum.
pub fn growth_and_plateau(ts: &[f64], amps: &[f64], seed_until: f64) -> Option<GrowthPlateau> {
    let seed = ts
        .iter()
        .zip(amps)
        .take_while(|(t, _)| **t <= seed_until)
        .map(|(_, a)| *a)
        .fold(0.0, f64::max);
    let peak = amps.iter().copied().fold(0.0, f64::max);
    let first = |level: f64| amps.iter().position(|&a| a > level);
    let i0 = first(3.0 * seed)?;
    let i1 = first(0.5 * peak)?;
    if i1 < i0 + 3 {
        return None;
    }
    let logs: Vec<f64> = amps[i0..=i1].iter().map(|a| a.ln()).collect();
    let growth = linear_fit(&ts[i0..=i1], &logs);

    let ip = amps.iter().position(|&a| a >= 0.95 * peak)?;
    let plateau = &amps[ip..];
    if plateau.len() < 4 {
        return None;
    }
    let half = plateau.len() / 2;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (m1, m2) = (mean(&plateau[..half]), mean(&plateau[half..]));
    Some(GrowthPlateau {
        growth,
        growth_window: (ts[i0], ts[i1]),
        plateau_start: ts[ip],
        saturation: peak,
        plateau_drift: (m2 - m1) / m1,
        plateau_floor: plateau.iter().copied().fold(f64::INFINITY, f64::min) / peak,
    })
}

/// Damping fit over the peaks in `window` and the first later peak standing more than
/// `excess` above the extrapolated decay.
#[derive(Debug, Clone, PartialEq)]
pub struct Recurrence {
    /// Fit of `ln |â|` at the peaks inside the window; the slope is minus the damping rate.
    pub damping: LinearFit,
    pub peaks: Vec<(f64, f64)>,
    pub onset: Option<f64>,
}

pub fn damping_and_recurrence(ts: &[f64], amps: &[f64], window: (f64, f64), excess: f64) -> Option<Recurrence> {
    let peaks = local_maxima(ts, amps);
    let (xs, ys): (Vec<f64>, Vec<f64>) = peaks
        .iter()
        .filter(|(t, _)| (window.0..=window.1).contains(t))
        .map(|&(t, a)| (t, a.ln()))
        .unzip();
    if xs.len() < 2 {
        return None;
    }
    let damping = linear_fit(&xs, &ys);
    let onset = peaks
        .iter()
        .find(|(t, a)| *t > window.1 && *a > (1.0 + excess) * damping.at(*t).exp())
        .map(|p| p.0);
    Some(Recurrence { damping, peaks, onset })
}
