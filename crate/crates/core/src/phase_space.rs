//! Phase-space grid, nodal distribution values and evaluation along shifted points.

use std::borrow::Cow;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{basis_row, dot, DerivativeMatrix, NodeGrid};

/// Highest derivative order kept in the per-grid cache.
const CACHED_ORDERS: usize = 16;

/// Tensor grid `Ω_x × Ω_v` with lazily built derivative matrices on each axis.
#[derive(Debug)]
pub struct PhaseGrid<T: Real> {
    xgrid: NodeGrid<T>,
    vgrid: NodeGrid<T>,
    dx: Vec<OnceLock<DerivativeMatrix<T>>>,
    dv: Vec<OnceLock<DerivativeMatrix<T>>>,
}

impl<T: Real> PhaseGrid<T> {
    pub fn new(xgrid: NodeGrid<T>, vgrid: NodeGrid<T>) -> Self {
        let grid = Self {
            xgrid,
            vgrid,
            dx: (0..=CACHED_ORDERS).map(|_| OnceLock::new()).collect(),
            dv: (0..=CACHED_ORDERS).map(|_| OnceLock::new()).collect(),
        };
        // orders 1 and 2 are used by every step
        for s in 1..=2 {
            grid.dx(s);
            grid.dv(s);
        }
        grid
    }

    /// Grid with `nx × nv` nodes on `[x_min, x_max) × [v_min, v_max)`.
    pub fn from_bounds(nx: usize, x_min: T, x_max: T, nv: usize, v_min: T, v_max: T) -> Result<Self> {
        Ok(Self::new(
            NodeGrid::new(nx, x_min, x_max - x_min)?,
            NodeGrid::new(nv, v_min, v_max - v_min)?,
        ))
    }

    pub fn xgrid(&self) -> &NodeGrid<T> {
        &self.xgrid
    }

    pub fn vgrid(&self) -> &NodeGrid<T> {
        &self.vgrid
    }

    pub fn nx(&self) -> usize {
        self.xgrid.count()
    }

    pub fn nv(&self) -> usize {
        self.vgrid.count()
    }

    pub fn len(&self) -> usize {
        self.nx() * self.nv()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Product quadrature weight `(L_x/N)(L_v/M)`.
    pub fn cell_area(&self) -> T {
        self.xgrid.spacing() * self.vgrid.spacing()
    }

    /// Order-`s` derivative matrix along `x`.
    pub fn dx(&self, s: usize) -> Cow<'_, DerivativeMatrix<T>> {
        match self.dx.get(s) {
            Some(cell) => Cow::Borrowed(cell.get_or_init(|| DerivativeMatrix::new(&self.xgrid, s))),
            None => Cow::Owned(DerivativeMatrix::new(&self.xgrid, s)),
        }
    }

    /// Order-`s` derivative matrix along `v`.
    pub fn dv(&self, s: usize) -> Cow<'_, DerivativeMatrix<T>> {
        match self.dv.get(s) {
            Some(cell) => Cow::Borrowed(cell.get_or_init(|| DerivativeMatrix::new(&self.vgrid, s))),
            None => Cow::Owned(DerivativeMatrix::new(&self.vgrid, s)),
        }
    }

    pub fn same_as(&self, other: &PhaseGrid<T>) -> bool {
        self.xgrid == other.xgrid && self.vgrid == other.vgrid
    }
}

/// Nodal values `c_nm = f(x_n, v_m)`, stored row-major with `n` (x index) outermost.
#[derive(Debug, Clone)]
pub struct DistributionField<T: Real> {
    grid: Arc<PhaseGrid<T>>,
    values: Vec<T>,
}

impl<T: Real> DistributionField<T> {
    pub fn new(grid: Arc<PhaseGrid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<PhaseGrid<T>>) -> Self {
        let values = vec![T::zero(); grid.len()];
        Self { grid, values }
    }

    /// Samples `f(x_n, v_m)` at every node.
    pub fn from_fn(grid: Arc<PhaseGrid<T>>, f: impl Fn(T, T) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for &x in grid.xgrid().nodes() {
            for &v in grid.vgrid().nodes() {
                values.push(f(x, v));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<PhaseGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> T {
        self.values[n * self.grid.nv() + m]
    }

    /// Values at fixed `x_n`, indexed by `m`.
    pub fn row(&self, n: usize) -> &[T] {
        let nv = self.grid.nv();
        &self.values[n * nv..(n + 1) * nv]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }
}

/// Per-node offsets `𝓘_nm = x_n - x̃_nm` and `𝓙_nm = v_m - ṽ_nm`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField<T> {
    pub dxs: Vec<T>,
    pub dvs: Vec<T>,
}

impl<T: Real> DisplacementField<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            dxs: vec![T::zero(); len],
            dvs: vec![T::zero(); len],
        }
    }

    pub fn uniform(len: usize, dx: T, dv: T) -> Self {
        Self {
            dxs: vec![dx; len],
            dvs: vec![dv; len],
        }
    }

    fn check(&self, grid: &PhaseGrid<T>) -> Result<()> {
        for len in [self.dxs.len(), self.dvs.len()] {
            if len != grid.len() {
                return Err(Error::SizeMismatch {
                    expected: grid.len(),
                    got: len,
                });
            }
        }
        let lx = grid.xgrid().length();
        let lv = grid.vgrid().length();
        let ok = self.dxs.iter().all(|d| d.abs() < lx) && self.dvs.iter().all(|d| d.abs() < lv);
        if !ok {
            return Err(Error::InvalidParameter(
                "displacement larger than the domain".into(),
            ));
        }
        Ok(())
    }
}

/// `out[n][m] = Σ_i D[n][i] c[i][m]`.
pub(crate) fn apply_x<T: Real>(d: &DerivativeMatrix<T>, c: &[T], nv: usize) -> Vec<T> {
    let nx = d.size();
    let mut out = vec![T::zero(); nx * nv];
    for n in 0..nx {
        let dst = &mut out[n * nv..(n + 1) * nv];
        for (i, &w) in d.row(n).iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            let src = &c[i * nv..(i + 1) * nv];
            for (o, &s) in dst.iter_mut().zip(src) {
                *o = *o + w * s;
            }
        }
    }
    out
}

/// `out[n][m] = Σ_j c[n][j] D[m][j]`.
pub(crate) fn apply_v<T: Real>(d: &DerivativeMatrix<T>, c: &[T], nx: usize) -> Vec<T> {
    let nv = d.size();
    let mut out = vec![T::zero(); nx * nv];
    for n in 0..nx {
        let src = &c[n * nv..(n + 1) * nv];
        let dst = &mut out[n * nv..(n + 1) * nv];
        for (m, o) in dst.iter_mut().enumerate() {
            *o = dot(d.row(m), src);
        }
    }
    out
}

fn factorial<T: Real>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::from_count(j))
}

/// Evaluates the interpolant at `(x_n - 𝓘_nm, v_m - 𝓙_nm)` by its Taylor expansion
/// about each node, truncated after total order `order`.
///
/// The mixed derivative arrays `D_x^(r) C D_v^(q)ᵀ`, `r + q ≤ order`, are formed once
/// and combined node by node.
pub fn taylor_shifted_eval<T: Real>(
    field: &DistributionField<T>,
    disp: &DisplacementField<T>,
    order: usize,
) -> Result<Vec<T>> {
    if order == 0 {
        return Err(Error::InvalidParameter("Taylor order must be at least 1".into()));
    }
    let grid = field.grid();
    disp.check(grid)?;
    let (nx, nv) = (grid.nx(), grid.nv());
    let c = field.values();

    let x_derivs: Vec<Vec<T>> = (0..=order)
        .map(|r| if r == 0 { c.to_vec() } else { apply_x(&grid.dx(r), c, nv) })
        .collect();

    let mut out = c.to_vec();
    // running powers 𝓘^r and 𝓙^q per node
    let mut ipow: Vec<Vec<T>> = vec![vec![T::one(); c.len()]];
    for r in 1..=order {
        let prev = &ipow[r - 1];
        ipow.push(prev.iter().zip(&disp.dxs).map(|(p, d)| *p * *d).collect());
    }
    let mut jpow: Vec<Vec<T>> = vec![vec![T::one(); c.len()]];
    for q in 1..=order {
        let prev = &jpow[q - 1];
        jpow.push(prev.iter().zip(&disp.dvs).map(|(p, d)| *p * *d).collect());
    }

    for (r, xr) in x_derivs.iter().enumerate() {
        for q in 0..=(order - r) {
            let s = r + q;
            if s == 0 {
                continue;
            }
            let mixed = if q == 0 { Cow::Borrowed(xr) } else { Cow::Owned(apply_v(&grid.dv(q), xr, nx)) };
            let sign = if s % 2 == 0 { T::one() } else { -T::one() };
            let coef = sign / (factorial::<T>(r) * factorial::<T>(q));
            for (k, o) in out.iter_mut().enumerate() {
                *o = *o + coef * ipow[r][k] * jpow[q][k] * mixed[k];
            }
        }
    }
    Ok(out)
}

/// Direct evaluation `Σ_i Σ_j c_ij B_i(x̃) B_j(ṽ)` at arbitrary (periodically wrapped) points.
pub fn exact_shifted_eval<T: Real>(field: &DistributionField<T>, points: &[(T, T)]) -> Result<Vec<T>> {
    let grid = field.grid();
    let (nx, nv) = (grid.nx(), grid.nv());
    let mut bx = vec![T::zero(); nx];
    let mut bv = vec![T::zero(); nv];
    let mut out = Vec::with_capacity(points.len());
    for &(x, v) in points {
        basis_row(grid.xgrid(), grid.xgrid().wrap(x), &mut bx);
        basis_row(grid.vgrid(), grid.vgrid().wrap(v), &mut bv);
        let mut acc = T::zero();
        for (i, &wx) in bx.iter().enumerate() {
            if wx != T::zero() {
                acc = acc + wx * dot(field.row(i), &bv);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Shifted points `(x_n - 𝓘_nm, v_m - 𝓙_nm)` in node order.
pub fn displaced_points<T: Real>(grid: &PhaseGrid<T>, disp: &DisplacementField<T>) -> Vec<(T, T)> {
    let nv = grid.nv();
    let mut pts = Vec::with_capacity(grid.len());
    for (n, &x) in grid.xgrid().nodes().iter().enumerate() {
        for (m, &v) in grid.vgrid().nodes().iter().enumerate() {
            let k = n * nv + m;
            pts.push((x - disp.dxs[k], v - disp.dvs[k]));
        }
    }
    pts
}

/// First-order transport increment `Φ_nm = -v_m (D_x C)_nm + E(x_n) (C D_vᵀ)_nm`.
pub fn phi_transport<T: Real>(field: &DistributionField<T>, e_nodes: &[T]) -> Result<Vec<T>> {
    let grid = field.grid();
    grid.xgrid().check_len(e_nodes.len())?;
    let (nx, nv) = (grid.nx(), grid.nv());
    let fx = apply_x(&grid.dx(1), field.values(), nv);
    let fv = apply_v(&grid.dv(1), field.values(), nx);
    Ok(combine_phi(grid, &fx, &fv, e_nodes))
}

pub(crate) fn combine_phi<T: Real>(grid: &PhaseGrid<T>, fx: &[T], fv: &[T], e_nodes: &[T]) -> Vec<T> {
    let nv = grid.nv();
    let vs = grid.vgrid().nodes();
    let mut out = vec![T::zero(); fx.len()];
    for (n, &e) in e_nodes.iter().enumerate() {
        for m in 0..nv {
            let k = n * nv + m;
            out[k] = e * fv[k] - vs[m] * fx[k];
        }
    }
    out
}
