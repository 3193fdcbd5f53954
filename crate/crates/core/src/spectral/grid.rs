use crate::error::{Error, Result};
use crate::scalar::Real;

/// Equispaced periodic collocation nodes on `[origin, origin + length)`.
///
/// The right endpoint is identified with the left one, so it is never a node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGrid<T> {
    count: usize,
    origin: T,
    length: T,
    nodes: Vec<T>,
}

impl<T: Real> NodeGrid<T> {
    pub fn new(count: usize, origin: T, length: T) -> Result<Self> {
        if count < 4 {
            return Err(Error::TooFewNodes(count));
        }
        if !(length > T::zero()) || !length.is_finite() || !origin.is_finite() {
            return Err(Error::BadLength(length.as_f64()));
        }
        let h = length / T::from_count(count);
        let nodes = (0..count).map(|i| origin + h * T::from_count(i)).collect();
        Ok(Self {
            count,
            origin,
            length,
            nodes,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn origin(&self) -> T {
        self.origin
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// Right end of the interval (not a node).
    pub fn end(&self) -> T {
        self.origin + self.length
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn spacing(&self) -> T {
        self.length / T::from_count(self.count)
    }

    /// Scale factor `2π/L` between reference and physical coordinates.
    pub fn wavenumber(&self) -> T {
        T::two_pi() / self.length
    }

    /// Reference coordinate `θ = 2π (x - origin) / L`.
    pub fn to_reference(&self, x: T) -> T {
        (x - self.origin) * self.wavenumber()
    }

    /// Position of `x` in node units, `N (x - origin) / L`, wrapped into `[0, N)`.
    pub fn node_coordinate(&self, x: T) -> T {
        let n = T::from_count(self.count);
        let s = (x - self.origin) / self.length * n;
        let w = s - (s / n).floor() * n;
        if w >= n {
            w - n
        } else {
            w
        }
    }

    /// Periodic image of `x` in `[origin, origin + length)`.
    pub fn wrap(&self, x: T) -> T {
        let r = (x - self.origin) / self.length;
        let w = self.origin + (r - r.floor()) * self.length;
        if w >= self.end() {
            self.origin
        } else {
            w
        }
    }

    pub fn is_power_of_two(&self) -> bool {
        self.count.is_power_of_two()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.count {
            return Err(Error::SizeMismatch {
                expected: self.count,
                got: len,
            });
        }
        Ok(())
    }
}

/// Builds the equispaced grid of `count` nodes on `[origin, origin + length)`.
pub fn make_grid<T: Real>(count: usize, origin: T, length: T) -> Result<NodeGrid<T>> {
    NodeGrid::new(count, origin, length)
}
