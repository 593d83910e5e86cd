//! Uniform grids for momentum- and position-space sampling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// A uniform 1D grid `x_i = start + i*step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid<T> {
    start: T,
    step: T,
    len: usize,
}

impl<T: Real> UniformGrid<T> {
    pub fn new(start: T, step: T, len: usize) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::param("step", format!("must be positive, got {step}")));
        }
        if len < 2 {
            return Err(Error::param("len", format!("need at least 2 points, got {len}")));
        }
        Ok(Self { start, step, len })
    }

    /// Grid centered on `center`, spanning at least `±half_span`.
    pub fn centered(center: T, half_span: T, len: usize) -> Result<Self> {
        if !(half_span > T::zero()) {
            return Err(Error::param("half_span", "must be positive".to_string()));
        }
        let step = half_span * T::of(2.0) / T::of((len - 1) as f64);
        Self::new(center - half_span, step, len)
    }

    /// Grid centered on `center` spanning at least `±half_span`, with the
    /// step snapped so that `unit` is a whole number of cells.
    ///
    /// Returns the grid and the number of cells per `unit`. Snapping only
    /// ever enlarges the step relative to the unsnapped grid, so coverage
    /// of `±half_span` is preserved.
    pub fn centered_commensurate(
        center: T,
        half_span: T,
        len: usize,
        unit: T,
    ) -> Result<(Self, usize)> {
        if !(unit > T::zero()) {
            return Err(Error::param("unit", "must be positive".to_string()));
        }
        if !(half_span > T::zero()) {
            return Err(Error::param("half_span", "must be positive".to_string()));
        }
        if len < 8 {
            return Err(Error::param("len", format!("need at least 8 points, got {len}")));
        }
        let raw_cells = (unit * T::of((len - 1) as f64) / (half_span * T::of(2.0)))
            .floor()
            .as_f64() as isize;
        if raw_cells < 4 {
            return Err(Error::GridTooCoarse(format!(
                "fewer than 4 cells per recoil over ±{half_span}; increase the point count"
            )));
        }
        let cells = raw_cells as usize;
        let step = unit / T::of(cells as f64);
        let i_center = len / 2;
        let start = center - step * T::of(i_center as f64);
        Ok((Self { start, step, len }, cells))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn start(&self) -> T {
        self.start
    }

    #[inline]
    pub fn end(&self) -> T {
        self.value(self.len - 1)
    }

    #[inline]
    pub fn value(&self, i: usize) -> T {
        self.start + self.step * T::of(i as f64)
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    /// Conjugate (Fourier-dual) grid: for a momentum grid of step `dp`
    /// and length `M`, the matched position grid has step π/(M·dp) and
    /// covers `±π/(2·dp)`, which makes the per-row Wigner transform an
    /// exactly invertible DFT.
    pub fn conjugate(&self) -> Self {
        let m = T::of(self.len as f64);
        let step = T::PI() / (m * self.step);
        let start = -step * T::of((self.len / 2) as f64);
        Self {
            start,
            step,
            len: self.len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commensurate_grid_covers_span_with_exact_recoil() {
        let (g, cells) =
            UniformGrid::centered_commensurate(1e5f64, 22.0, 4096, 1.0).unwrap();
        assert!(cells >= 4);
        assert!((g.step() * cells as f64 - 1.0).abs() < 1e-12);
        assert!(g.start() <= 1e5 - 22.0);
        assert!(g.end() >= 1e5 + 22.0 - g.step());
        // center lands on a grid point
        let i_c = g.len() / 2;
        assert!((g.value(i_c) - 1e5).abs() < 1e-9);
    }

    #[test]
    fn commensurate_rejects_hopeless_resolution() {
        let err = UniformGrid::centered_commensurate(0.0f64, 1000.0, 64, 1.0);
        assert!(matches!(err, Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn conjugate_grid_is_fourier_matched() {
        let g = UniformGrid::new(-10.0f64, 0.01, 2048).unwrap();
        let z = g.conjugate();
        assert_eq!(z.len(), 2048);
        let dp_dz = g.step() * z.step();
        assert!((dp_dz - std::f64::consts::PI / 2048.0).abs() < 1e-15);
        // symmetric about zero up to one cell
        assert!(z.start() < 0.0 && z.end() > 0.0);
    }
}
