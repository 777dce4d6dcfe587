use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid step must be positive and finite, got {0}")]
    Step(f64),
    #[error("grid must contain at least one point")]
    Empty,
    #[error("grid bounds must be finite")]
    Bounds,
    #[error("frequency samples must be strictly increasing within [0, 2π)")]
    Frequencies,
}

/// Uniform 1D sampling grid `start + i*step`, `i < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self, GridError> {
        if step.is_nan() || step <= 0.0 || step.is_infinite() {
            return Err(GridError::Step(step));
        }
        if !start.is_finite() {
            return Err(GridError::Bounds);
        }
        if count == 0 {
            return Err(GridError::Empty);
        }
        Ok(Grid1D { start, step, count })
    }

    /// Closed range `[x0, x1]`; `x1` is included when it lies on the lattice.
    pub fn inclusive(x0: f64, x1: f64, step: f64) -> Result<Self, GridError> {
        Self::from_range(x0, x1, step, true)
    }

    /// Half-open range `[x0, x1)`.
    pub fn half_open(x0: f64, x1: f64, step: f64) -> Result<Self, GridError> {
        Self::from_range(x0, x1, step, false)
    }

    fn from_range(x0: f64, x1: f64, step: f64, closed: bool) -> Result<Self, GridError> {
        if step.is_nan() || step <= 0.0 || step.is_infinite() {
            return Err(GridError::Step(step));
        }
        if !x0.is_finite() || !x1.is_finite() || x1 < x0 {
            return Err(GridError::Bounds);
        }
        let span = (x1 - x0) / step;
        let n = span.round();
        let on_lattice = (span - n).abs() < 1e-9 * span.max(1.0);
        let count = if on_lattice {
            if closed {
                n as usize + 1
            } else {
                n as usize
            }
        } else {
            span.floor() as usize + 1
        };
        Self::new(x0, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    /// True when the grid points are mirror images about 0 (up to rounding).
    pub fn is_symmetric(&self) -> bool {
        (self.start + self.end()).abs() <= 1e-9 * self.step
    }

    /// Indices outside a boundary band of the given fraction at each end.
    pub fn interior(&self, band: f64) -> std::ops::Range<usize> {
        let skip = (band * self.count as f64).ceil() as usize;
        let lo = skip.min(self.count);
        let hi = self.count.saturating_sub(skip).max(lo);
        lo..hi
    }
}

/// Tensor grid; samples are ordered row-major with `x` as the slow index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Grid2D { x, y }
    }

    pub fn square(grid: Grid1D) -> Self {
        Grid2D { x: grid, y: grid }
    }

    pub fn len(&self) -> usize {
        self.x.count() * self.y.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.y.count() + j
    }
}

/// Ordered frequencies in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    samples: Vec<f64>,
    uniform: bool,
}

impl FrequencyGrid {
    /// `ω_j = 2πj/n`, `j < n`.
    pub fn uniform(n: usize) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::Empty);
        }
        let samples = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        Ok(FrequencyGrid {
            samples,
            uniform: true,
        })
    }

    pub fn from_samples(samples: Vec<f64>) -> Result<Self, GridError> {
        if samples.is_empty() {
            return Err(GridError::Empty);
        }
        let ok = samples.iter().all(|w| (0.0..2.0 * PI).contains(w))
            && samples.windows(2).all(|p| p[0] < p[1]);
        if !ok {
            return Err(GridError::Frequencies);
        }
        Ok(FrequencyGrid {
            samples,
            uniform: false,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    /// True for grids built by [`FrequencyGrid::uniform`].
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }
}
