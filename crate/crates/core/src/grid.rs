use crate::error::{domain, Result};
use crate::well::WellParams;

/// Default number of spatial samples.
pub const DEFAULT_SPACE_POINTS: usize = 4096;

/// Fewest grid points per half-wavelength accepted when evaluating
/// wavefunctions.
pub const MIN_POINTS_PER_HALF_WAVE: usize = 8;

/// Uniform grid of positions covering the closed interval `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceGrid {
    params: WellParams,
    points: Vec<f64>,
}

impl SpaceGrid {
    pub fn new(params: WellParams, count: usize) -> Result<Self> {
        if count < 2 {
            return domain(format!("space grid needs at least 2 points, got {count}"));
        }
        let l = params.length();
        let last = (count - 1) as f64;
        let points = (0..count)
            .map(|i| {
                if i == count - 1 {
                    l
                } else {
                    l * (i as f64 / last)
                }
            })
            .collect();
        Ok(Self { params, points })
    }

    /// The default grid, enlarged when needed so that eigenfunction
    /// `n_max` is resolved.
    pub fn resolving(params: WellParams, n_max: usize) -> Result<Self> {
        let count = DEFAULT_SPACE_POINTS.max(Self::required_count(n_max, MIN_POINTS_PER_HALF_WAVE));
        Self::new(params, count)
    }

    pub fn params(&self) -> &WellParams {
        &self.params
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn spacing(&self) -> f64 {
        self.params.length() / (self.points.len() - 1) as f64
    }

    /// Grid points per half-wavelength of the eigenfunction with quantum
    /// number `n` (which has `n + 1` half-wavelengths across the well).
    pub fn points_per_half_wave(&self, n: usize) -> f64 {
        (self.count() - 1) as f64 / (n + 1) as f64
    }

    /// Smallest grid size with at least `per_half_wave` points per
    /// half-wavelength of eigenfunction `n`.
    pub fn required_count(n: usize, per_half_wave: usize) -> usize {
        per_half_wave * (n + 1) + 1
    }

    /// Composite Simpson integral of samples taken on this grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.count());
        crate::numerics::simpson(values, self.spacing())
    }
}

/// Uniformly spaced sample times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl TimeGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return domain("time grid is empty");
        }
        if !(start.is_finite() && start >= 0.0) {
            return domain(format!(
                "time grid start must be finite and >= 0, got {start}"
            ));
        }
        if !(step.is_finite() && step > 0.0) {
            return domain(format!("time step must be positive, got {step}"));
        }
        Ok(Self { start, step, count })
    }

    /// Grid covering `[start, end]` inclusive with `count` samples.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 || end <= start {
            return domain("spanning time grid needs count >= 2 and end > start");
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
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

    pub fn times(&self) -> Vec<f64> {
        (0..self.count)
            .map(|i| self.start + self.step * i as f64)
            .collect()
    }
}
