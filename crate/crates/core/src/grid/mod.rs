//! Periodic-grid backend: fields on the unit torus `[0,1)^dim` with
//! frequency-domain access, exact spectral implicit solves, initial
//! conditions and the area/perimeter estimators.

mod backend;
mod init;
mod metrics;
mod spectral;

pub use backend::GridBackend;
pub use init::{cshape_init, disk_init, gyroid_init, profile_bump_init, profile_disk_init, schwarzp_init};
pub use metrics::{area_perimeter_estimate, enforce_mean, gl_energy, AreaPerimeter};
pub use spectral::PeriodicGrid;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("grid needs at least 4 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("radius {radius} exceeds the torus half-width 0.5")]
    RadiusTooLarge { radius: f64 },
    #[error("field shape {got:?} does not match grid {expected:?}")]
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
}

/// Real values on a periodic grid, row-major, with an optional cached
/// spectrum (the normalized DFT, so that `spectrum[0]` is the field mean).
/// Pointwise constructors leave the cache empty; the spectral solve fills it.
#[derive(Debug, Clone)]
pub struct Field {
    dim: usize,
    n: usize,
    values: Vec<f64>,
    spectrum: Option<Vec<Complex64>>,
}

impl Field {
    pub fn from_values(dim: usize, n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n.pow(dim as u32));
        Self { dim, n, values, spectrum: None }
    }

    pub(crate) fn with_spectrum(
        dim: usize,
        n: usize,
        values: Vec<f64>,
        spectrum: Vec<Complex64>,
    ) -> Self {
        Self { dim, n, values, spectrum: Some(spectrum) }
    }

    pub fn zeros(dim: usize, n: usize) -> Self {
        Self::from_values(dim, n, vec![0.0; n.pow(dim as u32)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access drops the cached spectrum.
    pub fn values_mut(&mut self) -> &mut [f64] {
        self.spectrum = None;
        &mut self.values
    }

    pub fn cached_spectrum(&self) -> Option<&[Complex64]> {
        self.spectrum.as_deref()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Pointwise map into a new field.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_values(self.dim, self.n, self.values.iter().map(|&v| f(v)).collect())
    }
}
