//! FFT plans and the diagonal frequency-domain operations: transforms,
//! Laplacian symbol multiplication and the exact implicit solve.
//!
//! Conventions: `u(x) = sum_k spectrum[k] exp(2 pi i k.x)` with frequencies
//! in the symmetric range per axis, so the Laplacian symbol of mode `k` is
//! `-(2 pi)^2 ||k||^2` and `spectrum[0]` is the field mean. Real fields are
//! kept in the half-spectrum representation: the last axis stores only the
//! `n/2 + 1` non-negative frequencies (the rest is determined by Hermitian
//! symmetry). The forward transform folds in the `1/N` normalization.
//!
//! Transforms go through FFTW (system library, ESTIMATE plans — plan choice
//! must be deterministic so that reruns produce identical bytes). Plans are
//! grid-owned behind a mutex; the long-running experiment drivers build
//! their own [`SpectralWorkspace`] to step without copies.

use super::{Field, GridError};
use fftw::array::AlignedVec;
use fftw::plan::{C2RPlan, C2RPlan64, R2CPlan, R2CPlan64};
use fftw::types::{c64, Flag};
use std::sync::{Arc, Mutex};

struct Plans {
    r2c: R2CPlan64,
    c2r: C2RPlan64,
    real: AlignedVec<f64>,
    spec: AlignedVec<c64>,
}

impl Plans {
    fn new(dims: &[usize]) -> Self {
        let n_real: usize = dims.iter().product();
        let n_spec = n_real / dims[dims.len() - 1] * (dims[dims.len() - 1] / 2 + 1);
        Self {
            r2c: R2CPlan::aligned(dims, Flag::ESTIMATE | Flag::DESTROYINPUT)
                .expect("fftw r2c plan"),
            c2r: C2RPlan::aligned(dims, Flag::ESTIMATE | Flag::DESTROYINPUT)
                .expect("fftw c2r plan"),
            real: AlignedVec::new(n_real),
            spec: AlignedVec::new(n_spec),
        }
    }
}

#[derive(Clone)]
pub struct PeriodicGrid {
    dim: usize,
    n: usize,
    plans: Arc<Mutex<Plans>>,
    /// `(2 pi k(i))^2` per index along one axis (full symmetric range).
    ksq_axis: Arc<[f64]>,
}

impl std::fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicGrid").field("dim", &self.dim).field("n", &self.n).finish()
    }
}

impl PeriodicGrid {
    pub fn new(dim: usize, n: usize) -> Result<Self, GridError> {
        if !(1..=3).contains(&dim) {
            return Err(GridError::BadDimension(dim));
        }
        if n < 4 {
            return Err(GridError::TooFewPoints(n));
        }
        let dims = vec![n; dim];
        let two_pi = 2.0 * std::f64::consts::PI;
        let ksq_axis: Vec<f64> = (0..n)
            .map(|i| {
                let k = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                (two_pi * k).powi(2)
            })
            .collect();
        Ok(Self {
            dim,
            n,
            plans: Arc::new(Mutex::new(Plans::new(&dims))),
            ksq_axis: ksq_axis.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `h = 1/n`.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of stored spectral coefficients (half spectrum).
    pub fn spectrum_len(&self) -> usize {
        self.len() / self.n * (self.n / 2 + 1)
    }

    /// Cell volume `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.dim as i32)
    }

    /// Coordinate of grid index `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    pub fn check_field(&self, f: &Field) -> Result<(), GridError> {
        if f.dim() != self.dim || f.n() != self.n {
            return Err(GridError::ShapeMismatch {
                expected: (self.dim, self.n),
                got: (f.dim(), f.n()),
            });
        }
        Ok(())
    }

    /// Normalized forward transform (half spectrum).
    pub fn forward(&self, values: &[f64]) -> Vec<c64> {
        debug_assert_eq!(values.len(), self.len());
        let mut plans = self.plans.lock().unwrap();
        let scale = 1.0 / self.len() as f64;
        plans.real.copy_from_slice(values);
        let Plans { r2c, real, spec, .. } = &mut *plans;
        r2c.r2c(real, spec).expect("fftw r2c");
        spec.iter().map(|z| z * scale).collect()
    }

    /// Inverse transform of a half spectrum.
    pub fn inverse(&self, spectrum: &[c64]) -> Vec<f64> {
        debug_assert_eq!(spectrum.len(), self.spectrum_len());
        let mut plans = self.plans.lock().unwrap();
        plans.spec.copy_from_slice(spectrum);
        let Plans { c2r, real, spec, .. } = &mut *plans;
        c2r.c2r(spec, real).expect("fftw c2r");
        real.iter().copied().collect()
    }

    /// The field's spectrum, reusing the cache when present.
    pub fn spectrum_of(&self, f: &Field) -> Vec<c64> {
        match f.cached_spectrum() {
            Some(s) => s.to_vec(),
            None => self.forward(f.values()),
        }
    }

    /// Apply `spec[k] *= f(sym_k)` where `sym_k = (2 pi)^2 ||k||^2`, in the
    /// half-spectrum layout.
    fn apply_symbol(&self, spec: &mut [c64], f: impl Fn(f64) -> f64) {
        let n = self.n;
        let half = n / 2 + 1;
        let k = &self.ksq_axis;
        match self.dim {
            1 => {
                for (i, s) in spec.iter_mut().enumerate() {
                    *s *= f(k[i]);
                }
            }
            2 => {
                for i0 in 0..n {
                    let base = k[i0];
                    let row = &mut spec[i0 * half..(i0 + 1) * half];
                    for (i1, s) in row.iter_mut().enumerate() {
                        *s *= f(base + k[i1]);
                    }
                }
            }
            _ => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        let base = k[i0] + k[i1];
                        let start = (i0 * n + i1) * half;
                        let row = &mut spec[start..start + half];
                        for (i2, s) in row.iter_mut().enumerate() {
                            *s *= f(base + k[i2]);
                        }
                    }
                }
            }
        }
    }

    /// `sum_k f(sym_k) |u_k|^2` over the full symmetric mode set, computed
    /// on the half spectrum with Hermitian double-counting.
    fn weighted_mode_sum(&self, spec: &[c64], f: impl Fn(f64) -> f64) -> f64 {
        let n = self.n;
        let half = n / 2 + 1;
        let k = &self.ksq_axis;
        let weight = |i_last: usize| -> f64 {
            if i_last == 0 || (n % 2 == 0 && i_last == n / 2) {
                1.0
            } else {
                2.0
            }
        };
        let mut acc = 0.0;
        match self.dim {
            1 => {
                for (i, s) in spec.iter().enumerate() {
                    acc += weight(i) * f(k[i]) * s.norm_sqr();
                }
            }
            2 => {
                for i0 in 0..n {
                    let base = k[i0];
                    for (i1, s) in spec[i0 * half..(i0 + 1) * half].iter().enumerate() {
                        acc += weight(i1) * f(base + k[i1]) * s.norm_sqr();
                    }
                }
            }
            _ => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        let base = k[i0] + k[i1];
                        let start = (i0 * n + i1) * half;
                        for (i2, s) in spec[start..start + half].iter().enumerate() {
                            acc += weight(i2) * f(base + k[i2]) * s.norm_sqr();
                        }
                    }
                }
            }
        }
        acc
    }

    /// Exact solve of `(coeff_mass - coeff_lap * lap) out = rhs` on the
    /// torus; per mode the denominator `coeff_mass + coeff_lap sym_k` is
    /// strictly positive. `fix_mean` pins the zeroth coefficient of the
    /// output (volume constraint). The returned field carries its spectrum.
    pub fn implicit_solve(
        &self,
        rhs: &Field,
        coeff_mass: f64,
        coeff_lap: f64,
        fix_mean: Option<f64>,
    ) -> Field {
        debug_assert!(coeff_mass > 0.0 && coeff_lap >= 0.0);
        let mut spec = self.spectrum_of(rhs);
        self.apply_symbol(&mut spec, |sym| 1.0 / (coeff_mass + coeff_lap * sym));
        if let Some(p) = fix_mean {
            spec[0] = c64::new(p, 0.0);
        }
        let values = self.inverse(&spec);
        Field::with_spectrum(self.dim, self.n, values, spec)
    }

    /// Spectral Laplacian (exactly zero on constants).
    pub fn laplacian(&self, f: &Field) -> Field {
        let mut spec = self.spectrum_of(f);
        self.apply_symbol(&mut spec, |sym| -sym);
        let values = self.inverse(&spec);
        Field::with_spectrum(self.dim, self.n, values, spec)
    }

    /// `A u = -lap u + (2/eps^2) u`, the convex-part gradient operator.
    pub fn convex_operator(&self, f: &Field, eps: f64) -> Field {
        let mass = 2.0 / (eps * eps);
        let mut spec = self.spectrum_of(f);
        self.apply_symbol(&mut spec, |sym| sym + mass);
        let values = self.inverse(&spec);
        Field::with_spectrum(self.dim, self.n, values, spec)
    }

    /// `1/2 int ||grad u||^2 dx` by Parseval.
    pub fn dirichlet_half(&self, f: &Field) -> f64 {
        match f.cached_spectrum() {
            Some(spec) => 0.5 * self.weighted_mode_sum(spec, |sym| sym),
            None => {
                let spec = self.forward(f.values());
                0.5 * self.weighted_mode_sum(&spec, |sym| sym)
            }
        }
    }

    /// `int u^2 dx = h^dim sum u_i^2`.
    pub fn l2_norm_sq(&self, f: &Field) -> f64 {
        self.cell_volume() * f.values().iter().map(|v| v * v).sum::<f64>()
    }

    /// L2 distance between two fields.
    pub fn l2_distance(&self, a: &Field, b: &Field) -> f64 {
        let s: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        (self.cell_volume() * s).sqrt()
    }

    /// Allocation-free stepping workspace for the long-running drivers.
    pub fn workspace(&self) -> SpectralWorkspace {
        SpectralWorkspace::new(self)
    }
}

/// Private FFT buffers for a single run: the tight stepping loops transform
/// in place without going through the grid's shared plans.
pub struct SpectralWorkspace {
    grid: PeriodicGrid,
    r2c: R2CPlan64,
    c2r: C2RPlan64,
    pub real: AlignedVec<f64>,
    pub spec: AlignedVec<c64>,
}

impl SpectralWorkspace {
    fn new(grid: &PeriodicGrid) -> Self {
        let dims = vec![grid.n(); grid.dim()];
        Self {
            grid: grid.clone(),
            r2c: R2CPlan::aligned(&dims, Flag::ESTIMATE | Flag::DESTROYINPUT)
                .expect("fftw r2c plan"),
            c2r: C2RPlan::aligned(&dims, Flag::ESTIMATE | Flag::DESTROYINPUT)
                .expect("fftw c2r plan"),
            real: AlignedVec::new(grid.len()),
            spec: AlignedVec::new(grid.spectrum_len()),
        }
    }

    /// In-place solve of `(coeff_mass - coeff_lap * lap) out = in` on the
    /// contents of `self.real` (destroyed), result written back to
    /// `self.real`. Folds in the transform normalization.
    pub fn solve_in_place(&mut self, coeff_mass: f64, coeff_lap: f64, fix_mean: Option<f64>) {
        self.r2c.r2c(&mut self.real, &mut self.spec).expect("fftw r2c");
        let scale = 1.0 / self.grid.len() as f64;
        self.grid
            .apply_symbol(&mut self.spec, |sym| scale / (coeff_mass + coeff_lap * sym));
        if let Some(p) = fix_mean {
            self.spec[0] = c64::new(p, 0.0);
        }
        self.c2r.c2r(&mut self.spec, &mut self.real).expect("fftw c2r");
    }
}
