//! Double-well potentials with a quadratic convex part.
//!
//! The smoothed family
//!
//! ```text
//! W_R(u) = u^2 - 2 sqrt((R+1)/R) sqrt(u^2 + 1/R) + 1 + 2/R,   R > 0,
//! ```
//!
//! approximates `(|u|-1)^2` as `R -> inf`, vanishes exactly at `u = ±1` and
//! splits as `W_R = u^2 + W_conc` with `W_conc` concave. Because the convex
//! part is exactly quadratic, the implicit half of every convex-concave time
//! step is a linear solve; all backends rely on this.
//!
//! Wells at `{0, 1}` are realized by the affine argument map `s = 2u - 1`
//! with energy scale 1/4, which keeps the convex part exactly `u^2` (the
//! affine leftover of the re-centering is assigned to the concave part).
//! The vector-valued multi-well potential sums the mapped scalar wells per
//! component under the simplex constraint `sum_j u_j = 1`; its wells are the
//! one-hot vectors.

use crate::quadrature::{self, QuadratureError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error("smoothing parameter R must be positive, got {0}")]
    NonPositiveSmoothing(f64),
    #[error("vector potential needs at least 2 classes, got {0}")]
    ClassCountTooSmall(usize),
    #[error("operation requires wells at ±1")]
    WrongWellConvention,
}

/// Evaluate `W_R(u)` for the wells-at-`±1` family.
///
/// Uses the factored form `W_R(u) = (sqrt(u^2 + 1/R) - sqrt((R+1)/R))^2`
/// with the difference written as `(u^2 - 1) / (sum of the roots)`; this is
/// exact at the wells and keeps full relative precision in the tails, where
/// the textbook expression loses everything to cancellation.
pub fn wr_eval(u: f64, r: f64) -> f64 {
    debug_assert!(r > 0.0);
    let a = ((r + 1.0) / r).sqrt();
    let b = u.mul_add(u, 1.0 / r).sqrt();
    let d = u.mul_add(u, -1.0) / (a + b);
    d * d
}

/// Concave remainder `W_R(u) - u^2`.
pub fn wr_concave(u: f64, r: f64) -> f64 {
    -2.0 * ((r + 1.0) / r).sqrt() * (u * u + 1.0 / r).sqrt() + 1.0 + 2.0 / r
}

/// Derivative of the concave remainder; odd in `u`, bounded by
/// `2 sqrt((R+1)/R)` in magnitude, and exactly `-2` at `u = 1`.
pub fn wr_concave_prime(u: f64, r: f64) -> f64 {
    debug_assert!(r > 0.0);
    -2.0 * ((r + 1.0) / r).sqrt() * u / (u * u + 1.0 / r).sqrt()
}

/// Profile constant `c0 = \int_{-1}^{1} sqrt(2 W(z)) dz` for a scalar
/// potential with wells at `±1`, by adaptive quadrature with absolute
/// tolerance `1e-10`. The integrand is clamped at zero so that round-off
/// at the wells cannot produce NaN.
pub fn profile_constant_c0(w: impl Fn(f64) -> f64) -> Result<f64, QuadratureError> {
    quadrature::integrate(|z| (2.0 * w(z)).max(0.0).sqrt(), -1.0, 1.0, &[0.0], 1e-10)
}

/// Well placement convention for [`DoubleWell`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wells {
    /// Wells at `-1` and `+1` (grid phase fields).
    PlusMinusOne,
    /// Wells at `0` and `1` (graph classification, one-hot targets).
    ZeroOne,
}

/// Contract shared by all scalar potentials the steppers accept:
/// `W(u) = u^2 + concave(u)` with `concave` differentiable and concave.
pub trait SplitPotential {
    fn eval(&self, u: f64) -> f64;
    /// Derivative of the concave remainder `W(u) - u^2`.
    fn concave_prime(&self, u: f64) -> f64;
    fn grad(&self, u: f64) -> f64 {
        2.0 * u + self.concave_prime(u)
    }
}

/// The `W_R` double-well potential in a chosen well convention, scalar
/// (`k = 1`) or vector-valued on the simplex (`k >= 2`).
#[derive(Debug, Clone)]
pub struct DoubleWell {
    r: f64,
    wells: Wells,
    k: usize,
}

impl DoubleWell {
    pub fn new(r: f64, wells: Wells, k: usize) -> Result<Self, PotentialError> {
        if !(r > 0.0) {
            return Err(PotentialError::NonPositiveSmoothing(r));
        }
        if k == 0 {
            return Err(PotentialError::ClassCountTooSmall(k));
        }
        Ok(Self { r, wells, k })
    }

    /// Scalar potential with wells at `±1`.
    pub fn scalar(r: f64) -> Result<Self, PotentialError> {
        Self::new(r, Wells::PlusMinusOne, 1)
    }

    /// Vector-valued potential with `k` one-hot wells on the simplex.
    pub fn multiwell(r: f64, k: usize) -> Result<Self, PotentialError> {
        if k < 2 {
            return Err(PotentialError::ClassCountTooSmall(k));
        }
        Self::new(r, Wells::ZeroOne, k)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn wells(&self) -> Wells {
        self.wells
    }

    pub fn classes(&self) -> usize {
        self.k
    }

    /// Vector potential value `W(u) = 1/4 sum_j W_R(2 u_j - 1)`; finite on
    /// the simplex (the constraint itself is enforced by the solvers).
    pub fn multiwell_eval(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.k);
        u.iter().map(|&uj| 0.25 * wr_eval(2.0 * uj - 1.0, self.r)).sum()
    }

    /// Per-component gradient of the concave remainder of the vector
    /// potential (the affine leftover of the well map included).
    pub fn multiwell_concave_grad(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.k);
        debug_assert_eq!(out.len(), self.k);
        for (o, &uj) in out.iter_mut().zip(u) {
            *o = 0.5 * wr_concave_prime(2.0 * uj - 1.0, self.r) - 1.0;
        }
    }

    /// `c0` for the scalar wells-at-`±1` form.
    pub fn profile_constant(&self) -> Result<f64, PotentialError> {
        if self.wells != Wells::PlusMinusOne {
            return Err(PotentialError::WrongWellConvention);
        }
        let r = self.r;
        profile_constant_c0(move |z| wr_eval(z, r))
            .map_err(|_| PotentialError::WrongWellConvention)
    }

    /// Second derivative of the scalar potential, used for the corrector
    /// equation and well-curvature estimates.
    pub fn second_derivative(&self, u: f64) -> f64 {
        match self.wells {
            Wells::PlusMinusOne => wr_second_derivative(u, self.r),
            Wells::ZeroOne => wr_second_derivative(2.0 * u - 1.0, self.r),
        }
    }
}

fn wr_second_derivative(u: f64, r: f64) -> f64 {
    let s = u * u + 1.0 / r;
    2.0 - 2.0 * ((r + 1.0) / r).sqrt() * (1.0 / r) / (s * s.sqrt())
}

impl SplitPotential for DoubleWell {
    fn eval(&self, u: f64) -> f64 {
        match self.wells {
            Wells::PlusMinusOne => wr_eval(u, self.r),
            Wells::ZeroOne => 0.25 * wr_eval(2.0 * u - 1.0, self.r),
        }
    }

    fn concave_prime(&self, u: f64) -> f64 {
        match self.wells {
            Wells::PlusMinusOne => wr_concave_prime(u, self.r),
            // d/du [ 1/4 W_conc(2u-1) - u + 1/4 ]
            Wells::ZeroOne => 0.5 * wr_concave_prime(2.0 * u - 1.0, self.r) - 1.0,
        }
    }
}

/// Project a vector onto the affine constraint `sum_j u_j = 1` by adding the
/// same correction to every component.
pub fn simplex_project(u: &mut [f64]) {
    let k = u.len() as f64;
    let shift = (1.0 - u.iter().sum::<f64>()) / k;
    for v in u {
        *v += shift;
    }
}
