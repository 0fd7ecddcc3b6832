//! One-dimensional profile and corrector machinery plus the singular-limit
//! circle ODE. These are the independent references the grid solver is
//! validated against.

mod circle;
mod corrector;
mod profile;

pub use circle::{
    allen_cahn_circle, allen_cahn_vanishing_time, circle_ode_solve, velocity_adjusted_perimeter,
    CircleState, CircleTrajectory,
};
pub use corrector::{corrector_moment, solve_corrector, Corrector};
pub use profile::{solve_profile, Profile};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("profile did not reach the well by x_max: |phi(x_max)| = {reached:.12}, need 1 - 1e-10")]
    XMaxTooSmall { reached: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("corrector shooting blew up even on the reduced domain [0, {x_max:.3}]")]
    CorrectorBlowUp { x_max: f64 },
}
