//! Momentum-based minimization of Ginzburg-Landau diffuse-perimeter energies.
//!
//! The crate provides
//!
//! * smoothed double-well potentials with a quadratic convex part
//!   ([`potentials`]), so that every implicit time step is a linear solve,
//! * backend-agnostic time steppers ([`schemes`]): convex-concave split
//!   gradient descent, the CINEMA and FISTA momentum schemes and the fully
//!   explicit Nesterov scheme, together with energy accounting,
//! * a spectral backend on periodic grids ([`grid`]) and a graph Laplacian
//!   backend for semi-supervised classification ([`graph`]),
//! * one-dimensional profile/corrector machinery and the singular-limit
//!   circle ODE used to validate the grid solver ([`ode`]),
//! * data ingestion for the experiments ([`ingest`]) and the experiment
//!   drivers themselves ([`experiments`]).
//!
//! The [`acceptance`] module bundles the end-to-end validation suite; it is
//! exercised both by the `acceptance` integration test target and by
//! `phaseflow validate`.

pub mod acceptance;
pub mod experiments;
pub mod graph;
pub mod grid;
pub mod ingest;
pub mod io;
pub mod ode;
pub mod potentials;
pub mod quadrature;
pub mod schemes;

pub use potentials::{DoubleWell, Wells};
pub use schemes::{Scheme, SchemeParams, SchemeState};
