//! Stationary Hall-MHD on the periodic box, in the extended `(u, B, J)`
//! formulation that restores scaling invariance. Provides the linear
//! data-to-state map, the three bilinear nonlinearities, Picard solvers in
//! series and fixed-point modes, the Friedrichs spectral-cutoff scheme, and a
//! diagnostic suite (residuals, cancellation pairings, the auxiliary
//! `v = u - h curl B` equation, dyadic scaling equivariance).

pub mod diagnostics;
pub mod friedrichs;
pub mod manufactured;
pub mod operators;
pub mod picard;
pub mod scaling;
pub mod state;

pub use state::{
    CurlGProvenance, ForceTriple, HallState, PhysicalParams, SolveError, SolveReport,
};
