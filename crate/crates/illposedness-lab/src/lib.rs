//! Norm-inflation laboratory for the stationary Navier-Stokes solution map
//! at `p = 3`, `r < 3/2`: a family of oscillating-atom forces whose data norm
//! shrinks while the first Picard iterate keeps a bounded-below dyadic block
//! seminorm. Frequencies are recentered by a norm-preserving dyadic shift so
//! the construction fits on a desk-scale grid.

pub mod config;
pub mod profile;
pub mod semianalytic;
pub mod seminorm;
pub mod sweep;
pub mod synthesize;

pub use config::{BlockSetRule, InflationConfig, ProfileParams};
pub use littlewood_paley::audit::ns_bilinear;
pub use synthesize::Synthesis;
