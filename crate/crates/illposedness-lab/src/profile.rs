//! The Fourier-side envelope profile: a smooth radial step that is exactly 1
//! inside the inner radius and exactly 0 outside the outer radius, realized
//! directly on the frequency lattice so its support constraints are exact.

use littlewood_paley::partition::smooth_step;

use crate::config::ProfileParams;

/// `theta_hat(xi)`: 1 for `|xi| <= inner`, 0 for `|xi| >= outer`, smooth and
/// monotone in between.
pub fn theta_hat(xi: f64, profile: &ProfileParams) -> f64 {
    let a = xi.abs();
    if a <= profile.inner_radius {
        1.0
    } else if a >= profile.outer_radius {
        0.0
    } else {
        smooth_step((profile.outer_radius - a) / (profile.outer_radius - profile.inner_radius))
    }
}
