//! Seeded random band-limited fields for tests and ensembles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::project;
use crate::vector::SpectralVectorField;

/// Deterministic real-valued field with independent coefficients on the modes
/// `0 < max_i |k_i| <= band`, conjugate-symmetric by construction.
///
/// Panics if `band` does not fit strictly inside the grid (`band >= N/2`).
pub fn random_field(grid: Grid, seed: u64, band: i64) -> SpectralField {
    assert!(band >= 1 && band < grid.n as i64 / 2, "band must fit in the grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zero(grid);
    for k1 in -band..=band {
        for k2 in -band..=band {
            for k3 in -band..=band {
                let k = [k1, k2, k3];
                if k == [0, 0, 0] {
                    continue;
                }
                // Populate one of each conjugate pair; mirror the other.
                if k > [0, 0, 0] {
                    let c = Complex64::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    );
                    f.set_coeff(k, c);
                    f.set_coeff([-k1, -k2, -k3], c.conj());
                }
            }
        }
    }
    f
}

/// Three independent components; see [`random_field`].
pub fn random_vector_field(grid: Grid, seed: u64, band: i64) -> SpectralVectorField {
    SpectralVectorField::new([
        random_field(grid, seed.wrapping_mul(3).wrapping_add(1), band),
        random_field(grid, seed.wrapping_mul(3).wrapping_add(2), band),
        random_field(grid, seed.wrapping_mul(3).wrapping_add(3), band),
    ])
    .expect("shared grid")
}

/// Leray projection of a random vector field: divergence-free, real,
/// band-limited to the same band.
pub fn random_divfree_field(grid: Grid, seed: u64, band: i64) -> SpectralVectorField {
    project::leray_project(&random_vector_field(grid, seed, band))
}
