//! Deterministic random ensembles for the estimate audits.
//!
//! All samples are band-limited to `|k_i| <= band` with a power-law radial
//! envelope `|xi|^{-alpha}`; the decay exponent cycles through
//! `{0, 0.5, 1, 1.5, 2}` with the sample index so each ensemble mixes rough
//! and smooth fields. Holding `band` fixed across resolutions makes the same
//! modes (hence comparable ratios) available on every grid.

use spectral_core::{ops, synth, Grid, SpectralField, SpectralVectorField};

const DECAYS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

fn shape(f: &SpectralField, alpha: f64) -> SpectralField {
    if alpha == 0.0 {
        return f.clone();
    }
    ops::apply_radial_multiplier(f, |r| r.powf(-alpha)).expect("r > 0 on mean-free modes")
}

fn shape_vec(v: &SpectralVectorField, alpha: f64) -> SpectralVectorField {
    ops::map_components(v, |c| Ok(shape(c, alpha))).expect("shared grid")
}

/// The `i`-th scalar pair of the ensemble.
pub fn scalar_pair(grid: Grid, seed: u64, i: u64, band: i64) -> (SpectralField, SpectralField) {
    let alpha = DECAYS[(i % DECAYS.len() as u64) as usize];
    let beta = DECAYS[((i / DECAYS.len() as u64) % DECAYS.len() as u64) as usize];
    let u = shape(&synth::random_field(grid, seed ^ (2 * i + 1), band), alpha);
    let v = shape(&synth::random_field(grid, seed ^ (2 * i + 2), band), beta);
    (u, v)
}

/// The `i`-th divergence-free vector pair of the ensemble.
pub fn divfree_pair(
    grid: Grid,
    seed: u64,
    i: u64,
    band: i64,
) -> (SpectralVectorField, SpectralVectorField) {
    let alpha = DECAYS[(i % DECAYS.len() as u64) as usize];
    let beta = DECAYS[((i / DECAYS.len() as u64) % DECAYS.len() as u64) as usize];
    let u = shape_vec(&synth::random_divfree_field(grid, seed ^ (2 * i + 1), band), alpha);
    let v = shape_vec(&synth::random_divfree_field(grid, seed ^ (2 * i + 2), band), beta);
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::DealiasRule;

    #[test]
    fn pairs_are_resolution_independent() {
        let g32 = Grid::new(32, 1.0, DealiasRule::TwoThirds).unwrap();
        let g64 = Grid::new(64, 1.0, DealiasRule::TwoThirds).unwrap();
        let (u32, _) = scalar_pair(g32, 7, 3, 8);
        let (u64f, _) = scalar_pair(g64, 7, 3, 8);
        // Same coefficients on the shared band.
        for k1 in -8i64..=8 {
            for k2 in -8i64..=8 {
                for k3 in -8i64..=8 {
                    if (k1, k2, k3) == (0, 0, 0) {
                        continue;
                    }
                    let a = u32.coeff([k1, k2, k3]);
                    let b = u64f.coeff([k1, k2, k3]);
                    assert!((a - b).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn divfree_pairs_are_solenoidal() {
        let g = Grid::new(32, 1.0, DealiasRule::TwoThirds).unwrap();
        for i in 0..4 {
            let (u, v) = divfree_pair(g, 1, i, 8);
            assert!(u.divergence_residual() < 1e-12);
            assert!(v.divergence_residual() < 1e-12);
        }
    }
}
