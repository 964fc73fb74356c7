//! The canonical dyadic partition of unity.
//!
//! The profile is the standard smooth step built from `f(t) = exp(-1/t)`:
//! `S(t) = f(t) / (f(t) + f(1-t))`, which is exactly 0 for `t <= 0` and
//! exactly 1 for `t >= 1`. The low-pass profile is
//! `chi(rho) = S((4/3 - rho) / (7/12))`, so `chi = 1` on `rho <= 3/4` and
//! `chi = 0` on `rho >= 4/3`, and the annular function is
//! `phi(rho) = chi(rho/2) - chi(rho)`, supported in `3/4 <= rho <= 8/3` and
//! identically 1 on `[4/3, 3/2]`. Sums of `phi(2^{-j} rho)` telescope exactly
//! to a difference of two `chi` values, which is what makes the partition
//! property checkable to roundoff on the whole lattice.

use spectral_core::{ops, Error, Grid, Result, SpectralField, SpectralVectorField};

/// `exp(-1/t)` glued to zero: exactly 0 for `t <= 0`.
fn bump_half(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`, strictly increasing between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = bump_half(t);
        a / (a + bump_half(1.0 - t))
    }
}

/// Radial low-pass profile: 1 on `rho <= 3/4`, 0 on `rho >= 4/3`.
pub fn chi(rho: f64) -> f64 {
    smooth_step((4.0 / 3.0 - rho) / (7.0 / 12.0))
}

/// Annular profile `phi(rho) = chi(rho/2) - chi(rho)`.
pub fn partition_phi(rho: f64) -> f64 {
    chi(rho / 2.0) - chi(rho)
}

/// Dyadic block range fitted to a grid, with the partition property verified
/// on every lattice radius at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicPartition {
    /// Choose `[j_min, j_max]` so every nonzero lattice frequency is covered
    /// with `margin` spare blocks on each side, then verify
    /// `sum_j phi(2^{-j} |xi|) = 1` to `1e-12` over all distinct radii.
    pub fn for_grid(grid: &Grid, margin: i32) -> Result<DyadicPartition> {
        if margin < 2 {
            return Err(Error::Config(format!(
                "partition margin must be at least 2, got {margin}"
            )));
        }
        let j_min = (1.0 / grid.box_scale).log2().floor() as i32 - margin;
        let j_max = grid.xi_max().log2().ceil() as i32 + margin;
        if j_max < j_min {
            return Err(Error::Config(
                "grid too small for the requested partition margin".into(),
            ));
        }
        let part = DyadicPartition { j_min, j_max };
        part.verify_telescoping(grid)?;
        Ok(part)
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn range(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    /// Check the partition property on the set of distinct lattice radii.
    fn verify_telescoping(&self, grid: &Grid) -> Result<()> {
        let h = grid.n / 2;
        // Distinct squared integer radii reachable on the lattice.
        let mut seen = vec![false; 3 * h * h + 1];
        for a in 0..=h {
            for b in 0..=h {
                for c in 0..=h {
                    seen[a * a + b * b + c * c] = true;
                }
            }
        }
        for (m2, hit) in seen.iter().enumerate().skip(1) {
            if !hit {
                continue;
            }
            let rho = (m2 as f64).sqrt() / grid.box_scale;
            let sum: f64 = self.range().map(|j| partition_phi(rho * 0.5f64.powi(j))).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "partition of unity fails at |xi| = {rho}: sum = {sum}"
                )));
            }
        }
        Ok(())
    }

    /// The dyadic block `Delta_j u`, the multiplier `phi(2^{-j} |xi|)`.
    ///
    /// Valid for any `j`; blocks outside the verified range are zero on the
    /// lattice by support.
    pub fn block(&self, u: &SpectralField, j: i32) -> SpectralField {
        let scale = 0.5f64.powi(j);
        ops::apply_radial_multiplier(u, |rho| partition_phi(rho * scale))
            .expect("phi is finite everywhere")
    }

    /// The low-pass `S_j u = sum_{j' <= j-1} Delta_{j'} u`, realized exactly
    /// as the multiplier `chi(2^{-j} |xi|)` via telescoping.
    pub fn low_pass(&self, u: &SpectralField, j: i32) -> SpectralField {
        let scale = 0.5f64.powi(j);
        ops::apply_radial_multiplier(u, |rho| chi(rho * scale))
            .expect("chi is finite everywhere")
    }

    /// Block applied to each component of a vector field.
    pub fn block_vec(&self, v: &SpectralVectorField, j: i32) -> SpectralVectorField {
        ops::map_components(v, |c| Ok(self.block(c, j))).expect("shared grid")
    }
}
