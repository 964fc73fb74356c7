//! Bony paraproduct and remainder operators.
//!
//! Because every dealiasing rule in `spectral-core` is a fixed linear
//! projector, the decomposition `uv = T_u v + T_v u + R(u, v)` holds on the
//! lattice to roundoff whenever both products are formed under the same rule.

use spectral_core::{product, Result, SpectralField};

use crate::partition::DyadicPartition;

/// The paraproduct `T_u v = sum_j S_{j-1} u Delta_j v`.
pub fn paraproduct(
    part: &DyadicPartition,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<SpectralField> {
    let mut acc = SpectralField::zero(*u.grid());
    for j in part.range() {
        let low = part.low_pass(u, j - 1);
        let block = part.block(v, j);
        acc = acc.add(&product::multiply(&low, &block)?)?;
    }
    Ok(acc)
}

/// The remainder `R(u, v) = sum_{|j - k| <= 1} Delta_j u Delta_k v`.
pub fn remainder(
    part: &DyadicPartition,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<SpectralField> {
    let mut acc = SpectralField::zero(*u.grid());
    for j in part.range() {
        let bu = part.block(u, j);
        for k in (j - 1)..=(j + 1) {
            if k < part.j_min || k > part.j_max {
                continue;
            }
            let bv = part.block(v, k);
            acc = acc.add(&product::multiply(&bu, &bv)?)?;
        }
    }
    Ok(acc)
}

/// Residual of the Bony identity, relative to `||u||_2 ||v||_2`.
pub fn bony_residual(
    part: &DyadicPartition,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<f64> {
    let uv = product::multiply(u, v)?;
    let sum = paraproduct(part, u, v)?
        .add(&paraproduct(part, v, u)?)?
        .add(&remainder(part, u, v)?)?;
    let diff = uv.sub(&sum)?;
    let scale = u.l2_norm() * v.l2_norm() / u.grid().volume().sqrt();
    // Compare the means too: the decomposition must reproduce the product
    // mean, not just the oscillating part.
    let mean_err = (uv.mean() - sum.mean()).norm() * u.grid().volume().sqrt();
    if scale > 0.0 {
        Ok((diff.l2_norm() + mean_err) / scale)
    } else {
        Ok(diff.l2_norm() + mean_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::{synth, Complex64, DealiasRule, Grid};

    fn setup(n: usize) -> (Grid, DyadicPartition) {
        let g = Grid::new(n, 1.0, DealiasRule::TwoThirds).unwrap();
        let p = DyadicPartition::for_grid(&g, 2).unwrap();
        (g, p)
    }

    #[test]
    fn paraproduct_with_zero_low_part_vanishes() {
        let (g, part) = setup(32);
        let u = SpectralField::zero(g);
        let v = synth::random_field(g, 3, 6);
        let t = paraproduct(&part, &u, &v).unwrap();
        assert_eq!(t.l2_norm(), 0.0);
    }

    #[test]
    fn separated_modes_land_in_the_paraproduct() {
        // u in a low block, v five blocks higher: T_u v carries the whole
        // product, T_v u and R vanish.
        let (g, part) = setup(64);
        let mut u = SpectralField::zero(g);
        u.set_coeff([1, 1, 0], Complex64::new(1.0, 0.0));
        u.set_coeff([-1, -1, 0], Complex64::new(1.0, 0.0));
        let mut v = SpectralField::zero(g);
        // |k| = sqrt(1024 + 4) in block around 2^5.
        v.set_coeff([0, 2, 18], Complex64::new(1.0, 0.0));
        v.set_coeff([0, -2, -18], Complex64::new(1.0, 0.0));
        let uv = spectral_core::product::multiply(&u, &v).unwrap();
        let tuv = paraproduct(&part, &u, &v).unwrap();
        let tvu = paraproduct(&part, &v, &u).unwrap();
        let r = remainder(&part, &u, &v).unwrap();
        assert!(tuv.relative_error(&uv).unwrap() < 1e-12);
        assert!(tvu.l2_norm() < 1e-13);
        assert!(r.l2_norm() < 1e-13);
    }

    #[test]
    fn bony_identity_holds_for_random_fields() {
        let (g, part) = setup(32);
        for seed in 0..5 {
            let u = synth::random_field(g, seed, 8);
            let v = synth::random_field(g, seed + 100, 8);
            assert!(bony_residual(&part, &u, &v).unwrap() < 1e-10);
        }
    }

    #[test]
    fn bony_identity_holds_under_zero_padding() {
        let g = Grid::new(32, 1.0, DealiasRule::ZeroPad3Halves).unwrap();
        let part = DyadicPartition::for_grid(&g, 2).unwrap();
        let u = synth::random_field(g, 9, 10);
        let v = synth::random_field(g, 10, 10);
        assert!(bony_residual(&part, &u, &v).unwrap() < 1e-10);
    }
}
