//! The block commutator `[Delta_j, b] a = Delta_j(b a) - b Delta_j a`.

use spectral_core::{product, Result, SpectralField};

use crate::partition::DyadicPartition;

pub fn commutator(
    part: &DyadicPartition,
    j: i32,
    b: &SpectralField,
    a: &SpectralField,
) -> Result<SpectralField> {
    let first = part.block(&product::multiply(b, a)?, j);
    let second = product::multiply(b, &part.block(a, j))?;
    first.sub(&second)
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
    fn zero_multiplier_gives_zero() {
        let (g, part) = setup(32);
        let b = SpectralField::zero(g);
        let a = synth::random_field(g, 5, 8);
        let c = commutator(&part, 2, &b, &a).unwrap();
        assert_eq!(c.l2_norm(), 0.0);
    }

    #[test]
    fn matches_direct_two_term_difference() {
        let (g, part) = setup(32);
        let b = synth::random_field(g, 7, 6);
        let a = synth::random_field(g, 8, 6);
        for j in [0, 1, 2, 3] {
            let c = commutator(&part, j, &b, &a).unwrap();
            let direct = part
                .block(&spectral_core::product::multiply(&b, &a).unwrap(), j)
                .sub(&spectral_core::product::multiply(&b, &part.block(&a, j)).unwrap())
                .unwrap();
            assert!(c.relative_error(&direct).unwrap() < 1e-14);
        }
    }

    #[test]
    fn low_frequency_a_reduces_to_block_of_product() {
        // If a sits far below block j, Delta_j a = 0 and the commutator is
        // just Delta_j(b a).
        let (g, part) = setup(64);
        let mut a = SpectralField::zero(g);
        a.set_coeff([1, 0, 0], Complex64::new(1.0, 0.0));
        a.set_coeff([-1, 0, 0], Complex64::new(1.0, 0.0));
        let b = synth::random_field(g, 9, 20);
        let j = 4;
        assert!(part.block(&a, j).l2_norm() == 0.0);
        let c = commutator(&part, j, &b, &a).unwrap();
        let expect = part.block(&spectral_core::product::multiply(&b, &a).unwrap(), j);
        assert!(c.relative_error(&expect).unwrap() < 1e-13);
    }
}
