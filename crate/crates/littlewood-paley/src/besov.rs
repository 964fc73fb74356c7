//! Homogeneous Besov and Triebel-Lizorkin norms over a dyadic partition.

use spectral_core::{Error, Exponent, Result, SpectralField, SpectralVectorField};

use crate::partition::DyadicPartition;

/// The index triple `(s, p, r)` of a Besov or Triebel-Lizorkin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: Exponent,
    pub r: Exponent,
}

impl BesovIndex {
    pub fn new(s: f64, p: impl Into<Exponent>, r: impl Into<Exponent>) -> Result<BesovIndex> {
        let idx = BesovIndex {
            s,
            p: p.into().validate()?,
            r: r.into().validate()?,
        };
        if !s.is_finite() {
            return Err(Error::Parameter(format!("regularity s must be finite, got {s}")));
        }
        Ok(idx)
    }
}

/// `L^p` norms of every block, indexed from `part.j_min`.
pub fn block_lp_norms(
    part: &DyadicPartition,
    u: &SpectralField,
    p: Exponent,
) -> Result<Vec<f64>> {
    part.range().map(|j| part.block(u, j).lp_norm(p)).collect()
}

/// Combine precomputed block norms into a Besov norm.
pub fn besov_from_block_norms(part: &DyadicPartition, norms: &[f64], s: f64, r: Exponent) -> f64 {
    let weighted = part
        .range()
        .zip(norms)
        .map(|(j, &n)| 2f64.powf(j as f64 * s) * n);
    r.ell_norm(weighted)
}

/// The Besov norm `|| 2^{js} ||Delta_j u||_{L^p} ||_{l^r}`.
pub fn besov_norm(part: &DyadicPartition, u: &SpectralField, idx: BesovIndex) -> Result<f64> {
    let norms = block_lp_norms(part, u, idx.p)?;
    Ok(besov_from_block_norms(part, &norms, idx.s, idx.r))
}

/// Stacked multi-component Besov norm: the block `L^p` norm is taken of the
/// pointwise Euclidean magnitude over all listed components.
pub fn besov_norm_components(
    part: &DyadicPartition,
    components: &[&SpectralField],
    idx: BesovIndex,
) -> Result<f64> {
    if components.is_empty() {
        return Ok(0.0);
    }
    let grid = *components[0].grid();
    let mut weighted = Vec::with_capacity(part.len());
    for j in part.range() {
        let blocks: Vec<SpectralField> = components.iter().map(|c| part.block(c, j)).collect();
        // An empty block contributes nothing and needs no transform.
        if blocks.iter().all(|b| b.l2_norm() == 0.0) {
            weighted.push(0.0);
            continue;
        }
        let norm = match idx.p {
            Exponent::Finite(p) if p == 2.0 => {
                let sq: f64 = blocks.iter().map(|b| b.l2_norm().powi(2)).sum();
                sq.sqrt()
            }
            _ => {
                let phys: Vec<Vec<spectral_core::Complex64>> =
                    blocks.iter().map(|b| b.to_physical()).collect();
                let mags = (0..grid.len()).map(|i| {
                    phys.iter().map(|ph| ph[i].norm_sqr()).sum::<f64>().sqrt()
                });
                match idx.p {
                    Exponent::Infinity => mags.fold(0.0, f64::max),
                    Exponent::Finite(p) => {
                        let sum: f64 = mags.map(|m| m.powf(p)).sum();
                        (grid.cell_volume() * sum).powf(1.0 / p)
                    }
                }
            }
        };
        weighted.push(2f64.powf(j as f64 * idx.s) * norm);
    }
    Ok(idx.r.ell_norm(weighted))
}

/// Besov norm of a vector field (its three components stacked).
pub fn besov_norm_vec(
    part: &DyadicPartition,
    v: &SpectralVectorField,
    idx: BesovIndex,
) -> Result<f64> {
    besov_norm_components(part, &[v.component(0), v.component(1), v.component(2)], idx)
}

/// The Triebel-Lizorkin norm: `L^p` over the box of the pointwise
/// `l^r`-in-`j` sum of `2^{js} |Delta_j u|`.
///
/// The `p = inf` scale is out of scope except for `r = inf`, where it
/// coincides with the Besov norm.
pub fn triebel_lizorkin_norm(
    part: &DyadicPartition,
    u: &SpectralField,
    idx: BesovIndex,
) -> Result<f64> {
    match (idx.p, idx.r) {
        (Exponent::Infinity, Exponent::Infinity) => besov_norm(part, u, idx),
        (Exponent::Infinity, _) => Err(Error::UnsupportedIndex(
            "Triebel-Lizorkin norms with p = inf and r < inf are not supported".into(),
        )),
        (Exponent::Finite(p), r) => {
            let grid = *u.grid();
            let blocks: Vec<(f64, Vec<spectral_core::Complex64>)> = part
                .range()
                .map(|j| (2f64.powf(j as f64 * idx.s), part.block(u, j).to_physical()))
                .collect();
            let sum: f64 = (0..grid.len())
                .map(|i| {
                    let inner =
                        r.ell_norm(blocks.iter().map(|(w, phys)| w * phys[i].norm()));
                    inner.powf(p)
                })
                .sum();
            Ok((grid.cell_volume() * sum).powf(1.0 / p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::{synth, Complex64, DealiasRule, Grid};

    fn setup(n: usize, l: f64) -> (Grid, DyadicPartition) {
        let g = Grid::new(n, l, DealiasRule::TwoThirds).unwrap();
        let p = DyadicPartition::for_grid(&g, 2).unwrap();
        (g, p)
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let (g, part) = setup(16, 1.0);
        let u = SpectralField::zero(g);
        let idx = BesovIndex::new(0.5, 2.0, 1.0).unwrap();
        assert_eq!(besov_norm(&part, &u, idx).unwrap(), 0.0);
        let idxf = BesovIndex::new(0.0, 3.0, 2.0).unwrap();
        assert_eq!(triebel_lizorkin_norm(&part, &u, idxf).unwrap(), 0.0);
    }

    #[test]
    fn single_plateau_mode_norm_is_weighted_lp() {
        // Mode with |xi| = 1.5: block j = 0, phi = 1 there.
        let (g, part) = setup(32, 2.0);
        let mut u = SpectralField::zero(g);
        u.set_coeff([2, 2, 1], Complex64::new(1.0, 0.0));
        u.set_coeff([-2, -2, -1], Complex64::new(1.0, 0.0));
        let lp = u.lp_norm(Exponent::finite(3.0)).unwrap();
        for (s, r) in [(0.5, 1.0), (-1.0, 2.0)] {
            let idx = BesovIndex::new(s, 3.0, r).unwrap();
            let b = besov_norm(&part, &u, idx).unwrap();
            // j = 0, so the weight 2^{js} is 1 and the norm is just L^3.
            assert!((b - lp).abs() < 1e-12 * lp);
        }
        // Single-block field: TL and Besov norms coincide.
        let idx = BesovIndex::new(0.25, 3.0, 2.0).unwrap();
        let tl = triebel_lizorkin_norm(&part, &u, idx).unwrap();
        let b = besov_norm(&part, &u, idx).unwrap();
        assert!((tl - b).abs() < 1e-12 * b);
    }

    #[test]
    fn r_nesting_monotonicity() {
        let (g, part) = setup(32, 1.0);
        let u = synth::random_field(g, 8, 9);
        let mut prev = f64::INFINITY;
        for r in [1.0, 1.5, 2.0, 4.0] {
            let idx = BesovIndex::new(0.5, 2.0, r).unwrap();
            let n = besov_norm(&part, &u, idx).unwrap();
            assert!(n <= prev * (1.0 + 1e-12));
            prev = n;
        }
    }

    #[test]
    fn f0p2_comparable_to_lp() {
        let (g, part) = setup(32, 1.0);
        for seed in 0..5 {
            let u = synth::random_field(g, seed, 8);
            let lp = u.lp_norm(Exponent::finite(3.0)).unwrap();
            let idx = BesovIndex::new(0.0, 3.0, 2.0).unwrap();
            let tl = triebel_lizorkin_norm(&part, &u, idx).unwrap();
            let ratio = tl / lp;
            assert!(ratio > 0.2 && ratio < 5.0, "ratio = {ratio}");
        }
    }

    #[test]
    fn tl_p_infinity_is_rejected() {
        let (g, part) = setup(16, 1.0);
        let u = synth::random_field(g, 1, 4);
        let idx = BesovIndex::new(0.0, Exponent::INF, 2.0).unwrap();
        assert!(matches!(
            triebel_lizorkin_norm(&part, &u, idx),
            Err(Error::UnsupportedIndex(_))
        ));
        let idx_inf = BesovIndex::new(0.0, Exponent::INF, Exponent::INF).unwrap();
        assert!(triebel_lizorkin_norm(&part, &u, idx_inf).is_ok());
    }

    #[test]
    fn stacked_norm_at_p2_matches_sum_of_squares() {
        let (g, part) = setup(32, 1.0);
        let v = synth::random_vector_field(g, 4, 8);
        let idx = BesovIndex::new(0.5, 2.0, 2.0).unwrap();
        let stacked = besov_norm_vec(&part, &v, idx).unwrap();
        // For p = r = 2 the stacked norm is the root-sum-square of the
        // component norms.
        let rss: f64 = (0..3)
            .map(|i| besov_norm(&part, v.component(i), idx).unwrap().powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((stacked - rss).abs() < 1e-10 * rss);
    }

    #[test]
    fn dyadic_rescale_ratio_is_exact() {
        // u(2x) on the halved box: same coefficients, L -> L/2. For interior
        // blocks the Besov norm ratio is exactly 2^{s - 3/p}.
        let (g, part) = setup(64, 2.0);
        let mut u = SpectralField::zero(g);
        // Populate a couple of interior shells.
        for (k, a) in [([2i64, 2, 1], 0.7), ([4, 1, 1], 0.4), ([3, 0, 0], 0.9)] {
            u.set_coeff(k, Complex64::new(a, 0.0));
            u.set_coeff([-k[0], -k[1], -k[2]], Complex64::new(a, 0.0));
        }
        let u2 = u.reinterpret_box_scale(1.0).unwrap();
        let part2 = DyadicPartition::for_grid(u2.grid(), 2).unwrap();
        for (s, p) in [(0.5, 2.0), (0.0, 3.0), (-1.5, 2.0)] {
            let idx = BesovIndex::new(s, p, 2.0).unwrap();
            let n1 = besov_norm(&part, &u, idx).unwrap();
            let n2 = besov_norm(&part2, &u2, idx).unwrap();
            let expect = 2f64.powf(s - 3.0 / p);
            assert!(
                ((n2 / n1) - expect).abs() < 1e-10 * expect,
                "s={s} p={p}: got {} want {expect}",
                n2 / n1
            );
        }
    }
}
