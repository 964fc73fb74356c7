//! Fourier-side assembly of the oscillating-atom forces: each atom is a
//! separable envelope around a snapped carrier mode, summed over the
//! configured envelope scales, with the companion component defined through
//! the exact divergence-compensating multiplier.

use std::collections::HashMap;

use spectral_core::{Complex64, Error, Result, SpectralField, SpectralVectorField};

use crate::config::InflationConfig;
use crate::profile::theta_hat;

/// One realized atom: the unshifted scale `k`, its recentered exponent, the
/// snapped carrier and inner-oscillation modes, envelope scales, center, and
/// the amplitude prefactor.
#[derive(Debug, Clone)]
pub struct AtomLayout {
    pub k: u32,
    pub scale_exp: i32,
    pub center: [f64; 3],
    /// Carrier mode index per horizontal axis; the carrier frequency vector
    /// is `(q1, q1, 0) / L`.
    pub carrier_mode: i64,
    /// Inner-oscillation mode index along the third axis.
    pub inner_mode: i64,
    pub sigma12: f64,
    pub sigma3: f64,
    pub prefactor: f64,
}

/// The synthesized force family at one index `n`.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub b: SpectralField,
    pub c: SpectralField,
    pub g: SpectralVectorField,
    pub atoms: Vec<AtomLayout>,
    /// Number of distinct nonzero modes of `b`.
    pub support_modes: usize,
}

/// One-dimensional envelope coefficient: `theta_hat` sampled at the lattice
/// frequency, normalized as a Riemann sum of the continuum profile.
fn envelope_coeff(m: i64, box_scale: f64, sigma: f64, cfg: &InflationConfig) -> f64 {
    theta_hat((m as f64 / box_scale) / sigma, &cfg.profile) / (box_scale * sigma)
}

fn envelope_support(box_scale: f64, sigma: f64, cfg: &InflationConfig) -> i64 {
    (box_scale * sigma * cfg.profile.outer_radius).floor() as i64
}

/// Assemble `b_n`, `c_n` and `g_n = (b_n, c_n - b_n, 0)` on the configured
/// grid. Fails if any atom mode falls outside the dealias band, or if the
/// horizontal carrier degenerates so that `xi_2 = 0` occurs on the support.
pub fn synthesize(cfg: &InflationConfig) -> Result<Synthesis> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let l = cfg.box_scale;
    let limit = grid.dealias_limit();
    let shift = cfg.recenter_shift;
    let r = cfg.r();
    let centers = cfg.placements();

    let mut atoms = Vec::new();
    let mut modes: HashMap<[i64; 3], Complex64> = HashMap::new();
    let half_i = Complex64::new(0.0, -0.5); // 1 / (2i)

    for (&k, center) in cfg.scales().iter().zip(&centers) {
        let kp = k as i32 - shift;
        let np = cfg.n as i32 - shift;
        let sigma12 = cfg.epsilon * 2f64.powi(kp);
        let sigma3 = 2f64.powi(kp);
        let carrier_xi = (17.0 / 12.0) * 2f64.powi(np);
        let carrier_mode = (carrier_xi * l / 2f64.sqrt()).round() as i64;
        let inner_mode = (((17.0 / 24.0) * 2f64.powi(kp)) * l).round().max(1.0) as i64;
        if carrier_mode < 1 {
            return Err(Error::Config(format!(
                "carrier frequency {carrier_xi:.3} collapses to the zero mode on box scale {l}"
            )));
        }
        let prefactor = cfg.amplitude * (cfg.n as f64).powf(-1.0 / (2.0 * r)) * 2f64.powi(kp);
        let atom = AtomLayout {
            k,
            scale_exp: kp,
            center: *center,
            carrier_mode,
            inner_mode,
            sigma12,
            sigma3,
            prefactor,
        };

        let s12 = envelope_support(l, sigma12, cfg);
        let s3 = envelope_support(l, sigma3, cfg);
        let max_mode = carrier_mode + s12;
        if max_mode > limit || inner_mode + s3 > limit {
            let needed = (3 * max_mode.max(inner_mode + s3)) as u64;
            let needed_n = needed.max(4).next_power_of_two();
            return Err(Error::Config(format!(
                "atom k = {k} exceeds the dealias band (mode {max_mode} > {limit}); \
                 requires a grid of at least {needed_n} points per axis at box scale {l}"
            )));
        }

        for sign in [1i64, -1] {
            let q1 = sign * carrier_mode;
            for m1 in -s12..=s12 {
                let e1 = envelope_coeff(m1, l, sigma12, cfg);
                if e1 == 0.0 {
                    continue;
                }
                let k1 = q1 + m1;
                for m2 in -s12..=s12 {
                    let e2 = envelope_coeff(m2, l, sigma12, cfg);
                    if e2 == 0.0 {
                        continue;
                    }
                    let k2 = q1 + m2;
                    for k3 in -(inner_mode + s3)..=(inner_mode + s3) {
                        // Inner sine: E3[k3] = (T(k3 - q3) - T(k3 + q3)) / 2i.
                        let e3 = envelope_coeff(k3 - inner_mode, l, sigma3, cfg)
                            - envelope_coeff(k3 + inner_mode, l, sigma3, cfg);
                        if e3 == 0.0 {
                            continue;
                        }
                        let key = [k1, k2, k3];
                        if key == [0, 0, 0] {
                            continue;
                        }
                        // Center phase e^{-i (K . c) / L} on all three axes,
                        // with the carrier contributing no phase (it is not
                        // centered on the atom).
                        let phase = -((m1 as f64) * center[0]
                            + (m2 as f64) * center[1]
                            + (k3 as f64) * center[2])
                            / l;
                        let rot = Complex64::new(phase.cos(), phase.sin());
                        // One factor 1/(2i) from the carrier sine, one from
                        // the inner sine.
                        let coeff = half_i
                            * half_i
                            * (prefactor * (sign as f64) * e1 * e2 * e3)
                            * rot;
                        *modes.entry(key).or_insert_with(Complex64::default) += coeff;
                    }
                }
            }
        }
        atoms.push(atom);
    }

    // Write b and derive c by the divergence-compensating multiplier.
    let mut b_coeffs = vec![Complex64::default(); grid.len()];
    let mut c_coeffs = vec![Complex64::default(); grid.len()];
    let mut support_modes = 0usize;
    for (key, value) in &modes {
        if value.norm() == 0.0 {
            continue;
        }
        if key[1] == 0 {
            return Err(Error::Parameter(format!(
                "synthesis assumption violated: xi_2 = 0 at mode ({}, {}, {}) in the support",
                key[0], key[1], key[2]
            )));
        }
        support_modes += 1;
        let idx = grid.flat_of(*key);
        b_coeffs[idx] = *value;
        let mult = (key[1] - key[0]) as f64 / key[1] as f64;
        c_coeffs[idx] = *value * mult;
    }

    let b = SpectralField::from_coeffs(grid, b_coeffs, true)?;
    let c = SpectralField::from_coeffs(grid, c_coeffs, true)?;
    let g = SpectralVectorField::new([b.clone(), c.sub(&b)?, SpectralField::zero(grid)])?;
    Ok(Synthesis {
        b,
        c,
        g,
        atoms,
        support_modes,
    })
}

impl Synthesis {
    /// Fraction of the squared `L^2` mass of `g` captured by the dyadic
    /// block at index `j`.
    pub fn localization(
        &self,
        part: &littlewood_paley::partition::DyadicPartition,
        j: i32,
    ) -> f64 {
        let total = self.g.l2_norm();
        if total == 0.0 {
            return 0.0;
        }
        let block = part.block_vec(&self.g, j);
        (block.l2_norm() / total).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BlockSetRule, InflationConfig, ProfileParams};
    use littlewood_paley::partition::DyadicPartition;

    fn desk(n: u32) -> InflationConfig {
        InflationConfig {
            n,
            epsilon: 1.0,
            block_rule: BlockSetRule::RelaxedAllK,
            recenter_shift: n as i32 - 2,
            grid_n: 64,
            box_scale: 4.0,
            amplitude: 1.0,
            profile: ProfileParams::new(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        }
    }

    #[test]
    fn output_is_real_and_divergence_free() {
        let syn = synthesize(&desk(6)).unwrap();
        assert!(syn.g.is_real());
        assert!(syn.b.check_reality() < 1e-14);
        assert!(syn.g.divergence_residual() < 1e-12);
        assert!(syn.support_modes > 0);
        assert!(syn.b.l2_norm() > 0.0);
    }

    #[test]
    fn mass_localizes_in_the_carrier_block() {
        let cfg = desk(6);
        let syn = synthesize(&cfg).unwrap();
        let part = DyadicPartition::for_grid(&cfg.grid().unwrap(), 2).unwrap();
        let frac = syn.localization(&part, cfg.carrier_block());
        assert!(frac > 0.9999, "localization {frac}");
    }

    #[test]
    fn synthesis_is_linear_in_amplitude() {
        let mut cfg = desk(5);
        let base = synthesize(&cfg).unwrap();
        cfg.amplitude = 2.0;
        let doubled = synthesize(&cfg).unwrap();
        let diff = doubled.g.sub(&base.g.scale(2.0)).unwrap();
        assert_eq!(diff.l2_norm(), 0.0);
    }

    #[test]
    fn undersized_grid_is_rejected_with_guidance() {
        let mut cfg = desk(6);
        cfg.grid_n = 16;
        let err = synthesize(&cfg).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dealias band"), "{msg}");
        assert!(msg.contains("at least"), "{msg}");
    }

    #[test]
    fn horizontal_coefficients_are_symmetric() {
        // Equal envelopes, a diagonal carrier and diagonal centers make b
        // invariant under swapping the first two axes.
        let syn = synthesize(&desk(6)).unwrap();
        let grid = *syn.b.grid();
        for (i1, i2, i3) in grid.indices() {
            let k1 = grid.wavenumber(i1);
            let k2 = grid.wavenumber(i2);
            let k3 = grid.wavenumber(i3);
            let a = syn.b.coeffs()[grid.flat(i1, i2, i3)];
            if a.norm() == 0.0 {
                continue;
            }
            let mirrored = syn.b.coeff([k2, k1, k3]);
            assert!((a - mirrored).norm() < 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn bilinear_image_transforms_covariantly_under_the_mirror() {
        // Swap the two horizontal axes of g (exchanging its first two
        // components); the bilinear image must transform the same way.
        let syn = synthesize(&desk(5)).unwrap();
        let g = &syn.g;
        let image = crate::ns_bilinear(g, g, 1.0).unwrap();

        let grid = *g.grid();
        let swap = |f: &SpectralField| {
            let mut out = SpectralField::zero(grid);
            for (i1, i2, i3) in grid.indices() {
                let v = f.coeffs()[grid.flat(i1, i2, i3)];
                if v.norm() > 0.0 {
                    out.set_coeff(
                        [grid.wavenumber(i2), grid.wavenumber(i1), grid.wavenumber(i3)],
                        v,
                    );
                }
            }
            out
        };
        let g_mirror = SpectralVectorField::new([
            swap(g.component(1)),
            swap(g.component(0)),
            swap(g.component(2)),
        ])
        .unwrap();
        let image_mirror = SpectralVectorField::new([
            swap(image.component(1)),
            swap(image.component(0)),
            swap(image.component(2)),
        ])
        .unwrap();
        let direct = crate::ns_bilinear(&g_mirror, &g_mirror, 1.0).unwrap();
        let err = direct.sub(&image_mirror).unwrap().l2_norm() / image.l2_norm();
        assert!(err < 1e-12, "mirror covariance defect {err:e}");
    }
}
