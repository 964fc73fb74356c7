use serde::{Deserialize, Serialize};
use spectral_core::{DealiasRule, Error, Grid, Result};

/// Which envelope scales `k` participate in the force at index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSetRule {
    /// Multiples of 8 in `[n/4, n/2]`; empty below `n = 32`.
    #[serde(rename = "paper_8N")]
    Paper8N,
    /// Every integer in `[n/4, n/2]`, so small `n` still yield atoms.
    RelaxedAllK,
}

impl BlockSetRule {
    pub fn name(&self) -> &'static str {
        match self {
            BlockSetRule::Paper8N => "paper_8N",
            BlockSetRule::RelaxedAllK => "relaxed_all_k",
        }
    }
}

/// Envelope scales for index `n` under the given rule.
pub fn block_set(n: u32, rule: BlockSetRule) -> Vec<u32> {
    let lo = (n as f64 / 4.0).ceil() as u32;
    let hi = n / 2;
    (lo..=hi)
        .filter(|k| match rule {
            BlockSetRule::Paper8N => k % 8 == 0,
            BlockSetRule::RelaxedAllK => true,
        })
        .collect()
}

/// Fourier-side envelope profile: 1 inside `inner_radius`, 0 outside
/// `outer_radius`, smooth in between. The reference values are 1/600 and
/// 1/300; desk grids use widened radii so the envelope spans several lattice
/// modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl ProfileParams {
    pub const REFERENCE: ProfileParams = ProfileParams {
        inner_radius: 1.0 / 600.0,
        outer_radius: 1.0 / 300.0,
    };

    pub fn new(inner_radius: f64, outer_radius: f64) -> Result<ProfileParams> {
        if !(inner_radius > 0.0 && outer_radius > inner_radius && outer_radius.is_finite()) {
            return Err(Error::Config(format!(
                "profile radii must satisfy 0 < inner < outer, got ({inner_radius}, {outer_radius})"
            )));
        }
        Ok(ProfileParams {
            inner_radius,
            outer_radius,
        })
    }
}

/// One inflation experiment: the index `n`, the sharpness `epsilon` fixing
/// `r = 3/(2 + epsilon)`, the atom scale rule, and the desk-scale fitting
/// parameters (grid, box, dyadic recenter shift, overall amplitude).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InflationConfig {
    pub n: u32,
    pub epsilon: f64,
    pub block_rule: BlockSetRule,
    /// Dyadic shift subtracted from every frequency exponent; the amplitude
    /// compensation keeps all `B^0_{3,r}` norms exactly invariant.
    pub recenter_shift: i32,
    pub grid_n: usize,
    pub box_scale: f64,
    /// Overall amplitude factor multiplying the construction.
    pub amplitude: f64,
    pub profile: ProfileParams,
}

impl InflationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("inflation index n must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Config(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        self.profile.validate_pair()?;
        if block_set(self.n, self.block_rule).is_empty() {
            return Err(Error::Config(format!(
                "block set {} is empty at n = {}",
                self.block_rule.name(),
                self.n
            )));
        }
        self.grid()?;
        Ok(())
    }

    /// `r = 3 / (2 + epsilon)`, in `[1, 3/2)`.
    pub fn r(&self) -> f64 {
        3.0 / (2.0 + self.epsilon)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n, self.box_scale, DealiasRule::TwoThirds)
    }

    /// Participating envelope scales `k` (unshifted).
    pub fn scales(&self) -> Vec<u32> {
        block_set(self.n, self.block_rule)
    }

    /// The dyadic block index carrying the force after recentering.
    pub fn carrier_block(&self) -> i32 {
        self.n as i32 - self.recenter_shift
    }

    /// Recentered envelope scale exponents `k' = k - shift`.
    pub fn atom_scale_exponents(&self) -> Vec<i32> {
        self.scales()
            .iter()
            .map(|&k| k as i32 - self.recenter_shift)
            .collect()
    }

    /// Atom centers: maximally separated along the box diagonal (equal
    /// coordinates keep the construction symmetric under swapping the first
    /// two axes).
    pub fn placements(&self) -> Vec<[f64; 3]> {
        let m = self.scales().len();
        let side = 2.0 * std::f64::consts::PI * self.box_scale;
        (0..m)
            .map(|i| {
                let t = side * (i as f64 + 0.5) / m as f64;
                [t, t, t]
            })
            .collect()
    }
}

impl ProfileParams {
    fn validate_pair(&self) -> Result<()> {
        ProfileParams::new(self.inner_radius, self.outer_radius).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_follows_epsilon() {
        let mut cfg = desk_config(6);
        assert!((cfg.r() - 1.0).abs() < 1e-15);
        cfg.epsilon = 0.5;
        assert!((cfg.r() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn paper_blocks_are_multiples_of_eight() {
        assert!(block_set(6, BlockSetRule::Paper8N).is_empty());
        assert_eq!(block_set(32, BlockSetRule::Paper8N), vec![8, 16]);
        assert_eq!(block_set(64, BlockSetRule::Paper8N), vec![16, 24, 32]);
    }

    #[test]
    fn relaxed_blocks_cover_small_n() {
        assert_eq!(block_set(5, BlockSetRule::RelaxedAllK), vec![2]);
        assert_eq!(block_set(6, BlockSetRule::RelaxedAllK), vec![2, 3]);
        assert_eq!(block_set(7, BlockSetRule::RelaxedAllK), vec![2, 3]);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let mut cfg = desk_config(6);
        cfg.epsilon = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = desk_config(6);
        cfg.block_rule = BlockSetRule::Paper8N;
        assert!(cfg.validate().is_err());
        let mut cfg = desk_config(6);
        cfg.profile = ProfileParams {
            inner_radius: 0.5,
            outer_radius: 0.2,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn placements_sit_on_the_diagonal() {
        let cfg = desk_config(6);
        for c in cfg.placements() {
            assert_eq!(c[0], c[1]);
            assert_eq!(c[1], c[2]);
        }
        assert_eq!(cfg.placements().len(), 2);
    }

    pub fn desk_config(n: u32) -> InflationConfig {
        InflationConfig {
            n,
            epsilon: 1.0,
            block_rule: BlockSetRule::RelaxedAllK,
            recenter_shift: 3,
            grid_n: 64,
            box_scale: 4.0,
            amplitude: 1.0,
            profile: ProfileParams::new(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        }
    }
}
