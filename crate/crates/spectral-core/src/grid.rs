use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rule used to suppress aliasing in physical-space products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    /// Zero every mode with any `|k_i| > N/3` after the product.
    TwoThirds,
    /// Evaluate the product on a `3N/2` grid, then truncate back.
    ZeroPad3Halves,
}

/// Cubic spectral grid over the periodic box `[0, 2*pi*L)^3`.
///
/// Coefficients are stored in FFT order along each axis: index `i` holds the
/// integer frequency `k = i` for `i < N/2` and `k = i - N` otherwise. The
/// continuous frequency is `xi = k / L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Modes per axis. Must be a power of two, at least 4.
    pub n: usize,
    /// Box scale `L`; the box has side `2*pi*L`.
    pub box_scale: f64,
    /// Dealiasing rule applied by product operations.
    pub dealias: DealiasRule,
}

impl Grid {
    pub fn new(n: usize, box_scale: f64, dealias: DealiasRule) -> Result<Grid> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= 4, got {n}"
            )));
        }
        if !(box_scale.is_finite() && box_scale > 0.0) {
            return Err(Error::Config(format!(
                "box scale must be positive and finite, got {box_scale}"
            )));
        }
        Ok(Grid {
            n,
            box_scale,
            dealias,
        })
    }

    /// Total number of stored coefficients.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer frequency for a storage index along one axis.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Storage index along one axis for an integer frequency.
    ///
    /// Accepts `k` in `[-N/2, N/2)`.
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        let n = self.n as i64;
        debug_assert!(k >= -n / 2 && k < n / 2);
        if k >= 0 {
            k as usize
        } else {
            (k + n) as usize
        }
    }

    /// Whether the frequency fits in this grid's resolved band `[-N/2, N/2)`.
    #[inline]
    pub fn holds(&self, k: [i64; 3]) -> bool {
        let h = self.n as i64 / 2;
        k.iter().all(|&ki| ki >= -h && ki < h)
    }

    /// Flat index of a frequency triple, row-major in storage order.
    #[inline]
    pub fn flat(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    /// Flat index for an integer frequency triple.
    #[inline]
    pub fn flat_of(&self, k: [i64; 3]) -> usize {
        self.flat(self.index_of(k[0]), self.index_of(k[1]), self.index_of(k[2]))
    }

    /// Continuous frequency `xi = k / L` for a storage index triple.
    #[inline]
    pub fn xi(&self, i1: usize, i2: usize, i3: usize) -> [f64; 3] {
        [
            self.wavenumber(i1) as f64 / self.box_scale,
            self.wavenumber(i2) as f64 / self.box_scale,
            self.wavenumber(i3) as f64 / self.box_scale,
        ]
    }

    /// Largest integer frequency kept by the two-thirds rule.
    #[inline]
    pub fn dealias_limit(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Largest `|xi|` on the resolved lattice (corner mode).
    pub fn xi_max(&self) -> f64 {
        let h = (self.n / 2) as f64;
        h * 3f64.sqrt() / self.box_scale
    }

    /// Physical sample point for a storage index triple.
    #[inline]
    pub fn point(&self, i1: usize, i2: usize, i3: usize) -> [f64; 3] {
        let dx = 2.0 * std::f64::consts::PI * self.box_scale / self.n as f64;
        [i1 as f64 * dx, i2 as f64 * dx, i3 as f64 * dx]
    }

    /// Cell volume of the physical sampling lattice.
    pub fn cell_volume(&self) -> f64 {
        let side = 2.0 * std::f64::consts::PI * self.box_scale;
        (side / self.n as f64).powi(3)
    }

    /// Box volume `(2*pi*L)^3`.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI * self.box_scale).powi(3)
    }

    /// Iterate over all storage index triples.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i1| (0..n).flat_map(move |i2| (0..n).map(move |i3| (i1, i2, i3))))
    }

    /// Storage index of the conjugate-mirror mode `-k` along one axis.
    ///
    /// The Nyquist index `N/2` is its own mirror.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.n - i
        }
    }
}
