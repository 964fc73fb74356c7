//! Field algebra on a periodic box, spectral side.
//!
//! Everything lives on a cubic grid of `N^3` Fourier modes over the box
//! `[0, 2*pi*L)^3`. Fields are stored as complex coefficient arrays indexed by
//! the integer frequency lattice; the zero mode is kept out of the coefficient
//! array (mean-free convention) and carried separately where an operation
//! produces one. All operations are pure: they take field references and
//! return fresh fields.

pub mod error;
pub mod exponent;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod ops;
pub mod product;
pub mod project;
pub mod synth;
pub mod vector;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use field::SpectralField;
pub use grid::{DealiasRule, Grid};
pub use vector::SpectralVectorField;

pub use num_complex::Complex64;
