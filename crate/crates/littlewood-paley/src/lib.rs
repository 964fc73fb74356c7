//! Dyadic frequency analysis on top of `spectral-core`: a canonical smooth
//! partition of unity, homogeneous Besov and Triebel-Lizorkin norms, Bony
//! paraproduct and remainder operators, the block commutator, and empirical
//! auditors for the product and commutator estimates those norms satisfy.

pub mod audit;
pub mod besov;
pub mod bony;
pub mod commutator;
pub mod ensemble;
pub mod partition;

pub use besov::BesovIndex;
pub use partition::DyadicPartition;
