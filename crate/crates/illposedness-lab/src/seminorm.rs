//! Dyadic block seminorms: the `B^0_{3,q}` quantity restricted to a chosen
//! set of blocks. Restricting to the blocks that carry the construction
//! isolates its contribution from broadband remainders.

use littlewood_paley::partition::DyadicPartition;
use spectral_core::{Error, Exponent, Result, SpectralVectorField};

/// `( sum_{j in blocks} || Delta_j v ||_{L^3}^q )^{1/q}` with the pointwise
/// Euclidean magnitude across components, `q = inf` giving the max.
pub fn seminorm_block(
    part: &DyadicPartition,
    v: &SpectralVectorField,
    blocks: &[i32],
    q: Exponent,
) -> Result<f64> {
    if blocks.is_empty() {
        return Err(Error::Parameter(
            "block seminorm needs at least one block index".into(),
        ));
    }
    let mut norms = Vec::with_capacity(blocks.len());
    for &j in blocks {
        let block = part.block_vec(v, j);
        norms.push(block.lp_norm(Exponent::Finite(3.0))?);
    }
    Ok(q.ell_norm(norms))
}
