//! Exact linear algebra over F₂ and ℤ.

mod bitmatrix;
mod intmatrix;
mod modp;
mod sparse;

pub use bitmatrix::{kernel_f2, rank_f2, BitMatrix};
pub use intmatrix::{
    homology, snf, snf_with_transforms, IntHomology, IntMatrix, SmithDecomposition, SmithForm,
};
pub use modp::{rank_mod_p, LARGE_PRIME};
pub use sparse::SparseF2Matrix;

/// Dense elimination is used up to this many matrix entries; larger maps go sparse.
pub const DENSE_ENTRY_LIMIT: usize = 1 << 24;

/// Rank of a sparse F₂ matrix, switching to dense word-parallel elimination when small.
pub fn rank_f2_auto(m: &SparseF2Matrix) -> usize {
    if m.rows().saturating_mul(m.cols()) <= DENSE_ENTRY_LIMIT {
        m.to_dense().rank()
    } else {
        m.rank()
    }
}
