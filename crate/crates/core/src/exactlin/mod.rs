//! Exact linear algebra over Q.

mod blocks;
mod factor;
mod matrix;
mod modular;
mod poly;
mod subspace;

pub use blocks::{invariant_block_decomposition, random_combination, MAX_DRAWS};
pub use factor::factor_squarefree;
pub use matrix::RatMatrix;
pub(crate) use matrix::make_primitive;
pub use poly::{charpoly, QPoly};
pub use subspace::Subspace;
