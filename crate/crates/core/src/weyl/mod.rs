//! The truncated formal Weyl algebra with the Moyal–Weyl product, its
//! derivation Lie algebra and the `sp(2d)` generators.
//!
//! Convention: `ω(ξ̂^k, x̂^j) = δ_{kj}`, so `ξ̂⋆x̂ − x̂⋆ξ̂ = iħ`.

mod derivation;
mod element;

pub use derivation::{ad_derivation, apply_derivation, extension_defect, sp_basis, sp_quadratic, Derivation, QuadKind};
pub use element::{moyal_star, symbol, WeylElement, WeylMonomial};
pub(crate) use element::{half_i_pow, moyal_kernel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generator indices ({i}, {j}) out of range for d = {dim}")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },
}
