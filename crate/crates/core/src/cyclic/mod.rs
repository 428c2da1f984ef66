//! Cyclic modules (`A^♮`, `G^{k♮}`, `A♮G`, crossed products), the operators
//! `b` and `B`, the crossed-product decomposition into group homology, and
//! Chern–Connes characters.

mod chain;
mod chern;
mod crossed;
mod group_hom;
mod kinds;

pub use chain::{
    b, b_plus_ub, big_b, cyclic, degeneracy, face, normalize, Chain, CyclicModule, CyclicModuleKind, LinComb,
};
pub use chern::{chern_character, chern_coefficient, matrix_mul, matrix_trace, Matrix};
pub use crossed::{
    act_tensor, canonical_coinvariant, coinvariants_to_homogeneous, homogeneous_projection, homogeneous_to_coinvariants,
    is_homogeneous, right_act, CrossedAlgebra, GroupAction,
};
pub use group_hom::{
    alexander_whitney, augmentation_cap, contracting_homotopy, d_map, d_map_upto, group_boundary, homotopy_defect,
    nonhomogeneous, nonhomogeneous_differential, project_to_algebra, q_map, q_map_expanded, q_map_upto, tensor_differential,
    total_differential, algebra_differential, untwist, untwist_inverse, GroupChain, NonHomChain,
};
pub use kinds::{relation_violations, AlgebraModule, DiagElem, DiagonalModule, GroupModule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error("{op}: index {index} out of range (max {max})")]
    IndexOutOfRange { op: &'static str, index: usize, max: usize },
    #[error("input is not in the homogeneous summand")]
    NotHomogeneous,
    #[error("matrix is not idempotent; e² − e has {0} nonzero entries")]
    NotIdempotent(usize),
    #[error("matrix shapes do not match")]
    ShapeMismatch,
}
