//! Exact chain-level machinery for the equivariant algebraic index theorem on
//! desk-scale models: the formal Weyl algebra and a quantized torus with a
//! discrete translation group.

pub mod scalars;
pub mod lin;
pub mod weyl;
pub mod algebra;
pub mod group;
pub mod cyclic;
pub mod torus;
pub mod formal_forms;
pub mod group_coh;
pub mod lie_gf;
pub mod scenarios;
