//! The quantum torus `𝒜^ħ(T^{2d})` on plane waves: Moyal product and trace,
//! translation actions and crossed products, jets into the Weyl bundle, and
//! differential forms.

mod action;
mod element;
mod form;
mod jet;
mod projection;

pub use action::{act, crossed_mul, CrossedElement, EquivariantTorus, TranslationAction};
pub use element::{
    phase, plane_wave_at, plane_wave_constant, star, symplectic_pairing, trace, trace_of_mode, Mode, TorusAlgebra,
    TorusElement,
};
pub use form::{hkr_tensor, integrate, orientation_sign, TorusForm};
pub use jet::{fiber_plane_wave, flatness_defect, jet, Jet};
pub use projection::{constant_projection, rotation_projection, to_lin_matrix};

use crate::scalars::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorusError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cyclotomic level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("shift denominator does not divide level {level}")]
    BadDenominator { level: u32 },
    #[error("shift is not of order dividing {0}")]
    NotOfFiniteOrder(u32),
    #[error("expected {expected} generator entries, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("twisted actions are only modeled for free groups")]
    TwistNeedsFreeGroup,
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("form degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("form of degree {degree} is not top degree {top}")]
    NotTopDegree { degree: usize, top: usize },
    #[error("negative power ħ^{0} cannot be placed in the Weyl algebra")]
    NegativeHbarPower(i32),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
