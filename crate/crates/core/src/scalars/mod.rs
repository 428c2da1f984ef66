//! Exact scalars: cyclotomic rationals with a formal `π`, and truncated
//! Laurent series in `ħ` and `u`.

mod field;
mod laurent;

pub use field::{
    cyclo_table, cyclotomic_poly, field_arith, height, CycloTable, FieldElement, FieldOp, DEFAULT_LEVEL,
    MAX_LEVEL,
};
pub use laurent::{laurent_mul, HbarLaurent, ULaurent};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("cyclotomic level {0} is not a positive multiple of 4")]
    InvalidLevel(u32),
    #[error("cyclotomic level {level} exceeds the configured bound {max}")]
    LevelTooLarge { level: u64, max: u32 },
    #[error("combining levels would overflow the bound (got {0})")]
    LevelOverflow(u32),
}
