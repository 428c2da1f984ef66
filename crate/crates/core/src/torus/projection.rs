use super::element::{Mode, TorusElement};
use crate::algebra::Lin;
use crate::cyclic::Matrix;
use crate::scalars::{FieldElement, HbarLaurent};

/// `diag(1,…,1,0,…,0)` with `rank` ones.
pub fn constant_projection(size: usize, rank: usize, dim: usize, trunc: i32) -> Vec<Vec<TorusElement>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j && i < rank { TorusElement::one(dim, trunc) } else { TorusElement::zero(dim, trunc) })
                .collect()
        })
        .collect()
}

fn wave(dim: usize, slot: usize, k: i64) -> Mode {
    let mut m = vec![0; 2 * dim];
    m[slot] = k;
    m
}

/// `V·diag(1,0)·V^{-1}` for `V = diag(1, e_l)·R`, `R` the rotation by the
/// angle `2πx^1`:
/// `[[c², c⋆s⋆e_{−l}], [e_l⋆s⋆c, e_l⋆s²⋆e_{−l}]]`, `c = cos 2πx^1`, `s = sin 2πx^1`.
pub fn rotation_projection(dim: usize, l: &[i64], trunc: i32) -> Vec<Vec<TorusElement>> {
    let half = HbarLaurent::constant(FieldElement::from_frac(1, 2), trunc);
    let c = TorusElement::from_modes(dim, trunc, [(wave(dim, 0, 1), half.clone()), (wave(dim, 0, -1), half.clone())]);
    let mhalf_i = HbarLaurent::constant(FieldElement::from_frac(-1, 2) * FieldElement::i(), trunc);
    let s = TorusElement::from_modes(dim, trunc, [(wave(dim, 0, 1), mhalf_i.clone()), (wave(dim, 0, -1), -&mhalf_i)]);
    let el = TorusElement::plane_wave(l.to_vec(), trunc);
    let eml = TorusElement::plane_wave(l.iter().map(|x| -x).collect(), trunc);
    let st = |a: &TorusElement, b: &TorusElement| a.star(b).expect("same shape");
    vec![
        vec![st(&c, &c), st(&st(&c, &s), &eml)],
        vec![st(&st(&el, &s), &c), st(&st(&el, &st(&s, &s)), &eml)],
    ]
}

/// Entries as linear combinations of plane waves.
pub fn to_lin_matrix(m: &[Vec<TorusElement>]) -> Matrix<Mode> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|a| a.modes().map(|(k, c)| (k.clone(), c.clone())).collect::<Lin<Mode>>())
                .collect()
        })
        .collect()
}
