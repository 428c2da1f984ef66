use std::collections::BTreeMap;

use num_rational::BigRational;

use super::chain::{push_lin, Chain};
use super::CyclicError;
use crate::algebra::{lin_add, lin_mul, lin_scale, BasisAlgebra, Lin};
use crate::lin::{accumulate, factorial};
use crate::scalars::{FieldElement, HbarLaurent, ULaurent};

/// Square matrix with entries in a basis algebra.
pub type Matrix<B> = Vec<Vec<Lin<B>>>;

pub fn matrix_mul<A: BasisAlgebra>(alg: &A, x: &Matrix<A::Basis>, y: &Matrix<A::Basis>) -> Result<Matrix<A::Basis>, CyclicError> {
    let n = x.len();
    if y.len() != n || x.iter().chain(y).any(|r| r.len() != n) {
        return Err(CyclicError::ShapeMismatch);
    }
    let mut out = vec![vec![Lin::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for (b, c) in lin_mul(alg, &x[i][k], &y[k][j]) {
                    accumulate(&mut out[i][j], b, &c);
                }
            }
        }
    }
    Ok(out)
}

/// `tr(M_0⊗…⊗M_n) = Σ M_0[i_0,i_1]⊗M_1[i_1,i_2]⊗…⊗M_n[i_n,i_0]`.
pub fn matrix_trace<B: Clone + Ord + std::fmt::Debug>(mats: &[&Matrix<B>]) -> BTreeMap<Vec<B>, HbarLaurent> {
    let r = mats[0].len();
    let mut out = BTreeMap::new();
    for i0 in 0..r {
        // Partial tensors ending at row index `i`.
        let mut partial: Vec<(usize, Vec<B>, Option<HbarLaurent>)> = vec![(i0, Vec::new(), None)];
        for m in mats {
            let mut next = Vec::new();
            for (i, t, c) in &partial {
                for j in 0..r {
                    for (b, cb) in &m[*i][j] {
                        let mut t2 = t.clone();
                        t2.push(b.clone());
                        let c2 = c.as_ref().map_or_else(|| cb.clone(), |c| c.mul(cb));
                        next.push((j, t2, Some(c2)));
                    }
                }
            }
            partial = next;
        }
        for (j, t, c) in partial {
            if let (true, Some(c)) = (j == i0, c) {
                push_lin(&mut out, t, &c);
            }
        }
    }
    out
}

/// `(−1)^k (2k)!/k!`, the weight of `u^k tr((e−½)⊗e^{⊗2k})`.
pub fn chern_coefficient(k: u32) -> BigRational {
    let v = factorial(2 * k) / factorial(k);
    let v = if k % 2 == 0 { v } else { -v };
    BigRational::from_integer(v)
}

/// Chern–Connes character of an idempotent in the normalized periodic
/// complex: `tr e + Σ_{k≥1} u^k (−1)^k (2k)!/k! tr((e−½)⊗e^{⊗2k})`.
pub fn chern_character<A: BasisAlgebra>(
    alg: &A,
    e: &Matrix<A::Basis>,
    u_trunc: i32,
) -> Result<Chain<A::Basis>, CyclicError> {
    let e2 = matrix_mul(alg, e, e)?;
    let mut witness = 0;
    for (r1, r2) in e.iter().zip(&e2) {
        for (a, b) in r1.iter().zip(r2) {
            let diff = lin_add(b, &lin_scale(a, &-&HbarLaurent::one(alg.hbar_trunc())));
            if diff.values().any(|c| !c.is_zero()) {
                witness += 1;
            }
        }
    }
    if witness > 0 {
        return Err(CyclicError::NotIdempotent(witness));
    }
    let ht = alg.hbar_trunc();
    let unit = alg.unit();
    let mut shifted = e.clone();
    let half = FieldElement::from_frac(-1, 2);
    for (i, row) in shifted.iter_mut().enumerate() {
        accumulate(&mut row[i], unit.clone(), &HbarLaurent::constant(half.clone(), ht));
    }
    let mut out = Chain::zero(u_trunc, ht);
    for (t, c) in matrix_trace(&[e]) {
        out.add_term_owned(t, ULaurent::monomial(c, 0, u_trunc));
    }
    for k in 1..=u_trunc.max(0) as u32 {
        let mut mats: Vec<&Matrix<A::Basis>> = vec![&shifted];
        mats.extend(std::iter::repeat(e).take(2 * k as usize));
        let w = chern_coefficient(k);
        for (t, c) in matrix_trace(&mats) {
            if t[1..].contains(&unit) {
                continue;
            }
            out.add_term_owned(t, ULaurent::monomial(c.scale_rational(&w), k as i32, u_trunc));
        }
    }
    Ok(out)
}
