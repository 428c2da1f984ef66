use std::collections::BTreeMap;

use super::element::TorusElement;
use super::TorusError;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::element::Mode;
use crate::lin::factorial;
use crate::scalars::{FieldElement, HbarLaurent};

/// A differential form on `T^{2d}` with trigonometric coefficients; keys are
/// sorted generator indices (`0..d` for `dx^i`, `d..2d` for `dξ^i`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusForm {
    dim: usize,
    degree: usize,
    trunc: i32,
    comps: BTreeMap<Vec<usize>, TorusElement>,
}

/// Sort indices, returning the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

impl TorusForm {
    pub fn zero(dim: usize, degree: usize, trunc: i32) -> Self {
        TorusForm { dim, degree, trunc, comps: BTreeMap::new() }
    }

    pub fn function(f: TorusElement) -> Self {
        let mut out = Self::zero(f.dim(), 0, f.trunc());
        out.add_component(&[], &f);
        out
    }

    /// `f·dy^{i_1}∧…∧dy^{i_k}` in any index order.
    pub fn monomial(idx: &[usize], f: &TorusElement) -> Self {
        let mut out = Self::zero(f.dim(), idx.len(), f.trunc());
        out.add_component(idx, f);
        out
    }

    /// `ω = Σ_i dx^i∧dξ^i`.
    pub fn omega(dim: usize, trunc: i32) -> Self {
        let mut out = Self::zero(dim, 2, trunc);
        for i in 0..dim {
            out.add_component(&[i, dim + i], &TorusElement::one(dim, trunc));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &TorusElement)> {
        self.comps.iter()
    }

    pub fn component(&self, idx: &[usize]) -> TorusElement {
        self.comps.get(idx).cloned().unwrap_or_else(|| TorusElement::zero(self.dim, self.trunc))
    }

    pub fn add_component(&mut self, idx: &[usize], f: &TorusElement) {
        debug_assert_eq!(idx.len(), self.degree);
        let Some((s, key)) = sort_sign(idx) else { return };
        let f = if s > 0 { f.clone() } else { f.neg() };
        let v = match self.comps.remove(&key) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !v.is_zero() {
            self.comps.insert(key, v);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        if self.degree != other.degree {
            return Err(TorusError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        for (k, f) in &other.comps {
            out.add_component(k, f);
        }
        Ok(out)
    }

    pub fn scale_hbar(&self, c: &HbarLaurent) -> Self {
        let mut out = Self::zero(self.dim, self.degree, self.trunc.min(c.trunc()));
        for (k, f) in &self.comps {
            out.add_component(k, &f.scale_hbar(c));
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(self.dim, self.degree, self.trunc);
        for (k, f) in &self.comps {
            out.add_component(k, &f.scale(c));
        }
        out
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    /// Wedge product with pointwise multiplication of coefficients.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + other.degree, self.trunc.min(other.trunc));
        for (k1, f) in &self.comps {
            for (k2, g) in &other.comps {
                let mut idx = k1.clone();
                idx.extend_from_slice(k2);
                out.add_component(&idx, &f.pointwise_mul(g));
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1, self.trunc);
        for (k, f) in &self.comps {
            for s in 0..2 * self.dim {
                let mut idx = vec![s];
                idx.extend_from_slice(k);
                out.add_component(&idx, &f.derivative(s));
            }
        }
        out
    }

    /// `∫_{T^{2d}}` with the orientation making `∫ω^d/d! = 1`.
    pub fn integrate(&self) -> Result<HbarLaurent, TorusError> {
        integrate(self)
    }
}

/// Sign of the Darboux order `(dx^1, dξ^1, …, dx^d, dξ^d)` against sorted order.
pub fn orientation_sign(dim: usize) -> i32 {
    let darboux: Vec<usize> = (0..dim).flat_map(|i| [i, dim + i]).collect();
    sort_sign(&darboux).map_or(1, |(s, _)| s)
}

pub fn integrate(form: &TorusForm) -> Result<HbarLaurent, TorusError> {
    let top = 2 * form.dim;
    if form.degree != top {
        return Err(TorusError::NotTopDegree { degree: form.degree, top });
    }
    let key: Vec<usize> = (0..top).collect();
    let v = form.component(&key).mean();
    Ok(if orientation_sign(form.dim) > 0 { v } else { -&v })
}

/// HKR of one commutative tensor of plane waves: `(1/n!) e_{m_0} de_{m_1}∧…∧de_{m_n}`.
pub fn hkr_tensor(modes: &[Mode], trunc: i32) -> TorusForm {
    let dim = modes[0].len() / 2;
    let mut acc = TorusForm::function(TorusElement::plane_wave(modes[0].clone(), trunc));
    for m in &modes[1..] {
        acc = acc.wedge(&TorusForm::function(TorusElement::plane_wave(m.clone(), trunc)).d());
    }
    let n = modes.len() as u32 - 1;
    let inv = FieldElement::from_rational(BigRational::new(BigInt::from(1), factorial(n)));
    debug_assert_eq!(acc.dim, dim);
    acc.scale(&inv)
}
