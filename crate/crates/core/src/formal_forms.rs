//! Formal de Rham forms in `2d` variables `ŷ = (x̂, ξ̂)` with coefficients in
//! `C[ħ^{-1},ħ]][u^{-1},u]]`, the HKR and `J` maps, and the Euler contraction.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclic::{Chain, LinComb};
use crate::lin::factorial;
use crate::scalars::{FieldElement, HbarLaurent, ULaurent};
use crate::weyl::WeylMonomial;

/// `(ŷ^γ, sorted indices of dŷ)`; index `i < d` is `dx̂^i`, `d + i` is `dξ̂^i`.
pub type FormKey = (Vec<u32>, Vec<usize>);

#[derive(Debug, Error)]
pub enum FormsError {
    #[error("form is not closed; d̂φ = {0:?}")]
    NotClosed(Box<FormalForm>),
    #[error("form already carries the [2d] shift")]
    AlreadyShifted,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A formal form, truncated at weight `|γ| + formdeg ≤ trunc`. `d̂`, the Euler
/// contraction and HKR all preserve weight, so truncation never spoils them.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalForm {
    dim: usize,
    trunc: u32,
    shifted: bool,
    comps: LinComb<FormKey>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

fn weight(key: &FormKey) -> u32 {
    key.0.iter().sum::<u32>() + key.1.len() as u32
}

fn rational(n: i64) -> HbarLaurent {
    HbarLaurent::constant(FieldElement::from_int(n), 0)
}

impl FormalForm {
    pub fn zero(dim: usize, trunc: u32, u_trunc: i32, hbar_trunc: i32) -> Self {
        FormalForm { dim, trunc, shifted: false, comps: LinComb::zero(u_trunc, hbar_trunc) }
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.dim, self.trunc, self.comps.u_trunc(), self.comps.hbar_trunc())
    }

    /// `c·ŷ^γ dŷ^{i_1}∧…∧dŷ^{i_k}` in the given index order.
    pub fn monomial(dim: usize, trunc: u32, exps: Vec<u32>, idx: Vec<usize>, c: ULaurent) -> Self {
        let mut out = Self::zero(dim, trunc, c.trunc(), c.hbar_trunc());
        out.add_term(exps, idx, &c);
        out
    }

    /// The 0-form `ŷ^γ`.
    pub fn poly(dim: usize, trunc: u32, exps: Vec<u32>, u_trunc: i32, hbar_trunc: i32) -> Self {
        Self::monomial(dim, trunc, exps, Vec::new(), ULaurent::one(u_trunc, hbar_trunc))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &ULaurent)> {
        self.comps.terms()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn coeff(&self, exps: &[u32], idx: &[usize]) -> ULaurent {
        self.comps
            .coeff(&(exps.to_vec(), idx.to_vec()))
            .cloned()
            .unwrap_or_else(|| ULaurent::zero(self.comps.u_trunc(), self.comps.hbar_trunc()))
    }

    /// Form degrees present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms().map(|(k, _)| k.1.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The form degree when homogeneous.
    pub fn formdeg(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn component(&self, k: usize) -> Self {
        FormalForm { comps: self.comps.filter(|key| key.1.len() == k), ..self.clone() }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, mut idx: Vec<usize>, c: &ULaurent) {
        debug_assert_eq!(exps.len(), 2 * self.dim);
        let Some(sign) = sort_sign(&mut idx) else { return };
        let key = (exps, idx);
        if weight(&key) > self.trunc {
            return;
        }
        if sign > 0 {
            self.comps.add_term(key, c);
        } else {
            self.comps.add_term(key, &-c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.comps = self.comps.add(&other.comps).filter(|k| weight(k) <= out.trunc);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FormalForm { comps: self.comps.neg(), ..self.clone() }
    }

    pub fn scale(&self, c: &ULaurent) -> Self {
        FormalForm { comps: self.comps.scale(c), ..self.clone() }
    }

    /// Multiply by `u^s`.
    pub fn shift_u(&self, s: i32) -> Self {
        FormalForm { comps: self.comps.shift_u(s), ..self.clone() }
    }

    /// `d̂(f dŷ^I) = Σ_j ∂_j f dŷ^j∧dŷ^I`.
    pub fn d_hat(&self) -> Self {
        let comps = self.comps.map(|(g, idx)| {
            let mut out = Vec::new();
            for j in 0..g.len() {
                if g[j] == 0 || idx.contains(&j) {
                    continue;
                }
                let before = idx.iter().filter(|&&i| i < j).count() as i64;
                let sign = if before % 2 == 0 { 1 } else { -1 };
                let mut g2 = g.clone();
                g2[j] -= 1;
                let mut i2 = idx.clone();
                i2.insert(before as usize, j);
                out.push((rational(sign * g[j] as i64), (g2, i2)));
            }
            out
        });
        FormalForm { comps, ..self.clone() }
    }

    pub fn is_closed(&self) -> bool {
        self.d_hat().is_zero()
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormsError> {
        if self.dim != other.dim {
            return Err(FormsError::DimensionMismatch(self.dim, other.dim));
        }
        let u_trunc = self.comps.u_trunc().min(other.comps.u_trunc());
        let hbar_trunc = self.comps.hbar_trunc().min(other.comps.hbar_trunc());
        let mut out = Self::zero(self.dim, self.trunc.min(other.trunc), u_trunc, hbar_trunc);
        out.shifted = self.shifted || other.shifted;
        for ((g, i), a) in self.terms() {
            for ((h, j), b) in other.terms() {
                let e: Vec<u32> = g.iter().zip(h).map(|(x, y)| x + y).collect();
                let idx: Vec<usize> = i.iter().chain(j).copied().collect();
                out.add_term(e, idx, &a.mul(b));
            }
        }
        Ok(out)
    }

    /// Contraction with the Euler field `Σ ŷ^j ∂_{ŷ^j}`.
    pub fn euler_contract(&self) -> Self {
        let comps = self.comps.map(|(g, idx)| {
            idx.iter()
                .enumerate()
                .map(|(r, &j)| {
                    let mut g2 = g.clone();
                    g2[j] += 1;
                    let mut i2 = idx.clone();
                    i2.remove(r);
                    (rational(if r % 2 == 0 { 1 } else { -1 }), (g2, i2))
                })
                .collect()
        });
        FormalForm { comps, ..self.clone() }
    }

    pub fn serialize(&self) -> String {
        self.comps.serialize(if self.shifted { "form[2d]" } else { "form" })
    }
}

impl fmt::Debug for FormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

pub fn d_hat(phi: &FormalForm) -> FormalForm {
    phi.d_hat()
}

pub fn wedge(a: &FormalForm, b: &FormalForm) -> Result<FormalForm, FormsError> {
    a.wedge(b)
}

/// `f₀⊗f₁⊗…⊗fₙ ↦ (1/n!) f₀ d̂f₁∧…∧d̂fₙ` on chains of monomials in `𝕆`.
pub fn hkr(c: &Chain<Vec<u32>>, dim: usize, trunc: u32) -> FormalForm {
    let mut out = FormalForm::zero(dim, trunc, c.u_trunc(), c.hbar_trunc());
    for (tensor, coeff) in c.terms() {
        let n = tensor.len() - 1;
        let inv = BigRational::new(BigInt::from(1), factorial(n as u32));
        let mut acc = FormalForm::monomial(dim, trunc, tensor[0].clone(), Vec::new(), coeff.scale_rational(&inv));
        for f in &tensor[1..] {
            let df = FormalForm::poly(dim, trunc, f.clone(), c.u_trunc(), c.hbar_trunc()).d_hat();
            acc = acc.wedge(&df).expect("same dimension");
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    out
}

/// `J: f₀d̂f₁∧…∧d̂fₙ ↦ u^{−d−n}f₀d̂f₁∧…∧d̂fₙ`, landing in the `[2d]`-shifted complex.
pub fn j_shift(phi: &FormalForm) -> Result<FormalForm, FormsError> {
    if phi.shifted {
        return Err(FormsError::AlreadyShifted);
    }
    let d = phi.dim as i32;
    let mut out = phi.empty_like();
    out.shifted = true;
    for (k, c) in phi.terms() {
        out.comps.add_term(k.clone(), &c.shift(-d - k.1.len() as i32));
    }
    Ok(out)
}

/// Output of [`poincare_contract`]: `φ = scalar + d̂(certificate)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub scalar: ULaurent,
    pub certificate: FormalForm,
}

/// The formal Poincaré lemma through the Euler homotopy: on each weight-`w`
/// piece with `w > 0`, `φ_w = d̂(ι_E φ_w / w)` when `φ` is closed.
pub fn poincare_contract(phi: &FormalForm) -> Result<Contraction, FormsError> {
    let dphi = phi.d_hat();
    if !dphi.is_zero() {
        return Err(FormsError::NotClosed(Box::new(dphi)));
    }
    let zero_key: FormKey = (vec![0; 2 * phi.dim], Vec::new());
    let scalar = phi.coeff(&zero_key.0, &zero_key.1);
    let mut by_weight: BTreeMap<u32, FormalForm> = BTreeMap::new();
    for (k, c) in phi.terms() {
        let w = weight(k);
        if w == 0 {
            continue;
        }
        by_weight.entry(w).or_insert_with(|| phi.empty_like()).comps.add_term(k.clone(), c);
    }
    let mut certificate = phi.empty_like();
    for (w, piece) in by_weight {
        let inv = BigRational::new(BigInt::from(1), BigInt::from(w));
        let contracted = piece.euler_contract();
        let scaled = FormalForm {
            comps: contracted.comps.map(|k| vec![(HbarLaurent::constant(FieldElement::from_rational(inv.clone()), 0), k.clone())]),
            ..contracted
        };
        certificate = certificate.add(&scaled);
    }
    Ok(Contraction { scalar, certificate })
}

/// All permutations of `0..n` with their signs.
pub(crate) fn signed_permutations(n: usize) -> Vec<(i32, Vec<usize>)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, sign: i32, out: &mut Vec<(i32, Vec<usize>)>) {
        if k == perm.len() {
            out.push((sign, perm.clone()));
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, if i == k { sign } else { -sign }, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, 1, &mut out);
    out
}

/// `φ = 1⊗alt(ξ̂₁⊗x̂₁⊗…⊗ξ̂_d⊗x̂_d)`, `alt(z₁⊗…⊗zₙ) = Σ_σ sgn(σ) z_{σ(1)}⊗…⊗z_{σ(n)}`.
pub fn mu_normalization_chain(d: usize, u_trunc: i32, hbar_trunc: i32) -> Chain<WeylMonomial> {
    let gen = |slot: usize| {
        let mut exps = vec![0; 2 * d];
        exps[slot] = 1;
        WeylMonomial { hbar: 0, exps }
    };
    let z: Vec<WeylMonomial> = (0..d).flat_map(|i| [gen(d + i), gen(i)]).collect();
    let mut out = Chain::zero(u_trunc, hbar_trunc);
    let one = ULaurent::one(u_trunc, hbar_trunc);
    for (sign, p) in signed_permutations(2 * d) {
        let mut t = vec![WeylMonomial::one(d)];
        t.extend(p.iter().map(|&i| z[i].clone()));
        out.add_term(t, &if sign > 0 { one.clone() } else { -&one });
    }
    out
}

/// A rule turning one elementary `𝕎`-tensor into a form.
pub type TensorRule = Arc<dyn Fn(&[WeylMonomial]) -> FormalForm + Send + Sync>;

/// An element of `𝕃` given by one linear rule per input chain degree.
#[derive(Clone)]
pub struct LValued {
    pub dim: usize,
    pub trunc: u32,
    pub rules: BTreeMap<usize, TensorRule>,
}

impl LValued {
    pub fn new(dim: usize, trunc: u32) -> Self {
        LValued { dim, trunc, rules: BTreeMap::new() }
    }

    pub fn with_rule(mut self, degree: usize, rule: TensorRule) -> Self {
        self.rules.insert(degree, rule);
        self
    }

    /// Extends the rules linearly over the scalar tower; degrees without a rule map to zero.
    pub fn apply(&self, c: &Chain<WeylMonomial>) -> FormalForm {
        let mut out = FormalForm::zero(self.dim, self.trunc, c.u_trunc(), c.hbar_trunc());
        for (t, coeff) in c.terms() {
            if let Some(rule) = self.rules.get(&(t.len() - 1)) {
                out = out.add(&rule(t).scale(coeff));
            }
        }
        out
    }
}

impl fmt::Debug for LValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LValued").field("dim", &self.dim).field("degrees", &self.rules.keys().collect::<Vec<_>>()).finish()
    }
}
