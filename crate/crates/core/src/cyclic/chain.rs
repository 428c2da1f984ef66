use std::collections::BTreeMap;
use std::fmt::Debug;

use super::CyclicError;
use crate::lin::{accumulate, accumulate_owned};
use crate::scalars::{HbarLaurent, ULaurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CyclicModuleKind {
    Algebra,
    Group,
    Diagonal,
    Crossed,
}

impl CyclicModuleKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CyclicModuleKind::Algebra => "algebra",
            CyclicModuleKind::Group => "group",
            CyclicModuleKind::Diagonal => "diagonal",
            CyclicModuleKind::Crossed => "crossed",
        }
    }
}

/// A cyclic module whose degree-`n` part has a basis of `(n+1)`-tuples.
///
/// Degeneracies and the cyclic operator permute or insert entries; faces may
/// produce linear combinations.
pub trait CyclicModule {
    type Elem: Clone + Ord + Debug;

    fn kind(&self) -> CyclicModuleKind;

    /// `δ_i` on a tuple of length `n+1`, `0 ≤ i ≤ n`, `n ≥ 1`.
    fn face(&self, i: usize, x: &[Self::Elem]) -> Vec<(HbarLaurent, Vec<Self::Elem>)>;

    /// `σ_i` on a tuple of length `n+1`, `0 ≤ i ≤ n`.
    fn degeneracy(&self, i: usize, x: &[Self::Elem]) -> Vec<Self::Elem>;

    /// `t_n`.
    fn cyclic(&self, x: &[Self::Elem]) -> Vec<Self::Elem>;

    /// Entries that make a tuple degenerate when they sit in a positive slot.
    fn is_unit(&self, _e: &Self::Elem) -> bool {
        false
    }

    fn hbar_trunc(&self) -> i32;
}

/// Finite linear combination of keys with coefficients in
/// `C[ħ^{-1},ħ]][u^{-1},u]]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    u_trunc: i32,
    hbar_trunc: i32,
    terms: BTreeMap<K, ULaurent>,
}

/// Elementary tensors of possibly several homological degrees.
pub type Chain<E> = LinComb<Vec<E>>;

impl<K: Clone + Ord + Debug> LinComb<K> {
    pub fn zero(u_trunc: i32, hbar_trunc: i32) -> Self {
        LinComb { u_trunc, hbar_trunc, terms: BTreeMap::new() }
    }

    pub fn from_term(x: K, c: ULaurent) -> Self {
        let mut out = LinComb::zero(c.trunc(), c.hbar_trunc());
        out.add_term(x, &c);
        out
    }

    /// `x` with coefficient `u^0·1`.
    pub fn basis(x: K, u_trunc: i32, hbar_trunc: i32) -> Self {
        Self::from_term(x, ULaurent::one(u_trunc, hbar_trunc))
    }

    pub fn u_trunc(&self) -> i32 {
        self.u_trunc
    }

    pub fn hbar_trunc(&self) -> i32 {
        self.hbar_trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &ULaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &K) -> Option<&ULaurent> {
        self.terms.get(x)
    }

    pub fn add_term(&mut self, x: K, c: &ULaurent) {
        let c = if c.trunc() > self.u_trunc { c.truncate(self.u_trunc) } else { c.clone() };
        accumulate_owned(&mut self.terms, x, c);
    }

    pub(crate) fn add_term_owned(&mut self, x: K, c: ULaurent) {
        let c = if c.trunc() > self.u_trunc { c.truncate(self.u_trunc) } else { c };
        accumulate_owned(&mut self.terms, x, c);
    }

    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Self {
        LinComb {
            u_trunc: self.u_trunc,
            hbar_trunc: self.hbar_trunc,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LinComb {
            u_trunc: self.u_trunc,
            hbar_trunc: self.hbar_trunc,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &ULaurent) -> Self {
        let mut out = LinComb::zero(self.u_trunc.min(c.trunc()), self.hbar_trunc.min(c.hbar_trunc()));
        for (k, v) in &self.terms {
            out.add_term_owned(k.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_hbar(&self, c: &HbarLaurent) -> Self {
        let mut out = LinComb::zero(self.u_trunc, self.hbar_trunc.min(c.trunc()));
        for (k, v) in &self.terms {
            out.add_term_owned(k.clone(), v.scale_hbar(c));
        }
        out
    }

    pub fn scale_field(&self, c: &crate::scalars::FieldElement) -> Self {
        let mut out = LinComb::zero(self.u_trunc, self.hbar_trunc);
        for (k, v) in &self.terms {
            out.add_term_owned(k.clone(), v.scale(c));
        }
        out
    }

    /// Multiply by `u^s`.
    pub fn shift_u(&self, s: i32) -> Self {
        let mut out = LinComb::zero(self.u_trunc, self.hbar_trunc);
        for (k, v) in &self.terms {
            out.add_term_owned(k.clone(), v.shift(s));
        }
        out
    }

    pub fn truncate_u(&self, n: i32) -> Self {
        let mut out = LinComb::zero(n.min(self.u_trunc), self.hbar_trunc);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    /// Apply a linear map given on keys.
    pub fn map<F, K2>(&self, mut f: F) -> LinComb<K2>
    where
        K2: Clone + Ord + Debug,
        F: FnMut(&K) -> Vec<(HbarLaurent, K2)>,
    {
        let mut out = LinComb::zero(self.u_trunc, self.hbar_trunc);
        for (k, v) in &self.terms {
            for (c, k2) in f(k) {
                let coeff = if c.is_one() {
                    v.clone()
                } else if let Some(f) = c.as_constant() {
                    v.scale(f)
                } else {
                    v.scale_hbar(&c)
                };
                out.add_term_owned(k2, coeff);
            }
        }
        out
    }

    /// Like [`LinComb::map`] with a `u`-shift and sign per output.
    pub fn map_signed<F, K2>(&self, mut f: F) -> LinComb<K2>
    where
        K2: Clone + Ord + Debug,
        F: FnMut(&K) -> Vec<(i32, K2)>,
    {
        let mut out = LinComb::zero(self.u_trunc, self.hbar_trunc);
        for (k, v) in &self.terms {
            for (s, k2) in f(k) {
                out.add_term_owned(k2, if s > 0 { v.clone() } else { -v });
            }
        }
        out
    }

    /// Kind tag plus sorted keys with canonical scalar text.
    pub fn serialize(&self, tag: &str) -> String {
        let mut s = format!("{tag}:");
        if self.terms.is_empty() {
            s.push_str(" 0");
        }
        for (k, c) in &self.terms {
            s.push_str(&format!("\n  {:?} ↦ {}", k, c.serialize()));
        }
        s
    }
}

impl<E: Clone + Ord + Debug> LinComb<Vec<E>> {
    pub fn from_tensor(x: Vec<E>, c: ULaurent) -> Self {
        Self::from_term(x, c)
    }

    /// Homological degrees present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|k| k.len() - 1).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn component(&self, n: usize) -> Self {
        self.filter(|k| k.len() == n + 1)
    }
}

impl<K: Clone + Ord + Debug> std::fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (k, c) in &self.terms {
            m.entry(k, &c.serialize());
        }
        m.finish()
    }
}

fn check_index(i: usize, max: usize, what: &'static str) -> Result<(), CyclicError> {
    if i > max {
        Err(CyclicError::IndexOutOfRange { op: what, index: i, max })
    } else {
        Ok(())
    }
}

/// `δ^n_i` applied to the degree-`n` component.
pub fn face<M: CyclicModule>(m: &M, i: usize, n: usize, c: &Chain<M::Elem>) -> Result<Chain<M::Elem>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::IndexOutOfRange { op: "face", index: i, max: 0 });
    }
    check_index(i, n, "face")?;
    Ok(c.component(n).map(|k| m.face(i, k)))
}

/// `σ^n_i` applied to the degree-`n` component.
pub fn degeneracy<M: CyclicModule>(
    m: &M,
    i: usize,
    n: usize,
    c: &Chain<M::Elem>,
) -> Result<Chain<M::Elem>, CyclicError> {
    check_index(i, n, "degeneracy")?;
    Ok(c.component(n).map(|k| vec![(HbarLaurent::one(0), m.degeneracy(i, k))]))
}

/// `t_n` applied to the degree-`n` component.
pub fn cyclic<M: CyclicModule>(m: &M, n: usize, c: &Chain<M::Elem>) -> Chain<M::Elem> {
    c.component(n).map(|k| vec![(HbarLaurent::one(0), m.cyclic(k))])
}

fn signed(c: HbarLaurent, sign: i32) -> HbarLaurent {
    if sign > 0 {
        c
    } else {
        -&c
    }
}

/// Hochschild boundary `b = Σ (−1)^i δ_i`, degreewise.
pub fn b<M: CyclicModule>(m: &M, c: &Chain<M::Elem>) -> Chain<M::Elem> {
    c.map(|k| hochschild_terms(m, k))
}

/// `b` on one basis tensor.
pub(crate) fn hochschild_terms<M: CyclicModule>(m: &M, k: &[M::Elem]) -> Vec<(HbarLaurent, Vec<M::Elem>)> {
    let n = k.len() - 1;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for i in 0..=n {
        let s = if i % 2 == 0 { 1 } else { -1 };
        for (c, k2) in m.face(i, k) {
            out.push((signed(c, s), k2));
        }
    }
    out
}

fn rotate<M: CyclicModule>(m: &M, k: &[M::Elem], times: usize) -> Vec<M::Elem> {
    let mut x = k.to_vec();
    for _ in 0..times {
        x = m.cyclic(&x);
    }
    x
}

/// Connes' operator `B = (t_{n+1}^{-1} + (−1)^n) σ_n Σ_i (−1)^{in} t_n^i`, with
/// `t_{n+1}^{-1} = t_{n+1}^{n+1}`.
pub fn big_b<M: CyclicModule>(m: &M, c: &Chain<M::Elem>) -> Chain<M::Elem> {
    c.map(|k| connes_terms(m, k))
}

/// `B` on one basis tensor.
pub(crate) fn connes_terms<M: CyclicModule>(m: &M, k: &[M::Elem]) -> Vec<(HbarLaurent, Vec<M::Elem>)> {
    let n = k.len() - 1;
    let mut out = Vec::new();
    let mut x = k.to_vec();
    for i in 0..=n {
        let s_i = if (i * n) % 2 == 0 { 1 } else { -1 };
        let y = m.degeneracy(n, &x);
        let s_n = if n % 2 == 0 { 1 } else { -1 };
        out.push((signed(HbarLaurent::one(0), s_i), rotate(m, &y, n + 1)));
        out.push((signed(HbarLaurent::one(0), s_i * s_n), y));
        x = m.cyclic(&x);
    }
    out
}

/// `(b + uB)c`.
pub fn b_plus_ub<M: CyclicModule>(m: &M, c: &Chain<M::Elem>) -> Chain<M::Elem> {
    b(m, c).add(&big_b(m, c).shift_u(1))
}

/// Quotient by degenerate tensors: drop terms with a unit in a positive slot.
pub fn normalize<M: CyclicModule>(m: &M, c: &Chain<M::Elem>) -> Chain<M::Elem> {
    c.filter(|k| !k[1..].iter().any(|e| m.is_unit(e)))
}

/// Accumulate a tensor with an `ħ`-coefficient into a degree-graded map.
pub(crate) fn push_lin<E: Ord>(map: &mut BTreeMap<Vec<E>, HbarLaurent>, k: Vec<E>, c: &HbarLaurent) {
    accumulate(map, k, c);
}
