//! Group cochains, the cap product, the cocycles `Tr_ξ` on crossed products,
//! equivariant classes in the group-cochain/de Rham bicomplex and the pairing `Φ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{lin_basis, lin_mul, Lin};
use crate::cyclic::{d_map_upto, Chain, CyclicError, GroupAction, NonHomChain};
use crate::group::{GroupElt, GroupSpec};
use crate::scalars::{FieldElement, HbarLaurent, ULaurent};
use crate::torus::{
    fiber_plane_wave, hkr_tensor, plane_wave_at, symplectic_pairing, trace_of_mode, EquivariantTorus, Mode, TorusElement,
    TorusError, TorusForm, TranslationAction,
};

#[derive(Debug, Error)]
pub enum GroupCohError {
    #[error("not a cocycle; δξ = {0:?}")]
    NotCocycle(Box<GroupCochain>),
    #[error("polynomial cochains need a free abelian group")]
    PolynomialNeedsFreeGroup,
    #[error("cochains live on different groups or representations")]
    Incompatible,
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
}

/// Polynomial with rational coefficients in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RatPoly {
    pub fn zero(nvars: usize) -> Self {
        RatPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, q: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], q);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// From `(exponents, numerator, denominator)` triples.
    pub fn from_terms(nvars: usize, terms: &[(Vec<u32>, i64, i64)]) -> Self {
        let mut p = Self::zero(nvars);
        for (e, n, d) in terms {
            p.add_term(e.clone(), BigRational::new((*n).into(), (*d).into()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, q: BigRational) {
        debug_assert_eq!(e.len(), self.nvars);
        let v = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *v += q;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.add_term(e.clone(), q.clone());
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                out.add_term(e.iter().zip(f).map(|(x, y)| x + y).collect(), a * b);
            }
        }
        out
    }

    pub fn eval(&self, x: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, ei) in x.iter().zip(e) {
                t *= BigRational::from_integer(BigInt::from(*xi).pow(*ei));
            }
            s += t;
        }
        s
    }

    /// Replace variable `i` by the sum of the new variables `map[i]`.
    pub fn substitute(&self, new_nvars: usize, map: &[Vec<usize>]) -> Self {
        let images: Vec<RatPoly> = map
            .iter()
            .map(|vs| vs.iter().fold(Self::zero(new_nvars), |acc, &v| acc.add(&Self::var(new_nvars, v))))
            .collect();
        self.compose(new_nvars, &images)
    }

    /// Replace variable `i` by `images[i]`.
    pub fn compose(&self, new_nvars: usize, images: &[RatPoly]) -> Self {
        let mut out = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(new_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}·x{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Rep {
    /// Variable `j·r + c` is coordinate `c` of argument `j`.
    Poly(RatPoly),
    /// Every `k`-tuple of a finite group; missing entries are zero.
    Table(BTreeMap<Vec<GroupElt>, FieldElement>),
}

/// A non-homogeneous `k`-cochain on `Γ` with trivial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupCochain {
    group: GroupSpec,
    degree: usize,
    rep: Rep,
}

fn tuples(elems: &[GroupElt], k: usize) -> Vec<Vec<GroupElt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |g| {
                    let mut t2 = t.clone();
                    t2.push(g.clone());
                    t2
                })
            })
            .collect();
    }
    out
}

impl GroupCochain {
    /// The constant 0-cochain `c`.
    pub fn constant(group: GroupSpec, c: FieldElement) -> Self {
        match group {
            GroupSpec::Free { .. } => {
                let q = c.as_rational().expect("polynomial cochains are rational");
                GroupCochain { group, degree: 0, rep: Rep::Poly(RatPoly::constant(0, q)) }
            }
            GroupSpec::Cyclic { .. } => {
                let mut t = BTreeMap::new();
                if !c.is_zero() {
                    t.insert(Vec::new(), c);
                }
                GroupCochain { group, degree: 0, rep: Rep::Table(t) }
            }
        }
    }

    pub fn one(group: GroupSpec) -> Self {
        Self::constant(group, FieldElement::one())
    }

    /// `ξ(g_1,…,g_k) = P(coordinates)` on `Z^r`.
    pub fn polynomial(group: GroupSpec, degree: usize, p: RatPoly) -> Result<Self, GroupCohError> {
        if !group.is_free() {
            return Err(GroupCohError::PolynomialNeedsFreeGroup);
        }
        if p.nvars() != degree * group.rank() {
            return Err(GroupCohError::ArgumentCount { expected: degree * group.rank(), got: p.nvars() });
        }
        Ok(GroupCochain { group, degree, rep: Rep::Poly(p) })
    }

    /// The homomorphism `γ ↦ Σ_c a_c γ_c` on `Z^r`.
    pub fn linear(group: GroupSpec, coeffs: &[i64]) -> Result<Self, GroupCohError> {
        let r = group.rank();
        let mut p = RatPoly::zero(r);
        for (c, &a) in coeffs.iter().enumerate().take(r) {
            p = p.add(&RatPoly::var(r, c).scale(&BigRational::from_integer(a.into())));
        }
        Self::polynomial(group, 1, p)
    }

    /// Tabulate `f` on every `k`-tuple of a finite group.
    pub fn table(group: GroupSpec, degree: usize, f: impl Fn(&[GroupElt]) -> FieldElement) -> Result<Self, GroupCohError> {
        let elems = group.elements().ok_or(GroupCohError::Incompatible)?;
        let mut t = BTreeMap::new();
        for args in tuples(&elems, degree) {
            let v = f(&args);
            if !v.is_zero() {
                t.insert(args, v);
            }
        }
        Ok(GroupCochain { group, degree, rep: Rep::Table(t) })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, args: &[GroupElt]) -> FieldElement {
        debug_assert_eq!(args.len(), self.degree);
        match &self.rep {
            Rep::Poly(p) => {
                let x: Vec<i64> = args.iter().flat_map(|g| g.0.iter().copied()).collect();
                FieldElement::from_rational(p.eval(&x))
            }
            Rep::Table(t) => t.get(args).cloned().unwrap_or_else(FieldElement::zero),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.rep {
            Rep::Poly(p) => p.is_zero(),
            Rep::Table(t) => t.is_empty(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupCohError> {
        if self.group != other.group || self.degree != other.degree {
            return Err(GroupCohError::Incompatible);
        }
        let rep = match (&self.rep, &other.rep) {
            (Rep::Poly(a), Rep::Poly(b)) => Rep::Poly(a.add(b)),
            (Rep::Table(a), Rep::Table(b)) => {
                let mut t = a.clone();
                for (k, v) in b {
                    let s = t.get(k).cloned().unwrap_or_else(FieldElement::zero) + v.clone();
                    if s.is_zero() {
                        t.remove(k);
                    } else {
                        t.insert(k.clone(), s);
                    }
                }
                Rep::Table(t)
            }
            _ => return Err(GroupCohError::Incompatible),
        };
        Ok(GroupCochain { rep, ..self.clone() })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let rep = match &self.rep {
            Rep::Poly(p) => Rep::Poly(p.scale(q)),
            Rep::Table(t) => Rep::Table(t.iter().map(|(k, v)| (k.clone(), v.scale(q))).filter(|(_, v)| !v.is_zero()).collect()),
        };
        GroupCochain { rep, ..self.clone() }
    }

    /// `δξ(g_1,…,g_{k+1}) = ξ(g_2,…) + Σ_{i=1}^k (−1)^i ξ(…,g_ig_{i+1},…) + (−1)^{k+1} ξ(g_1,…,g_k)`.
    pub fn coboundary(&self) -> Self {
        let k = self.degree;
        match &self.rep {
            Rep::Poly(p) => {
                let r = self.group.rank();
                let n = (k + 1) * r;
                let var = |arg: usize, c: usize| arg * r + c;
                let mut out = RatPoly::zero(n);
                for face in 0..=k + 1 {
                    let map: Vec<Vec<usize>> = (0..k)
                        .flat_map(|j| (0..r).map(move |c| (j, c)))
                        .map(|(j, c)| {
                            if face == 0 {
                                vec![var(j + 1, c)]
                            } else if face == k + 1 || j + 1 < face {
                                vec![var(j, c)]
                            } else if j + 1 == face {
                                vec![var(j, c), var(j + 1, c)]
                            } else {
                                vec![var(j + 1, c)]
                            }
                        })
                        .collect();
                    let sign = if face % 2 == 0 { 1 } else { -1 };
                    out = out.add(&p.substitute(n, &map).scale(&BigRational::from_integer(sign.into())));
                }
                GroupCochain { group: self.group, degree: k + 1, rep: Rep::Poly(out) }
            }
            Rep::Table(_) => {
                let g = self.group;
                Self::table(g, k + 1, |a| {
                    let mut s = self.eval(&a[1..]);
                    for i in 1..=k {
                        let mut b: Vec<GroupElt> = a[..i - 1].to_vec();
                        b.push(g.mul(&a[i - 1], &a[i]));
                        b.extend_from_slice(&a[i + 1..]);
                        let v = self.eval(&b);
                        s = if i % 2 == 0 { s + v } else { s - v };
                    }
                    let last = self.eval(&a[..k]);
                    if (k + 1) % 2 == 0 {
                        s + last
                    } else {
                        s - last
                    }
                })
                .expect("finite group")
            }
        }
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    /// Vanishes whenever some argument is `e`.
    pub fn is_normalized(&self) -> bool {
        match &self.rep {
            Rep::Poly(p) => {
                let r = self.group.rank();
                p.terms().all(|(e, _)| (0..self.degree).all(|j| e[j * r..(j + 1) * r].iter().any(|&x| x > 0)))
            }
            Rep::Table(t) => t.keys().all(|k| k.iter().all(|g| !self.group.is_identity(g))),
        }
    }

    /// Homogeneous form `c(x_0,…,x_k) = ξ(x_0^{-1}x_1,…,x_{k−1}^{-1}x_k)`.
    pub fn homogeneous(&self, xs: &[GroupElt]) -> FieldElement {
        let g = self.group;
        let args: Vec<GroupElt> = xs.windows(2).map(|w| g.mul(&g.inv(&w[0]), &w[1])).collect();
        self.eval(&args)
    }

    /// Whether `c(x_1,…,x_k,x_0) = (−1)^k c(x_0,…,x_k)`, which makes `Tr_ξ`
    /// invariant under the cyclic operator and not only `b`-closed.
    pub fn is_cyclic(&self) -> bool {
        let k = self.degree;
        if k == 0 {
            return true;
        }
        let sign = BigRational::from_integer(if k % 2 == 0 { 1 } else { -1 }.into());
        match &self.rep {
            Rep::Poly(_) => {
                let h = self.homogeneous_poly();
                let r = self.group.rank();
                let rotated = h.compose(h.nvars(), &block_images(k + 1, r, |j| (j + 1) % (k + 1)));
                rotated == h.scale(&sign)
            }
            Rep::Table(_) => {
                let g = self.group;
                let elems = g.elements().expect("finite group");
                tuples(&elems, k).into_iter().all(|a| {
                    let mut xs = vec![g.identity()];
                    for x in &a {
                        xs.push(g.mul(xs.last().expect("nonempty"), x));
                    }
                    let mut rot = xs[1..].to_vec();
                    rot.push(xs[0].clone());
                    self.homogeneous(&rot) == self.homogeneous(&xs).scale(&sign)
                })
            }
        }
    }

    /// Antisymmetrization `Alt c = (1/(k+1)!) Σ_σ sgn(σ) c∘σ` of the homogeneous
    /// form; a chain map homotopic to the identity whose image is cyclic.
    pub fn alternate(&self) -> Self {
        let k = self.degree;
        let perms = crate::formal_forms::signed_permutations(k + 1);
        let norm = BigRational::new(BigInt::one(), crate::lin::factorial(k as u32 + 1));
        match &self.rep {
            Rep::Poly(_) => {
                let h = self.homogeneous_poly();
                let r = self.group.rank();
                let mut alt = RatPoly::zero(h.nvars());
                for (sign, perm) in &perms {
                    let t = h.compose(h.nvars(), &block_images(k + 1, r, |j| perm[j]));
                    alt = alt.add(&t.scale(&BigRational::from_integer((*sign).into())));
                }
                let alt = alt.scale(&norm);
                // Back to inhomogeneous: x_0 = 0, x_j = g_1 + … + g_j.
                let n = k * r;
                let images: Vec<RatPoly> = (0..=k)
                    .flat_map(|j| (0..r).map(move |c| (j, c)))
                    .map(|(j, c)| (0..j).fold(RatPoly::zero(n), |acc, i| acc.add(&RatPoly::var(n, i * r + c))))
                    .collect();
                GroupCochain { group: self.group, degree: k, rep: Rep::Poly(alt.compose(n, &images)) }
            }
            Rep::Table(_) => {
                let g = self.group;
                Self::table(g, k, |a| {
                    let mut xs = vec![g.identity()];
                    for x in a {
                        xs.push(g.mul(xs.last().expect("nonempty"), x));
                    }
                    let mut s = FieldElement::zero();
                    for (sign, perm) in &perms {
                        let ys: Vec<GroupElt> = perm.iter().map(|&j| xs[j].clone()).collect();
                        let v = self.homogeneous(&ys);
                        s = if *sign > 0 { s + v } else { s - v };
                    }
                    s.scale(&norm)
                })
                .expect("finite group")
            }
        }
    }

    /// `P(x_1 − x_0, …, x_k − x_{k−1})` in `(k+1)·r` variables.
    fn homogeneous_poly(&self) -> RatPoly {
        let Rep::Poly(p) = &self.rep else { unreachable!("polynomial representation") };
        let (k, r) = (self.degree, self.group.rank());
        let n = (k + 1) * r;
        let images: Vec<RatPoly> = (0..k)
            .flat_map(|j| (0..r).map(move |c| (j, c)))
            .map(|(j, c)| RatPoly::var(n, (j + 1) * r + c).add(&RatPoly::var(n, j * r + c).scale(&-BigRational::one())))
            .collect();
        p.compose(n, &images)
    }

    /// `(ξ∪η)(g_1,…,g_{p+q}) = ξ(g_1,…,g_p)·η(g_{p+1},…,g_{p+q})`.
    pub fn cup(&self, other: &Self) -> Result<Self, GroupCohError> {
        if self.group != other.group {
            return Err(GroupCohError::Incompatible);
        }
        let (p, q) = (self.degree, other.degree);
        match (&self.rep, &other.rep) {
            (Rep::Poly(a), Rep::Poly(b)) => {
                let r = self.group.rank();
                let n = (p + q) * r;
                let a2 = a.substitute(n, &(0..p * r).map(|i| vec![i]).collect::<Vec<_>>());
                let b2 = b.substitute(n, &(0..q * r).map(|i| vec![p * r + i]).collect::<Vec<_>>());
                Ok(GroupCochain { group: self.group, degree: p + q, rep: Rep::Poly(a2.mul(&b2)) })
            }
            (Rep::Table(_), Rep::Table(_)) => Self::table(self.group, p + q, |a| self.eval(&a[..p]) * other.eval(&a[p..])),
            _ => Err(GroupCohError::Incompatible),
        }
    }

    /// Errors with the `δξ` witness unless `ξ` is a cocycle.
    pub fn require_cocycle(&self) -> Result<(), GroupCohError> {
        let d = self.coboundary();
        if d.is_zero() {
            Ok(())
        } else {
            Err(GroupCohError::NotCocycle(Box::new(d)))
        }
    }

    pub fn serialize(&self) -> String {
        match &self.rep {
            Rep::Poly(p) => format!("cochain[{}] {}: {:?}", self.degree, self.group.describe(), p),
            Rep::Table(t) => {
                let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k:?}↦{}", v.serialize())).collect();
                format!("cochain[{}] {}: {}", self.degree, self.group.describe(), parts.join(", "))
            }
        }
    }
}

/// Images of block variables under `block j ↦ block f(j)`.
fn block_images(blocks: usize, r: usize, f: impl Fn(usize) -> usize) -> Vec<RatPoly> {
    let n = blocks * r;
    (0..blocks).flat_map(|j| (0..r).map(move |c| (j, c))).map(|(j, c)| RatPoly::var(n, f(j) * r + c)).collect()
}

/// Result of [`cap`]; `underflow` counts terms with fewer group legs than `deg ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capped<B: Clone + Ord> {
    pub chain: NonHomChain<B>,
    pub underflow: usize,
}

/// `(a ⊗ g_1⊗…⊗g_p) ∩ ξ = ξ(g_1,…,g_k)·a ⊗ g_{k+1}⊗…⊗g_p`.
pub fn cap<B: Clone + Ord + fmt::Debug>(c: &NonHomChain<B>, xi: &GroupCochain) -> Capped<B> {
    let k = xi.degree();
    let mut chain = NonHomChain::zero(c.u_trunc(), c.hbar_trunc());
    let mut underflow = 0;
    for ((a, legs), coeff) in c.terms() {
        if legs.len() < k {
            underflow += 1;
            continue;
        }
        let v = xi.eval(&legs[..k]);
        if !v.is_zero() {
            chain.add_term((a.clone(), legs[k..].to_vec()), &coeff.scale(&v));
        }
    }
    Capped { chain, underflow }
}

/// A group action on an algebra carrying an invariant trace on basis elements.
pub trait Traced: GroupAction {
    fn trace_basis(&self, b: &Self::Basis) -> HbarLaurent;
}

impl Traced for EquivariantTorus {
    fn trace_basis(&self, b: &Mode) -> HbarLaurent {
        trace_of_mode(b, self.torus.trunc)
    }
}

impl<T: Traced> Traced for &T {
    fn trace_basis(&self, b: &T::Basis) -> HbarLaurent {
        (**self).trace_basis(b)
    }
}

/// `Tr(a_0·g_0(a_1)·(g_0g_1)(a_2)⋯)` for one tensor of crossed-product basis elements.
fn twisted_trace<A: Traced>(alg: &A, t: &[(A::Basis, GroupElt)]) -> HbarLaurent {
    let g = alg.group();
    let trunc = alg.hbar_trunc();
    let mut acc: Lin<A::Basis> = lin_basis(t[0].0.clone(), trunc);
    let mut prefix = t[0].1.clone();
    for (a, gi) in &t[1..] {
        let mut acted: Lin<A::Basis> = BTreeMap::new();
        for (c, b) in alg.act_basis(&prefix, a) {
            crate::lin::accumulate(&mut acted, b, &c);
        }
        acc = lin_mul(alg, &acc, &acted);
        prefix = g.mul(&prefix, gi);
    }
    let mut out: Option<HbarLaurent> = None;
    for (b, c) in &acc {
        let v = alg.trace_basis(b).mul(c);
        out = Some(match out {
            Some(o) => &o + &v,
            None => v,
        });
    }
    out.unwrap_or_else(|| HbarLaurent::zero(trunc))
}

/// `Tr_ξ(a_0γ_0⊗…⊗a_kγ_k) = δ_{e,γ_0⋯γ_k} ξ(γ_1,…,γ_k) Tr(a_0γ_0(a_1)⋯(γ_0⋯γ_{k−1})(a_k))`.
pub struct TrXi<A> {
    alg: A,
    xi: GroupCochain,
}

/// Builds `Tr_ξ`; rejects `ξ` that is not a cocycle.
pub fn tr_xi<A: Traced>(alg: A, xi: GroupCochain) -> Result<TrXi<A>, GroupCohError> {
    if xi.group() != alg.group() {
        return Err(GroupCohError::Incompatible);
    }
    xi.require_cocycle()?;
    Ok(TrXi { alg, xi })
}

impl<A: Traced> TrXi<A> {
    pub fn degree(&self) -> usize {
        self.xi.degree()
    }

    /// Value on one tensor.
    pub fn eval_tensor(&self, t: &[(A::Basis, GroupElt)]) -> HbarLaurent {
        let g = self.alg.group();
        let k = self.xi.degree();
        if t.len() != k + 1 || !g.is_identity(&g.product(t.iter().map(|x| &x.1))) {
            return HbarLaurent::zero(self.alg.hbar_trunc());
        }
        let legs: Vec<GroupElt> = t[1..].iter().map(|x| x.1.clone()).collect();
        let v = self.xi.eval(&legs);
        if v.is_zero() {
            return HbarLaurent::zero(self.alg.hbar_trunc());
        }
        twisted_trace(&self.alg, t).scale(&v)
    }

    /// Pairing with a periodic chain: the degree-`k` component, `u`-powers kept.
    pub fn eval(&self, c: &Chain<(A::Basis, GroupElt)>) -> ULaurent {
        let mut out: Option<ULaurent> = None;
        for (t, coeff) in c.terms() {
            if t.len() != self.xi.degree() + 1 {
                continue;
            }
            let v = self.eval_tensor(t);
            if v.is_zero() {
                continue;
            }
            let term = coeff.scale_hbar(&v);
            out = Some(match out {
                Some(o) => &o + &term,
                None => term,
            });
        }
        out.unwrap_or_else(|| ULaurent::zero(c.u_trunc(), c.hbar_trunc()))
    }
}

/// `⟨Tr, D(a) ∩ ξ⟩`: the trace on the part of the capped chain with no
/// group legs and algebra degree 0.
pub fn cap_trace_pairing<A: Traced>(alg: &A, xi: &GroupCochain, c: &Chain<(A::Basis, GroupElt)>) -> ULaurent {
    let k = xi.degree();
    let d = d_map_upto(alg, c, k);
    let capped = cap(&d.filter(|(a, legs)| a.len() == 1 && legs.len() == k), xi).chain;
    let mut out = ULaurent::zero(c.u_trunc(), c.hbar_trunc());
    for ((a, _), coeff) in capped.terms() {
        out = &out + &coeff.scale_hbar(&alg.trace_basis(&a[0]));
    }
    out
}

/// A cocycle in the bicomplex `C^p(Γ, Ω^q(T^{2d}))`, each component a sum
/// of scalar cochains times forms.
#[derive(Clone, Debug)]
pub struct EquivariantClassCocycle {
    pub dim: usize,
    pub trunc: i32,
    pub action: TranslationAction,
    pub components: BTreeMap<(usize, usize), Vec<(GroupCochain, TorusForm)>>,
}

impl EquivariantClassCocycle {
    pub fn new(dim: usize, trunc: i32, action: TranslationAction) -> Self {
        EquivariantClassCocycle { dim, trunc, action, components: BTreeMap::new() }
    }

    pub fn push(&mut self, xi: GroupCochain, form: TorusForm) {
        self.components.entry((xi.degree(), form.degree())).or_default().push((xi, form));
    }

    /// The unit class `1 ∈ C^0(Γ, Ω^0)`.
    pub fn unit(dim: usize, trunc: i32, action: TranslationAction) -> Self {
        let mut c = Self::new(dim, trunc, action);
        let g = c.action.group;
        c.push(GroupCochain::one(g), TorusForm::function(TorusElement::one(dim, trunc)));
        c
    }

    /// Total degrees `p + q` present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.components.keys().map(|(p, q)| p + q).collect();
        d.dedup();
        d
    }

    /// `c_{p,q}(g_1,…,g_p)`.
    pub fn eval(&self, p: usize, q: usize, args: &[GroupElt]) -> TorusForm {
        let mut out = TorusForm::zero(self.dim, q, self.trunc);
        for (xi, form) in self.components.get(&(p, q)).into_iter().flatten() {
            let v = xi.eval(args);
            if !v.is_zero() {
                out = out.add(&form.scale(&v)).expect("same degree");
            }
        }
        out
    }

    /// Pullback of a form along the translation by `g`.
    fn pullback(&self, g: &GroupElt, f: &TorusForm) -> Result<TorusForm, GroupCohError> {
        let t = self.action.shift_of(g);
        let mut out = TorusForm::zero(self.dim, f.degree(), f.trunc());
        for (idx, a) in f.components() {
            let mut b = TorusElement::zero(self.dim, a.trunc());
            for (m, c) in a.modes() {
                b.add_mode(m.clone(), &c.scale(&plane_wave_at(m, &t, self.action.level)?));
            }
            out.add_component(idx, &b);
        }
        Ok(out)
    }

    /// `(Dc)_{p,q}(g_1,…,g_p) = (δc_{p−1,q})(g_1,…,g_p) + (−1)^p d c_{p,q−1}(g_1,…,g_p)`.
    pub fn total_differential_at(&self, p: usize, q: usize, args: &[GroupElt]) -> Result<TorusForm, GroupCohError> {
        let gr = self.action.group;
        let mut out = TorusForm::zero(self.dim, q, self.trunc);
        if q > 0 && self.components.contains_key(&(p, q - 1)) {
            let dc = self.eval(p, q - 1, args).d();
            out = out.add(&if p % 2 == 0 { dc } else { dc.scale(&FieldElement::from_int(-1)) })?;
        }
        if p > 0 && self.components.contains_key(&(p - 1, q)) {
            let k = p - 1;
            out = out.add(&self.pullback(&args[0], &self.eval(k, q, &args[1..]))?)?;
            for i in 1..=k {
                let mut b: Vec<GroupElt> = args[..i - 1].to_vec();
                b.push(gr.mul(&args[i - 1], &args[i]));
                b.extend_from_slice(&args[i + 1..]);
                let v = self.eval(k, q, &b);
                out = out.add(&if i % 2 == 0 { v } else { v.scale(&FieldElement::from_int(-1)) })?;
            }
            let last = self.eval(k, q, &args[..k]);
            out = out.add(&if (k + 1) % 2 == 0 { last } else { last.scale(&FieldElement::from_int(-1)) })?;
        }
        Ok(out)
    }

    /// Bidegrees and arguments where `Dc ≠ 0`, tested on every tuple drawn
    /// from `sample` with total degree up to `max_total + 1`.
    pub fn total_defects(&self, sample: &[GroupElt], max_total: usize) -> Result<Vec<((usize, usize), Vec<GroupElt>)>, GroupCohError> {
        let mut bad = Vec::new();
        for n in 0..=max_total + 1 {
            for p in 0..=n {
                let q = n - p;
                if q > 2 * self.dim {
                    continue;
                }
                for args in tuples(sample, p) {
                    if !self.total_differential_at(p, q, &args)?.is_zero() {
                        bad.push(((p, q), args));
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Cup product; forms are assumed translation invariant (checked).
    pub fn cup(&self, other: &Self) -> Result<Self, GroupCohError> {
        let mut out = Self::new(self.dim, self.trunc.min(other.trunc), self.action.clone());
        for ((_, q1), xs) in &self.components {
            for ((p2, _), ys) in &other.components {
                for (xi, f) in xs {
                    if !is_invariant(f) {
                        return Err(GroupCohError::UnsupportedAction("cup with non-invariant forms".into()));
                    }
                    for (eta, g) in ys {
                        let form = f.wedge(g);
                        if form.degree() > 2 * self.dim || form.is_zero() {
                            continue;
                        }
                        let sign = if (q1 * p2) % 2 == 0 { 1 } else { -1 };
                        out.push(xi.cup(eta)?, form.scale(&FieldElement::from_int(sign)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ_{n ≤ max} c^n/n!` for a class without a `(0,0)` component.
    pub fn exp(&self, max: usize) -> Result<Self, GroupCohError> {
        let mut out = Self::unit(self.dim, self.trunc, self.action.clone());
        let mut power = out.clone();
        for n in 1..=max {
            power = power.cup(self)?;
            let inv = BigRational::new(BigInt::from(1), crate::lin::factorial(n as u32));
            for ((_, _), comps) in &power.components {
                for (xi, f) in comps {
                    out.push(xi.scale(&inv), f.clone());
                }
            }
        }
        Ok(out)
    }
}

fn is_invariant(f: &TorusForm) -> bool {
    f.components().all(|(_, a)| a.modes().all(|(m, _)| m.iter().all(|&x| x == 0)))
}

/// `u^{-1}∇_F u` for the base-constant fiber plane wave `u = exp(2πi k·ŷ)`,
/// read from jets truncated at weight `nw`; it is central, i.e. a 1-form.
pub fn twist_connection_form(k: &[i64], nw: u32, trunc: i32) -> Result<TorusForm, GroupCohError> {
    let dim = k.len() / 2;
    let u = fiber_plane_wave(k, nw);
    let neg: Vec<i64> = k.iter().map(|x| -x).collect();
    let uinv = fiber_plane_wave(&neg, nw);
    let mut out = TorusForm::zero(dim, 1, trunc);
    for s in 0..2 * dim {
        let comp = uinv.fiber_star(&u.base_derivative(s).sub(&u.fiber_derivative(s))).truncate(nw.saturating_sub(1));
        let mut scalar = HbarLaurent::zero(trunc);
        for ((m, g), c) in comp.terms() {
            if g.iter().any(|&x| x > 0) || m.iter().any(|&x| x != 0) {
                return Err(GroupCohError::UnsupportedAction("u^{-1}∇u is not central".into()));
            }
            scalar = &scalar + &c.with_trunc(trunc);
        }
        if !scalar.is_zero() {
            out.add_component(&[s], &TorusElement::one(dim, trunc).scale_hbar(&scalar));
        }
    }
    Ok(out)
}

/// `θ_Γ`: `ω/(iħ)` in bidegree `(0,2)` plus, for twisted `Z^r`-actions, the
/// `(1,1)` component `γ ↦ Σ_j γ_j u_j^{-1}∇_F u_j`.
pub fn equivariant_theta(action: &TranslationAction, trunc: i32) -> Result<EquivariantClassCocycle, GroupCohError> {
    let dim = action.shifts.first().map_or(0, |s| s.len()) / 2;
    let mut c = EquivariantClassCocycle::new(dim, trunc, action.clone());
    let inv_ih = HbarLaurent::monomial(-FieldElement::i(), -1, trunc);
    c.push(GroupCochain::one(action.group), TorusForm::omega(dim, trunc + 1).scale_hbar(&inv_ih));
    if action.is_twisted() {
        let r = action.group.rank();
        for i in 0..r {
            for j in 0..r {
                if symplectic_pairing(&action.twists[i], &action.twists[j]) != 0 {
                    return Err(GroupCohError::UnsupportedAction("twists with a central composition defect".into()));
                }
            }
        }
        for (j, kj) in action.twists.iter().enumerate() {
            let mut coeffs = vec![0; r];
            coeffs[j] = 1;
            let form = twist_connection_form(kj, 3, trunc)?;
            if !form.is_zero() {
                c.push(GroupCochain::linear(action.group, &coeffs)?, form);
            }
        }
    }
    Ok(c)
}

/// `Â_Γ = 1`: translations preserve the flat frame.
pub fn equivariant_ahat(action: &TranslationAction, trunc: i32) -> EquivariantClassCocycle {
    let dim = action.shifts.first().map_or(0, |s| s.len()) / 2;
    EquivariantClassCocycle::unit(dim, trunc, action.clone())
}

/// Value of [`phi_pair`]; `flagged` counts contributions dropped for a degree mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiValue {
    pub value: ULaurent,
    pub flagged: usize,
}

/// `⟨Φ(ℛ(c)[ξ]), a⟩` for a chain `a` over the symbol crossed product: `D`,
/// cap with `ξ`, HKR on the algebra legs, wedge with `c_{p,2d−n}` evaluated on the
/// remaining legs, `∫`, and the weight `u^{(p+q)/2 − d}`.
pub fn phi_pair(
    class: &EquivariantClassCocycle,
    xi: &GroupCochain,
    symbol_alg: &EquivariantTorus,
    a: &Chain<(Mode, GroupElt)>,
) -> Result<PhiValue, GroupCohError> {
    let d = class.dim;
    let pmax = xi.degree() + class.components.keys().map(|(p, _)| *p).max().unwrap_or(0);
    let nh = d_map_upto(symbol_alg, a, pmax);
    let capped = cap(&nh, xi);
    let mut flagged = capped.underflow;
    let mut value = ULaurent::zero(a.u_trunc(), class.trunc);
    for ((modes, legs), coeff) in capped.chain.terms() {
        let n = modes.len() - 1;
        if n > 2 * d {
            flagged += 1;
            continue;
        }
        let (p, q) = (legs.len(), 2 * d - n);
        if !class.components.contains_key(&(p, q)) {
            continue;
        }
        if (p + q) % 2 == 1 {
            flagged += 1;
            continue;
        }
        let form = class.eval(p, q, legs).wedge(&hkr_tensor(modes, class.trunc));
        let integral = form.integrate()?;
        if integral.is_zero() {
            continue;
        }
        let w = ((p + q) / 2) as i32 - d as i32;
        value = &value + &coeff.scale_hbar(&integral).shift(w);
    }
    Ok(PhiValue { value, flagged })
}

/// `σ`: keep the `ħ^0` part of every coefficient.
pub fn symbol_chain<K: Clone + Ord + fmt::Debug>(c: &Chain<K>) -> Chain<K> {
    let mut out = Chain::zero(c.u_trunc(), 0);
    for (t, coeff) in c.terms() {
        let mut v = ULaurent::zero(c.u_trunc(), 0);
        for (e, h) in coeff.coeffs() {
            v.add_at(e, &h.truncate(0).with_trunc(0));
        }
        out.add_term(t.clone(), &v);
    }
    out
}
