use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use super::WeylError;
use crate::lin::{accumulate, accumulate_owned, binomial};
use crate::scalars::FieldElement;

/// `ħ^hbar · x̂^{exps[..d]} · ξ̂^{exps[d..]}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMonomial {
    pub hbar: u32,
    pub exps: Vec<u32>,
}

impl WeylMonomial {
    pub fn one(dim: usize) -> Self {
        WeylMonomial { hbar: 0, exps: vec![0; 2 * dim] }
    }

    /// Total degree with `deg x̂ = deg ξ̂ = 1`, `deg ħ = 2`.
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum::<u32>() + 2 * self.hbar
    }

    pub fn fiber_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_central(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// `(i/2)^k`, cached.
pub(crate) fn half_i_pow(k: u32) -> FieldElement {
    static CACHE: OnceLock<Vec<FieldElement>> = OnceLock::new();
    let c = CACHE.get_or_init(|| {
        let h = FieldElement::i().scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let mut v = vec![FieldElement::one()];
        for _ in 0..64 {
            let last = v.last().unwrap().clone();
            v.push(&last * &h);
        }
        v
    });
    if (k as usize) < c.len() {
        c[k as usize].clone()
    } else {
        c[1].pow(k)
    }
}

/// Moyal product of two fiber monomials `x^α ξ^β ⋆ x^γ ξ^δ`.
///
/// Returns `(ħ-order, integer weight, fiber exponents)`; the full coefficient is
/// `weight · (i/2)^order`.
pub(crate) fn moyal_kernel(dim: usize, f: &[u32], g: &[u32]) -> Vec<(u32, i64, Vec<u32>)> {
    let mut acc: Vec<(u32, i64, Vec<u32>)> = vec![(0, 1, f.iter().zip(g).map(|(a, b)| a + b).collect())];
    for i in 0..dim {
        let (al, be) = (f[i], f[dim + i]);
        let (ga, de) = (g[i], g[dim + i]);
        let mut local = Vec::new();
        for a in 0..=be.min(ga) {
            let ca = binomial(be, a) * binomial(ga, a) * fact(a);
            for b in 0..=al.min(de) {
                let cb = binomial(al, b) * binomial(de, b) * fact(b);
                let sign = if b % 2 == 0 { 1 } else { -1 };
                local.push((a + b, sign * ca * cb));
            }
        }
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for (k, w, e) in &acc {
            for &(j, v) in &local {
                let mut e2 = e.clone();
                e2[i] -= j;
                e2[dim + i] -= j;
                next.push((k + j, w * v, e2));
            }
        }
        acc = next;
    }
    acc
}

fn fact(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Truncated formal Weyl algebra element: total degree at most `trunc`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    dim: usize,
    trunc: u32,
    terms: BTreeMap<WeylMonomial, FieldElement>,
}

impl WeylElement {
    pub fn zero(dim: usize, trunc: u32) -> Self {
        WeylElement { dim, trunc, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize, trunc: u32) -> Self {
        Self::constant(FieldElement::one(), dim, trunc)
    }

    pub fn constant(c: FieldElement, dim: usize, trunc: u32) -> Self {
        Self::monomial(c, WeylMonomial::one(dim), trunc)
    }

    pub fn monomial(c: FieldElement, m: WeylMonomial, trunc: u32) -> Self {
        let dim = m.exps.len() / 2;
        let mut out = Self::zero(dim, trunc);
        out.add_term(m, &c);
        out
    }

    pub fn hbar(dim: usize, trunc: u32) -> Self {
        Self::monomial(FieldElement::one(), WeylMonomial { hbar: 1, exps: vec![0; 2 * dim] }, trunc)
    }

    /// `x̂^i`, 1-based.
    pub fn x(i: usize, dim: usize, trunc: u32) -> Self {
        Self::generator(i - 1, dim, trunc)
    }

    /// `ξ̂^i`, 1-based.
    pub fn xi(i: usize, dim: usize, trunc: u32) -> Self {
        Self::generator(dim + i - 1, dim, trunc)
    }

    /// Generator by slot: `0..d` are the `x̂`, `d..2d` the `ξ̂`.
    pub fn generator(slot: usize, dim: usize, trunc: u32) -> Self {
        let mut exps = vec![0; 2 * dim];
        exps[slot] = 1;
        Self::monomial(FieldElement::one(), WeylMonomial { hbar: 0, exps }, trunc)
    }

    pub fn from_terms(
        dim: usize,
        trunc: u32,
        terms: impl IntoIterator<Item = (WeylMonomial, FieldElement)>,
    ) -> Self {
        let mut out = Self::zero(dim, trunc);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &WeylMonomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c·m`, dropping it if its degree exceeds the truncation.
    pub fn add_term(&mut self, m: WeylMonomial, c: &FieldElement) {
        debug_assert_eq!(m.exps.len(), 2 * self.dim);
        if m.degree() <= self.trunc {
            accumulate(&mut self.terms, m, c);
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn truncate(&self, n: u32) -> Self {
        let t = n.min(self.trunc);
        WeylElement {
            dim: self.dim,
            trunc: t,
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= t).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn with_trunc(&self, n: u32) -> Self {
        let mut out = self.truncate(n);
        out.trunc = n;
        out
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous(&self, k: u32) -> Self {
        WeylElement {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Pure `ħ`-power part, the center `C[[ħ]]`.
    pub fn central_part(&self) -> Self {
        self.filter(|m| m.is_central())
    }

    pub fn non_central_part(&self) -> Self {
        self.filter(|m| !m.is_central())
    }

    fn filter(&self, keep: impl Fn(&WeylMonomial) -> bool) -> Self {
        WeylElement {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(other.trunc);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        WeylElement {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    /// Multiply by `ħ^k`.
    pub fn mul_hbar(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            out.add_term(WeylMonomial { hbar: m.hbar + k, exps: m.exps.clone() }, c);
        }
        out
    }

    /// Divide by `ħ`; fails when some term has no `ħ` factor.
    pub fn div_hbar(&self) -> Option<Self> {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            if m.hbar == 0 {
                return None;
            }
            out.add_term(WeylMonomial { hbar: m.hbar - 1, exps: m.exps.clone() }, c);
        }
        Some(out)
    }

    /// Moyal product with no degree cut beyond `trunc`.
    pub(crate) fn star_to(&self, other: &Self, trunc: u32) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > trunc {
                    continue;
                }
                let cab = ca * cb;
                for (k, w, exps) in moyal_kernel(self.dim, &ma.exps, &mb.exps) {
                    let c = &cab * &half_i_pow(k).scale(&num_rational::BigRational::from_integer(w.into()));
                    let m = WeylMonomial { hbar: ma.hbar + mb.hbar + k, exps };
                    accumulate_owned(&mut terms, m, c);
                }
            }
        }
        WeylElement { dim: self.dim, trunc, terms }
    }

    /// Moyal product truncated at the smaller truncation order; panics on a
    /// dimension mismatch (see [`moyal_star`]).
    pub fn star(&self, other: &Self) -> Self {
        moyal_star(self, other).expect("dimension mismatch in Moyal product")
    }

    /// Exact commutator `f⋆g − g⋆f` (degrees up to the sum of both orders).
    pub(crate) fn commutator_exact(&self, other: &Self) -> Self {
        let t = self.trunc + other.trunc;
        self.star_to(other, t).sub(&other.star_to(self, t))
    }

    /// Commutative product of the underlying polynomials.
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.dim, t);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = WeylMonomial {
                    hbar: ma.hbar + mb.hbar,
                    exps: ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect(),
                };
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    /// `∂/∂(slot)` on fiber generators.
    pub fn partial(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            let e = m.exps[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[slot] -= 1;
            out.add_term(WeylMonomial { hbar: m.hbar, exps }, &c.scale(&num_rational::BigRational::from_integer(e.into())));
        }
        out
    }

    /// Value at the fiber origin, as an `ħ`-series.
    pub fn at_origin(&self) -> Vec<(u32, FieldElement)> {
        self.terms.iter().filter(|(m, _)| m.is_central()).map(|(m, c)| (m.hbar, c.clone())).collect()
    }

    /// Sorted monomial list `c·x̂1^a·…·ξ̂1^b·…·ħ^k`.
    pub fn serialize(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let d = self.dim;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("[{}]", c.serialize());
                for i in 0..d {
                    if m.exps[i] > 0 {
                        s.push_str(&format!("·x̂{}^{}", i + 1, m.exps[i]));
                    }
                }
                for i in 0..d {
                    if m.exps[d + i] > 0 {
                        s.push_str(&format!("·ξ̂{}^{}", i + 1, m.exps[d + i]));
                    }
                }
                if m.hbar > 0 {
                    s.push_str(&format!("·ħ^{}", m.hbar));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// A sparse random element with small Gaussian-integer coefficients.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, trunc: u32, nterms: usize) -> Self {
        let mut out = Self::zero(dim, trunc);
        for _ in 0..nterms {
            let deg = rng.gen_range(0..=trunc);
            let hbar = rng.gen_range(0..=deg / 2);
            let mut rest = deg - 2 * hbar;
            let mut exps = vec![0u32; 2 * dim];
            while rest > 0 {
                exps[rng.gen_range(0..2 * dim)] += 1;
                rest -= 1;
            }
            let re = rng.gen_range(-3i64..=3);
            let im = rng.gen_range(-2i64..=2);
            let c = &FieldElement::from_int(re) + &(&FieldElement::from_int(im) * &FieldElement::i());
            out.add_term(WeylMonomial { hbar, exps }, &c);
        }
        out
    }
}

/// Moyal–Weyl product `exp((iħ/2)Σ(∂_ξ⊗∂_x − ∂_x⊗∂_ξ))`, truncated at total
/// degree `min(N_a, N_b)`. With this sign `ξ̂⋆x̂ − x̂⋆ξ̂ = iħ`.
pub fn moyal_star(a: &WeylElement, b: &WeylElement) -> Result<WeylElement, WeylError> {
    if a.dim != b.dim {
        return Err(WeylError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.star_to(b, a.trunc.min(b.trunc)))
}

/// `σ: Σ ħ^k f_k ↦ f_0`.
pub fn symbol(a: &WeylElement) -> WeylElement {
    a.filter(|m| m.hbar == 0)
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (d={}, N={})", self.serialize(), self.dim, self.trunc)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}
