use std::fmt;

use super::element::{WeylElement, WeylMonomial};
use super::WeylError;
use crate::scalars::{FieldElement, HbarLaurent};

/// The derivation `(1/ħ)·ad f` of the Weyl algebra, stored by its canonical
/// representative `f` (no pure `ħ`-power terms).
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    rep: WeylElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuadKind {
    XX,
    XiXi,
    XXi,
}

impl Derivation {
    pub fn zero(dim: usize, trunc: u32) -> Self {
        Derivation { rep: WeylElement::zero(dim, trunc) }
    }

    pub fn rep(&self) -> &WeylElement {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn trunc(&self) -> u32 {
        self.rep.trunc()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Lowest grade present; `ad` of a degree-`k` element has grade `k − 2`.
    pub fn grade(&self) -> Option<i32> {
        self.rep.min_degree().map(|k| k as i32 - 2)
    }

    pub fn add(&self, other: &Self) -> Self {
        Derivation { rep: self.rep.add(&other.rep) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Derivation { rep: self.rep.sub(&other.rep) }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Derivation { rep: self.rep.scale(c) }
    }

    /// `(1/ħ)(f⋆g − g⋆f)`, truncated at `g`'s order.
    pub fn apply(&self, g: &WeylElement) -> WeylElement {
        apply_derivation(self, g)
    }

    /// Lie bracket of derivations.
    pub fn bracket(&self, other: &Self) -> Self {
        let h = hbar_commutator(&self.rep, &other.rep);
        Derivation { rep: h.non_central_part().truncate(self.trunc().min(other.trunc())) }
    }

    /// `ħ`-free quadratic part, the projection onto `sp(2d)`.
    pub fn sp_projection(&self) -> Self {
        let mut out = WeylElement::zero(self.dim(), self.trunc());
        for (m, c) in self.rep.terms() {
            if m.hbar == 0 && m.fiber_degree() == 2 {
                out.add_term(m.clone(), c);
            }
        }
        Derivation { rep: out }
    }

    pub fn is_sp(&self) -> bool {
        self.sp_projection() == *self
    }

    pub fn random<R: rand::Rng>(rng: &mut R, dim: usize, trunc: u32, nterms: usize) -> Self {
        ad_derivation(&WeylElement::random(rng, dim, trunc, nterms))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ad({})/ħ", self.rep.serialize())
    }
}

/// `(1/ħ)[f, g]⋆` computed from the exact product.
pub(crate) fn hbar_commutator(f: &WeylElement, g: &WeylElement) -> WeylElement {
    f.commutator_exact(g).div_hbar().expect("Moyal commutators are divisible by ħ")
}

pub fn ad_derivation(f: &WeylElement) -> Derivation {
    Derivation { rep: f.non_central_part() }
}

pub fn apply_derivation(d: &Derivation, g: &WeylElement) -> WeylElement {
    hbar_commutator(&d.rep, g).truncate(g.trunc())
}

/// `x̂^i x̂^j`, `−ξ̂^i ξ̂^j` or `x̂^i ξ̂^j`; the element meant is this divided by `ħ`.
pub fn sp_quadratic(i: usize, j: usize, kind: QuadKind, dim: usize, trunc: u32) -> Result<WeylElement, WeylError> {
    if i == 0 || j == 0 || i > dim || j > dim {
        return Err(WeylError::IndexOutOfRange { i, j, dim });
    }
    let (a, b) = match kind {
        QuadKind::XX => (i - 1, j - 1),
        QuadKind::XiXi => (dim + i - 1, dim + j - 1),
        QuadKind::XXi => (i - 1, dim + j - 1),
    };
    let mut exps = vec![0; 2 * dim];
    exps[a] += 1;
    exps[b] += 1;
    let c = if kind == QuadKind::XiXi { FieldElement::from_int(-1) } else { FieldElement::one() };
    Ok(WeylElement::monomial(c, WeylMonomial { hbar: 0, exps }, trunc))
}

/// Every quadratic generator of `sp(2d)` as a derivation.
pub fn sp_basis(dim: usize, trunc: u32) -> Vec<Derivation> {
    let mut out = Vec::new();
    for i in 1..=dim {
        for j in i..=dim {
            out.push(ad_derivation(&sp_quadratic(i, j, QuadKind::XX, dim, trunc).unwrap()));
            out.push(ad_derivation(&sp_quadratic(i, j, QuadKind::XiXi, dim, trunc).unwrap()));
        }
        for j in 1..=dim {
            out.push(ad_derivation(&sp_quadratic(i, j, QuadKind::XXi, dim, trunc).unwrap()));
        }
    }
    out
}

/// `s([X,Y]) − [s(X), s(Y)]` for the zero-central-part lift `s(X) = rep/ħ`.
///
/// Equals `−(1/ħ)·(central part of (1/ħ)[f_X, f_Y])`; known modulo
/// `ħ^{(N−1)/2}` for reps truncated at degree `N`.
pub fn extension_defect(x: &Derivation, y: &Derivation) -> HbarLaurent {
    let n = x.trunc().min(y.trunc());
    let t = (n as i32 - 1).div_euclid(2) - 1;
    let h = hbar_commutator(&x.rep, &y.rep);
    let mut out = HbarLaurent::zero(t);
    for (k, c) in h.at_origin() {
        out.add_at(k as i32 - 1, &(-&c));
    }
    out
}
