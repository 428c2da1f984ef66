#![allow(dead_code)]

use eqindex::algebra::BasisAlgebra;
use eqindex::cyclic::{Chain, GroupAction};
use eqindex::group::{GroupElt, GroupSpec};
use eqindex::scalars::{FieldElement, HbarLaurent, ULaurent};
use rand::Rng;

/// 2×2 matrices on the basis `I, H = E11 − E22, E = E12, F = E21`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum M2 {
    I,
    H,
    E,
    F,
}

/// `M_2(C)` with a group acting by conjugation: `Z/4` through `diag(1, i)`,
/// `Z` through `diag(2, 1)`.
#[derive(Clone, Debug)]
pub struct M2Alg {
    pub group: GroupSpec,
}

fn c(v: FieldElement) -> HbarLaurent {
    HbarLaurent::constant(v, 0)
}

fn q(n: i64, d: i64) -> HbarLaurent {
    c(FieldElement::from_frac(n, d))
}

impl BasisAlgebra for M2Alg {
    type Basis = M2;

    fn unit(&self) -> M2 {
        M2::I
    }

    fn mul_basis(&self, a: &M2, b: &M2) -> Vec<(HbarLaurent, M2)> {
        use M2::*;
        match (a, b) {
            (I, x) | (x, I) => vec![(q(1, 1), *x)],
            (H, H) => vec![(q(1, 1), I)],
            (H, E) => vec![(q(1, 1), E)],
            (E, H) => vec![(q(-1, 1), E)],
            (H, F) => vec![(q(-1, 1), F)],
            (F, H) => vec![(q(1, 1), F)],
            (E, E) | (F, F) => vec![],
            (E, F) => vec![(q(1, 2), I), (q(1, 2), H)],
            (F, E) => vec![(q(1, 2), I), (q(-1, 2), H)],
        }
    }

    fn hbar_trunc(&self) -> i32 {
        0
    }
}

impl GroupAction for M2Alg {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn act_basis(&self, g: &GroupElt, b: &M2) -> Vec<(HbarLaurent, M2)> {
        let k = g.0[0];
        // Conjugation scales E by λ^k and F by λ^{-k}.
        let scale = |s: i64| match self.group {
            GroupSpec::Cyclic { .. } => c(FieldElement::zeta(4, -s).unwrap()),
            GroupSpec::Free { .. } => {
                if s >= 0 {
                    q(1 << s, 1)
                } else {
                    q(1, 1 << (-s))
                }
            }
        };
        match b {
            M2::E => vec![(scale(k), M2::E)],
            M2::F => vec![(scale(-k), M2::F)],
            x => vec![(q(1, 1), *x)],
        }
    }
}

pub fn z() -> M2Alg {
    M2Alg { group: GroupSpec::Free { rank: 1 } }
}

pub fn z4() -> M2Alg {
    M2Alg { group: GroupSpec::Cyclic { order: 4 } }
}

pub fn random_m2<R: Rng>(rng: &mut R) -> M2 {
    [M2::I, M2::H, M2::E, M2::F][rng.gen_range(0..4)]
}

pub fn random_coeff<R: Rng>(rng: &mut R, u_trunc: i32) -> ULaurent {
    let v = FieldElement::from_frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let v = if rng.gen_bool(0.3) { v * FieldElement::i() } else { v };
    ULaurent::monomial(HbarLaurent::constant(v, 0), rng.gen_range(0..=u_trunc.min(1)), u_trunc)
}

/// Random chain of degrees `≤ max_deg` with entries drawn by `elem`.
pub fn random_chain<R: Rng, E: Clone + Ord + std::fmt::Debug>(
    rng: &mut R,
    max_deg: usize,
    nterms: usize,
    u_trunc: i32,
    mut elem: impl FnMut(&mut R) -> E,
) -> Chain<E> {
    let mut out = Chain::zero(u_trunc, 0);
    for _ in 0..nterms {
        let n = rng.gen_range(0..=max_deg);
        let x: Vec<E> = (0..=n).map(|_| elem(rng)).collect();
        let cf = random_coeff(rng, u_trunc);
        out.add_term(x, &cf);
    }
    out
}

/// Random chain of one fixed degree.
pub fn random_chain_deg<R: Rng, E: Clone + Ord + std::fmt::Debug>(
    rng: &mut R,
    deg: usize,
    nterms: usize,
    u_trunc: i32,
    mut elem: impl FnMut(&mut R) -> E,
) -> Chain<E> {
    let mut out = Chain::zero(u_trunc, 0);
    for _ in 0..nterms {
        let x: Vec<E> = (0..=deg).map(|_| elem(rng)).collect();
        let cf = random_coeff(rng, u_trunc);
        out.add_term(x, &cf);
    }
    out
}

/// Random homogeneous crossed tensor: legs sum to the identity.
pub fn random_homogeneous<R: Rng>(rng: &mut R, alg: &M2Alg, deg: usize) -> Vec<(M2, GroupElt)> {
    let gr = alg.group;
    let mut legs: Vec<GroupElt> = (0..deg).map(|_| gr.random(rng)).collect();
    let last = gr.inv(&gr.product(legs.iter()));
    legs.push(last);
    legs.into_iter().map(|g| (random_m2(rng), g)).collect()
}
