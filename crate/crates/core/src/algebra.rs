//! Algebras presented by a basis with explicit structure constants.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::lin::accumulate;
use crate::scalars::{FieldElement, HbarLaurent};
use crate::weyl::{half_i_pow, moyal_kernel, WeylMonomial};

/// An associative unital algebra over `C[ħ^{-1},ħ]]` given on a basis.
pub trait BasisAlgebra {
    type Basis: Clone + Ord + Debug;

    fn unit(&self) -> Self::Basis;

    fn mul_basis(&self, a: &Self::Basis, b: &Self::Basis) -> Vec<(HbarLaurent, Self::Basis)>;

    /// Truncation order of `ħ`-coefficients.
    fn hbar_trunc(&self) -> i32;
}

/// Finite linear combination of basis elements.
pub type Lin<B> = BTreeMap<B, HbarLaurent>;

pub fn lin_basis<B: Ord>(b: B, trunc: i32) -> Lin<B> {
    let mut m = BTreeMap::new();
    m.insert(b, HbarLaurent::one(trunc));
    m
}

pub fn lin_mul<A: BasisAlgebra>(alg: &A, x: &Lin<A::Basis>, y: &Lin<A::Basis>) -> Lin<A::Basis> {
    let mut out = BTreeMap::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let cab = ca.mul(cb);
            for (c, b2) in alg.mul_basis(a, b) {
                let coeff = if c.is_one() { cab.clone() } else { cab.mul(&c) };
                accumulate(&mut out, b2, &coeff);
            }
        }
    }
    out
}

pub fn lin_add<B: Ord + Clone>(x: &Lin<B>, y: &Lin<B>) -> Lin<B> {
    let mut out = x.clone();
    for (b, c) in y {
        accumulate(&mut out, b.clone(), c);
    }
    out
}

pub fn lin_scale<B: Ord + Clone>(x: &Lin<B>, c: &HbarLaurent) -> Lin<B> {
    let mut out = BTreeMap::new();
    for (b, v) in x {
        accumulate(&mut out, b.clone(), &v.mul(c));
    }
    out
}

/// The Weyl algebra `𝕎` in `2d` generators truncated at total degree `trunc`;
/// `ħ` lives in the basis, coefficients are constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylAlgebra {
    pub dim: usize,
    pub trunc: u32,
}

impl BasisAlgebra for WeylAlgebra {
    type Basis = WeylMonomial;

    fn unit(&self) -> WeylMonomial {
        WeylMonomial::one(self.dim)
    }

    fn mul_basis(&self, a: &WeylMonomial, b: &WeylMonomial) -> Vec<(HbarLaurent, WeylMonomial)> {
        if a.degree() + b.degree() > self.trunc {
            return Vec::new();
        }
        let mut acc: BTreeMap<WeylMonomial, FieldElement> = BTreeMap::new();
        for (k, w, exps) in moyal_kernel(self.dim, &a.exps, &b.exps) {
            let c = half_i_pow(k).scale(&num_rational::BigRational::from_integer(w.into()));
            accumulate(&mut acc, WeylMonomial { hbar: a.hbar + b.hbar + k, exps }, &c);
        }
        acc.into_iter().map(|(m, c)| (HbarLaurent::constant(c, 0), m)).collect()
    }

    fn hbar_trunc(&self) -> i32 {
        0
    }
}

/// The commutative algebra `𝕆` of truncated polynomials in `2d` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAlgebra {
    pub dim: usize,
    pub trunc: u32,
}

impl BasisAlgebra for PolyAlgebra {
    type Basis = Vec<u32>;

    fn unit(&self) -> Vec<u32> {
        vec![0; 2 * self.dim]
    }

    fn mul_basis(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<(HbarLaurent, Vec<u32>)> {
        let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if e.iter().sum::<u32>() > self.trunc {
            return Vec::new();
        }
        vec![(HbarLaurent::one(0), e)]
    }

    fn hbar_trunc(&self) -> i32 {
        0
    }
}

impl<T: BasisAlgebra> BasisAlgebra for &T {
    type Basis = T::Basis;

    fn unit(&self) -> T::Basis {
        (**self).unit()
    }

    fn mul_basis(&self, a: &T::Basis, b: &T::Basis) -> Vec<(HbarLaurent, T::Basis)> {
        (**self).mul_basis(a, b)
    }

    fn hbar_trunc(&self) -> i32 {
        (**self).hbar_trunc()
    }
}
