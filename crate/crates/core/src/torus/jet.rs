use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::element::{plane_wave_at, Mode, TorusElement};
use super::TorusError;
use crate::lin::factorial;
use crate::scalars::{FieldElement, HbarLaurent};
use crate::weyl::{half_i_pow, moyal_kernel, WeylElement, WeylMonomial};

/// A section of the Weyl bundle over the torus: `Σ c·e_m(p)·ŷ^γ`, graded
/// with `deg ŷ = 1`, `deg ħ = 2` and kept up to total degree `trunc`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    dim: usize,
    trunc: u32,
    terms: BTreeMap<(Mode, Vec<u32>), HbarLaurent>,
}

fn hbar_room(trunc: u32, gamma: &[u32]) -> Option<i32> {
    let g: u32 = gamma.iter().sum();
    (g <= trunc).then(|| ((trunc - g) / 2) as i32)
}

impl Jet {
    pub fn zero(dim: usize, trunc: u32) -> Self {
        Jet { dim, trunc, terms: BTreeMap::new() }
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Mode, Vec<u32>), &HbarLaurent)> {
        self.terms.iter()
    }

    /// Adds `c·e_m·ŷ^γ`, keeping `ħ^k` only while `|γ| + 2k ≤ trunc`.
    pub fn add_term(&mut self, m: Mode, gamma: Vec<u32>, c: &HbarLaurent) {
        let Some(room) = hbar_room(self.trunc, &gamma) else { return };
        let c = c.truncate(room);
        if c.is_zero() {
            return;
        }
        let key = (m, gamma);
        let remove = match self.terms.get_mut(&key) {
            Some(x) => {
                *x += &c;
                x.is_zero()
            }
            None => {
                self.terms.insert(key.clone(), c.with_trunc(room));
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Jet::zero(self.dim, self.trunc.min(other.trunc));
        for ((m, g), c) in self.terms.iter().chain(&other.terms) {
            out.add_term(m.clone(), g.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut o = Jet::zero(self.dim, self.trunc.min(other.trunc));
        for ((m, g), c) in &self.terms {
            o.add_term(m.clone(), g.clone(), c);
        }
        for ((m, g), c) in &other.terms {
            o.add_term(m.clone(), g.clone(), &-c);
        }
        o
    }

    /// Drop everything of total degree above `n`.
    pub fn truncate(&self, n: u32) -> Self {
        let mut out = Jet::zero(self.dim, n.min(self.trunc));
        for ((m, g), c) in &self.terms {
            out.add_term(m.clone(), g.clone(), c);
        }
        out
    }

    /// Fiberwise Moyal product; base coefficients multiply pointwise.
    pub fn fiber_star(&self, other: &Self) -> Self {
        let mut out = Jet::zero(self.dim, self.trunc.min(other.trunc));
        for ((m, f), a) in &self.terms {
            for ((n, g), b) in &other.terms {
                let ab = a.mul(b);
                let mn: Mode = m.iter().zip(n).map(|(x, y)| x + y).collect();
                for (k, w, exps) in moyal_kernel(self.dim, f, g) {
                    let c = half_i_pow(k).scale(&BigRational::from_integer(w.into()));
                    out.add_term(mn.clone(), exps, &ab.scale(&c).shift(k as i32));
                }
            }
        }
        out
    }

    /// `∂/∂p^{slot}` of the base coefficients.
    pub fn base_derivative(&self, slot: usize) -> Self {
        let f = FieldElement::pi_pow(1) * FieldElement::i() * FieldElement::from_int(2);
        let mut out = Jet::zero(self.dim, self.trunc);
        for ((m, g), c) in &self.terms {
            if m[slot] != 0 {
                out.add_term(m.clone(), g.clone(), &c.scale(&(&f * &FieldElement::from_int(m[slot]))));
            }
        }
        out
    }

    /// `∂/∂ŷ^{slot}` in the fiber.
    pub fn fiber_derivative(&self, slot: usize) -> Self {
        let mut out = Jet::zero(self.dim, self.trunc);
        for ((m, g), c) in &self.terms {
            if g[slot] == 0 {
                continue;
            }
            let mut g2 = g.clone();
            g2[slot] -= 1;
            out.add_term(m.clone(), g2, &c.scale(&FieldElement::from_int(g[slot] as i64)));
        }
        out
    }

    /// The fiber element at a rational base point, `ħ` moved into the Weyl basis.
    pub fn at_point(&self, p: &[BigRational], level: u32) -> Result<WeylElement, TorusError> {
        let mut out = WeylElement::zero(self.dim, self.trunc);
        for ((m, g), c) in &self.terms {
            let v = plane_wave_at(m, p, level)?;
            for (k, ck) in c.coeffs() {
                if k < 0 {
                    return Err(TorusError::NegativeHbarPower(k));
                }
                out.add_term(WeylMonomial { hbar: k as u32, exps: g.clone() }, &(&v * ck));
            }
        }
        Ok(out)
    }
}

/// `J(a)(p) = Σ_γ (∂^γ a)(p) ŷ^γ/γ!`, i.e. `e_m ↦ e_m(p)·exp(2πi m·ŷ)`.
pub fn jet(a: &TorusElement, trunc: u32) -> Jet {
    let dim = a.dim();
    let mut out = Jet::zero(dim, trunc);
    let two_pi_i = FieldElement::pi_pow(1) * FieldElement::i() * FieldElement::from_int(2);
    for (m, c) in a.modes() {
        let mut gamma = vec![0u32; 2 * dim];
        loop {
            if gamma.iter().sum::<u32>() <= trunc {
                let mut w = FieldElement::one();
                let mut den = BigInt::from(1);
                let mut deg = 0;
                for (gi, mi) in gamma.iter().zip(m) {
                    w = w * FieldElement::from_int(*mi).pow(*gi);
                    den *= factorial(*gi);
                    deg += gi;
                }
                let w = w * two_pi_i.pow(deg);
                let w = w.scale(&BigRational::new(BigInt::from(1), den));
                out.add_term(m.clone(), gamma.clone(), &c.scale(&w));
            }
            // Odometer over exponent vectors with entries ≤ trunc.
            let mut i = 0;
            while i < gamma.len() {
                gamma[i] += 1;
                if gamma[i] <= trunc {
                    break;
                }
                gamma[i] = 0;
                i += 1;
            }
            if i == gamma.len() {
                break;
            }
        }
    }
    out
}

/// `exp(2πi k·ŷ)` as a section constant along the base.
pub fn fiber_plane_wave(k: &[i64], trunc: u32) -> Jet {
    let e = jet(&TorusElement::plane_wave(k.to_vec(), 0), trunc);
    let zero = vec![0; k.len()];
    let mut out = Jet::zero(e.dim, trunc);
    for ((_, g), c) in e.terms {
        out.add_term(zero.clone(), g, &c);
    }
    out
}

/// `∇_F J = Σ_i dp^i (∂_{p^i} − ∂_{ŷ^i})J` component by component, using
/// `A_F(∂_{x^i}) = −∂_{x̂^i}`; exact below the top degree.
pub fn flatness_defect(j: &Jet) -> Vec<Jet> {
    (0..2 * j.dim()).map(|s| j.base_derivative(s).sub(&j.fiber_derivative(s)).truncate(j.trunc().saturating_sub(1))).collect()
}
