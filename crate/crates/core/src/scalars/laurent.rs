//! Truncated Laurent series in `ħ` and in `u`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::field::{fmt_rational, FieldElement};

/// A Laurent series `Σ_{k ≥ k₀} c_k ħ^k` known modulo `ħ^{trunc+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct HbarLaurent {
    trunc: i32,
    coeffs: BTreeMap<i32, FieldElement>,
}

impl HbarLaurent {
    pub fn zero(trunc: i32) -> Self {
        HbarLaurent { trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: i32) -> Self {
        Self::monomial(FieldElement::one(), 0, trunc)
    }

    pub fn constant(c: FieldElement, trunc: i32) -> Self {
        Self::monomial(c, 0, trunc)
    }

    /// `c·ħ^k`, or zero when `k > trunc`.
    pub fn monomial(c: FieldElement, k: i32, trunc: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if k <= trunc && !c.is_zero() {
            coeffs.insert(k, c);
        }
        HbarLaurent { trunc, coeffs }
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i32, FieldElement)>, trunc: i32) -> Self {
        let mut out = HbarLaurent::zero(trunc);
        for (k, c) in coeffs {
            out.add_at(k, &c);
        }
        out
    }

    /// `exp(c·ħ) = Σ_j c^j ħ^j / j!` modulo `ħ^{trunc+1}`.
    pub fn exp_series(c: &FieldElement, trunc: i32) -> Self {
        let mut out = HbarLaurent::zero(trunc);
        let mut term = FieldElement::one();
        let mut fact = BigInt::one();
        for j in 0..=trunc.max(-1) {
            if j > 0 {
                term = &term * c;
                fact *= BigInt::from(j);
            }
            out.add_at(j, &term.scale(&BigRational::new(BigInt::one(), fact.clone())));
        }
        out
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map_or(false, |c| c.is_one())
    }

    /// The coefficient of `ħ^0` when no other power is present.
    pub fn as_constant(&self) -> Option<&FieldElement> {
        match self.coeffs.len() {
            1 => self.coeffs.get(&0),
            _ => None,
        }
    }

    /// Lowest present power, `None` for zero.
    pub fn low(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i32) -> FieldElement {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &FieldElement)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn add_at(&mut self, k: i32, c: &FieldElement) {
        if k > self.trunc || c.is_zero() {
            return;
        }
        let remove = match self.coeffs.get_mut(&k) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.coeffs.insert(k, c.clone());
                false
            }
        };
        if remove {
            self.coeffs.remove(&k);
        }
    }

    /// Reduce modulo `ħ^{n+1}` (never raises the truncation).
    pub fn truncate(&self, n: i32) -> Self {
        let t = n.min(self.trunc);
        HbarLaurent {
            trunc: t,
            coeffs: self.coeffs.range(..=t).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Change the declared truncation order, dropping terms above it.
    pub fn with_trunc(&self, n: i32) -> Self {
        HbarLaurent {
            trunc: n,
            coeffs: self.coeffs.range(..=n).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Multiply by `ħ^s`.
    /// Multiply by `ħ^s`; the truncation order moves with it.
    pub fn shift(&self, s: i32) -> Self {
        let mut out = HbarLaurent::zero(self.trunc + s);
        for (k, c) in &self.coeffs {
            out.add_at(k + s, c);
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = HbarLaurent::zero(self.trunc);
        for (k, x) in &self.coeffs {
            out.add_at(*k, &(x * c));
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let mut out = HbarLaurent::zero(self.trunc);
        for (k, x) in &self.coeffs {
            out.add_at(*k, &x.scale(q));
        }
        out
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        let mut out = HbarLaurent::zero(t);
        for (ka, a) in &self.coeffs {
            for (kb, b) in &other.coeffs {
                if ka + kb <= t {
                    out.add_at(ka + kb, &(a * b));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = HbarLaurent::one(self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Canonical text with the `u`-exponent fixed to `e`; terms ordered by `(c, b, a)`.
    pub fn serialize_terms(&self, e: i32) -> Vec<String> {
        let mut out = Vec::new();
        for (c, x) in &self.coeffs {
            for (b, a, q) in x.terms() {
                out.push(format!("{}·ζ^{}·π^{}·ħ^{}·u^{}", fmt_rational(q), a, b, c, e));
            }
        }
        out
    }

    pub fn serialize(&self) -> String {
        let t = self.serialize_terms(0);
        if t.is_empty() {
            "0".into()
        } else {
            t.join(" + ")
        }
    }
}

impl fmt::Debug for HbarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod ħ^{})", self.serialize(), self.trunc + 1)
    }
}

impl fmt::Display for HbarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl<'a> Add<&'a HbarLaurent> for &'a HbarLaurent {
    type Output = HbarLaurent;
    fn add(self, rhs: &'a HbarLaurent) -> HbarLaurent {
        let mut out = self.truncate(rhs.trunc);
        for (k, c) in &rhs.coeffs {
            out.add_at(*k, c);
        }
        out
    }
}

impl AddAssign<&HbarLaurent> for HbarLaurent {
    fn add_assign(&mut self, rhs: &HbarLaurent) {
        if rhs.trunc < self.trunc {
            *self = self.truncate(rhs.trunc);
        }
        for (k, c) in &rhs.coeffs {
            self.add_at(*k, c);
        }
    }
}

impl Neg for &HbarLaurent {
    type Output = HbarLaurent;
    fn neg(self) -> HbarLaurent {
        HbarLaurent {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a HbarLaurent> for &'a HbarLaurent {
    type Output = HbarLaurent;
    fn sub(self, rhs: &'a HbarLaurent) -> HbarLaurent {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a HbarLaurent> for &'a HbarLaurent {
    type Output = HbarLaurent;
    fn mul(self, rhs: &'a HbarLaurent) -> HbarLaurent {
        HbarLaurent::mul(self, rhs)
    }
}

/// Free function form of the truncated Cauchy product.
pub fn laurent_mul(a: &HbarLaurent, b: &HbarLaurent) -> HbarLaurent {
    a.mul(b)
}

/// A Laurent series in `u` (degree `−2`) with [`HbarLaurent`] coefficients,
/// known modulo `u^{trunc+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ULaurent {
    trunc: i32,
    hbar_trunc: i32,
    coeffs: BTreeMap<i32, HbarLaurent>,
}

impl ULaurent {
    pub fn zero(trunc: i32, hbar_trunc: i32) -> Self {
        ULaurent { trunc, hbar_trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: i32, hbar_trunc: i32) -> Self {
        Self::monomial(HbarLaurent::one(hbar_trunc), 0, trunc)
    }

    /// `c·u^e`, or zero when `e > trunc`.
    pub fn monomial(c: HbarLaurent, e: i32, trunc: i32) -> Self {
        let mut out = ULaurent::zero(trunc, c.trunc());
        out.add_at(e, &c);
        out
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn hbar_trunc(&self) -> i32 {
        self.hbar_trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i32) -> HbarLaurent {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| HbarLaurent::zero(self.hbar_trunc))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &HbarLaurent)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn low(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn add_at(&mut self, e: i32, c: &HbarLaurent) {
        if e > self.trunc || c.is_zero() {
            return;
        }
        let c = if c.trunc() > self.hbar_trunc { c.truncate(self.hbar_trunc) } else { c.clone() };
        if c.trunc() < self.hbar_trunc {
            self.reduce_hbar(c.trunc());
        }
        let remove = match self.coeffs.get_mut(&e) {
            Some(x) => {
                *x += &c;
                x.is_zero()
            }
            None => {
                if c.is_zero() {
                    return;
                }
                self.coeffs.insert(e, c);
                false
            }
        };
        if remove {
            self.coeffs.remove(&e);
        }
    }

    fn reduce_hbar(&mut self, n: i32) {
        self.hbar_trunc = n;
        let old = std::mem::take(&mut self.coeffs);
        for (e, c) in old {
            let c = c.truncate(n);
            if !c.is_zero() {
                self.coeffs.insert(e, c);
            }
        }
    }

    /// Multiply by `u^s`.
    pub fn shift(&self, s: i32) -> Self {
        let mut out = ULaurent::zero(self.trunc, self.hbar_trunc);
        for (e, c) in &self.coeffs {
            out.add_at(e + s, c);
        }
        out
    }

    pub fn scale_hbar(&self, c: &HbarLaurent) -> Self {
        let mut out = ULaurent::zero(self.trunc, self.hbar_trunc.min(c.trunc()));
        for (e, x) in &self.coeffs {
            out.add_at(*e, &x.mul(c));
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = ULaurent::zero(self.trunc, self.hbar_trunc);
        for (e, x) in &self.coeffs {
            out.add_at(*e, &x.scale(c));
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let mut out = ULaurent::zero(self.trunc, self.hbar_trunc);
        for (e, x) in &self.coeffs {
            out.add_at(*e, &x.scale_rational(q));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        let mut out = ULaurent::zero(t, self.hbar_trunc.min(other.hbar_trunc));
        for (ea, a) in &self.coeffs {
            for (eb, b) in &other.coeffs {
                if ea + eb <= t {
                    out.add_at(ea + eb, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn truncate(&self, n: i32) -> Self {
        let mut out = ULaurent::zero(n.min(self.trunc), self.hbar_trunc);
        for (e, c) in &self.coeffs {
            out.add_at(*e, c);
        }
        out
    }

    /// Canonical text: `(num/den)·ζ^a·π^b·ħ^c·u^e` ordered by `(e, c, b, a)`.
    pub fn serialize(&self) -> String {
        let mut out = Vec::new();
        for (e, c) in &self.coeffs {
            out.extend(c.serialize_terms(*e));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out.join(" + ")
        }
    }
}

impl fmt::Debug for ULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod u^{}, ħ^{})", self.serialize(), self.trunc + 1, self.hbar_trunc + 1)
    }
}

impl fmt::Display for ULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl<'a> Add<&'a ULaurent> for &'a ULaurent {
    type Output = ULaurent;
    fn add(self, rhs: &'a ULaurent) -> ULaurent {
        let mut out = self.truncate(rhs.trunc);
        for (e, c) in &rhs.coeffs {
            out.add_at(*e, c);
        }
        out
    }
}

impl AddAssign<&ULaurent> for ULaurent {
    fn add_assign(&mut self, rhs: &ULaurent) {
        if rhs.trunc < self.trunc {
            *self = self.truncate(rhs.trunc);
        }
        for (e, c) in &rhs.coeffs {
            self.add_at(*e, c);
        }
    }
}

impl Neg for &ULaurent {
    type Output = ULaurent;
    fn neg(self) -> ULaurent {
        ULaurent {
            trunc: self.trunc,
            hbar_trunc: self.hbar_trunc,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a ULaurent> for &'a ULaurent {
    type Output = ULaurent;
    fn sub(self, rhs: &'a ULaurent) -> ULaurent {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(k: i32, n: i32) -> HbarLaurent {
        HbarLaurent::monomial(FieldElement::one(), k, n)
    }

    #[test]
    fn inverse_powers_cancel() {
        assert_eq!(h(-1, 4).mul(&h(1, 4)), HbarLaurent::one(4));
    }

    #[test]
    fn square_term_truncated() {
        let a = &HbarLaurent::one(1) + &h(1, 1);
        let b = &HbarLaurent::one(1) - &h(1, 1);
        assert_eq!(a.mul(&b), HbarLaurent::one(1));
    }

    #[test]
    fn product_low_is_additive() {
        let a = &h(-2, 5) + &h(0, 5);
        let b = &h(-1, 5) + &h(3, 5);
        assert_eq!(a.mul(&b).low(), Some(-3));
    }

    #[test]
    fn serialization_order() {
        let mut x = ULaurent::zero(3, 4);
        x.add_at(1, &h(-1, 4));
        x.add_at(0, &HbarLaurent::constant(FieldElement::i(), 4));
        assert_eq!(x.serialize(), "(1/1)·ζ^1·π^0·ħ^0·u^0 + (1/1)·ζ^0·π^0·ħ^-1·u^1");
    }

    #[test]
    fn u_truncation() {
        let a = ULaurent::monomial(HbarLaurent::one(2), 2, 3);
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.shift(-3).low(), Some(-1));
    }
}
