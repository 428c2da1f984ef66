//! Cyclotomic rationals `Q(ζ_L)[π]` with `π` a formal transcendental.
//!
//! Elements are stored as sparse maps `(π-power, ζ-power) -> Q` where the
//! ζ-power always lies in the residue basis `0..φ(L)` of the `L`-th
//! cyclotomic polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ScalarError;

/// Largest cyclotomic level accepted when building or embedding elements.
pub const MAX_LEVEL: u32 = 1024;

/// Level used for elements that do not need more than `i`.
pub const DEFAULT_LEVEL: u32 = 4;

/// Reduction data for one level: `reduce[k]` writes `ζ^k` in the basis
/// `1, ζ, ..., ζ^{φ-1}`.
#[derive(Debug)]
pub struct CycloTable {
    pub level: u32,
    pub phi: Vec<i64>,
    pub reduce: Vec<Vec<i64>>,
}

impl CycloTable {
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
}

fn table_cache() -> &'static RwLock<HashMap<u32, Arc<CycloTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Result<Vec<i64>, ScalarError> {
    if n == 0 {
        return Err(ScalarError::InvalidLevel(0));
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d)?;
            num = exact_div_monic(&num, &den).ok_or(ScalarError::LevelOverflow(n))?;
        }
    }
    Ok(num)
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return Some(vec![0]);
    }
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] = rem[i + j].checked_sub(c.checked_mul(dj)?)?;
            }
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return None;
    }
    Some(q)
}

/// Fetch (building on first use) the reduction table for level `l`.
pub fn cyclo_table(l: u32) -> Result<Arc<CycloTable>, ScalarError> {
    if l == 0 || l % 4 != 0 {
        return Err(ScalarError::InvalidLevel(l));
    }
    if l > MAX_LEVEL {
        return Err(ScalarError::LevelTooLarge { level: l as u64, max: MAX_LEVEL });
    }
    if let Some(t) = table_cache().read().expect("cyclotomic cache poisoned").get(&l) {
        return Ok(t.clone());
    }
    let phi = cyclotomic_poly(l)?;
    let deg = phi.len() - 1;
    let mut reduce = Vec::with_capacity(l as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..l {
        reduce.push(cur.clone());
        // multiply by x and reduce the x^deg term with the monic Φ.
        let top = cur[deg - 1];
        let mut next = vec![0i64; deg];
        for i in (1..deg).rev() {
            next[i] = cur[i - 1];
        }
        for i in 0..deg {
            next[i] = next[i]
                .checked_sub(top.checked_mul(phi[i]).ok_or(ScalarError::LevelOverflow(l))?)
                .ok_or(ScalarError::LevelOverflow(l))?;
        }
        cur = next;
    }
    let t = Arc::new(CycloTable { level: l, phi, reduce });
    table_cache().write().expect("cyclotomic cache poisoned").insert(l, t.clone());
    Ok(t)
}

/// An element of `Q(ζ_L)[π]`. Elements without ζ-dependence always sit at
/// [`DEFAULT_LEVEL`]; equality embeds both sides into a common level.
#[derive(Clone)]
pub struct FieldElement {
    level: u32,
    /// `(π-power, ζ-power) -> coefficient`, no zero entries.
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.terms == other.terms;
        }
        match Self::common(self, other) {
            Ok((a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }
}

impl Eq for FieldElement {}

/// Operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
}

/// Checked addition or multiplication; levels are embedded into their lcm.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement, ScalarError> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Mul => a.try_mul(b),
    }
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::zero_at(DEFAULT_LEVEL)
    }

    pub fn zero_at(level: u32) -> Self {
        FieldElement { level, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert((0, 0), q);
        }
        FieldElement { level: DEFAULT_LEVEL, terms }
    }

    /// `ζ_L^k` for any integer `k`.
    pub fn zeta(level: u32, k: i64) -> Result<Self, ScalarError> {
        let t = cyclo_table(level)?;
        let e = k.rem_euclid(level as i64) as usize;
        Ok(Self::from_reduced(level, 0, &t.reduce[e], &BigRational::one()))
    }

    /// The imaginary unit `ζ_4 = i`.
    pub fn i() -> Self {
        Self::zeta(DEFAULT_LEVEL, 1).expect("level 4 is always valid")
    }

    /// `π^b`.
    pub fn pi_pow(b: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((b, 0), BigRational::one());
        FieldElement { level: DEFAULT_LEVEL, terms }
    }

    fn from_reduced(level: u32, pi: u32, vec: &[i64], c: &BigRational) -> Self {
        let mut terms = BTreeMap::new();
        for (a, &v) in vec.iter().enumerate() {
            if v != 0 {
                terms.insert((pi, a as u32), c * BigRational::from_integer(BigInt::from(v)));
            }
        }
        FieldElement { level, terms }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).map_or(false, |q| q.is_one())
    }

    /// Terms as `(π-power, ζ-power, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.terms.iter().map(|(&(p, z), q)| (p, z, q))
    }

    /// Rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Re-express at level `m` (a multiple of the current level).
    pub fn embed(&self, m: u32) -> Result<Self, ScalarError> {
        if m == self.level {
            return Ok(self.clone());
        }
        if m % self.level != 0 {
            return Err(ScalarError::InvalidLevel(m));
        }
        let t = cyclo_table(m)?;
        let f = m / self.level;
        let mut out = FieldElement::zero_at(m);
        for (&(p, z), q) in &self.terms {
            let e = ((z * f) % m) as usize;
            out.accumulate(p, &t.reduce[e], q);
        }
        Ok(out)
    }

    fn accumulate(&mut self, pi: u32, vec: &[i64], c: &BigRational) {
        for (a, &v) in vec.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let add = c * BigRational::from_integer(BigInt::from(v));
            let key = (pi, a as u32);
            let remove = match self.terms.get_mut(&key) {
                Some(x) => {
                    *x += add;
                    x.is_zero()
                }
                None => {
                    self.terms.insert(key, add);
                    false
                }
            };
            if remove {
                self.terms.remove(&key);
            }
        }
    }

    fn common(a: &Self, b: &Self) -> Result<(Self, Self), ScalarError> {
        if a.level == b.level {
            return Ok((a.clone(), b.clone()));
        }
        // Elements without ζ-dependence embed for free.
        let l = a.level.lcm(&b.level);
        if l > MAX_LEVEL {
            return Err(ScalarError::LevelTooLarge { level: l as u64, max: MAX_LEVEL });
        }
        Ok((a.embed(l)?, b.embed(l)?))
    }

    fn is_rational_only(&self) -> bool {
        self.terms.keys().all(|&(_, z)| z == 0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let (mut a, b) = if self.level == other.level || other.is_rational_only() {
            (self.clone(), other.clone())
        } else if self.is_rational_only() {
            let mut s = self.clone();
            s.level = other.level;
            (s, other.clone())
        } else {
            Self::common(self, other)?
        };
        for (&k, q) in &b.terms {
            let remove = match a.terms.get_mut(&k) {
                Some(x) => {
                    *x += q;
                    x.is_zero()
                }
                None => {
                    a.terms.insert(k, q.clone());
                    false
                }
            };
            if remove {
                a.terms.remove(&k);
            }
        }
        Ok(a.normalized())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.is_zero() || other.is_zero() {
            return Ok(FieldElement::zero());
        }
        if other.is_rational_only() {
            return Ok(self.mul_pi_rational(other));
        }
        if self.is_rational_only() {
            return Ok(other.mul_pi_rational(self));
        }
        let (a, b) = Self::common(self, other)?;
        let t = cyclo_table(a.level)?;
        let l = a.level;
        let mut out = FieldElement::zero_at(l);
        for (&(pa, za), qa) in &a.terms {
            for (&(pb, zb), qb) in &b.terms {
                let e = ((za + zb) % l) as usize;
                out.accumulate(pa + pb, &t.reduce[e], &(qa * qb));
            }
        }
        Ok(out.normalized())
    }

    /// Product with an element that has no ζ-dependence.
    fn mul_pi_rational(&self, r: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (&(pa, za), qa) in &self.terms {
            for (&(pb, _), qb) in &r.terms {
                let k = (pa + pb, za);
                let v = terms.entry(k).or_insert_with(BigRational::zero);
                *v += qa * qb;
            }
        }
        terms.retain(|_, v: &mut BigRational| !v.is_zero());
        FieldElement { level: self.level, terms }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.level != DEFAULT_LEVEL && self.is_rational_only() {
            self.level = DEFAULT_LEVEL;
        }
        self
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return FieldElement::zero();
        }
        FieldElement {
            level: self.level,
            terms: self.terms.iter().map(|(k, v)| (*k, v * q)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = FieldElement::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text `(num/den)·ζ^a·π^b` joined by ` + `, ordered by `(b, a)`.
    pub fn serialize(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&(p, z), q)| format!("{}·ζ^{}·π^{}", fmt_rational(q), z, p))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    format!("({}/{})", q.numer(), q.denom())
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[L={}] {}", self.level, self.serialize())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        FieldElement::zero()
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// # Panics
    /// When the lcm of the two levels exceeds [`MAX_LEVEL`].
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_add(rhs).expect("cyclotomic level overflow")
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// # Panics
    /// When the lcm of the two levels exceeds [`MAX_LEVEL`].
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("cyclotomic level overflow")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            level: self.level,
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

/// Greatest absolute numerator or denominator, used by generators to keep
/// random data small.
pub fn height(x: &FieldElement) -> BigInt {
    x.terms
        .values()
        .map(|q| q.numer().abs().max(q.denom().clone()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = FieldElement::i();
        assert_eq!(&i * &i, FieldElement::from_int(-1));
    }

    #[test]
    fn pi_times_zero() {
        assert!((&FieldElement::pi_pow(1) * &FieldElement::zero()).is_zero());
    }

    #[test]
    fn zeta_to_the_level_is_one() {
        for l in [4u32, 8, 12, 20, 24] {
            let z = FieldElement::zeta(l, 1).unwrap();
            assert_eq!(z.pow(l), FieldElement::one(), "level {l}");
        }
    }

    #[test]
    fn cyclotomic_polynomial_vanishes_at_zeta() {
        for l in [4u32, 12, 36, 60] {
            let phi = cyclotomic_poly(l).unwrap();
            let z = FieldElement::zeta(l, 1).unwrap();
            let mut acc = FieldElement::zero_at(l);
            for (k, &c) in phi.iter().enumerate() {
                acc = &acc + &z.pow(k as u32).scale(&BigRational::from_integer(c.into()));
            }
            assert!(acc.is_zero(), "level {l}: {acc:?}");
        }
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(4).unwrap(), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(8).unwrap(), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn level_embedding_preserves_i() {
        let i4 = FieldElement::i();
        let i12 = FieldElement::zeta(12, 3).unwrap();
        assert_eq!(i4.embed(12).unwrap(), i12);
        let prod = &i4 * &FieldElement::zeta(12, 1).unwrap();
        assert_eq!(prod, FieldElement::zeta(12, 4).unwrap());
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(matches!(FieldElement::zeta(6, 1), Err(ScalarError::InvalidLevel(6))));
        assert!(matches!(
            FieldElement::zeta(2048, 1),
            Err(ScalarError::LevelTooLarge { .. })
        ));
        let a = FieldElement::zeta(1020, 1).unwrap();
        let b = FieldElement::zeta(1016, 1).unwrap();
        assert!(matches!(field_arith(&a, &b, FieldOp::Mul), Err(ScalarError::LevelTooLarge { .. })));
    }
}
