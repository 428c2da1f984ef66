//! Sparse linear-combination helpers shared by the algebra and chain types.

use std::collections::BTreeMap;

use crate::scalars::{FieldElement, HbarLaurent, ULaurent};

pub trait Coeff: Clone {
    fn is_zero(&self) -> bool;
    fn add_into(&mut self, other: &Self);
}

impl Coeff for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add_into(&mut self, other: &Self) {
        *self += other;
    }
}

impl Coeff for HbarLaurent {
    fn is_zero(&self) -> bool {
        HbarLaurent::is_zero(self)
    }
    fn add_into(&mut self, other: &Self) {
        *self += other;
    }
}

impl Coeff for ULaurent {
    fn is_zero(&self) -> bool {
        ULaurent::is_zero(self)
    }
    fn add_into(&mut self, other: &Self) {
        *self += other;
    }
}

/// `map[k] += c`, removing the entry when it cancels.
pub fn accumulate<K: Ord, C: Coeff>(map: &mut BTreeMap<K, C>, k: K, c: &C) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_into(c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Same as [`accumulate`] but takes ownership of the coefficient.
pub fn accumulate_owned<K: Ord, C: Coeff>(map: &mut BTreeMap<K, C>, k: K, c: C) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_into(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

pub(crate) fn factorial(n: u32) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}
