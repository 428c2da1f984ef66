//! Discrete groups used as symmetry groups: free abelian `Z^r` and cyclic `Z/q`.
//!
//! Formulas elsewhere are written for general groups (left/right order kept);
//! only these abelian presentations are instantiated.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    Free { rank: usize },
    Cyclic { order: u32 },
}

/// A group element in additive coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElt(pub Vec<i64>);

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{:?}", self.0)
    }
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        match self {
            GroupSpec::Free { rank } => *rank,
            GroupSpec::Cyclic { .. } => 1,
        }
    }

    pub fn identity(&self) -> GroupElt {
        GroupElt(vec![0; self.rank()])
    }

    fn reduce(&self, mut v: Vec<i64>) -> GroupElt {
        if let GroupSpec::Cyclic { order } = self {
            v[0] = v[0].rem_euclid(*order as i64);
        }
        GroupElt(v)
    }

    pub fn elem(&self, v: Vec<i64>) -> GroupElt {
        assert_eq!(v.len(), self.rank());
        self.reduce(v)
    }

    pub fn mul(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn inv(&self, a: &GroupElt) -> GroupElt {
        self.reduce(a.0.iter().map(|x| -x).collect())
    }

    pub fn is_identity(&self, a: &GroupElt) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn product<'a>(&self, it: impl IntoIterator<Item = &'a GroupElt>) -> GroupElt {
        it.into_iter().fold(self.identity(), |acc, g| self.mul(&acc, g))
    }

    /// `g^k` for an integer `k`.
    pub fn pow(&self, g: &GroupElt, k: i64) -> GroupElt {
        self.reduce(g.0.iter().map(|x| x * k).collect())
    }

    pub fn generators(&self) -> Vec<GroupElt> {
        (0..self.rank())
            .map(|i| {
                let mut v = vec![0; self.rank()];
                v[i] = 1;
                GroupElt(v)
            })
            .collect()
    }

    /// All elements for a finite group.
    pub fn elements(&self) -> Option<Vec<GroupElt>> {
        match self {
            GroupSpec::Free { .. } => None,
            GroupSpec::Cyclic { order } => Some((0..*order as i64).map(|k| GroupElt(vec![k])).collect()),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, GroupSpec::Free { .. })
    }

    /// Small random element (coordinates in `-2..=2` for free groups).
    pub fn random<R: Rng>(&self, rng: &mut R) -> GroupElt {
        match self {
            GroupSpec::Free { rank } => GroupElt((0..*rank).map(|_| rng.gen_range(-2..=2)).collect()),
            GroupSpec::Cyclic { order } => GroupElt(vec![rng.gen_range(0..*order as i64)]),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupSpec::Free { rank } => format!("Z^{rank}"),
            GroupSpec::Cyclic { order } => format!("Z/{order}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_wraps() {
        let g = GroupSpec::Cyclic { order: 4 };
        let a = g.elem(vec![3]);
        assert_eq!(g.mul(&a, &a), g.elem(vec![2]));
        assert!(g.is_identity(&g.mul(&a, &g.inv(&a))));
        assert_eq!(g.pow(&a, 4), g.identity());
    }

    #[test]
    fn free_inverse() {
        let g = GroupSpec::Free { rank: 2 };
        let a = g.elem(vec![1, -2]);
        assert_eq!(g.inv(&a), g.elem(vec![-1, 2]));
    }
}
