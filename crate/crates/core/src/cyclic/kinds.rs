use std::fmt::Debug;

use super::chain::{CyclicModule, CyclicModuleKind};
use crate::algebra::BasisAlgebra;
use crate::group::{GroupElt, GroupSpec};
use crate::scalars::HbarLaurent;

/// `A^♮`: faces multiply neighbours (the last one wraps around), degeneracies
/// insert `1`, `t(a_0⊗…⊗a_n) = a_1⊗…⊗a_n⊗a_0`.
#[derive(Clone, Debug)]
pub struct AlgebraModule<A> {
    pub alg: A,
    pub crossed: bool,
}

impl<A: BasisAlgebra> AlgebraModule<A> {
    pub fn new(alg: A) -> Self {
        AlgebraModule { alg, crossed: false }
    }

    /// Same structure, tagged as the cyclic module of a crossed product.
    pub fn crossed(alg: A) -> Self {
        AlgebraModule { alg, crossed: true }
    }
}

pub(crate) fn algebra_face<A: BasisAlgebra>(
    alg: &A,
    i: usize,
    x: &[A::Basis],
) -> Vec<(HbarLaurent, Vec<A::Basis>)> {
    let n = x.len() - 1;
    if i < n {
        alg.mul_basis(&x[i], &x[i + 1])
            .into_iter()
            .map(|(c, p)| {
                let mut y = Vec::with_capacity(n);
                y.extend_from_slice(&x[..i]);
                y.push(p);
                y.extend_from_slice(&x[i + 2..]);
                (c, y)
            })
            .collect()
    } else {
        alg.mul_basis(&x[n], &x[0])
            .into_iter()
            .map(|(c, p)| {
                let mut y = Vec::with_capacity(n);
                y.push(p);
                y.extend_from_slice(&x[1..n]);
                (c, y)
            })
            .collect()
    }
}

fn insert_after<T: Clone>(x: &[T], i: usize, v: T) -> Vec<T> {
    let mut y = Vec::with_capacity(x.len() + 1);
    y.extend_from_slice(&x[..=i]);
    y.push(v);
    y.extend_from_slice(&x[i + 1..]);
    y
}

fn rotate_left<T: Clone>(x: &[T]) -> Vec<T> {
    let mut y = x[1..].to_vec();
    y.push(x[0].clone());
    y
}

impl<A: BasisAlgebra> CyclicModule for AlgebraModule<A> {
    type Elem = A::Basis;

    fn kind(&self) -> CyclicModuleKind {
        if self.crossed {
            CyclicModuleKind::Crossed
        } else {
            CyclicModuleKind::Algebra
        }
    }

    fn face(&self, i: usize, x: &[A::Basis]) -> Vec<(HbarLaurent, Vec<A::Basis>)> {
        algebra_face(&self.alg, i, x)
    }

    fn degeneracy(&self, i: usize, x: &[A::Basis]) -> Vec<A::Basis> {
        insert_after(x, i, self.alg.unit())
    }

    fn cyclic(&self, x: &[A::Basis]) -> Vec<A::Basis> {
        rotate_left(x)
    }

    fn is_unit(&self, e: &A::Basis) -> bool {
        *e == self.alg.unit()
    }

    fn hbar_trunc(&self) -> i32 {
        self.alg.hbar_trunc()
    }
}

/// `G^{k♮}`: faces omit an entry, degeneracies repeat one, `t` rotates.
#[derive(Clone, Debug)]
pub struct GroupModule {
    pub group: GroupSpec,
}

impl CyclicModule for GroupModule {
    type Elem = GroupElt;

    fn kind(&self) -> CyclicModuleKind {
        CyclicModuleKind::Group
    }

    fn face(&self, i: usize, x: &[GroupElt]) -> Vec<(HbarLaurent, Vec<GroupElt>)> {
        let mut y = x.to_vec();
        y.remove(i);
        vec![(HbarLaurent::one(0), y)]
    }

    fn degeneracy(&self, i: usize, x: &[GroupElt]) -> Vec<GroupElt> {
        insert_after(x, i, x[i].clone())
    }

    fn cyclic(&self, x: &[GroupElt]) -> Vec<GroupElt> {
        rotate_left(x)
    }

    fn hbar_trunc(&self) -> i32 {
        0
    }
}

/// `A♮G = A^♮ ♮ G^{k♮}` with the diagonal cyclic structure.
#[derive(Clone, Debug)]
pub struct DiagonalModule<A> {
    pub alg: A,
    pub group: GroupSpec,
}

pub type DiagElem<B> = (B, GroupElt);

pub(crate) fn split<B: Clone>(x: &[(B, GroupElt)]) -> (Vec<B>, Vec<GroupElt>) {
    x.iter().cloned().unzip()
}

pub(crate) fn zip<B>(a: Vec<B>, g: Vec<GroupElt>) -> Vec<(B, GroupElt)> {
    a.into_iter().zip(g).collect()
}

impl<A: BasisAlgebra> CyclicModule for DiagonalModule<A> {
    type Elem = (A::Basis, GroupElt);

    fn kind(&self) -> CyclicModuleKind {
        CyclicModuleKind::Diagonal
    }

    fn face(&self, i: usize, x: &[Self::Elem]) -> Vec<(HbarLaurent, Vec<Self::Elem>)> {
        let (a, mut g) = split(x);
        g.remove(i);
        algebra_face(&self.alg, i, &a).into_iter().map(|(c, a2)| (c, zip(a2, g.clone()))).collect()
    }

    fn degeneracy(&self, i: usize, x: &[Self::Elem]) -> Vec<Self::Elem> {
        insert_after(x, i, (self.alg.unit(), x[i].1.clone()))
    }

    fn cyclic(&self, x: &[Self::Elem]) -> Vec<Self::Elem> {
        rotate_left(x)
    }

    fn hbar_trunc(&self) -> i32 {
        self.alg.hbar_trunc()
    }
}

/// Which cyclic-category relation failed, if any, on one basis tensor.
///
/// Checks on the degree-`n` tuple `x` every instance of
/// `δ_iδ_j = δ_{j−1}δ_i (i<j)`, `σ_iσ_j = σ_{j+1}σ_i (i≤j)`,
/// `δ_iσ_j = σ_{j−1}δ_i (i<j)`, `δ_jσ_j = δ_{j+1}σ_j = id`,
/// `δ_iσ_j = σ_jδ_{i−1} (i>j+1)`, `t^{n+1} = id`, `δ_it = tδ_{i+1} (i<n)`,
/// `δ_nt = δ_0`, `σ_it = tσ_{i+1} (i<n)`, `σ_nt = t²σ_0`.
pub fn relation_violations<M: CyclicModule>(m: &M, x: &[M::Elem]) -> Vec<String> {
    use super::chain::LinComb;
    type C<E> = LinComb<Vec<E>>;
    let n = x.len() - 1;
    let ht = m.hbar_trunc();
    let base = C::basis(x.to_vec(), 0, ht);
    let face = |i: usize, c: &C<M::Elem>| c.map(|k| m.face(i, k));
    let deg = |i: usize, c: &C<M::Elem>| c.map(|k| vec![(HbarLaurent::one(0), m.degeneracy(i, k))]);
    let cyc = |c: &C<M::Elem>| c.map(|k| vec![(HbarLaurent::one(0), m.cyclic(k))]);
    let mut bad = Vec::new();
    let mut check = |name: String, l: C<M::Elem>, r: C<M::Elem>| {
        if l != r {
            bad.push(name);
        }
    };
    if n >= 2 {
        for j in 1..=n {
            for i in 0..j {
                check(format!("d{i}d{j}"), face(i, &face(j, &base)), face(j - 1, &face(i, &base)));
            }
        }
    }
    for j in 0..=n {
        for i in 0..=j {
            check(format!("s{i}s{j}"), deg(i, &deg(j, &base)), deg(j + 1, &deg(i, &base)));
        }
    }
    for j in 0..=n {
        let sj = deg(j, &base);
        for i in 0..=n + 1 {
            let lhs = face(i, &sj);
            if i < j {
                if n >= 1 {
                    check(format!("d{i}s{j}"), lhs, deg(j - 1, &face(i, &base)));
                }
            } else if i == j || i == j + 1 {
                check(format!("d{i}s{j}=id"), lhs, base.clone());
            } else if n >= 1 {
                check(format!("d{i}s{j}"), lhs, deg(j, &face(i - 1, &base)));
            }
        }
    }
    let mut t = base.clone();
    for _ in 0..=n {
        t = cyc(&t);
    }
    check(format!("t^{}", n + 1), t, base.clone());
    let tb = cyc(&base);
    if n >= 1 {
        for i in 0..n {
            check(format!("d{i}t"), face(i, &tb), cyc(&face(i + 1, &base)));
        }
        check("dnt=d0".into(), face(n, &tb), face(0, &base));
    }
    for i in 0..n {
        check(format!("s{i}t"), deg(i, &tb), cyc(&deg(i + 1, &base)));
    }
    check("snt".into(), deg(n, &tb), cyc(&cyc(&deg(0, &base))));
    bad
}
