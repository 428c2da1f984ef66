use super::chain::Chain;
use super::kinds::DiagElem;
use super::CyclicError;
use crate::algebra::BasisAlgebra;
use crate::group::{GroupElt, GroupSpec};
use crate::scalars::HbarLaurent;

/// A group acting on the left on a basis algebra by unital automorphisms.
pub trait GroupAction: BasisAlgebra {
    fn group(&self) -> &GroupSpec;

    /// `g(b)` as a linear combination of basis elements.
    fn act_basis(&self, g: &GroupElt, b: &Self::Basis) -> Vec<(HbarLaurent, Self::Basis)>;
}

/// `A⋊G` with `(ag)(bh) = a·g(b)·gh`.
#[derive(Clone, Debug)]
pub struct CrossedAlgebra<A> {
    pub base: A,
}

impl<A: GroupAction> BasisAlgebra for CrossedAlgebra<A> {
    type Basis = (A::Basis, GroupElt);

    fn unit(&self) -> Self::Basis {
        (self.base.unit(), self.base.group().identity())
    }

    fn mul_basis(&self, x: &Self::Basis, y: &Self::Basis) -> Vec<(HbarLaurent, Self::Basis)> {
        let gr = self.base.group();
        let gh = gr.mul(&x.1, &y.1);
        let mut out = Vec::new();
        for (c1, b2) in self.base.act_basis(&x.1, &y.0) {
            for (c2, p) in self.base.mul_basis(&x.0, &b2) {
                let c = if c1.is_one() { c2 } else { c1.mul(&c2) };
                out.push((c, (p, gh.clone())));
            }
        }
        out
    }

    fn hbar_trunc(&self) -> i32 {
        self.base.hbar_trunc()
    }
}

/// Apply `gs[i]` to slot `i` of an algebra tensor.
pub fn act_tensor<A: GroupAction>(alg: &A, gs: &[GroupElt], a: &[A::Basis]) -> Vec<(HbarLaurent, Vec<A::Basis>)> {
    let mut acc: Vec<(HbarLaurent, Vec<A::Basis>)> = vec![(HbarLaurent::one(alg.hbar_trunc()), Vec::new())];
    for (g, b) in gs.iter().zip(a) {
        let images = alg.act_basis(g, b);
        let mut next = Vec::with_capacity(acc.len() * images.len());
        for (c, t) in &acc {
            for (c2, b2) in &images {
                let mut t2 = t.clone();
                t2.push(b2.clone());
                let cc = if c2.is_one() { c.clone() } else { c.mul(c2) };
                next.push((cc, t2));
            }
        }
        acc = next;
    }
    acc
}

pub fn is_homogeneous<B>(group: &GroupSpec, x: &[(B, GroupElt)]) -> bool {
    group.is_identity(&group.product(x.iter().map(|(_, g)| g)))
}

/// Keep the tensors whose group legs multiply to the identity.
pub fn homogeneous_projection<A: GroupAction>(alg: &A, c: &Chain<(A::Basis, GroupElt)>) -> Chain<(A::Basis, GroupElt)> {
    c.filter(|k| is_homogeneous(alg.group(), k))
}

/// `a_0g_0⊗…⊗a_ng_n ↦ (g_0^{-1}(a_0)⊗a_1⊗g_1(a_2)⊗…⊗g_1⋯g_{n−1}(a_n)) ♮ (e⊗g_1⊗g_1g_2⊗…⊗g_1⋯g_n)`.
pub fn homogeneous_to_coinvariants<A: GroupAction>(
    alg: &A,
    c: &Chain<(A::Basis, GroupElt)>,
) -> Result<Chain<DiagElem<A::Basis>>, CyclicError> {
    let gr = alg.group();
    if c.terms().any(|(k, _)| !is_homogeneous(gr, k)) {
        return Err(CyclicError::NotHomogeneous);
    }
    Ok(c.map(|k| {
        let n = k.len() - 1;
        let mut acts = Vec::with_capacity(n + 1);
        let mut legs = Vec::with_capacity(n + 1);
        acts.push(gr.inv(&k[0].1));
        legs.push(gr.identity());
        let mut run = gr.identity();
        for j in 1..=n {
            acts.push(run.clone());
            run = gr.mul(&run, &k[j].1);
            legs.push(run.clone());
        }
        let a: Vec<A::Basis> = k.iter().map(|(b, _)| b.clone()).collect();
        act_tensor(alg, &acts, &a)
            .into_iter()
            .map(|(coef, a2)| (coef, a2.into_iter().zip(legs.iter().cloned()).collect()))
            .collect()
    }))
}

/// `(a_0⊗…⊗a_n)♮(g_0⊗…⊗g_n) ↦ g_n^{-1}(a_0)g_n^{-1}g_0 ⊗ g_0^{-1}(a_1)g_0^{-1}g_1 ⊗ … ⊗ g_{n−1}^{-1}(a_n)g_{n−1}^{-1}g_n`.
pub fn coinvariants_to_homogeneous<A: GroupAction>(
    alg: &A,
    c: &Chain<DiagElem<A::Basis>>,
) -> Chain<(A::Basis, GroupElt)> {
    let gr = alg.group();
    c.map(|k| {
        let n = k.len() - 1;
        let prev = |j: usize| if j == 0 { &k[n].1 } else { &k[j - 1].1 };
        let acts: Vec<GroupElt> = (0..=n).map(|j| gr.inv(prev(j))).collect();
        let legs: Vec<GroupElt> = (0..=n).map(|j| gr.mul(&gr.inv(prev(j)), &k[j].1)).collect();
        let a: Vec<A::Basis> = k.iter().map(|(b, _)| b.clone()).collect();
        act_tensor(alg, &acts, &a)
            .into_iter()
            .map(|(coef, a2)| (coef, a2.into_iter().zip(legs.iter().cloned()).collect()))
            .collect()
    })
}

/// Right diagonal action `x·h = h^{-1}(a) ♮ h^{-1}g` on one tensor.
pub fn right_act<A: GroupAction>(
    alg: &A,
    x: &[DiagElem<A::Basis>],
    h: &GroupElt,
) -> Vec<(HbarLaurent, Vec<DiagElem<A::Basis>>)> {
    let gr = alg.group();
    let hi = gr.inv(h);
    let acts = vec![hi.clone(); x.len()];
    let legs: Vec<GroupElt> = x.iter().map(|(_, g)| gr.mul(&hi, g)).collect();
    let a: Vec<A::Basis> = x.iter().map(|(b, _)| b.clone()).collect();
    act_tensor(alg, &acts, &a)
        .into_iter()
        .map(|(coef, a2)| (coef, a2.into_iter().zip(legs.iter().cloned()).collect()))
        .collect()
}

/// Representative of the coinvariant class with first group leg `e`.
pub fn canonical_coinvariant<A: GroupAction>(alg: &A, c: &Chain<DiagElem<A::Basis>>) -> Chain<DiagElem<A::Basis>> {
    c.map(|k| {
        let g0 = k[0].1.clone();
        if alg.group().is_identity(&g0) {
            vec![(HbarLaurent::one(0), k.clone())]
        } else {
            right_act(alg, k, &g0)
        }
    })
}

impl<T: GroupAction> GroupAction for &T {
    fn group(&self) -> &GroupSpec {
        (**self).group()
    }

    fn act_basis(&self, g: &GroupElt, b: &Self::Basis) -> Vec<(HbarLaurent, Self::Basis)> {
        (**self).act_basis(g, b)
    }
}
