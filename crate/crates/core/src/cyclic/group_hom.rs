//! Group homology with coefficients in the cyclic complex of `A♮G`.
//!
//! `C_p(G;F) = F ⊗_{kG} kG^{⊗p+1}` is stored in normalized coordinates: a key
//! `(x, k)` with the first group leg of `x` equal to `e`, using
//! `y·h ⊗ k = y ⊗ hk`. Total differential `∂' + (−1)^q δ` with `q` the
//! algebra degree of `x`.

use std::fmt::Debug;

use super::chain::{connes_terms, hochschild_terms, Chain, LinComb};
use super::crossed::{canonical_coinvariant, homogeneous_projection, homogeneous_to_coinvariants, right_act, GroupAction};
use super::kinds::{AlgebraModule, DiagElem, DiagonalModule};
use crate::group::{GroupElt, GroupSpec};
use crate::scalars::HbarLaurent;

/// `C_•(G; A♮G)` in normalized coordinates.
pub type GroupChain<B> = LinComb<(Vec<DiagElem<B>>, Vec<GroupElt>)>;

/// Algebra tensor with group legs: homogeneous `(k_0,…,k_p)` or
/// non-homogeneous `(g_1,…,g_p)` depending on context.
pub type NonHomChain<B> = LinComb<(Vec<B>, Vec<GroupElt>)>;

type Term<B> = (HbarLaurent, (Vec<DiagElem<B>>, Vec<GroupElt>));

fn sign(s: bool) -> HbarLaurent {
    if s {
        HbarLaurent::one(0)
    } else {
        -&HbarLaurent::one(0)
    }
}

fn is_one_term(c: &HbarLaurent) -> bool {
    c.is_one()
}

fn mul_coeff(a: &HbarLaurent, b: &HbarLaurent) -> HbarLaurent {
    if is_one_term(a) {
        b.clone()
    } else if is_one_term(b) {
        a.clone()
    } else {
        a.mul(b)
    }
}

/// `m⊗g ↦ m·g^{-1} ⊗ g`, presenting `M ⊗ kG` (diagonal action) as a free module.
pub fn untwist<A: GroupAction>(
    alg: &A,
    c: &LinComb<(Vec<DiagElem<A::Basis>>, GroupElt)>,
) -> LinComb<(Vec<DiagElem<A::Basis>>, GroupElt)> {
    let gr = alg.group();
    c.map(|(m, g)| right_act(alg, m, &gr.inv(g)).into_iter().map(|(s, m2)| (s, (m2, g.clone()))).collect())
}

/// `m⊗g ↦ m·g ⊗ g`.
pub fn untwist_inverse<A: GroupAction>(
    alg: &A,
    c: &LinComb<(Vec<DiagElem<A::Basis>>, GroupElt)>,
) -> LinComb<(Vec<DiagElem<A::Basis>>, GroupElt)> {
    c.map(|(m, g)| right_act(alg, m, g).into_iter().map(|(s, m2)| (s, (m2, g.clone()))).collect())
}

/// Rewrite `y ⊗ k` with first leg `y_0` as `(y·y_0) ⊗ y_0^{-1}k`.
fn renormalize<A: GroupAction>(alg: &A, y: Vec<DiagElem<A::Basis>>, k: &[GroupElt]) -> Vec<Term<A::Basis>> {
    let gr = alg.group();
    let y0 = y[0].1.clone();
    if gr.is_identity(&y0) {
        return vec![(HbarLaurent::one(0), (y, k.to_vec()))];
    }
    let yi = gr.inv(&y0);
    let k2: Vec<GroupElt> = k.iter().map(|g| gr.mul(&yi, g)).collect();
    right_act(alg, &y, &y0).into_iter().map(|(c, y2)| (c, (y2, k2.clone()))).collect()
}

/// `m⊗k_0⊗…⊗k_p ↦ m⊗e⊗k_0⊗…⊗k_p`.
pub fn contracting_homotopy<B: Clone + Ord + Debug>(group: &GroupSpec, c: &GroupChain<B>) -> GroupChain<B> {
    let e = group.identity();
    c.map(|(x, k)| {
        let mut k2 = Vec::with_capacity(k.len() + 1);
        k2.push(e.clone());
        k2.extend_from_slice(k);
        vec![(HbarLaurent::one(0), (x.clone(), k2))]
    })
}

/// `Id ⊗ b` on the bar legs: `Σ (−1)^i` (omit `k_i`); zero in group degree 0.
pub fn group_boundary<B: Clone + Ord + Debug>(c: &GroupChain<B>) -> GroupChain<B> {
    c.map(|(x, k)| {
        if k.len() < 2 {
            return Vec::new();
        }
        (0..k.len())
            .map(|i| {
                let mut k2 = k.clone();
                k2.remove(i);
                (sign(i % 2 == 0), (x.clone(), k2))
            })
            .collect()
    })
}

/// `(δH + Hδ)c − c`; vanishes in positive group degree.
pub fn homotopy_defect<B: Clone + Ord + Debug>(group: &GroupSpec, c: &GroupChain<B>) -> GroupChain<B> {
    let dh = group_boundary(&contracting_homotopy(group, c));
    let hd = contracting_homotopy(group, &group_boundary(c));
    dh.add(&hd).sub(c)
}

fn koszul_sign<B>(x: &[B]) -> bool {
    (x.len() - 1) % 2 == 0
}

/// `(−1)^q δ`.
fn koszul_boundary<B: Clone + Ord + Debug>(c: &GroupChain<B>) -> GroupChain<B> {
    let d = group_boundary(c);
    d.map(|key| vec![(sign(koszul_sign(&key.0)), key.clone())])
}

/// `(−1)^q H`.
fn koszul_homotopy<B: Clone + Ord + Debug>(group: &GroupSpec, c: &GroupChain<B>) -> GroupChain<B> {
    let h = contracting_homotopy(group, c);
    h.map(|key| vec![(sign(koszul_sign(&key.0)), key.clone())])
}

/// `(b + uB) ⊗ Id` on the coefficient side.
pub fn algebra_differential<A: GroupAction>(alg: &A, c: &GroupChain<A::Basis>) -> GroupChain<A::Basis> {
    let dm = DiagonalModule { alg, group: *alg.group() };
    let renorm = |terms: Vec<(HbarLaurent, Vec<DiagElem<A::Basis>>)>, k: &[GroupElt]| {
        let mut out = Vec::new();
        for (c, y) in terms {
            for (c2, key) in renormalize(alg, y, k) {
                out.push((mul_coeff(&c, &c2), key));
            }
        }
        out
    };
    let hb = c.map(|(x, k)| renorm(hochschild_terms(&dm, x), k));
    let cb = c.map(|(x, k)| renorm(connes_terms(&dm, x), k));
    hb.add(&cb.shift_u(1))
}

/// `D = (b + uB)⊗Id + Id⊗b` with the Koszul sign.
pub fn total_differential<A: GroupAction>(alg: &A, c: &GroupChain<A::Basis>) -> GroupChain<A::Basis> {
    algebra_differential(alg, c).add(&koszul_boundary(c))
}

fn embed_degree_zero<A: GroupAction>(alg: &A, f: &Chain<DiagElem<A::Basis>>) -> GroupChain<A::Basis> {
    let e = alg.group().identity();
    canonical_coinvariant(alg, f).map(|x| vec![(HbarLaurent::one(0), (x.clone(), vec![e.clone()]))])
}

/// `−H∂'` with the Koszul-signed homotopy, cut at group degree `pmax`.
fn step<A: GroupAction>(alg: &A, c: &GroupChain<A::Basis>, pmax: usize) -> GroupChain<A::Basis> {
    let c = c.filter(|(_, k)| k.len() <= pmax);
    koszul_homotopy(alg.group(), &algebra_differential(alg, &c)).neg()
}

/// The quasi-isomorphism from coinvariants: `Σ_k (−H∂')^k (f − δHf)`.
///
/// `2·(u-power) − (algebra degree)` grows by one per step, so the series
/// stops once it passes the `u`-truncation.
pub fn q_map<A: GroupAction>(alg: &A, f: &Chain<DiagElem<A::Basis>>) -> GroupChain<A::Basis> {
    q_map_upto(alg, f, usize::MAX)
}

/// [`q_map`] keeping only group degrees `≤ pmax`.
pub fn q_map_upto<A: GroupAction>(alg: &A, f: &Chain<DiagElem<A::Basis>>, pmax: usize) -> GroupChain<A::Basis> {
    let gr = alg.group();
    let x0 = embed_degree_zero(alg, f);
    let iota = x0.sub(&koszul_boundary(&koszul_homotopy(gr, &x0)));
    let mut total = iota.clone();
    let mut term = iota;
    loop {
        term = step(alg, &term, pmax);
        if term.is_zero() {
            return total;
        }
        total = total.add(&term);
    }
}

/// The same map from the fully expanded series
/// `f − δHf + Σ_{q≥1} (−H∂')^q f − ∂'(−H∂')^{q−1}Hf − δ(−H∂')^q Hf`.
pub fn q_map_expanded<A: GroupAction>(alg: &A, f: &Chain<DiagElem<A::Basis>>) -> GroupChain<A::Basis> {
    let gr = alg.group();
    let x0 = embed_degree_zero(alg, f);
    let hf = koszul_homotopy(gr, &x0);
    let mut total = x0.sub(&koszul_boundary(&hf));
    let mut a = x0;
    let mut prev_h = hf;
    loop {
        a = step(alg, &a, usize::MAX);
        let next_h = step(alg, &prev_h, usize::MAX);
        if a.is_zero() && prev_h.is_zero() {
            return total;
        }
        total = total.add(&a).sub(&algebra_differential(alg, &prev_h)).sub(&koszul_boundary(&next_h));
        prev_h = next_h;
    }
}

/// `x⊗k ↦ a(x)⊗k`: the map induced by `A♮G → A^♮`, which is the
/// Alexander–Whitney map followed by the augmentation cap.
pub fn project_to_algebra<B: Clone + Ord + Debug>(c: &GroupChain<B>) -> NonHomChain<B> {
    c.map(|(x, k)| vec![(HbarLaurent::one(0), (x.iter().map(|(a, _)| a.clone()).collect(), k.clone()))])
}

/// Alexander–Whitney `Σ_p (d_{p+1}⋯d_n a) ⊗ (g_p,…,g_n)` into `A^♮ ⊗ G^{k♮}`.
pub fn alexander_whitney<A: GroupAction>(alg: &A, c: &Chain<DiagElem<A::Basis>>) -> NonHomChain<A::Basis> {
    let am = AlgebraModule::new(alg);
    c.map(|x| {
        let n = x.len() - 1;
        let a: Vec<A::Basis> = x.iter().map(|(b, _)| b.clone()).collect();
        let g: Vec<GroupElt> = x.iter().map(|(_, h)| h.clone()).collect();
        let mut out = Vec::new();
        let mut front: Vec<(HbarLaurent, Vec<A::Basis>)> = vec![(HbarLaurent::one(0), a)];
        for p in (0..=n).rev() {
            for (cf, f) in &front {
                out.push((cf.clone(), (f.clone(), g[p..].to_vec())));
            }
            if p > 0 {
                let mut next = Vec::new();
                for (cf, f) in &front {
                    for (c2, f2) in super::kinds::algebra_face(&am.alg, p, f) {
                        next.push((mul_coeff(cf, &c2), f2));
                    }
                }
                front = next;
            }
        }
        out
    })
}

/// `b⊗1 + (−1)^p 1⊗b` on `A^♮ ⊗ G^{k♮}`, `p` the algebra degree.
pub fn tensor_differential<A: GroupAction>(alg: &A, c: &NonHomChain<A::Basis>) -> NonHomChain<A::Basis> {
    let am = AlgebraModule::new(alg);
    c.map(|(a, g)| {
        let mut out = Vec::new();
        for (s, a2) in hochschild_terms(&am, a) {
            out.push((s, (a2, g.clone())));
        }
        if g.len() > 1 {
            let p_even = (a.len() - 1) % 2 == 0;
            for i in 0..g.len() {
                let mut g2 = g.clone();
                g2.remove(i);
                out.push((sign((i % 2 == 0) == p_even), (a.clone(), g2)));
            }
        }
        out
    })
}

/// Cap with the augmentation: keep group degree 0, `a ⊗ (g) ↦ a`.
pub fn augmentation_cap<B: Clone + Ord + Debug>(c: &NonHomChain<B>) -> Chain<B> {
    c.map(|(a, g)| if g.len() == 1 { vec![(HbarLaurent::one(0), a.clone())] } else { Vec::new() })
}

/// `m⊗k_0⊗…⊗k_p ↦ k_0^{-1}(m) ⊗ (k_0^{-1}k_1, …, k_{p−1}^{-1}k_p)`.
pub fn nonhomogeneous<A: GroupAction>(alg: &A, c: &NonHomChain<A::Basis>) -> NonHomChain<A::Basis> {
    let gr = alg.group();
    c.map(|(a, k)| {
        let ki = gr.inv(&k[0]);
        let legs: Vec<GroupElt> = k.windows(2).map(|w| gr.mul(&gr.inv(&w[0]), &w[1])).collect();
        super::crossed::act_tensor(alg, &vec![ki; a.len()], a)
            .into_iter()
            .map(|(s, a2)| (s, (a2, legs.clone())))
            .collect()
    })
}

/// `(b+uB) + (−1)^q Σ(−1)^i δ_i` on non-homogeneous chains, with
/// `δ_0 = g_1^{-1}(m)⊗(g_2,…)`, inner faces multiplying `g_ig_{i+1}` and the
/// last face dropping `g_p`.
pub fn nonhomogeneous_differential<A: GroupAction>(alg: &A, c: &NonHomChain<A::Basis>) -> NonHomChain<A::Basis> {
    let gr = alg.group();
    let am = AlgebraModule::new(alg);
    let with_legs = |terms: Vec<(HbarLaurent, Vec<A::Basis>)>, g: &[GroupElt]| {
        terms.into_iter().map(|(s, a2)| (s, (a2, g.to_vec()))).collect::<Vec<_>>()
    };
    let hb = c.map(|(a, g)| with_legs(hochschild_terms(&am, a), g));
    let cb = c.map(|(a, g)| with_legs(connes_terms(&am, a), g));
    let grp = c.map(|(a, g)| {
        let p = g.len();
        let mut out = Vec::new();
        if p == 0 {
            return out;
        }
        let q_even = (a.len() - 1) % 2 == 0;
        for (s, a2) in super::crossed::act_tensor(alg, &vec![gr.inv(&g[0]); a.len()], a) {
            out.push((mul_coeff(&s, &sign(q_even)), (a2, g[1..].to_vec())));
        }
        for i in 1..p {
            let mut g2 = g[..i - 1].to_vec();
            g2.push(gr.mul(&g[i - 1], &g[i]));
            g2.extend_from_slice(&g[i + 1..]);
            out.push((sign((i % 2 == 0) == q_even), (a.clone(), g2)));
        }
        out.push((sign((p % 2 == 0) == q_even), (a.clone(), g[..p - 1].to_vec())));
        out
    });
    hb.add(&cb.shift_u(1)).add(&grp)
}

/// Crossed-product chains to non-homogeneous group chains: homogeneous
/// projection, the coinvariant isomorphism, `Q`, the algebra projection and
/// the non-homogeneous normalization.
pub fn d_map<A: GroupAction>(alg: &A, c: &Chain<(A::Basis, GroupElt)>) -> NonHomChain<A::Basis> {
    d_map_upto(alg, c, usize::MAX)
}

/// [`d_map`] keeping only group degrees `≤ pmax`.
pub fn d_map_upto<A: GroupAction>(alg: &A, c: &Chain<(A::Basis, GroupElt)>, pmax: usize) -> NonHomChain<A::Basis> {
    let h = homogeneous_projection(alg, c);
    let co = homogeneous_to_coinvariants(alg, &h).expect("projection output is homogeneous");
    let q = q_map_upto(alg, &co, pmax);
    nonhomogeneous(alg, &project_to_algebra(&q))
}
