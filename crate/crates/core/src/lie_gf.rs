//! Relative Lie-algebra cochains on the derivations of the Weyl algebra, the
//! Chevalley–Eilenberg differential, Chern–Weil and the `Â` series, and
//! Gelfand–Fuks evaluation for invariant flat connections on the torus.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclic::Chain;
use crate::formal_forms::signed_permutations;
use crate::group::GroupElt;
use crate::group_coh::{
    cap_trace_pairing, equivariant_ahat, equivariant_theta, phi_pair, symbol_chain, EquivariantClassCocycle, GroupCochain,
    GroupCohError,
};
use crate::lin::factorial;
use crate::scalars::{FieldElement, HbarLaurent, ULaurent};
use crate::torus::{hkr_tensor, EquivariantTorus, Mode, TorusAlgebra, TorusElement, TorusError, TorusForm, TranslationAction};
use crate::weyl::{ad_derivation, extension_defect, sp_basis, Derivation, WeylElement, WeylMonomial};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("connection is not flat: [A_{0}, A_{1}] ≠ 0")]
    NotFlat(usize, usize),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("class is not total-closed at bidegree {0:?}")]
    NotClosed((usize, usize)),
    #[error(transparent)]
    Group(#[from] GroupCohError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

type Evaluator = Arc<dyn Fn(&[Derivation]) -> HbarLaurent + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CochainKind {
    Generic,
    /// The extension cocycle `θ̂`.
    Theta,
}

/// An alternating scalar cochain `Λ^p g → C((ħ))` with trivial coefficients.
#[derive(Clone)]
pub struct LieCochain {
    arity: usize,
    kind: CochainKind,
    eval: Evaluator,
}

impl fmt::Debug for LieCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieCochain[{}, {:?}]", self.arity, self.kind)
    }
}

impl LieCochain {
    pub fn from_fn(arity: usize, f: impl Fn(&[Derivation]) -> HbarLaurent + Send + Sync + 'static) -> Self {
        LieCochain { arity, kind: CochainKind::Generic, eval: Arc::new(f) }
    }

    pub fn constant(c: HbarLaurent) -> Self {
        Self::from_fn(0, move |_| c.clone())
    }

    /// `θ̂(X, Y) = s([X,Y]) − [s(X), s(Y)]`.
    pub fn theta() -> Self {
        LieCochain { arity: 2, kind: CochainKind::Theta, eval: Arc::new(|a| extension_defect(&a[0], &a[1])) }
    }

    /// `X ↦ Σ_m c_m·(coefficient of m in the representative of X)`.
    pub fn linear(functional: BTreeMap<WeylMonomial, FieldElement>, trunc: i32) -> Self {
        Self::from_fn(1, move |a| {
            let rep = a[0].rep();
            let mut s = FieldElement::zero();
            for (m, c) in &functional {
                s = s + c.clone() * rep.coeff(m);
            }
            HbarLaurent::constant(s, trunc)
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> CochainKind {
        self.kind
    }

    pub fn eval(&self, args: &[Derivation]) -> HbarLaurent {
        assert_eq!(args.len(), self.arity, "cochain arity");
        (self.eval)(args)
    }

    /// `∂λ(X_0,…,X_p) = Σ_{i<j} (−1)^{i+j} λ([X_i,X_j], X_0,…,X̂_i,…,X̂_j,…,X_p)`.
    pub fn differential(&self) -> LieCochain {
        let inner = self.clone();
        let p = self.arity;
        LieCochain::from_fn(p + 1, move |x| {
            let mut out: Option<HbarLaurent> = None;
            for i in 0..=p {
                for j in i + 1..=p {
                    let mut args = vec![x[i].bracket(&x[j])];
                    args.extend(x.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| v.clone()));
                    let v = inner.eval(&args);
                    let v = if (i + j) % 2 == 0 { v } else { -&v };
                    out = Some(match out {
                        Some(o) => &o + &v,
                        None => v,
                    });
                }
            }
            out.unwrap_or_else(|| HbarLaurent::zero(0))
        })
    }

    /// Argument tuples drawn from `samples` with one slot replaced by an `sp(2d)`
    /// generator where the value is non-zero.
    pub fn relative_defects(&self, samples: &[Derivation]) -> usize {
        if self.arity == 0 || samples.is_empty() {
            return 0;
        }
        let sp = sp_basis(samples[0].dim(), samples[0].trunc());
        let mut bad = 0;
        for h in &sp {
            for slot in 0..self.arity {
                let args: Vec<Derivation> =
                    (0..self.arity).map(|k| if k == slot { h.clone() } else { samples[(k + slot) % samples.len()].clone() }).collect();
                if !self.eval(&args).is_zero() {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Tuples where `Σ_i λ(…,[h,X_i],…) ≠ 0` for an `sp(2d)` generator `h`.
    pub fn invariance_defects(&self, samples: &[Derivation]) -> usize {
        if self.arity == 0 || samples.is_empty() {
            return 0;
        }
        let sp = sp_basis(samples[0].dim(), samples[0].trunc());
        let args: Vec<Derivation> = (0..self.arity).map(|k| samples[k % samples.len()].clone()).collect();
        let mut bad = 0;
        for h in &sp {
            let mut s: Option<HbarLaurent> = None;
            for i in 0..self.arity {
                let mut a = args.clone();
                a[i] = h.bracket(&a[i]);
                let v = self.eval(&a);
                s = Some(match s {
                    Some(o) => &o + &v,
                    None => v,
                });
            }
            if s.is_some_and(|v| !v.is_zero()) {
                bad += 1;
            }
        }
        bad
    }
}

/// Square matrix over the field.
pub type FieldMatrix = Vec<Vec<FieldElement>>;

fn mat_mul(a: &FieldMatrix, b: &FieldMatrix) -> FieldMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(FieldElement::zero(), |s, k| if a[i][k].is_zero() || b[k][j].is_zero() { s } else { s + &a[i][k] * &b[k][j] }))
                .collect()
        })
        .collect()
}

fn mat_trace(a: &FieldMatrix) -> FieldElement {
    (0..a.len()).fold(FieldElement::zero(), |s, i| s + a[i][i].clone())
}

/// `κ(a,b) = (1/ħ)[z_a, z_b]` for fiber generators in slot order.
fn generator_bracket(dim: usize, a: usize, b: usize) -> FieldElement {
    if a + dim == b {
        -FieldElement::i()
    } else if b + dim == a {
        FieldElement::i()
    } else {
        FieldElement::zero()
    }
}

/// Matrix of the `sp(2d)` part of `X` on the generators: column `b` holds
/// `(1/ħ)[q, z_b]`, computed from `(1/ħ)[z_a z_c, z_b] = κ(c,b) z_a + κ(a,b) z_c`.
pub fn fundamental_matrix(x: &Derivation) -> FieldMatrix {
    let dim = x.dim();
    let n = 2 * dim;
    let mut m = vec![vec![FieldElement::zero(); n]; n];
    for (mono, c) in x.sp_projection().rep().terms() {
        let slots: Vec<usize> = mono.exps.iter().enumerate().flat_map(|(s, &e)| std::iter::repeat(s).take(e as usize)).collect();
        let (a, cc) = (slots[0], slots[1]);
        for b in 0..n {
            let k1 = generator_bracket(dim, cc, b);
            if !k1.is_zero() {
                m[a][b] = m[a][b].clone() + c.clone() * k1;
            }
            let k2 = generator_bracket(dim, a, b);
            if !k2.is_zero() {
                m[cc][b] = m[cc][b].clone() + c.clone() * k2;
            }
        }
    }
    m
}

/// `R(X,Y) = [ΠX, ΠY] − Π[X,Y]`.
pub fn curvature(x: &Derivation, y: &Derivation) -> Derivation {
    x.sp_projection().bracket(&y.sp_projection()).sub(&x.bracket(y).sp_projection())
}

/// An invariant polynomial `Σ c·Π_j tr(A^{k_j})`, keyed by the sorted `k_j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantPolynomial {
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl InvariantPolynomial {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigRational::one());
        InvariantPolynomial { terms }
    }

    /// `tr(A^k)`.
    pub fn trace_power(k: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![k], BigRational::one());
        InvariantPolynomial { terms }
    }

    pub fn add_term(&mut self, mut ks: Vec<u32>, c: BigRational) {
        ks.sort_unstable();
        let v = self.terms.entry(ks.clone()).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&ks);
        }
    }

    /// Polynomial degree; `None` for mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.iter().sum::<u32>());
        let d = it.next().unwrap_or(0);
        it.all(|e| e == d).then_some(d)
    }

    /// Full polarization `P(A_1,…,A_n) = (1/n!) Σ_σ Π_j tr(A_{σ(block j)})`.
    pub fn polarized(&self, mats: &[FieldMatrix]) -> FieldElement {
        let n = mats.len();
        let perms = signed_permutations(n);
        let norm = BigRational::new(BigInt::one(), factorial(n as u32));
        let mut total = FieldElement::zero();
        for (ks, c) in &self.terms {
            if ks.iter().sum::<u32>() as usize != n {
                continue;
            }
            let mut s = FieldElement::zero();
            for (_, perm) in &perms {
                let mut prod = FieldElement::one();
                let mut pos = 0;
                for &k in ks {
                    let mut m = mats[perm[pos]].clone();
                    for t in 1..k as usize {
                        m = mat_mul(&m, &mats[perm[pos + t]]);
                    }
                    pos += k as usize;
                    prod = prod * mat_trace(&m);
                }
                s = s + prod;
            }
            total = total + s.scale(c);
        }
        total.scale(&norm)
    }
}

/// `CW(P)(X_1,…,X_{2n}) = (1/(2n)!) Σ_σ sgn σ·P(R(X_{σ1},X_{σ2}),…)` for `P` of degree `n`.
pub fn chern_weil(p: &InvariantPolynomial, trunc: i32) -> LieCochain {
    let n = p.degree().expect("homogeneous invariant polynomial") as usize;
    let p = p.clone();
    LieCochain::from_fn(2 * n, move |x| {
        if n == 0 {
            return HbarLaurent::constant(p.terms.get(&Vec::new()).map_or_else(FieldElement::zero, |c| FieldElement::from_rational(c.clone())), trunc);
        }
        let perms = signed_permutations(2 * n);
        let mut cache: BTreeMap<(usize, usize), FieldMatrix> = BTreeMap::new();
        let mut s = FieldElement::zero();
        for (sign, perm) in &perms {
            let mats: Vec<FieldMatrix> = (0..n)
                .map(|j| {
                    let key = (perm[2 * j], perm[2 * j + 1]);
                    cache.entry(key).or_insert_with(|| fundamental_matrix(&curvature(&x[key.0], &x[key.1]))).clone()
                })
                .collect();
            let v = p.polarized(&mats);
            s = if *sign > 0 { s + v } else { s - v };
        }
        HbarLaurent::constant(s.scale(&BigRational::new(BigInt::one(), factorial(2 * n as u32))), trunc)
    })
}

/// Power-series coefficients of `log((x/2)/sinh(x/2)) = Σ_k a_k x^{2k}` for `k = 1..=kmax`.
fn log_ahat_coefficients(kmax: usize) -> Vec<BigRational> {
    // y = sinh(x/2)/(x/2) − 1 = Σ_{k≥1} x^{2k}/(4^k (2k+1)!), as a series in t = x².
    let mut y = vec![BigRational::zero(); kmax + 1];
    for (k, yk) in y.iter_mut().enumerate().skip(1) {
        *yk = BigRational::new(BigInt::one(), BigInt::from(4).pow(k as u32) * factorial(2 * k as u32 + 1));
    }
    // log(1+y)^{-1}: −log(1+y) = Σ_{j≥1} (−1)^j y^j / j.
    let mut out = vec![BigRational::zero(); kmax + 1];
    let mut power = vec![BigRational::zero(); kmax + 1];
    power[0] = BigRational::one();
    for j in 1..=kmax {
        let mut next = vec![BigRational::zero(); kmax + 1];
        for a in 0..=kmax {
            if power[a].is_zero() {
                continue;
            }
            for b in 1..=kmax - a {
                next[a + b] += &power[a] * &y[b];
            }
        }
        power = next;
        let w = BigRational::new(if j % 2 == 0 { BigInt::one() } else { -BigInt::one() }, BigInt::from(j));
        for k in 0..=kmax {
            out[k] += &power[k] * &w;
        }
    }
    out
}

/// `Π_i (x_i/2)/sinh(x_i/2)` up to degree `max_degree`, as a polynomial in the
/// power sums `s_{2k} = Σ_i x_i^{2k}`: key `e` stands for `Π_k s_{2k}^{e[k−1]}`.
pub fn a_hat_series(max_degree: u32) -> BTreeMap<Vec<u32>, BigRational> {
    let kmax = (max_degree / 2) as usize;
    let a = log_ahat_coefficients(kmax);
    // exp(Σ_k a_k s_{2k}) with weighted-degree cut.
    let weight = |e: &[u32]| e.iter().enumerate().map(|(k, &x)| 2 * (k as u32 + 1) * x).sum::<u32>();
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    out.insert(vec![0; kmax], BigRational::one());
    let mut power = out.clone();
    for j in 1..=kmax {
        let mut next: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in &power {
            for k in 1..=kmax {
                let mut f = e.clone();
                f[k - 1] += 1;
                if weight(&f) > max_degree || a[k].is_zero() {
                    continue;
                }
                *next.entry(f).or_insert_with(BigRational::zero) += c * &a[k];
            }
        }
        power = next;
        let w = inv_factorial(j);
        for (e, c) in &power {
            *out.entry(e.clone()).or_insert_with(BigRational::zero) += c * &w;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn inv_factorial(j: usize) -> BigRational {
    BigRational::new(BigInt::one(), factorial(j as u32))
}

/// Degree-`2n` part of `Â` as an invariant polynomial, with `s_{2k} = ½ tr(A^{2k})`
/// (eigenvalues of an `sp(2d)` element come in pairs `±x_i`).
pub fn a_hat_polynomial(n: u32) -> InvariantPolynomial {
    let mut p = InvariantPolynomial::default();
    for (e, c) in a_hat_series(2 * n) {
        let w: u32 = e.iter().enumerate().map(|(k, &x)| 2 * (k as u32 + 1) * x).sum();
        if w != 2 * n {
            continue;
        }
        let mut ks = Vec::new();
        let mut scale = c.clone();
        for (k, &x) in e.iter().enumerate() {
            for _ in 0..x {
                ks.push(2 * (k as u32 + 1));
                scale /= BigRational::from_integer(2.into());
            }
        }
        p.add_term(ks, scale);
    }
    p
}

/// Constant connection form `A_F(∂_s)` on the torus, one derivation per slot.
#[derive(Clone, Debug)]
pub struct InvariantConnection {
    pub dim: usize,
    pub coeffs: Vec<Derivation>,
}

impl InvariantConnection {
    /// `A_F(∂_{x^i}) = −∂_{x̂^i}`, `A_F(∂_{ξ^i}) = −∂_{ξ̂^i}`, represented by `iξ̂^i` and `−ix̂^i`.
    pub fn standard(dim: usize, trunc: u32) -> Self {
        let i = FieldElement::i();
        let mut coeffs = Vec::new();
        for k in 1..=dim {
            coeffs.push(ad_derivation(&WeylElement::xi(k, dim, trunc).scale(&i)));
        }
        for k in 1..=dim {
            coeffs.push(ad_derivation(&WeylElement::x(k, dim, trunc).scale(&-i.clone())));
        }
        InvariantConnection { dim, coeffs }
    }

    /// Flatness `dA + ½[A,A] = 0` reduces to pairwise commutation.
    pub fn check_flat(&self) -> Result<(), LieError> {
        for a in 0..self.coeffs.len() {
            for b in a + 1..self.coeffs.len() {
                if !self.coeffs[a].bracket(&self.coeffs[b]).is_zero() {
                    return Err(LieError::NotFlat(a, b));
                }
            }
        }
        Ok(())
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// `GF(λ)(∂_{s_1},…,∂_{s_p}) = λ(A_F(∂_{s_1}),…,A_F(∂_{s_p}))`, a constant `p`-form.
pub fn gelfand_fuks(lambda: &LieCochain, conn: &InvariantConnection, trunc: i32) -> Result<TorusForm, LieError> {
    conn.check_flat()?;
    let p = lambda.arity();
    let mut out = TorusForm::zero(conn.dim, p, trunc);
    for idx in subsets(2 * conn.dim, p) {
        let args: Vec<Derivation> = idx.iter().map(|&s| conn.coeffs[s].clone()).collect();
        let v = lambda.eval(&args);
        if !v.is_zero() {
            out.add_component(&idx, &TorusElement::one(conn.dim, trunc).scale_hbar(&v));
        }
    }
    Ok(out)
}

/// The constant family `φ_k = GF(λ)` over the simplices `Δ^k`, `k ≤ levels`.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    pub forms: Vec<TorusForm>,
}

impl CompatibleFamily {
    /// Faces pull `φ_k` back to `φ_{k−1}`; for a constant family this is equality.
    pub fn compatibility_defects(&self) -> usize {
        self.forms.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub fn constant_family(lambda: &LieCochain, conn: &InvariantConnection, levels: usize, trunc: i32) -> Result<CompatibleFamily, LieError> {
    let f = gelfand_fuks(lambda, conn, trunc)?;
    Ok(CompatibleFamily { forms: vec![f; levels + 1] })
}

/// `GF_Γ(λ)` in the bicomplex: `(0,p)` component `GF(λ)` with the constant
/// cochain; for twisted actions only `θ̂` is supported, via the twist components.
pub fn gelfand_fuks_equivariant(
    lambda: &LieCochain,
    conn: &InvariantConnection,
    action: &TranslationAction,
    trunc: i32,
) -> Result<EquivariantClassCocycle, LieError> {
    if action.is_twisted() {
        return match lambda.kind() {
            CochainKind::Theta => {
                gelfand_fuks(lambda, conn, trunc)?;
                Ok(equivariant_theta(action, trunc)?)
            }
            CochainKind::Generic => Err(LieError::Unsupported("twisted action with a generic cochain".into())),
        };
    }
    let mut c = EquivariantClassCocycle::new(conn.dim, trunc, action.clone());
    let f = gelfand_fuks(lambda, conn, trunc)?;
    if !f.is_zero() {
        c.push(GroupCochain::one(action.group), f);
    }
    Ok(c)
}

/// `Â_Γ·exp(θ_Γ)`.
pub fn index_class(action: &TranslationAction, trunc: i32) -> Result<EquivariantClassCocycle, LieError> {
    let th = equivariant_theta(action, trunc)?;
    let dim = th.dim;
    Ok(equivariant_ahat(action, trunc).cup(&th.exp(2 * dim)?)?)
}

/// `⟨τ̂_t, a⟩`: `u^n w_0⊗…⊗w_{2n} ↦ (u^{n−d}/(2n)!) ∫ σ(w_0)dσ(w_1)∧…∧dσ(w_{2n})`,
/// the `u^n` being carried by the coefficient.
pub fn tau_t_pair(a: &Chain<Mode>, alg: &TorusAlgebra) -> Result<ULaurent, LieError> {
    let d = alg.dim;
    let sym = symbol_chain(a);
    let mut out = ULaurent::zero(a.u_trunc(), 0);
    for (t, c) in sym.terms() {
        if t.len() != 2 * d + 1 {
            continue;
        }
        let v = hkr_tensor(t, 0).integrate()?;
        if !v.is_zero() {
            out = &out + &c.scale_hbar(&v).shift(-(d as i32));
        }
    }
    Ok(out)
}

/// `ε(m) = (−1)^{m(m+1)/2}`.
pub fn epsilon(m: usize) -> i64 {
    if (m * (m + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The two degree-0 cochains fed to `I_ξ`: `τ̂_a`, realized through the trace,
/// and `τ̂_t` twisted by an equivariant class, realized through symbols.
#[derive(Clone, Debug)]
pub enum TraceCochain {
    TauA,
    TauT(EquivariantClassCocycle),
}

/// `I_ξ(λ)(a) = ε(|λ|)⟨GF_Γ(λ), D(a) ∩ ξ⟩` with `|λ| = 0`.
pub fn i_xi(lambda: &TraceCochain, xi: &GroupCochain, alg: &EquivariantTorus, a: &Chain<(Mode, GroupElt)>) -> Result<ULaurent, LieError> {
    xi.require_cocycle()?;
    let sign = FieldElement::from_int(epsilon(0));
    match lambda {
        TraceCochain::TauA => Ok(cap_trace_pairing(alg, xi, a).scale(&sign)),
        TraceCochain::TauT(class) => {
            let gr = alg.action.group;
            let mut sample = vec![gr.identity()];
            for g in gr.generators() {
                sample.push(gr.inv(&g));
                sample.push(g);
            }
            if let Some((pq, _)) = class.total_defects(&sample, 2 * class.dim)?.into_iter().next() {
                return Err(LieError::NotClosed(pq));
            }
            let sym = EquivariantTorus { torus: TorusAlgebra { dim: alg.torus.dim, trunc: 0 }, action: alg.action.clone() };
            Ok(phi_pair(class, xi, &sym, &symbol_chain(a))?.value.scale(&sign))
        }
    }
}
