use std::collections::BTreeMap;

use eqindex::cyclic::{b_plus_ub, normalize, AlgebraModule, Chain};
use eqindex::group::{GroupElt, GroupSpec};
use eqindex::group_coh::{equivariant_theta, phi_pair, tr_xi, EquivariantClassCocycle, GroupCochain, RatPoly};
use eqindex::lie_gf::*;
use eqindex::scalars::{FieldElement, HbarLaurent, ULaurent};
use eqindex::torus::*;
use eqindex::weyl::{sp_basis, Derivation, WeylElement, WeylMonomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const T: u32 = 12;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn x() -> WeylElement {
    WeylElement::x(1, 1, T)
}

fn xi() -> WeylElement {
    WeylElement::xi(1, 1, T)
}

fn mono(exps: [u32; 2]) -> WeylElement {
    WeylElement::monomial(fe(1), WeylMonomial { hbar: 0, exps: exps.to_vec() }, T)
}

fn ad(f: &WeylElement) -> Derivation {
    eqindex::weyl::ad_derivation(f)
}

/// Low-degree derivations with room in the truncation, so that nested brackets
/// lose nothing.
fn random_derivation<R: Rng>(r: &mut R, dim: usize) -> Derivation {
    ad(&Derivation::random(r, dim, 4, 3).rep().with_trunc(T))
}

fn random_functional<R: Rng>(r: &mut R, dim: usize) -> BTreeMap<WeylMonomial, FieldElement> {
    let mut out = BTreeMap::new();
    for _ in 0..4 {
        let hbar = r.gen_range(0..=1);
        let exps: Vec<u32> = (0..2 * dim).map(|_| r.gen_range(0..=2)).collect();
        out.insert(WeylMonomial { hbar, exps }, FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2)));
    }
    out
}

fn hl(v: FieldElement) -> HbarLaurent {
    HbarLaurent::constant(v, 4)
}

#[test]
fn theta_examples() {
    let th = LieCochain::theta();
    // θ̂(ad x̂, ad ξ̂) = i/ħ.
    assert_eq!(th.eval(&[ad(&x()), ad(&xi())]), HbarLaurent::monomial(FieldElement::i(), -1, 4));
    assert_eq!(th.eval(&[ad(&xi()), ad(&x())]), HbarLaurent::monomial(-FieldElement::i(), -1, 4));
    // Quadratic arguments never produce a central term.
    assert!(th.eval(&[ad(&mono([2, 0])), ad(&mono([0, 2]))]).is_zero());
    assert_eq!(th.kind(), CochainKind::Theta);
}

#[test]
fn differential_examples() {
    // ∂ of a 1-cochain: ∂ℓ(X,Y) = −ℓ([X,Y]).
    let mut f = BTreeMap::new();
    f.insert(WeylMonomial { hbar: 0, exps: vec![1, 1] }, fe(1));
    let l = LieCochain::linear(f, 4);
    // (1/ħ)[x̂, x̂ξ̂²] = −2i x̂ξ̂.
    let v = l.differential().eval(&[ad(&x()), ad(&mono([1, 2]))]);
    assert_eq!(v, hl(fe(2) * FieldElement::i()));
    // ∂ of a constant is zero.
    assert!(LieCochain::constant(hl(fe(3))).differential().eval(&[ad(&x())]).is_zero());
}

#[test]
fn differential_squares_to_zero() {
    let mut r = rng(1);
    for dim in [1, 2] {
        for _ in 0..8 {
            let l1 = LieCochain::linear(random_functional(&mut r, dim), 4);
            let (f, g) = (random_functional(&mut r, dim), random_functional(&mut r, dim));
            let (lf, lg) = (LieCochain::linear(f, 4), LieCochain::linear(g, 4));
            let l2 = LieCochain::from_fn(2, move |a| {
                &(&lf.eval(&a[..1]) * &lg.eval(&a[1..])) - &(&lf.eval(&a[1..]) * &lg.eval(&a[..1]))
            });
            let args: Vec<Derivation> = (0..4).map(|_| random_derivation(&mut r, dim)).collect();
            assert!(l1.differential().differential().eval(&args[..3]).is_zero());
            assert!(l2.differential().differential().eval(&args).is_zero());
        }
    }
}

#[test]
fn theta_is_a_relative_invariant_cocycle() {
    let mut r = rng(2);
    let th = LieCochain::theta();
    for dim in [1, 2] {
        for _ in 0..10 {
            let args: Vec<Derivation> = (0..3).map(|_| random_derivation(&mut r, dim)).collect();
            assert!(th.differential().eval(&args).is_zero());
            assert_eq!(th.relative_defects(&args), 0);
            assert_eq!(th.invariance_defects(&args), 0);
        }
    }
    // A generic linear cochain is neither relative nor invariant.
    let mut f = BTreeMap::new();
    f.insert(WeylMonomial { hbar: 0, exps: vec![2, 0] }, fe(1));
    let l = LieCochain::linear(f, 4);
    assert!(l.relative_defects(&[ad(&x())]) > 0);
    assert!(l.invariance_defects(&[ad(&mono([1, 1]))]) > 0);
}

#[test]
fn lift_change_shifts_theta_by_a_coboundary() {
    // s'(X) = s(X) + ℓ(X): θ̂' = θ̂ + ℓ∘[·,·] = θ̂ − ∂ℓ, with ℓ valued in ħ^{-1}C.
    let mut r = rng(3);
    for _ in 0..10 {
        let f = random_functional(&mut r, 1);
        let l = LieCochain::linear(f, 4);
        let lc = l.clone();
        let shifted = LieCochain::from_fn(2, move |a| extension_defect_shifted(&a[0], &a[1], &lc));
        let args: Vec<Derivation> = (0..3).map(|_| random_derivation(&mut r, 1)).collect();
        let lhs = shifted.eval(&args[..2]);
        let rhs = &LieCochain::theta().eval(&args[..2]) - &l.differential().eval(&args[..2]).shift(-1);
        assert_eq!(lhs, rhs);
        assert!(shifted.differential().eval(&args).is_zero());
    }
}

/// `s'([X,Y]) − [s'X, s'Y]` where `s'` adds the central constant `ℓ(X)/ħ`:
/// constants commute, so only `s'([X,Y])` sees the shift.
fn extension_defect_shifted(a: &Derivation, b: &Derivation, l: &LieCochain) -> HbarLaurent {
    let base = eqindex::weyl::extension_defect(a, b);
    &base + &l.eval(&[a.bracket(b)]).shift(-1)
}

/// Matrix of `X` on the generators read off from `X(z_b)`.
fn matrix_by_action(d: &Derivation) -> Vec<Vec<FieldElement>> {
    let dim = d.dim();
    let n = 2 * dim;
    let mut m = vec![vec![FieldElement::zero(); n]; n];
    for b in 0..n {
        let img = d.sp_projection().apply(&WeylElement::generator(b, dim, T));
        for (mono, c) in img.terms() {
            assert_eq!(mono.hbar, 0);
            let a = mono.exps.iter().position(|&e| e == 1).unwrap();
            assert_eq!(mono.exps.iter().sum::<u32>(), 1);
            m[a][b] = c.clone();
        }
    }
    m
}

#[test]
fn fundamental_matrix_matches_action() {
    let mut r = rng(4);
    for dim in [1, 2] {
        let basis = sp_basis(dim, T);
        for _ in 0..10 {
            let mut d = Derivation::zero(dim, T);
            for h in &basis {
                d = d.add(&h.scale(&FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2))));
            }
            let noise = random_derivation(&mut r, dim);
            let full = d.add(&noise);
            assert_eq!(fundamental_matrix(&full), matrix_by_action(&full));
            // Trace zero on sp(2d).
            let m = fundamental_matrix(&full);
            assert!((0..2 * dim).fold(FieldElement::zero(), |s, i| s + m[i][i].clone()).is_zero());
        }
    }
}

#[test]
fn curvature_example() {
    // R(ad x̂, ad x̂ξ̂²) = −Π(ad(−2i x̂ξ̂)) = ad(2i x̂ξ̂), matrix diag(−2, 2).
    let r = curvature(&ad(&x()), &ad(&mono([1, 2])));
    assert_eq!(r, ad(&mono([1, 1]).scale(&(fe(2) * FieldElement::i()))));
    let m = fundamental_matrix(&r);
    assert_eq!(m, vec![vec![fe(-2), fe(0)], vec![fe(0), fe(2)]]);
    // Curvature vanishes when an argument lies in sp(2d).
    for h in sp_basis(1, T) {
        assert!(curvature(&h, &ad(&mono([1, 2]))).is_zero());
    }
}

#[test]
fn chern_weil_hand_example() {
    // On (x̂, x̂ξ̂², ξ̂, x̂²ξ̂): R12 = diag(−2,2), R34 = diag(2,−2), R13 = R24 = 0,
    // R14 = [[0,2],[0,0]], R23 = [[0,0],[−2,0]], so
    // CW(tr A²) = (8/24)(tr R12R34 − tr R13R24 + tr R14R23) = (−8 − 4)/3 = −4.
    let cw = chern_weil(&InvariantPolynomial::trace_power(2), 4);
    let args = [ad(&x()), ad(&mono([1, 2])), ad(&xi()), ad(&mono([2, 1]))];
    assert_eq!(cw.eval(&args), hl(fe(-4)));
    // tr A vanishes on sp(2d).
    let cw1 = chern_weil(&InvariantPolynomial::trace_power(1), 4);
    assert!(cw1.eval(&args[..2]).is_zero());
}

fn all_permutations(n: usize) -> Vec<(i64, Vec<usize>)> {
    if n == 0 {
        return vec![(1, Vec::new())];
    }
    let mut out = Vec::new();
    for (s, p) in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // Inserting at `pos` moves past `len − pos` entries.
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((sign, q));
        }
    }
    out
}

fn mat_mul(a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(FieldElement::zero(), |s, k| s + a[i][k].clone() * b[k][j].clone())).collect()).collect()
}

/// `CW(tr A²)` by the alternating sum over all of `S_4`, matrices from the action.
fn cw_trace_square_oracle(a: &[Derivation]) -> FieldElement {
    let mut s = FieldElement::zero();
    for (sign, p) in all_permutations(4) {
        let r1 = matrix_by_action(&curvature(&a[p[0]], &a[p[1]]));
        let r2 = matrix_by_action(&curvature(&a[p[2]], &a[p[3]]));
        let m = mat_mul(&r1, &r2);
        let t = (0..m.len()).fold(FieldElement::zero(), |acc, i| acc + m[i][i].clone());
        s = s + t.scale(&rat(sign, 24));
    }
    s
}

#[test]
fn chern_weil_matches_direct_sum() {
    let mut r = rng(5);
    let cw = chern_weil(&InvariantPolynomial::trace_power(2), 4);
    for dim in [1, 2] {
        for _ in 0..4 {
            let args: Vec<Derivation> = (0..4).map(|_| random_derivation(&mut r, dim)).collect();
            assert_eq!(cw.eval(&args), hl(cw_trace_square_oracle(&args)));
        }
    }
}

#[test]
fn chern_weil_is_a_relative_cocycle() {
    let mut r = rng(6);
    let mut p = InvariantPolynomial::trace_power(2);
    p.add_term(vec![1, 1], rat(3, 1));
    let cw = chern_weil(&p, 4);
    for _ in 0..3 {
        let args: Vec<Derivation> = (0..5).map(|_| random_derivation(&mut r, 1)).collect();
        assert!(cw.differential().eval(&args).is_zero());
        assert_eq!(cw.relative_defects(&args[..4]), 0);
        assert_eq!(cw.invariance_defects(&args[..4]), 0);
    }
}

/// Coefficients of `(x/2)/sinh(x/2)` up to `x^max` by inverting the sinh series.
fn ahat_univariate(max: usize) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); max + 1];
    let mut fact = BigInt::one();
    for k in 0..=max {
        if k > 0 {
            fact *= BigInt::from(k as i64);
        }
        // sinh(x/2)/(x/2) = Σ (x/2)^{2j}/(2j+1)!, coefficient of x^k.
        if k % 2 == 0 {
            let mut f = BigInt::one();
            for t in 1..=(k + 1) {
                f *= BigInt::from(t as i64);
            }
            s[k] = BigRational::new(BigInt::one(), f * BigInt::from(2).pow(k as u32));
        }
    }
    let mut inv = vec![BigRational::zero(); max + 1];
    inv[0] = BigRational::one();
    for k in 1..=max {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &s[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    inv
}

#[test]
fn a_hat_series_values() {
    let s = a_hat_series(4);
    let mut expected = BTreeMap::new();
    expected.insert(vec![0, 0], rat(1, 1));
    expected.insert(vec![1, 0], rat(-1, 24));
    expected.insert(vec![2, 0], rat(1, 1152));
    expected.insert(vec![0, 1], rat(1, 2880));
    assert_eq!(s, expected);
    let u = ahat_univariate(6);
    assert_eq!(u[2], rat(-1, 24));
    assert_eq!(u[4], rat(7, 5760));
    // In p₁ = s₂, p₂ = (s₂² − s₄)/2: 1/1152·p₁² + 1/2880·(p₁² − 2p₂) = (7p₁² − 4p₂)/5760.
    assert_eq!(rat(1, 1152) + rat(1, 2880), rat(7, 5760));
    assert_eq!(rat(-2, 2880), rat(-4, 5760));
    assert_eq!(a_hat_polynomial(1).terms, [(vec![2], rat(-1, 48))].into_iter().collect());
}

#[test]
fn a_hat_series_matches_product_of_univariate_series() {
    let max = 6;
    let u = ahat_univariate(max);
    let series = a_hat_series(max as u32);
    let mut r = rng(8);
    for nvars in 1..=3 {
        for _ in 0..5 {
            let xs: Vec<BigRational> = (0..nvars).map(|_| rat(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
            // Π_i f(t x_i) as a series in t.
            let mut prod = vec![BigRational::zero(); max + 1];
            prod[0] = BigRational::one();
            for xv in &xs {
                let f: Vec<BigRational> = (0..=max).map(|k| &u[k] * num_traits::pow(xv.clone(), k)).collect();
                let mut next = vec![BigRational::zero(); max + 1];
                for a in 0..=max {
                    for b in 0..=max - a {
                        next[a + b] += &prod[a] * &f[b];
                    }
                }
                prod = next;
            }
            let power_sum = |k: usize| xs.iter().fold(BigRational::zero(), |s, v| s + num_traits::pow(v.clone(), 2 * k));
            let mut by_degree = vec![BigRational::zero(); max + 1];
            for (e, c) in &series {
                let w: usize = e.iter().enumerate().map(|(k, &m)| 2 * (k + 1) * m as usize).sum();
                let mut v = c.clone();
                for (k, &m) in e.iter().enumerate() {
                    v *= num_traits::pow(power_sum(k + 1), m as usize);
                }
                by_degree[w] += v;
            }
            assert_eq!(by_degree, prod);
        }
    }
}

#[test]
fn a_hat_polynomial_on_eigenvalues() {
    // For diag(a, −a) ∈ sp(2): tr A² = 2a², tr A⁴ = 2a⁴; degree 4 gives 7a⁴/5760.
    let p = a_hat_polynomial(2);
    let a = fe(3);
    let m = vec![vec![a.clone(), fe(0)], vec![fe(0), -a.clone()]];
    let v = p.polarized(&[m.clone(), m.clone(), m.clone(), m]);
    assert_eq!(v, FieldElement::from_rational(rat(7 * 81, 5760)));
}

fn torus_z(trunc: i32) -> EquivariantTorus {
    EquivariantTorus {
        torus: TorusAlgebra { dim: 1, trunc },
        action: TranslationAction::shifts_int(GroupSpec::Free { rank: 1 }, 4, &[vec![1, 2]]).unwrap(),
    }
}

fn omega_over_ihbar(dim: usize, trunc: i32) -> TorusForm {
    let w = TorusForm::omega(dim, trunc);
    w.scale_hbar(&HbarLaurent::monomial(-FieldElement::i(), -1, trunc))
}

#[test]
fn gelfand_fuks_of_theta() {
    let conn = InvariantConnection::standard(1, T);
    conn.check_flat().unwrap();
    let gf = gelfand_fuks(&LieCochain::theta(), &conn, 4).unwrap();
    assert_eq!(gf, omega_over_ihbar(1, 4));
    // d = 2: ω = dx¹∧dξ¹ + dx²∧dξ², read in slot order (x¹, x², ξ¹, ξ²).
    let conn2 = InvariantConnection::standard(2, T);
    let gf2 = gelfand_fuks(&LieCochain::theta(), &conn2, 4).unwrap();
    let mut expected = TorusForm::zero(2, 2, 4);
    let c = TorusElement::one(2, 4).scale_hbar(&HbarLaurent::monomial(-FieldElement::i(), -1, 4));
    expected.add_component(&[0, 2], &c);
    expected.add_component(&[1, 3], &c);
    assert_eq!(gf2, expected);
    // A non-flat connection is rejected.
    let mut bad = InvariantConnection::standard(1, T);
    bad.coeffs[0] = ad(&mono([0, 2]));
    assert!(matches!(gelfand_fuks(&LieCochain::theta(), &bad, 4), Err(LieError::NotFlat(..))));
}

#[test]
fn gelfand_fuks_is_a_chain_map() {
    // Constant forms are closed and the connection is flat, so both sides vanish.
    let mut r = rng(9);
    for dim in [1, 2] {
        let conn = InvariantConnection::standard(dim, T);
        for _ in 0..50 {
            let l = LieCochain::linear(random_functional(&mut r, dim), 4);
            let lhs = gelfand_fuks(&l.differential(), &conn, 4).unwrap();
            let rhs = gelfand_fuks(&l, &conn, 4).unwrap().d();
            assert!(lhs.is_zero());
            assert!(rhs.is_zero());
        }
    }
}

#[test]
fn equivariant_gelfand_fuks() {
    let conn = InvariantConnection::standard(1, T);
    let act = torus_z(4).action;
    let gf = gelfand_fuks_equivariant(&LieCochain::theta(), &conn, &act, 4).unwrap();
    assert_eq!(gf.eval(0, 2, &[]), equivariant_theta(&act, 4).unwrap().eval(0, 2, &[]));
    let tw = act.clone().with_twists(vec![vec![1, 0]]).unwrap();
    let gf = gelfand_fuks_equivariant(&LieCochain::theta(), &conn, &tw, 4).unwrap();
    let th = equivariant_theta(&tw, 4).unwrap();
    for n in [-1i64, 2] {
        assert_eq!(gf.eval(1, 1, &[GroupElt(vec![n])]), th.eval(1, 1, &[GroupElt(vec![n])]));
    }
    let generic = LieCochain::linear(random_functional(&mut rng(10), 1), 4);
    assert!(matches!(gelfand_fuks_equivariant(&generic, &conn, &tw, 4), Err(LieError::Unsupported(_))));
    let fam = constant_family(&LieCochain::theta(), &conn, 3, 4).unwrap();
    assert_eq!(fam.forms.len(), 4);
    assert_eq!(fam.compatibility_defects(), 0);
}

#[test]
fn index_class_untwisted() {
    let act = torus_z(4).action;
    let c = index_class(&act, 4).unwrap();
    assert_eq!(c.eval(0, 0, &[]), TorusForm::function(TorusElement::one(1, 4)));
    assert_eq!(c.eval(0, 2, &[]), omega_over_ihbar(1, 4));
}

#[test]
fn tau_t_examples() {
    let alg = TorusAlgebra { dim: 1, trunc: 0 };
    let (m, n) = (vec![1i64, 0], vec![0i64, 1]);
    let a = Chain::basis(vec![vec![-1, -1], m, n], 2, 0);
    let v = tau_t_pair(&a, &alg).unwrap();
    let two_pi_i = FieldElement::pi_pow(1) * FieldElement::i() * fe(2);
    let expected = two_pi_i.clone() * two_pi_i * FieldElement::from_frac(1, 2);
    assert_eq!(v, ULaurent::monomial(HbarLaurent::constant(expected, 0), -1, 2));
    // Degree 0 carries no top form.
    assert!(tau_t_pair(&Chain::basis(vec![vec![0, 0]], 2, 0), &alg).unwrap().is_zero());
}

fn random_mode<R: Rng>(r: &mut R) -> Mode {
    vec![r.gen_range(-1..=1), r.gen_range(-1..=1)]
}

#[test]
fn tau_t_matches_phi_pair_with_unit_class() {
    let mut r = rng(11);
    let sym = torus_z(0);
    let unit = EquivariantClassCocycle::unit(1, 0, sym.action.clone());
    let one = GroupCochain::one(sym.action.group);
    let e = sym.action.group.identity();
    for _ in 0..20 {
        let t: Vec<Mode> = (0..3).map(|_| random_mode(&mut r)).collect();
        let plain = Chain::basis(t.clone(), 2, 0);
        let crossed = Chain::basis(t.into_iter().map(|m| (m, e.clone())).collect::<Vec<_>>(), 2, 0);
        let lhs = tau_t_pair(&plain, &sym.torus).unwrap();
        let rhs = phi_pair(&unit, &one, &sym, &crossed).unwrap().value;
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn tau_t_kills_boundaries() {
    let mut r = rng(12);
    let alg = TorusAlgebra { dim: 1, trunc: 0 };
    let am = AlgebraModule::new(alg.clone());
    for _ in 0..20 {
        let mut c = Chain::zero(2, 0);
        for _ in 0..3 {
            let deg = r.gen_range(0..=2);
            let t: Vec<Mode> = (0..=deg).map(|_| random_mode(&mut r)).collect();
            c.add_term(t, &ULaurent::monomial(HbarLaurent::constant(fe(r.gen_range(-3..=3)), 0), r.gen_range(0..=1), 2));
        }
        let bc = normalize(&am, &b_plus_ub(&am, &c));
        assert!(tau_t_pair(&bc, &alg).unwrap().is_zero());
    }
}

fn crossed_chain<R: Rng>(r: &mut R, alg: &EquivariantTorus, deg: usize) -> Chain<(Mode, GroupElt)> {
    let gr = alg.action.group;
    let mut c = Chain::zero(2, alg.torus.trunc);
    for _ in 0..3 {
        let mut legs: Vec<GroupElt> = (0..=deg).map(|_| gr.random(r)).collect();
        legs[deg] = gr.inv(&gr.product(legs[..deg].iter()));
        let t = legs.into_iter().map(|g| (random_mode(r), g)).collect();
        c.add_term(t, &ULaurent::monomial(HbarLaurent::constant(fe(r.gen_range(-3..=3)), alg.torus.trunc), 0, 2));
    }
    c
}

#[test]
fn i_xi_of_tau_a_is_the_twisted_trace() {
    let mut r = rng(13);
    let alg = torus_z(4);
    for xi in [GroupCochain::one(alg.action.group), GroupCochain::linear(alg.action.group, &[1]).unwrap()] {
        let tr = tr_xi(&alg, xi.clone()).unwrap();
        for _ in 0..5 {
            let a = crossed_chain(&mut r, &alg, xi.degree());
            assert_eq!(i_xi(&TraceCochain::TauA, &xi, &alg, &a).unwrap(), tr.eval(&a));
        }
    }
    // ξ(n) = n against a₀·e with e the identity leg: the cap leaves nothing.
    let e = alg.action.group.identity();
    let a = Chain::basis(vec![(vec![0, 0], e.clone()), (vec![0, 0], e)], 2, 4);
    let lin = GroupCochain::linear(alg.action.group, &[1]).unwrap();
    assert!(i_xi(&TraceCochain::TauA, &lin, &alg, &a).unwrap().is_zero());
}

#[test]
fn i_xi_rejects_bad_inputs() {
    let alg = torus_z(4);
    let gr = alg.action.group;
    let a = Chain::basis(vec![(vec![0, 0], gr.identity())], 2, 4);
    let sq = GroupCochain::polynomial(gr, 1, RatPoly::from_terms(1, &[(vec![2], 1, 1)])).unwrap();
    assert!(i_xi(&TraceCochain::TauA, &sq, &alg, &a).is_err());
    let mut bad = EquivariantClassCocycle::new(1, 0, alg.action.clone());
    bad.push(GroupCochain::one(gr), TorusForm::function(TorusElement::plane_wave(vec![1, 0], 0)));
    let r = i_xi(&TraceCochain::TauT(bad), &GroupCochain::one(gr), &alg, &a);
    assert!(matches!(r, Err(LieError::NotClosed(_))));
    let unit = EquivariantClassCocycle::unit(1, 0, alg.action.clone());
    assert!(i_xi(&TraceCochain::TauT(unit), &GroupCochain::one(gr), &alg, &a).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn bracket_is_antisymmetric_and_theta_alternates(seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let (a, b) = (random_derivation(&mut r, dim), random_derivation(&mut r, dim));
        prop_assert_eq!(a.bracket(&b), b.bracket(&a).scale(&fe(-1)));
        let th = LieCochain::theta();
        prop_assert_eq!(th.eval(&[a.clone(), b.clone()]), -&th.eval(&[b, a]));
    }

    #[test]
    fn theta_cocycle_identity(seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let args: Vec<Derivation> = (0..3).map(|_| random_derivation(&mut r, dim)).collect();
        prop_assert!(LieCochain::theta().differential().eval(&args).is_zero());
    }
}
