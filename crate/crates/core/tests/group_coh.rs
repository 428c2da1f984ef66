mod common;

use common::*;
use eqindex::cyclic::{b_plus_ub, chern_character, normalize, AlgebraModule, Chain, CrossedAlgebra};
use eqindex::group::{GroupElt, GroupSpec};
use eqindex::group_coh::*;
use eqindex::scalars::{FieldElement, HbarLaurent, ULaurent};
use eqindex::torus::*;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: i32 = 4;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

impl Traced for M2Alg {
    fn trace_basis(&self, b: &M2) -> HbarLaurent {
        if *b == M2::I {
            HbarLaurent::constant(fe(2), 0)
        } else {
            HbarLaurent::zero(0)
        }
    }
}

fn torus_z(trunc: i32) -> EquivariantTorus {
    EquivariantTorus {
        torus: TorusAlgebra { dim: 1, trunc },
        action: TranslationAction::shifts_int(GroupSpec::Free { rank: 1 }, 4, &[vec![1, 2]]).unwrap(),
    }
}

fn torus_z4(trunc: i32) -> EquivariantTorus {
    EquivariantTorus {
        torus: TorusAlgebra { dim: 1, trunc },
        action: TranslationAction::shifts_int(GroupSpec::Cyclic { order: 4 }, 4, &[vec![1, 3]]).unwrap(),
    }
}

fn random_mode<R: Rng>(r: &mut R) -> Mode {
    vec![r.gen_range(-1..=1), r.gen_range(-1..=1)]
}

/// Random crossed tensors of a fixed degree, about half of them homogeneous.
fn random_torus_chain<R: Rng>(r: &mut R, alg: &EquivariantTorus, deg: usize, nterms: usize, u_trunc: i32) -> Chain<(Mode, GroupElt)> {
    let gr = alg.action.group;
    let ht = alg.torus.trunc;
    let mut c = Chain::zero(u_trunc, ht);
    for _ in 0..nterms {
        let mut legs: Vec<GroupElt> = (0..=deg).map(|_| gr.random(r)).collect();
        if r.gen_bool(0.5) {
            legs[deg] = gr.inv(&gr.product(legs[..deg].iter()));
        }
        let t: Vec<(Mode, GroupElt)> = legs.into_iter().map(|g| (random_mode(r), g)).collect();
        let v = FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2));
        c.add_term(t, &ULaurent::monomial(HbarLaurent::constant(v, ht), r.gen_range(0..=1), u_trunc));
    }
    c
}

fn random_m2_chain<R: Rng>(r: &mut R, alg: &M2Alg, deg: usize, nterms: usize, u_trunc: i32) -> Chain<(M2, GroupElt)> {
    let gr = alg.group;
    let mut c = Chain::zero(u_trunc, 0);
    for _ in 0..nterms {
        let t = if r.gen_bool(0.5) {
            random_homogeneous(r, alg, deg)
        } else {
            (0..=deg).map(|_| (random_m2(r), gr.random(r))).collect()
        };
        c.add_term(t, &random_coeff(r, u_trunc));
    }
    c
}

fn random_poly_cochain<R: Rng>(r: &mut R, rank: usize, degree: usize) -> GroupCochain {
    let n = rank * degree;
    let mut p = RatPoly::zero(n);
    for _ in 0..4 {
        let e: Vec<u32> = (0..n).map(|_| r.gen_range(0..3)).collect();
        p.add_term(e, BigRational::new(r.gen_range(-3..=3).into(), r.gen_range(1..=3).into()));
    }
    GroupCochain::polynomial(GroupSpec::Free { rank }, degree, p).unwrap()
}

fn random_table_cochain<R: Rng>(r: &mut R, order: u32, degree: usize, normalized: bool) -> GroupCochain {
    let gr = GroupSpec::Cyclic { order };
    let order = order as i64;
    let vals: Vec<FieldElement> = (0..order.pow(degree as u32)).map(|_| FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2))).collect();
    GroupCochain::table(gr, degree, |a| {
        if normalized && a.iter().any(|g| g.0[0] == 0) {
            return FieldElement::zero();
        }
        let idx = a.iter().fold(0i64, |acc, g| acc * order + g.0[0]);
        vals[idx as usize].clone()
    })
    .unwrap()
}

fn g1(v: i64) -> GroupElt {
    GroupElt(vec![v])
}

#[test]
fn coboundary_examples() {
    let z = GroupSpec::Free { rank: 1 };
    let xi = GroupCochain::linear(z, &[1]).unwrap();
    assert!(xi.coboundary().is_zero());
    // ξ(n) = n²: δξ(m,n) = n² − (m+n)² + m² = −2mn.
    let sq = GroupCochain::polynomial(z, 1, RatPoly::from_terms(1, &[(vec![2], 1, 1)])).unwrap();
    let d = sq.coboundary();
    for (m, n) in [(1, 2), (-3, 5), (0, 7)] {
        assert_eq!(d.eval(&[g1(m), g1(n)]), fe(-2 * m * n));
    }
    let c = GroupCochain::constant(z, fe(5));
    assert!(c.coboundary().is_zero());
    // A constant 1-cochain on Z/4 has δ equal to the same constant.
    let z4 = GroupSpec::Cyclic { order: 4 };
    let k = GroupCochain::table(z4, 1, |_| fe(3)).unwrap();
    assert_eq!(k.coboundary().eval(&[g1(1), g1(2)]), fe(3));
    assert!(!k.is_normalized());
    let c4 = GroupCochain::constant(z4, fe(2));
    assert!(c4.coboundary().is_zero());
}

#[test]
fn coboundary_matches_pointwise_formula() {
    let mut r = rng(1);
    for _ in 0..10 {
        let xi = random_poly_cochain(&mut r, 2, 2);
        let d = xi.coboundary();
        let gr = GroupSpec::Free { rank: 2 };
        for _ in 0..5 {
            let a: Vec<GroupElt> = (0..3).map(|_| gr.random(&mut r)).collect();
            let expected = xi.eval(&a[1..]) - xi.eval(&[gr.mul(&a[0], &a[1]), a[2].clone()])
                + xi.eval(&[a[0].clone(), gr.mul(&a[1], &a[2])])
                - xi.eval(&a[..2]);
            assert_eq!(d.eval(&a), expected);
        }
    }
}

#[test]
fn cap_examples() {
    let z = GroupSpec::Free { rank: 1 };
    let mut c: eqindex::cyclic::NonHomChain<M2> = eqindex::cyclic::NonHomChain::zero(2, 0);
    c.add_term((vec![M2::E, M2::F], vec![g1(2), g1(3)]), &ULaurent::one(2, 0));
    c.add_term((vec![M2::H], vec![g1(1)]), &ULaurent::one(2, 0));
    let one = GroupCochain::one(z);
    let capped = cap(&c, &one);
    assert_eq!(capped.chain, c);
    assert_eq!(capped.underflow, 0);
    let xy = GroupCochain::polynomial(z, 2, RatPoly::from_terms(2, &[(vec![1, 1], 1, 1)])).unwrap();
    let capped = cap(&c, &xy);
    assert_eq!(capped.underflow, 1);
    assert_eq!(capped.chain.len(), 1);
    assert_eq!(capped.chain.coeff(&(vec![M2::E, M2::F], vec![])), Some(&ULaurent::one(2, 0).scale(&fe(6))));
}

#[test]
fn tr_xi_examples() {
    // Degree 0: the trace of the e-component.
    let alg = torus_z(N);
    let t0 = tr_xi(&alg, GroupCochain::one(alg.action.group)).unwrap();
    let e = alg.action.group.identity();
    assert_eq!(t0.eval_tensor(&[(vec![0, 0], e.clone())]), trace_of_mode(&[0, 0], N));
    assert!(t0.eval_tensor(&[(vec![0, 0], g1(1))]).is_zero());
    assert!(t0.eval_tensor(&[(vec![1, 0], e)]).is_zero());

    // Z, ξ(n) = n: Tr_ξ(a₀γ ⊗ a₁γ⁻¹) = ξ(γ⁻¹)·Tr(a₀γ(a₁)) = −n·Tr(a₀γ(a₁)).
    let m2 = z();
    let xi = GroupCochain::linear(m2.group, &[1]).unwrap();
    let t1 = tr_xi(&m2, xi).unwrap();
    for n in [1i64, 2, -3] {
        // E·γ(F) = 2^{-n} E F, Tr(EF) = 1.
        let v = t1.eval_tensor(&[(M2::E, g1(n)), (M2::F, g1(-n))]);
        let w = if n >= 0 { FieldElement::from_frac(1, 1 << n) } else { FieldElement::from_int(1 << -n) };
        assert_eq!(v, HbarLaurent::constant(fe(-n) * w, 0));
        // H·γ(H) = I.
        assert_eq!(t1.eval_tensor(&[(M2::H, g1(n)), (M2::H, g1(-n))]), HbarLaurent::constant(fe(-2 * n), 0));
    }
    assert!(t1.eval_tensor(&[(M2::I, g1(1)), (M2::I, g1(1))]).is_zero());

    // A non-cocycle is rejected with its coboundary.
    let sq = GroupCochain::polynomial(m2.group, 1, RatPoly::from_terms(1, &[(vec![2], 1, 1)])).unwrap();
    match tr_xi(&m2, sq.clone()) {
        Err(GroupCohError::NotCocycle(w)) => assert_eq!(*w, sq.coboundary()),
        _ => panic!("expected rejection"),
    }
}

#[test]
fn tr_xi_kills_boundaries_matrices() {
    let mut r = rng(2);
    for alg in [z(), z4()] {
        let am = AlgebraModule::crossed(CrossedAlgebra { base: alg.clone() });
        let cochains: Vec<GroupCochain> = match alg.group {
            GroupSpec::Free { .. } => vec![
                GroupCochain::one(alg.group),
                GroupCochain::linear(alg.group, &[1]).unwrap(),
                GroupCochain::linear(alg.group, &[1]).unwrap().cup(&GroupCochain::linear(alg.group, &[-2]).unwrap()).unwrap(),
            ],
            GroupSpec::Cyclic { order } => vec![
                GroupCochain::one(alg.group),
                random_table_cochain(&mut r, order, 1, true).coboundary(),
                random_table_cochain(&mut r, order, 2, true).coboundary(),
            ],
        };
        for xi in cochains {
            let k = xi.degree();
            // Every cocycle gives a Hochschild cocycle.
            let t = tr_xi(&alg, xi.clone()).unwrap();
            for _ in 0..10 {
                let c = random_m2_chain(&mut r, &alg, k + 1, 4, 0);
                assert!(t.eval(&eqindex::cyclic::b(&am, &c)).is_zero(), "b, k = {k}");
            }
            // Its antisymmetrization is cyclic and kills (b+uB)-boundaries.
            let alt = xi.alternate();
            assert!(alt.is_cyclic() && alt.is_cocycle() && alt.is_normalized());
            let t = tr_xi(&alg, alt).unwrap();
            for _ in 0..15 {
                for deg in [k.saturating_sub(1), k + 1] {
                    let c = random_m2_chain(&mut r, &alg, deg, 4, 2);
                    let bc = normalize(&am, &b_plus_ub(&am, &c));
                    assert!(t.eval(&bc).is_zero(), "k = {k}, deg = {deg}");
                }
            }
        }
    }
}

#[test]
fn antisymmetrization() {
    let z = GroupSpec::Free { rank: 1 };
    let lin = GroupCochain::linear(z, &[1]).unwrap();
    assert!(lin.is_cyclic());
    assert_eq!(lin.alternate(), lin);
    let cup = lin.cup(&lin).unwrap();
    assert!(!cup.is_cyclic());
    // ξ∪ξ for a 1-cocycle ξ on Z alternates to zero.
    assert!(cup.alternate().is_zero());
    let mut r = rng(6);
    for _ in 0..5 {
        let xi = random_table_cochain(&mut r, 4, 2, true).coboundary();
        let alt = xi.alternate();
        assert!(alt.is_cyclic());
        assert_eq!(alt.alternate(), alt);
        assert!(alt.is_cocycle());
        let p = random_poly_cochain(&mut r, 2, 2);
        assert!(p.alternate().is_cyclic());
        assert_eq!(p.coboundary().alternate(), p.alternate().coboundary());
    }
}

#[test]
fn tr_xi_kills_boundaries_torus() {
    let mut r = rng(3);
    let alg = torus_z(2);
    let am = AlgebraModule::crossed(CrossedAlgebra { base: alg.clone() });
    let xi = GroupCochain::linear(alg.action.group, &[1]).unwrap();
    let t = tr_xi(&alg, xi).unwrap();
    for _ in 0..15 {
        for deg in [0, 2] {
            let c = random_torus_chain(&mut r, &alg, deg, 3, 2);
            assert!(t.eval(&normalize(&am, &b_plus_ub(&am, &c))).is_zero());
        }
    }
}

#[test]
fn cap_pipeline_matches_direct_formula() {
    let mut r = rng(4);
    for alg in [z(), z4()] {
        let xis: Vec<GroupCochain> = match alg.group {
            GroupSpec::Free { .. } => vec![GroupCochain::one(alg.group), GroupCochain::linear(alg.group, &[3]).unwrap()],
            GroupSpec::Cyclic { order } => vec![GroupCochain::one(alg.group), random_table_cochain(&mut r, order, 1, true).coboundary()],
        };
        for xi in xis {
            let k = xi.degree();
            let t = tr_xi(&alg, xi.clone()).unwrap();
            for _ in 0..10 {
                let c = random_m2_chain(&mut r, &alg, k, 4, 1);
                assert_eq!(cap_trace_pairing(&alg, &xi, &c), t.eval(&c), "k = {k}");
            }
        }
    }
}

fn sample(gr: GroupSpec) -> Vec<GroupElt> {
    match gr {
        GroupSpec::Free { rank: 1 } => (-2..=2).map(g1).collect(),
        _ => gr.elements().unwrap_or_else(|| gr.generators()),
    }
}

fn two_pi_i() -> FieldElement {
    FieldElement::pi_pow(1) * FieldElement::i() * fe(2)
}

#[test]
fn theta_untwisted() {
    let act = torus_z(N).action;
    let th = equivariant_theta(&act, N).unwrap();
    assert_eq!(th.components.keys().copied().collect::<Vec<_>>(), vec![(0, 2)]);
    let w = th.eval(0, 2, &[]);
    let expected = TorusForm::omega(1, N).scale_hbar(&HbarLaurent::monomial(-FieldElement::i(), -1, N));
    assert_eq!(w, expected);
    assert!(th.total_defects(&sample(act.group), 2).unwrap().is_empty());
    let ah = equivariant_ahat(&act, N);
    assert_eq!(ah.components.keys().copied().collect::<Vec<_>>(), vec![(0, 0)]);
    assert_eq!(ah.eval(0, 0, &[]), TorusForm::function(TorusElement::one(1, N)));
}

#[test]
fn theta_twisted() {
    for k in [vec![1i64, 0], vec![0, 1], vec![2, -1]] {
        let act = torus_z(N).action.with_twists(vec![k.clone()]).unwrap();
        let th = equivariant_theta(&act, N).unwrap();
        assert!(th.components.contains_key(&(1, 1)));
        assert!(!th.components.contains_key(&(2, 0)));
        // u = e_k is base-constant, so u⁻¹∇_F u = −u⁻¹ ∂_y u = −2πi Σ k_s dy^s.
        let mut expected = TorusForm::zero(1, 1, N);
        for (s, &ks) in k.iter().enumerate() {
            if ks != 0 {
                let f = TorusElement::one(1, N).scale(&(-two_pi_i() * fe(ks)));
                expected = expected.add(&TorusForm::monomial(&[s], &f)).unwrap();
            }
        }
        for n in [-2i64, 1, 3] {
            assert_eq!(th.eval(1, 1, &[g1(n)]), expected.scale(&fe(n)));
        }
        assert!(th.total_defects(&sample(act.group), 2).unwrap().is_empty());
    }
    // Twists whose composition has a central defect are out of scope.
    let act = TranslationAction::shifts_int(GroupSpec::Free { rank: 2 }, 4, &[vec![1, 0], vec![0, 1]])
        .unwrap()
        .with_twists(vec![vec![1, 0], vec![0, 1]])
        .unwrap();
    assert!(matches!(equivariant_theta(&act, N), Err(GroupCohError::UnsupportedAction(_))));
}

#[test]
fn total_defect_is_detected() {
    // A (0,1) component dx alone is closed, but a non-invariant function is not.
    let act = torus_z(N).action;
    let mut c = EquivariantClassCocycle::new(1, N, act.clone());
    c.push(GroupCochain::one(act.group), TorusForm::function(TorusElement::plane_wave(vec![1, 0], N)));
    let bad = c.total_defects(&sample(act.group), 1).unwrap();
    assert!(bad.iter().any(|(pq, _)| *pq == (0, 1)));
    assert!(bad.iter().any(|(pq, _)| *pq == (1, 0)));
}

fn unit_chain(alg: &EquivariantTorus, u_trunc: i32) -> Chain<(Mode, GroupElt)> {
    Chain::basis(vec![(vec![0, 0], alg.action.group.identity())], u_trunc, alg.torus.trunc)
}

#[test]
fn phi_pair_examples() {
    let sym = torus_z(0);
    let act = sym.action.clone();
    let one = GroupCochain::one(act.group);
    // Unit class against 1·e: no top-degree form to integrate.
    let unit = EquivariantClassCocycle::unit(1, 0, act.clone());
    let v = phi_pair(&unit, &one, &sym, &unit_chain(&sym, 2)).unwrap();
    assert!(v.value.is_zero());
    // Unit class against e_{-m-n}⊗e_m⊗e_n: ½ e_{-m-n} de_m∧de_n integrates to
    // ½(2πi)²(m_x n_ξ − m_ξ n_x), weighted by u^{0−d}.
    let (m, n) = (vec![1i64, 0], vec![0i64, 1]);
    let e = act.group.identity();
    let a = Chain::basis(vec![(vec![-1, -1], e.clone()), (m, e.clone()), (n, e)], 2, 0);
    let v = phi_pair(&unit, &one, &sym, &a).unwrap();
    let expected = two_pi_i() * two_pi_i() * FieldElement::from_frac(1, 2);
    assert_eq!(v.value, ULaurent::monomial(HbarLaurent::constant(expected, 0), -1, 2));
    // A single ω component against ch(1) = 1·e: u^{1−d}∫ω = u⁰.
    let mut w = EquivariantClassCocycle::new(1, 0, act.clone());
    w.push(one.clone(), TorusForm::omega(1, 0));
    let v = phi_pair(&w, &one, &sym, &unit_chain(&sym, 2)).unwrap();
    assert_eq!(v.value, ULaurent::one(2, 0));
    assert_eq!(v.flagged, 0);
    // θ against 1·e is 1/(iħ).
    let th = equivariant_theta(&act, 0).unwrap();
    let v = phi_pair(&th, &one, &sym, &unit_chain(&sym, 2)).unwrap();
    assert_eq!(v.value, ULaurent::monomial(HbarLaurent::monomial(-FieldElement::i(), -1, 0), 0, 2));
}

#[test]
fn phi_pair_is_closed() {
    let mut r = rng(7);
    let sym = torus_z(0);
    let act = sym.action.clone();
    let am = AlgebraModule::crossed(CrossedAlgebra { base: sym.clone() });
    let mut w = EquivariantClassCocycle::new(1, 0, act.clone());
    w.push(GroupCochain::one(act.group), TorusForm::omega(1, 0));
    let classes = [EquivariantClassCocycle::unit(1, 0, act.clone()), w];
    let xis = [GroupCochain::one(act.group), GroupCochain::linear(act.group, &[1]).unwrap()];
    for class in &classes {
        for xi in &xis {
            for _ in 0..6 {
                for deg in 0..=2 {
                    let c = random_torus_chain(&mut r, &sym, deg, 3, 2);
                    let bc = normalize(&am, &b_plus_ub(&am, &c));
                    let v = phi_pair(class, xi, &sym, &bc).unwrap();
                    assert!(v.value.is_zero(), "deg {deg}, ξ degree {}", xi.degree());
                }
            }
        }
    }
}

/// `(1/n)Σ_γ γ` in a finite crossed product, as a 1×1 crossed element.
fn averaging_projection(act: &TranslationAction, trunc: i32) -> CrossedElement {
    let elems = act.group.elements().unwrap();
    let w = HbarLaurent::constant(FieldElement::from_frac(1, elems.len() as i64), trunc);
    let one = TorusElement::one(1, trunc).scale_hbar(&w);
    elems.into_iter().fold(CrossedElement::zero(1), |acc, g| acc.add(&CrossedElement::scalar(g, one.clone())).unwrap())
}

fn conjugate(e: &CrossedElement, m: &[i64], act: &TranslationAction, trunc: i32) -> CrossedElement {
    let id = act.group.identity();
    let u = CrossedElement::scalar(id.clone(), TorusElement::plane_wave(m.to_vec(), trunc));
    let ui = CrossedElement::scalar(id, TorusElement::plane_wave(m.iter().map(|x| -x).collect(), trunc));
    crossed_mul(&crossed_mul(&u, e, act).unwrap(), &ui, act).unwrap()
}

fn finite_tori(trunc: i32) -> Vec<EquivariantTorus> {
    vec![
        EquivariantTorus {
            torus: TorusAlgebra { dim: 1, trunc },
            action: TranslationAction::shifts_int(GroupSpec::Cyclic { order: 2 }, 4, &[vec![2, 0]]).unwrap(),
        },
        torus_z4(trunc),
    ]
}

#[test]
fn pairing_is_conjugation_invariant() {
    let ht = 2;
    let mut r = rng(8);
    for alg in finite_tori(ht) {
        let act = alg.action.clone();
        let order = act.group.elements().unwrap().len() as u32;
        let cross = CrossedAlgebra { base: alg.clone() };
        let e = averaging_projection(&act, ht);
        assert_eq!(crossed_mul(&e, &e, &act).unwrap(), e);
        let ch = chern_character(&cross, &e.to_matrix(), 2).unwrap();
        let xis = [GroupCochain::one(act.group), random_table_cochain(&mut r, order, 1, true).coboundary().alternate()];
        let base: Vec<ULaurent> = xis.iter().map(|xi| tr_xi(&alg, xi.clone()).unwrap().eval(&ch)).collect();
        // Degree 0: Tr of the e-component, (1/|Γ|)·Tr(1).
        let tr1 = trace_of_mode(&[0, 0], ht).scale(&FieldElement::from_frac(1, order as i64));
        assert_eq!(base[0], ULaurent::monomial(tr1, 0, 2));
        // A coboundary pairs to zero with a cycle.
        assert!(base[1].is_zero());
        for m in [vec![1i64, 0], vec![0, 1], vec![1, -2]] {
            let f = conjugate(&e, &m, &act, ht);
            assert_eq!(crossed_mul(&f, &f, &act).unwrap(), f);
            let chf = chern_character(&cross, &f.to_matrix(), 2).unwrap();
            for (xi, b) in xis.iter().zip(&base) {
                assert_eq!(&tr_xi(&alg, xi.clone()).unwrap().eval(&chf), b);
            }
        }
    }
}

#[test]
fn phi_pair_ignores_coboundary_shifts() {
    let mut r = rng(9);
    for sym in finite_tori(0) {
        let act = sym.action.clone();
        let order = act.group.elements().unwrap().len() as u32;
        let cross = CrossedAlgebra { base: sym.clone() };
        let th = equivariant_theta(&act, 0).unwrap();
        let e = conjugate(&averaging_projection(&act, 0), &[1, 1], &act, 0);
        let ch = symbol_chain(&chern_character(&cross, &e.to_matrix(), 2).unwrap());
        let one = GroupCochain::one(act.group);
        let v = phi_pair(&th, &one, &sym, &ch).unwrap();
        let expected = HbarLaurent::monomial(-FieldElement::i(), -1, 0).scale(&FieldElement::from_frac(1, order as i64));
        assert_eq!(v.value, ULaurent::monomial(expected, 0, 2));
        for deg in [1, 2] {
            let xi = random_table_cochain(&mut r, order, deg, true).coboundary();
            let v = phi_pair(&th, &xi, &sym, &ch).unwrap();
            assert!(v.value.is_zero(), "deg {deg}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), k in 0usize..=2) {
        let mut r = rng(seed);
        let p = random_poly_cochain(&mut r, 2, k);
        prop_assert!(p.coboundary().coboundary().is_zero());
        let norm = r.gen_bool(0.5);
        let t = random_table_cochain(&mut r, 3, k, norm);
        prop_assert!(t.coboundary().coboundary().is_zero());
    }

    #[test]
    fn cup_is_a_derivation(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=1) {
        let mut r = rng(seed);
        let a = random_poly_cochain(&mut r, 1, p);
        let b = random_poly_cochain(&mut r, 1, q);
        let lhs = a.cup(&b).unwrap().coboundary();
        let sign = q_sign(p);
        let rhs = a.coboundary().cup(&b).unwrap().add(&a.cup(&b.coboundary()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn q_sign(p: usize) -> BigRational {
    q(if p % 2 == 0 { 1 } else { -1 })
}
