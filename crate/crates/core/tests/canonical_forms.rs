mod common;

use common::{fields, fixtures, random_member, random_scalar, Fixture};
use gma_core::derivations::{is_antiderivation, is_derivation, is_jordan_derivation};
use gma_core::gallery::{
    c2_swap, gamma_jord, ground_field, product_algebra, s_deformed_m2, skew_group_context, theta1, theta2,
    trivial_gma,
};
use gma_core::{
    antiderivation_space, build_gma, certify_jordan_splitting, certify_no_antiderivations, decompose_jordan,
    derivation_space, extract_jordan_components, jordan_derivation_space, rebuild_from_form, verify_conditions,
    Bimodule, CharacteristicClass, Corner, FieldSpec, FormConditions, GeneralizedMatrixAlgebra,
    JordanCanonicalForm, LinearMap, Matrix, StructureError, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trivial(field: FieldSpec) -> GeneralizedMatrixAlgebra {
    build_gma(&s_deformed_m2(field, &field.zero()).unwrap()).unwrap()
}

fn deformed(field: FieldSpec, s: i64) -> GeneralizedMatrixAlgebra {
    build_gma(&s_deformed_m2(field, &field.from_i64(s)).unwrap()).unwrap()
}

fn all_fixtures() -> Vec<Fixture> {
    let mut v: Vec<Fixture> = fields().into_iter().flat_map(fixtures).collect();
    v.extend(fixtures(FieldSpec::prime(2).unwrap()));
    v
}

fn two_torsion_free(g: &GeneralizedMatrixAlgebra) -> bool {
    CharacteristicClass::of(g.field()) != CharacteristicClass::Two
}

#[test]
fn gamma_components_and_conditions() {
    let q = FieldSpec::Rational;
    let g = trivial(q);
    let form = extract_jordan_components(&g, &gamma_jord(&g).unwrap()).unwrap();
    let one = Matrix::from_i64(q, &[&[1]]);
    assert_eq!(form.tau2, one);
    assert_eq!(form.tau3, one);
    assert_eq!(form.nu2, one);
    assert_eq!(form.nu3, Matrix::from_i64(q, &[&[-1]]));
    assert!(form.delta1.is_zero() && form.mu4.is_zero());
    assert!(form.m0.iter().chain(&form.n0).all(|x| x.is_zero()));
    let jordan = verify_conditions(&g, &form, FormConditions::Jordan).unwrap();
    assert_eq!(jordan.conditions.len(), 7);
    assert!(jordan.holds());
    assert!(!verify_conditions(&g, &form, FormConditions::Derivation).unwrap().holds());
}

#[test]
fn zero_map_has_zero_form() {
    for fx in fixtures(FieldSpec::Rational) {
        let g = &fx.gma;
        let form = extract_jordan_components(g, &LinearMap::zero(g.field(), g.dim())).unwrap();
        assert_eq!(form, JordanCanonicalForm::zero(g));
        assert!(verify_conditions(g, &form, FormConditions::Jordan).unwrap().holds());
    }
}

#[test]
fn m0_alone_rebuilds_an_inner_derivation() {
    let q = FieldSpec::Rational;
    let g = deformed(q, 1);
    let mut form = JordanCanonicalForm::zero(&g);
    form.m0 = vec![q.from_i64(3)];
    let f = rebuild_from_form(&g, &form).unwrap();
    let x = g.embed(Corner::M, &form.m0).unwrap();
    // f(y) = y·x − x·y
    let inner = g.algebra().inner_derivation(&x).unwrap().scale(&q.from_i64(-1));
    assert_eq!(f, inner);
}

/// Extraction followed by rebuilding is the identity on JDer, and every
/// extracted form satisfies the Jordan conditions.
#[test]
fn round_trip_and_jordan_conditions_on_every_fixture() {
    for fx in all_fixtures() {
        let g = &fx.gma;
        for f in jordan_derivation_space(g.algebra()).basis() {
            let form = extract_jordan_components(g, f).unwrap();
            assert_eq!(&rebuild_from_form(g, &form).unwrap(), f, "{}", fx.name);
            let report = verify_conditions(g, &form, FormConditions::Jordan).unwrap();
            assert!(report.holds(), "{}: {:?}", fx.name, report.failures().collect::<Vec<_>>());
        }
    }
}

/// With M faithful and no 2-torsion, Jordan forms satisfy the sharper
/// conditions: δ4 = μ1 = 0 and δ1, μ4 satisfy the full Leibniz rule.
#[test]
fn faithful_jordan_forms_have_leibniz_corners() {
    for fx in all_fixtures() {
        let g = &fx.gma;
        if !two_torsion_free(g) || !g.context().m_is_faithful() {
            continue;
        }
        for f in jordan_derivation_space(g.algebra()).basis() {
            let form = extract_jordan_components(g, f).unwrap();
            let report = verify_conditions(g, &form, FormConditions::JordanFaithful).unwrap();
            assert!(report.holds(), "{}: {:?}", fx.name, report.failures().collect::<Vec<_>>());
            let a = g.context().a();
            assert!(is_derivation(a, &LinearMap::new(form.delta1.clone()).unwrap()).unwrap());
        }
    }
}

#[test]
fn derivation_and_antiderivation_forms() {
    for fx in all_fixtures() {
        let g = &fx.gma;
        for f in derivation_space(g.algebra()).basis() {
            let form = extract_jordan_components(g, f).unwrap();
            let report = verify_conditions(g, &form, FormConditions::Derivation).unwrap();
            assert!(report.holds(), "{}: {:?}", fx.name, report.failures().collect::<Vec<_>>());
        }
        if !g.context().m_is_faithful() {
            continue;
        }
        for f in antiderivation_space(g.algebra()).basis() {
            let form = extract_jordan_components(g, f).unwrap();
            let report = verify_conditions(g, &form, FormConditions::Antiderivation).unwrap();
            assert!(report.holds(), "{}: {:?}", fx.name, report.failures().collect::<Vec<_>>());
        }
    }
}

fn perturb(rng: &mut impl Rng, g: &GeneralizedMatrixAlgebra, form: &mut JordanCanonicalForm) {
    let field = g.field();
    let delta = loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            break s;
        }
    };
    let mut targets: Vec<(usize, usize, usize)> = Vec::new();
    for (k, (_, m)) in form.maps().iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                targets.push((k, r, c));
            }
        }
    }
    let slot = rng.gen_range(0..targets.len() + form.m0.len() + form.n0.len());
    if slot < targets.len() {
        let (k, r, c) = targets[slot];
        let m = match k {
            0 => &mut form.delta1,
            1 => &mut form.delta4,
            2 => &mut form.tau2,
            3 => &mut form.tau3,
            4 => &mut form.nu2,
            5 => &mut form.nu3,
            6 => &mut form.mu1,
            _ => &mut form.mu4,
        };
        let v = m.get(r, c) + &delta;
        m.set(r, c, v);
    } else if slot < targets.len() + form.m0.len() {
        let i = slot - targets.len();
        form.m0[i] = &form.m0[i] + &delta;
    } else {
        let i = slot - targets.len() - form.m0.len();
        form.n0[i] = &form.n0[i] + &delta;
    }
}

/// A form satisfies the seven conditions exactly when the map it rebuilds
/// is a Jordan derivation; probed with random valid forms and single-entry
/// perturbations of them.
#[test]
fn conditions_characterize_jordan_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut perturbed_valid = 0;
    for fx in all_fixtures() {
        let g = &fx.gma;
        let jder = jordan_derivation_space(g.algebra());
        for _ in 0..6 {
            let mut form = extract_jordan_components(g, &random_member(&mut rng, &jder)).unwrap();
            assert!(verify_conditions(g, &form, FormConditions::Jordan).unwrap().holds());
            perturb(&mut rng, g, &mut form);
            let holds = verify_conditions(g, &form, FormConditions::Jordan).unwrap().holds();
            let rebuilt = rebuild_from_form(g, &form).unwrap();
            assert_eq!(holds, is_jordan_derivation(g.algebra(), &rebuilt).unwrap(), "{}", fx.name);
            assert_eq!(extract_jordan_components(g, &rebuilt).ok().as_ref().map_or(holds, |f| f == &form), holds);
            perturbed_valid += holds as usize;
        }
    }
    // Some perturbations land in the solution set (e.g. along τ3 on trivial pairings).
    assert!(perturbed_valid > 0);
}

#[test]
fn gamma_decomposes_into_theta_maps() {
    let q = FieldSpec::Rational;
    let g = trivial(q);
    let gamma = gamma_jord(&g).unwrap();
    assert_eq!(theta1(&g).unwrap().add(&theta2(&g).unwrap()).unwrap(), gamma);
    let parts = decompose_jordan(&g, &gamma).unwrap();
    assert_eq!(parts.derivation, theta1(&g).unwrap());
    assert_eq!(parts.antiderivation, theta2(&g).unwrap());
    let zero = decompose_jordan(&g, &LinearMap::zero(q, 4)).unwrap();
    assert!(zero.derivation.is_zero() && zero.antiderivation.is_zero());
}

#[test]
fn every_jordan_basis_map_splits_over_gf5() {
    let g = trivial(FieldSpec::prime(5).unwrap());
    for f in jordan_derivation_space(g.algebra()).basis() {
        let parts = decompose_jordan(&g, f).unwrap();
        assert!(is_derivation(g.algebra(), &parts.derivation).unwrap());
        assert!(is_antiderivation(g.algebra(), &parts.antiderivation).unwrap());
        assert_eq!(&parts.derivation.add(&parts.antiderivation).unwrap(), f);
    }
}

#[test]
fn decomposition_refuses_unmet_hypotheses() {
    let q = FieldSpec::Rational;
    // A = Q × Q acting on a line through its first factor: not faithful.
    let a = product_algebra(q, 2).unwrap();
    let one = q.one();
    let m = Bimodule::from_sparse(q, 2, 1, 1, &[(0, 0, 0, one.clone())], &[(0, 0, 0, one)]).unwrap();
    let ctx = trivial_gma(a, ground_field(q), m, Bimodule::zero(q, 1, 2)).unwrap();
    let g = build_gma(&ctx).unwrap();
    assert!(matches!(
        decompose_jordan(&g, &LinearMap::zero(q, g.dim())),
        Err(StructureError::NotFaithful(_))
    ));
    assert!(matches!(certify_jordan_splitting(&g).verdict, Verdict::NotApplicable(_)));
    assert!(matches!(
        decompose_jordan(&deformed(q, 1), &LinearMap::zero(q, 4)),
        Err(StructureError::NonzeroPairing { .. })
    ));
    let f2 = FieldSpec::prime(2).unwrap();
    assert_eq!(
        decompose_jordan(&trivial(f2), &LinearMap::zero(f2, 4)),
        Err(StructureError::CharacteristicTwo)
    );
    let not_jordan = LinearMap::identity(q, 4);
    assert!(matches!(decompose_jordan(&trivial(q), &not_jordan), Err(StructureError::NotJordan(0, 0))));
}

#[test]
fn splitting_holds_on_zero_pairing_fixtures() {
    for field in fields() {
        for fx in fixtures(field) {
            let g = &fx.gma;
            let applicable = g.context().has_zero_pairings() && g.context().m_is_faithful();
            let cert = certify_jordan_splitting(g);
            if applicable {
                assert_eq!(cert.verdict, Verdict::Certified, "{}", fx.name);
            } else {
                assert!(matches!(cert.verdict, Verdict::NotApplicable(_)), "{}", fx.name);
            }
        }
    }
}

#[test]
fn nondegenerate_pairings_kill_antiderivations() {
    let q = FieldSpec::Rational;
    assert_eq!(certify_no_antiderivations(&deformed(q, 1)).verdict, Verdict::Certified);
    assert!(matches!(certify_no_antiderivations(&deformed(q, 0)).verdict, Verdict::NotApplicable(_)));
    for p in [3u64, 5, 7] {
        let field = FieldSpec::prime(p).unwrap();
        for s in 1..p as i64 {
            let g = deformed(field, s);
            let cert = certify_no_antiderivations(&g);
            assert_eq!(cert.verdict, Verdict::Certified, "s={s} over GF({p})");
            assert_eq!(cert.dimensions, vec![("ader", 0)]);
            let jder = jordan_derivation_space(g.algebra());
            assert!(jder.same_span(&derivation_space(g.algebra())).unwrap());
        }
        assert_eq!(certify_jordan_splitting(&deformed(field, 0)).verdict, Verdict::Certified);
    }
    let (a, act) = c2_swap(q).unwrap();
    let g = build_gma(&skew_group_context(&a, &act).unwrap()).unwrap();
    assert_eq!(certify_no_antiderivations(&g).verdict, Verdict::Certified);
}

#[test]
fn inner_derivation_by_e11_on_trivial_algebra() {
    let q = FieldSpec::Rational;
    let g = trivial(q);
    let f = g.algebra().inner_derivation(&g.e11()).unwrap();
    let form = extract_jordan_components(&g, &f).unwrap();
    let mut expected = JordanCanonicalForm::zero(&g);
    expected.tau2 = Matrix::from_i64(q, &[&[1]]);
    expected.nu3 = Matrix::from_i64(q, &[&[-1]]);
    assert_eq!(form, expected);
}
