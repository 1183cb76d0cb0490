mod common;

use common::{fields, fixtures, random_vector};
use gma_core::gallery::{
    c2_swap, ground_field, s_deformed_m2, skew_group_context, trivial_gma, upper_triangular_algebra,
    upper_triangular_context,
};
use gma_core::{
    build_gma, Bimodule, Corner, FieldSpec, GmaError, Identity, Matrix, ModuleName, MoritaContext, Scalar, Side,
    Which,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[test]
fn gallery_contexts_are_valid_and_assemble() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for field in fields() {
        for fx in fixtures(field) {
            let g = &fx.gma;
            let ctx = g.context();
            assert!(ctx.validate().is_valid(), "{}", fx.name);
            let alg = g.algebra();
            let (e11, e22) = (g.e11(), g.e22());
            let sum: Vec<Scalar> = e11.iter().zip(&e22).map(|(x, y)| x + y).collect();
            assert_eq!(&sum, alg.unit());
            assert_eq!(alg.multiply(&e11, &e11).unwrap(), e11);
            assert_eq!(alg.multiply(&e22, &e22).unwrap(), e22);
            assert!(is_zero(&alg.multiply(&e11, &e22).unwrap()));

            let x = random_vector(&mut rng, field, g.dim());
            let mut back = alg.zero();
            for c in Corner::ALL {
                let part = g.project(c, &x).unwrap();
                assert_eq!(g.project(c, &g.embed(c, &part).unwrap()).unwrap(), part);
                for (b, y) in back.iter_mut().zip(g.embed(c, &part).unwrap()) {
                    *b = &*b + &y;
                }
            }
            assert_eq!(back, x);

            let (m, n) = (ctx.m(), ctx.n());
            for i in 0..m.dim() {
                let em = g.embed(Corner::M, &m.basis_vector(i)).unwrap();
                assert!(is_zero(&g.project(Corner::N, &em).unwrap()));
                for j in 0..n.dim() {
                    let en = g.embed(Corner::N, &n.basis_vector(j)).unwrap();
                    let mn = alg.multiply(&em, &en).unwrap();
                    let nm = alg.multiply(&en, &em).unwrap();
                    let phi = ctx.phi().eval(&m.basis_vector(i), &n.basis_vector(j));
                    let psi = ctx.psi().eval(&n.basis_vector(j), &m.basis_vector(i));
                    assert_eq!(mn, g.embed(Corner::A, &phi).unwrap());
                    assert_eq!(nm, g.embed(Corner::B, &psi).unwrap());
                }
            }

            let a = ctx.a();
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let (x, y) = (a.basis_vector(i), a.basis_vector(j));
                    let lifted = alg
                        .multiply(&g.embed(Corner::A, &x).unwrap(), &g.embed(Corner::A, &y).unwrap())
                        .unwrap();
                    assert_eq!(g.project(Corner::A, &lifted).unwrap(), a.multiply(&x, &y).unwrap());
                }
            }
        }
    }
}

#[test]
fn diagonal_corner_of_diagonal_element() {
    let q = FieldSpec::Rational;
    let g = build_gma(&upper_triangular_context(3, q).unwrap()).unwrap();
    let alg = g.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_vector(&mut rng, q, g.block_dim(Corner::A));
    let b = random_vector(&mut rng, q, g.block_dim(Corner::B));
    let x = g.element(&a, &[q.zero(), q.zero()], &[], &b).unwrap();
    let e = g.e11();
    let sandwich = alg.multiply(&alg.multiply(&e, &x).unwrap(), &e).unwrap();
    assert_eq!(g.project(Corner::A, &sandwich).unwrap(), a);
}

/// Changing any single pairing entry of a valid context with nonzero
/// pairings breaks validation or associativity.
#[test]
fn single_entry_mutations_are_detected() {
    let q = FieldSpec::Rational;
    let (a, act) = c2_swap(q).unwrap();
    let bases: Vec<MoritaContext> = vec![
        s_deformed_m2(q, &q.one()).unwrap(),
        s_deformed_m2(FieldSpec::prime(5).unwrap(), &FieldSpec::prime(5).unwrap().from_i64(2)).unwrap(),
        skew_group_context(&a, &act).unwrap(),
    ];
    for base in bases {
        let field = base.field();
        for which in [Which::Phi, Which::Psi] {
            let p = base.pairing(which);
            for m in 0..p.left_dim() {
                for n in 0..p.right_dim() {
                    for k in 0..p.target_dim() {
                        let mut ctx = base.clone();
                        let target = match which {
                            Which::Phi => ctx.phi_mut(),
                            Which::Psi => ctx.psi_mut(),
                        };
                        let v = target.coefficient(m, n, k) + &field.one();
                        target.set_coefficient(m, n, k, v);
                        let caught = !ctx.validate().is_valid() || build_gma(&ctx).is_err();
                        assert!(caught, "{which:?} entry ({m}, {n}, {k})");
                    }
                }
            }
        }
    }
}

#[test]
fn corrupted_diagram_is_reported() {
    let q = FieldSpec::Rational;
    let mut ctx = s_deformed_m2(q, &q.one()).unwrap();
    ctx.phi_mut().set_coefficient(0, 0, 0, q.from_i64(5));
    let report = ctx.validate();
    assert!(report.fails(Identity::DiagramM));
    assert!(matches!(build_gma(&ctx), Err(GmaError::InvalidContext(_))));
}

#[test]
fn broken_bimodule_is_rejected() {
    let q = FieldSpec::Rational;
    let one = q.one();
    // 1_A acting as 2 on a line.
    let m = Bimodule::from_sparse(q, 1, 1, 1, &[(0, 0, 0, q.from_i64(2))], &[(0, 0, 0, one)]).unwrap();
    let r = trivial_gma(ground_field(q), ground_field(q), m, Bimodule::zero(q, 1, 1));
    assert!(r.is_err());
}

#[test]
fn nondegeneracy_examples() {
    let f5 = FieldSpec::prime(5).unwrap();
    let q = FieldSpec::Rational;
    assert!(s_deformed_m2(f5, &f5.from_i64(2)).unwrap().is_nondegenerate(Which::Phi));
    assert!(!s_deformed_m2(f5, &f5.zero()).unwrap().is_nondegenerate(Which::Phi));
    assert!(s_deformed_m2(q, &q.one()).unwrap().is_nondegenerate(Which::Psi));
    for n in 2..=4 {
        let ctx = upper_triangular_context(n, q).unwrap();
        assert!(ctx.is_faithful(ModuleName::M, Side::Left));
        assert!(ctx.is_faithful(ModuleName::M, Side::Right));
        assert!(!ctx.is_nondegenerate(Which::Phi));
    }
}

/// `[T2 Q²; 0 Q]` with zero pairings is T3 after reordering the basis.
#[test]
fn triangular_slice_matches_t3() {
    let q = FieldSpec::Rational;
    let sliced = upper_triangular_context(3, q).unwrap();
    let ctx = trivial_gma(
        upper_triangular_algebra(q, 2).unwrap(),
        ground_field(q),
        sliced.m().clone(),
        sliced.n().clone(),
    )
    .unwrap();
    let g = build_gma(&ctx).unwrap();
    // GMA order e11 e12 e22 | e13 e23 | e33 inside T3's order e11 e12 e13 e22 e23 e33.
    let positions = [0usize, 1, 3, 2, 4, 5];
    let cols: Vec<Vec<Scalar>> = positions
        .iter()
        .map(|&p| (0..6).map(|i| if i == p { q.one() } else { q.zero() }).collect())
        .collect();
    let t3 = upper_triangular_algebra(q, 3).unwrap();
    let reordered = t3.change_basis(&Matrix::from_columns(q, 6, &cols).unwrap()).unwrap();
    assert_eq!(reordered.sparse_entries(), g.algebra().sparse_entries());
    assert_eq!(reordered.unit(), g.algebra().unit());
}
