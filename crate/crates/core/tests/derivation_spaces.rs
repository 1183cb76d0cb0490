mod common;

use common::{fields, fixtures, random_member, random_vector};
use gma_core::derivations::{is_antiderivation, is_derivation, is_jordan_derivation, jordan_defect};
use gma_core::gallery::{
    ground_field, matrix_algebra, product_algebra, s_deformed_m2, upper_triangular_algebra,
};
use gma_core::{
    antiderivation_space, build_gma, derivation_space, inner_derivation_space, jordan_derivation_space,
    FieldSpec, LinearMap, MapKind, MapSubspace, Matrix, Scalar, StructureAlgebra,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dual_numbers(field: FieldSpec) -> StructureAlgebra {
    let one = field.one();
    StructureAlgebra::from_sparse(
        field,
        2,
        &[(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())],
        vec![one, field.zero()],
    )
    .unwrap()
}

fn trivial_gma(field: FieldSpec) -> StructureAlgebra {
    build_gma(&s_deformed_m2(field, &field.zero()).unwrap()).unwrap().into_algebra()
}

/// Every linear map on an algebra over a small prime field.
fn all_maps(field: FieldSpec, dim: usize) -> impl Iterator<Item = LinearMap> {
    let elems = field.elements().unwrap();
    let p = elems.len();
    let total = p.pow((dim * dim) as u32);
    (0..total).map(move |mut code| {
        let v: Vec<Scalar> = (0..dim * dim)
            .map(|_| {
                let e = elems[code % p].clone();
                code /= p;
                e
            })
            .collect();
        LinearMap::from_vector(field, dim, &v)
    })
}

fn count_by_enumeration(alg: &StructureAlgebra) -> [usize; 3] {
    let mut counts = [0; 3];
    for f in all_maps(alg.field(), alg.dim()) {
        counts[0] += is_derivation(alg, &f).unwrap() as usize;
        counts[1] += is_jordan_derivation(alg, &f).unwrap() as usize;
        counts[2] += is_antiderivation(alg, &f).unwrap() as usize;
    }
    counts
}

/// The solver's spaces have exactly as many elements as the predicates accept.
#[test]
fn solver_dimensions_match_enumeration_over_small_fields() {
    for p in [2u64, 3] {
        let field = FieldSpec::prime(p).unwrap();
        let mut algebras = vec![
            ("field", ground_field(field)),
            ("product", product_algebra(field, 2).unwrap()),
            ("dual numbers", dual_numbers(field)),
            ("T2", upper_triangular_algebra(field, 2).unwrap()),
        ];
        if p == 2 {
            algebras.push(("trivial GMA", trivial_gma(field)));
        }
        for (name, alg) in algebras {
            let counts = count_by_enumeration(&alg);
            let spaces = [
                derivation_space(&alg),
                jordan_derivation_space(&alg),
                antiderivation_space(&alg),
            ];
            for (count, space) in counts.iter().zip(&spaces) {
                assert_eq!(
                    *count as u64,
                    p.pow(space.dimension() as u32),
                    "{name} over GF({p}), {:?}",
                    space.kind()
                );
                for f in space.basis() {
                    let ok = match space.kind() {
                        MapKind::Derivation => is_derivation(&alg, f),
                        MapKind::Jordan => is_jordan_derivation(&alg, f),
                        _ => is_antiderivation(&alg, f),
                    };
                    assert!(ok.unwrap());
                }
            }
        }
    }
}

#[test]
fn triangular_two_by_two_derivations_are_inner() {
    let q = FieldSpec::Rational;
    let t2 = upper_triangular_algebra(q, 2).unwrap();
    let der = derivation_space(&t2);
    assert_eq!(der.dimension(), 2);
    assert_eq!(der.dimension(), t2.dim() - t2.center_basis().len());
    assert!(der.same_span(&inner_derivation_space(&t2)).unwrap());
}

#[test]
fn full_matrix_algebra_has_no_antiderivations() {
    let m2 = matrix_algebra(FieldSpec::Rational, 2).unwrap();
    assert_eq!(antiderivation_space(&m2).dimension(), 0);
    assert_eq!(derivation_space(&m2).dimension(), 3);
    assert_eq!(jordan_derivation_space(&m2).dimension(), 3);
}

#[test]
fn trivial_gma_spaces() {
    let alg = trivial_gma(FieldSpec::Rational);
    let der = derivation_space(&alg);
    let ader = antiderivation_space(&alg);
    let jder = jordan_derivation_space(&alg);
    assert_eq!((der.dimension(), ader.dimension(), jder.dimension()), (4, 4, 6));
    assert_eq!(der.sum(&ader).unwrap().dimension(), 6);
    assert_eq!(der.intersection(&ader).unwrap().dimension(), 2);
    let zero = MapSubspace::zero(alg.field(), alg.dim());
    assert!(der.sum(&zero).unwrap().same_span(&der).unwrap());
    assert!(der.intersection(&der).unwrap().same_span(&der).unwrap());
}

#[test]
fn subspaces_of_different_algebras_do_not_combine() {
    let q = FieldSpec::Rational;
    let a = derivation_space(&upper_triangular_algebra(q, 2).unwrap());
    let b = derivation_space(&matrix_algebra(q, 2).unwrap());
    assert!(a.sum(&b).is_err());
    assert!(a.intersection(&b).is_err());
}

#[test]
fn derivations_and_antiderivations_are_jordan() {
    for field in fields() {
        for fx in fixtures(field) {
            let alg = fx.gma.algebra();
            let jder = jordan_derivation_space(alg);
            let der = derivation_space(alg);
            let ader = antiderivation_space(alg);
            assert!(der.is_subspace_of(&jder).unwrap(), "{}", fx.name);
            assert!(ader.is_subspace_of(&jder).unwrap(), "{}", fx.name);
            assert!(inner_derivation_space(alg).is_subspace_of(&der).unwrap(), "{}", fx.name);
        }
    }
}

#[test]
fn triangular_derivations_match_inner_oracle() {
    for field in fields() {
        for n in 2..=4 {
            let t = upper_triangular_algebra(field, n).unwrap();
            let inner = t.dim() - t.center_basis().len();
            assert_eq!(inner, n * (n + 1) / 2 - 1);
            let der = derivation_space(&t);
            assert_eq!(der.dimension(), inner, "T{n} over {field}");
            assert_eq!(jordan_derivation_space(&t).dimension(), inner, "T{n} over {field}");
            assert!(der.same_span(&inner_derivation_space(&t)).unwrap());
        }
    }
}

fn permutation(field: FieldSpec, perm: &[usize]) -> Matrix {
    let cols: Vec<Vec<Scalar>> = perm
        .iter()
        .map(|&j| (0..perm.len()).map(|i| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    Matrix::from_columns(field, perm.len(), &cols).unwrap()
}

/// `L·U` with unitriangular factors and entries in {-1, 0, 1}: invertible with
/// an integer inverse, so coefficients stay small.
fn unimodular(rng: &mut impl rand::Rng, field: FieldSpec, n: usize) -> Matrix {
    let mut l = Matrix::identity(field, n);
    let mut u = Matrix::identity(field, n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, field.from_i64(rng.gen_range(-1..=1)));
            u.set(j, i, field.from_i64(rng.gen_range(-1..=1)));
        }
    }
    l.mul(&u).unwrap()
}

#[test]
fn dimensions_are_basis_invariant() {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for field in [FieldSpec::Rational, FieldSpec::prime(3).unwrap()] {
        for fx in fixtures(field) {
            let alg = fx.gma.algebra();
            let dims = |a: &StructureAlgebra| {
                (
                    derivation_space(a).dimension(),
                    jordan_derivation_space(a).dimension(),
                    antiderivation_space(a).dimension(),
                )
            };
            let base = dims(alg);
            let mut perm: Vec<usize> = (0..alg.dim()).collect();
            perm.shuffle(&mut rng);
            assert_eq!(dims(&alg.change_basis(&permutation(field, &perm)).unwrap()), base, "{}", fx.name);
            if alg.dim() > 6 {
                continue;
            }
            let change = unimodular(&mut rng, field, alg.dim());
            assert_eq!(dims(&alg.change_basis(&change).unwrap()), base, "{}", fx.name);
        }
    }
}

/// A Jordan derivation has `q(x) = 0` at arbitrary elements, not just on the basis.
#[test]
fn jordan_members_vanish_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for field in fields() {
        for fx in fixtures(field) {
            let alg = fx.gma.algebra();
            let jder = jordan_derivation_space(alg);
            for _ in 0..3 {
                let f = random_member(&mut rng, &jder);
                for _ in 0..10 {
                    let x = random_vector(&mut rng, field, alg.dim());
                    assert!(jordan_defect(alg, &f, &x).unwrap().iter().all(Scalar::is_zero), "{}", fx.name);
                }
            }
        }
    }
}
