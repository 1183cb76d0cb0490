use gma_core::{FieldSpec, Matrix, RowReducer, Scalar};
use proptest::prelude::*;

fn matrix_over(field: FieldSpec, rows: usize, cols: usize, raw: &[i64]) -> Matrix {
    Matrix::new(field, rows, cols, raw.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<i64>)> {
    (prop::sample::select(vec![0u64, 2, 3, 5]), 1usize..=5, 1usize..=5).prop_flat_map(|(p, r, c)| {
        (Just(p), Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c))
    })
}

fn field_of(p: u64) -> FieldSpec {
    if p == 0 {
        FieldSpec::Rational
    } else {
        FieldSpec::prime(p).unwrap()
    }
}

/// All vectors of length `n` over a small prime field.
fn all_vectors(field: FieldSpec, n: usize) -> Vec<Vec<Scalar>> {
    let elems = field.elements().unwrap();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count((p, r, c, raw) in small_matrix()) {
        let m = matrix_over(field_of(p), r, c, &raw);
        let null = m.nullspace_basis();
        prop_assert_eq!(m.rank() + null.len(), c);
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        if !null.is_empty() {
            let stacked = Matrix::from_rows(field_of(p), null.clone()).unwrap();
            prop_assert_eq!(stacked.rank(), null.len());
        }
    }

    #[test]
    fn rref_is_idempotent_and_rank_is_transpose_invariant((p, r, c, raw) in small_matrix()) {
        let m = matrix_over(field_of(p), r, c, &raw);
        let once = m.rref();
        prop_assert_eq!(once.matrix.rref().matrix, once.matrix.clone());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn incremental_reduction_matches_batch((p, r, c, raw) in small_matrix()) {
        let field = field_of(p);
        let m = matrix_over(field, r, c, &raw);
        let mut red = RowReducer::new(field, c);
        for i in 0..r {
            red.push(m.row(i).to_vec());
        }
        let batch = m.rref();
        prop_assert_eq!(red.rank(), batch.rank);
        prop_assert_eq!(red.pivots(), batch.pivots.clone());
        let rows: Vec<Vec<Scalar>> = (0..batch.rank).map(|i| batch.matrix.row(i).to_vec()).collect();
        prop_assert_eq!(red.basis(), rows);
    }

    #[test]
    fn inverse_exists_iff_full_rank((p, n, raw) in (prop::sample::select(vec![0u64, 3, 7]), 1usize..=4)
        .prop_flat_map(|(p, n)| (Just(p), Just(n), prop::collection::vec(-3i64..=3, n * n)))) {
        let field = field_of(p);
        let m = matrix_over(field, n, n, &raw);
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.rank(), n);
                prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(field, n));
                prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(field, n));
            }
            None => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn nullspace_size_matches_enumeration((p, r, c, raw) in (prop::sample::select(vec![2u64, 3]), 1usize..=4, 1usize..=4)
        .prop_flat_map(|(p, r, c)| (Just(p), Just(r), Just(c), prop::collection::vec(0i64..3, r * c)))) {
        let field = field_of(p);
        let m = matrix_over(field, r, c, &raw);
        let kernel = all_vectors(field, c)
            .into_iter()
            .filter(|v| m.mul_vec(v).unwrap().iter().all(Scalar::is_zero))
            .count();
        prop_assert_eq!(kernel as u64, p.pow(m.nullspace_basis().len() as u32));
    }

    #[test]
    fn solve_agrees_with_enumeration((p, r, c, raw, rhs) in (prop::sample::select(vec![2u64, 3]), 1usize..=3, 1usize..=3)
        .prop_flat_map(|(p, r, c)| (Just(p), Just(r), Just(c), prop::collection::vec(0i64..3, r * c), prop::collection::vec(0i64..3, r)))) {
        let field = field_of(p);
        let m = matrix_over(field, r, c, &raw);
        let b: Vec<Scalar> = rhs.iter().map(|&x| field.from_i64(x)).collect();
        let solvable = all_vectors(field, c).iter().any(|v| m.mul_vec(v).unwrap() == b);
        match m.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b),
            None => prop_assert!(!solvable),
        }
    }
}

#[test]
fn rank_one_over_gf3_has_the_expected_kernel() {
    let f3 = FieldSpec::prime(3).unwrap();
    let m = Matrix::from_i64(f3, &[&[1, 1]]);
    assert_eq!(m.nullspace_basis(), vec![vec![f3.from_i64(2), f3.one()]]);
}

#[test]
fn mixing_fields_is_an_error() {
    let q = FieldSpec::Rational;
    let f5 = FieldSpec::prime(5).unwrap();
    assert!(Matrix::identity(q, 2).mul(&Matrix::identity(f5, 2)).is_err());
}
