#![allow(dead_code)]

use gma_core::gallery::{
    c2_swap, s_deformed_m2, skew_group_context, trivial_group, upper_triangular_context,
};
use gma_core::{build_gma, FieldSpec, GeneralizedMatrixAlgebra, LinearMap, MapSubspace, Scalar};
use rand::Rng;

pub struct Fixture {
    pub name: String,
    pub gma: GeneralizedMatrixAlgebra,
}

pub fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::Rational,
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(7).unwrap(),
    ]
}

/// Every gallery algebra over one field.
pub fn fixtures(field: FieldSpec) -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut push = |name: String, ctx| {
        out.push(Fixture {
            name,
            gma: build_gma(&ctx).unwrap(),
        })
    };
    for s in [0, 1, 2] {
        push(format!("s-deformed s={s} over {field}"), s_deformed_m2(field, &field.from_i64(s)).unwrap());
    }
    for n in 2..=4 {
        push(format!("T{n} over {field}"), upper_triangular_context(n, field).unwrap());
    }
    let (a, act) = c2_swap(field).unwrap();
    push(format!("c2-swap over {field}"), skew_group_context(&a, &act).unwrap());
    let (a, act) = trivial_group(field).unwrap();
    push(format!("trivial-group over {field}"), skew_group_context(&a, &act).unwrap());
    out
}

pub fn random_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    match field.characteristic() {
        0 => field.fraction(rng.gen_range(-4..=4), rng.gen_range(1..=3)).unwrap(),
        p => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

pub fn random_vector(rng: &mut impl Rng, field: FieldSpec, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| random_scalar(rng, field)).collect()
}

/// A random element of the span of a subspace's basis.
pub fn random_member(rng: &mut impl Rng, space: &MapSubspace) -> LinearMap {
    let field = space.field();
    let mut f = LinearMap::zero(field, space.algebra_dim());
    for b in space.basis() {
        f = f.add(&b.scale(&random_scalar(rng, field))).unwrap();
    }
    f
}
